#ifndef MMQ_ANALYTIC_HPP
#define MMQ_ANALYTIC_HPP

#include <cstddef>
#include <vector>

#include <mmq/model.hpp>

namespace mmq {

/// Closed-form performance summary of a validated model.
template <typename T>
struct AnalyticReport {
    MomentSummary<T> moments;
    T expected_queue;
    T expected_delay;
};

/// Mean equilibrium queue length E[Q].
///
/// Evaluated in variance form,
///   [g(g-1) var f + f(1+f) var g] / [2 (1+f) (1+f-f g)]
/// with f, g the first moments, which avoids cancelling the raw second moments.
template <typename T>
T expected_queue(const MomentSummary<T>& moments);

/// Mean delay E[T] = E[Q] / lambda (Little's law). Throws ZeroArrivalRate if lambda is 0.
template <typename T>
T expected_delay(const MomentSummary<T>& moments);

/// E[Q] when every batch carries exactly r units.
/// Throws Unstable when r f_bar / (1 + f_bar) >= 1, InvalidArgument when r == 0.
template <typename T>
T expected_queue_constant_batch(const T& f_bar, const T& f2_bar, std::size_t r);

/// Same, computed from the on-period distribution with a centred variance.
template <typename T>
T expected_queue_constant_batch(const std::vector<T>& f, std::size_t r);

template <typename T>
AnalyticReport<T> analyze(const BasicModel<T>& spec);

} // namespace mmq

#endif // MMQ_ANALYTIC_HPP
