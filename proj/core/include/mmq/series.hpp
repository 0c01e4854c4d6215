#ifndef MMQ_SERIES_HPP
#define MMQ_SERIES_HPP

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <mmq/model.hpp>
#include <mmq/numeric.hpp>

namespace mmq {

/// G(i, j) = coefficient of z^i in (g(z)/z)^j for 0 <= i <= k_max, 0 <= j <= n.
///
/// Column j is the j-fold convolution of the batch distribution shifted down by
/// one unit, so it is supported on 0..j(m-1).
template <typename T>
struct CoefficientGrid {
    std::size_t rows = 0;  // k_max + 1
    std::size_t cols = 0;  // n + 1
    std::vector<T> values; // row-major

    const T& operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    T& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    std::vector<T> column(std::size_t j) const;
};

template <typename T>
CoefficientGrid<T> g_coefficients(const BasicModel<T>& spec, std::size_t k_max);

/// Power-series coefficients of the numerator N(z) and denominator D(z) of
/// E[z^Q] = b0 N(z) / D(z), indices 0..k_max.
template <typename T>
struct SeriesCoefficients {
    std::vector<T> N;
    std::vector<T> D;
};

template <typename T>
SeriesCoefficients<T> series_coefficients(const BasicModel<T>& spec, const CoefficientGrid<T>& grid,
                                          std::size_t k_max);

enum class BreakdownReason { negative_probability, mass_exceeded, rounding_floor };

std::string_view to_string(BreakdownReason reason);

/// First coefficient rejected by the float64 recursion.
struct Breakdown {
    BreakdownReason reason;
    std::size_t index;  // k of the rejected coefficient
    double value;       // its computed value
    double envelope;    // accumulated rounding-error bound at that k
};

template <typename T>
struct QueueDistribution {
    std::vector<T> p;    // P(Q = k), 0 <= k <= k_effective
    std::vector<T> tail; // P(Q > k) = 1 - sum_{j <= k} p[j]
    T mass_accounted = T(0);
    /// Rounding-error bound per reported k (float64 only, empty for exact).
    std::vector<double> error_envelope;
    std::optional<Breakdown> breakdown;
    std::size_t k_max = 0;

    bool breakdown_detected() const { return breakdown.has_value(); }
    std::size_t k_effective() const { return p.empty() ? 0 : p.size() - 1; }
};

/// P(Q = k) by power-series division of b0 N(z) / D(z):
///   P(Q=k) = (b0 N_k - sum_{i<k} P(Q=i) D_{k-i}) / D_0.
///
/// The scalar type picks the arithmetic; config.backend is not consulted here.
/// Float64 runs stop at the first rejected coefficient and record it in
/// `breakdown`; exact runs always reach config.k_max.
template <typename T>
QueueDistribution<T> queue_distribution(const BasicModel<T>& spec, const NumericConfig& config);

/// Specialised recursion for batches of exactly r units. r = 1 gives p = (1, 0, 0, ...).
/// Throws Unstable when r f_bar / (1 + f_bar) >= 1 and NotErgodic/NonStochasticVector for bad f.
template <typename T>
QueueDistribution<T> queue_distribution_constant_batch(const std::vector<T>& f, std::size_t r,
                                                       const NumericConfig& config);

using AnyDistribution = std::variant<QueueDistribution<double>, QueueDistribution<Rational>>;

/// Runs queue_distribution with the arithmetic named by config.backend.
AnyDistribution compute_distribution(const ExactModelSpec& spec, const NumericConfig& config);

/// E[z^Q] = b0 N(z) / D(z) from the closed forms of N and D, z in [0, 1).
/// Throws PoleNear when |D(z)| < 1e-12 (float64) or D(z) == 0 (exact).
template <typename T>
T pgf_eval(const BasicModel<T>& spec, const T& z);

/// sum_k p[k] z^k over the reported coefficients.
template <typename T>
T truncated_pgf(const QueueDistribution<T>& dist, const T& z);

/// sum_k k p[k] over the reported coefficients.
template <typename T>
T truncated_mean(const QueueDistribution<T>& dist);

} // namespace mmq

#endif // MMQ_SERIES_HPP
