#ifndef MMQ_MODEL_HPP
#define MMQ_MODEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <mmq/numeric.hpp>

namespace mmq {

/// On/off Markov-modulated batch arrival model feeding a unit-rate server.
///
/// f[i] (i = 0..n) is the probability that the off state is followed by an
/// on period of exactly i slots; f[0] is the probability of staying off.
/// g[i - 1] (i = 1..m) is the probability that an on slot brings exactly i
/// work units. A batch of size zero is impossible, so g_0 is not stored.
template <typename T>
struct BasicModel {
    std::vector<T> f;
    std::vector<T> g;

    std::size_t n() const { return f.empty() ? 0 : f.size() - 1; }
    std::size_t m() const { return g.size(); }

    /// Probability of a batch of exactly `size` units (0 outside 1..m).
    T batch(std::size_t size) const
    {
        if (size == 0 || size > g.size()) return T(0);
        return g[size - 1];
    }
};

using ModelSpec = BasicModel<double>;
using ExactModelSpec = BasicModel<Rational>;

ModelSpec to_float(const ExactModelSpec& spec);

/// Model whose batches always carry exactly r units.
template <typename T>
BasicModel<T> constant_batch_model(std::vector<T> f, std::size_t r)
{
    BasicModel<T> spec{std::move(f), std::vector<T>(r, T(0))};
    if (r > 0) spec.g[r - 1] = T(1);
    return spec;
}

struct Violation {
    ErrorCode code;
    std::string detail;
};

template <typename T>
struct Validation {
    std::optional<BasicModel<T>> model;
    std::vector<Violation> violations;

    bool ok() const { return model.has_value(); }
    bool has(ErrorCode code) const;
    /// Returns the model or throws an Error carrying the first violation.
    const BasicModel<T>& value() const;
};

/// Probability-sum tolerance for float64 input vectors.
inline constexpr double kSumTolerance = 1e-9;

/// Check every model requirement and report all violations.
///
/// On success the returned model has trailing zero entries of f and g trimmed,
/// and (float64 only) both vectors renormalized by their sums.
template <typename T>
Validation<T> validate(const BasicModel<T>& spec);

template <typename T>
struct MomentSummary {
    T f_bar;   // mean on-period length
    T f2_bar;  // second moment of the on-period length
    T g_bar;   // mean batch size
    T g2_bar;  // second moment of the batch size
    T var_f;   // sum (i - f_bar)^2 f_i
    T var_g;   // sum (i - g_bar)^2 g_i
    T rho;
    T lambda;
    T pi0;
    T b0;
};

/// f_bar, f2_bar and the centred variance of an on-period distribution.
template <typename T>
struct OnPeriodMoments {
    T f_bar;
    T f2_bar;
    T var_f;
};

template <typename T>
OnPeriodMoments<T> on_period_moments(const std::vector<T>& f);

template <typename T>
MomentSummary<T> moments(const BasicModel<T>& spec);

/// Equilibrium distribution pi of the modulating chain (length n + 1).
template <typename T>
std::vector<T> stationary_distribution(const BasicModel<T>& spec);

/// Dense row-major (n+1) x (n+1) transition matrix of the modulating chain.
template <typename T>
struct TransitionMatrix {
    std::size_t size = 0;
    std::vector<T> entries;

    const T& operator()(std::size_t row, std::size_t col) const { return entries[row * size + col]; }
    T& operator()(std::size_t row, std::size_t col) { return entries[row * size + col]; }
};

template <typename T>
TransitionMatrix<T> transition_matrix(const BasicModel<T>& spec);

/// Row vector times matrix.
template <typename T>
std::vector<T> left_multiply(const std::vector<T>& row, const TransitionMatrix<T>& matrix);

} // namespace mmq

#endif // MMQ_MODEL_HPP
