#include <mmq/series.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmq {

std::string_view to_string(BreakdownReason reason)
{
    switch (reason) {
    case BreakdownReason::negative_probability: return "negative_probability";
    case BreakdownReason::mass_exceeded: return "mass_exceeded";
    case BreakdownReason::rounding_floor: return "rounding_floor";
    }
    return "unknown";
}

template <typename T>
std::vector<T> CoefficientGrid<T>::column(std::size_t j) const
{
    std::vector<T> out(rows);
    for (std::size_t i = 0; i < rows; ++i) out[i] = (*this)(i, j);
    return out;
}

template <typename T>
CoefficientGrid<T> g_coefficients(const BasicModel<T>& spec, std::size_t k_max)
{
    CoefficientGrid<T> grid;
    grid.rows = k_max + 1;
    grid.cols = spec.n() + 1;
    grid.values.assign(grid.rows * grid.cols, T(0));

    const std::size_t m = spec.m();
    grid(0, 0) = T(1);
    for (std::size_t j = 0; j + 1 < grid.cols; ++j) {
        // Column j+1 is supported on 0..(j+1)(m-1).
        const std::size_t last = std::min(k_max, (j + 1) * (m - 1));
        for (std::size_t i = 0; i <= last; ++i) {
            T acc(0);
            const std::size_t lo = i + 1 >= m ? i + 1 - m : 0;
            for (std::size_t k = lo; k <= i; ++k) {
                const T& prev = grid(k, j);
                if (prev == 0) continue;
                acc += prev * spec.batch(i + 1 - k);
            }
            grid(i, j + 1) = acc;
        }
    }
    return grid;
}

template <typename T>
SeriesCoefficients<T> series_coefficients(const BasicModel<T>& spec, const CoefficientGrid<T>& grid,
                                          std::size_t k_max)
{
    const std::size_t n = spec.n();
    if (grid.rows < k_max + 1 || grid.cols != n + 1)
        throw Error(ErrorCode::invalid_argument, "coefficient grid does not match model and k_max");

    // cumulative[j] = sum_{k >= j} f_k
    std::vector<T> cumulative(n + 1);
    T acc(0);
    for (std::size_t j = n + 1; j-- > 0;) {
        acc += spec.f[j];
        cumulative[j] = acc;
    }

    SeriesCoefficients<T> out;
    out.N.assign(k_max + 1, T(0));
    out.D.assign(k_max + 1, T(0));
    for (std::size_t i = 0; i <= k_max; ++i) {
        T d = i == 1 ? T(1) : T(0);
        T num(0);
        for (std::size_t j = 0; j <= n; ++j) {
            const T& gij = grid(i, j);
            d -= spec.f[j] * gij;
            if (i == 0) {
                num -= gij * cumulative[j];
            } else {
                num += (grid(i - 1, j) - gij) * cumulative[j];
            }
        }
        out.D[i] = d;
        out.N[i] = num;
    }
    return out;
}

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
constexpr double kMassTolerance = 1e-9;

/// Appends coefficients one at a time and applies the float64 stop rules.
///
/// The envelope bounds the error carried by the non-decaying mode of the
/// recursion at z = 1 (a shared root of N and D that is only cancelled in exact
/// arithmetic): every local rounding error, and every error in the N, D
/// coefficients, feeds that mode with gain 1 / |D'(1)|.
template <typename T>
class DistributionBuilder {
public:
    DistributionBuilder(const NumericConfig& config, std::size_t recurrence_length, std::size_t n_plus_m,
                        double d_prime_at_one)
        : config_(config)
    {
        out_.k_max = config.k_max;
        out_.p.reserve(config.k_max + 1);
        if constexpr (!ScalarTraits<T>::exact) {
            scale_ = kUnitRoundoff * static_cast<double>(recurrence_length + 2) / std::fabs(d_prime_at_one);
            coefficient_weight_ = static_cast<double>(n_plus_m);
        }
    }

    /// step_terms: sum of |terms| combined at this step; coefficient_terms: |N_k| + |D_k|.
    bool accept(std::size_t k, const T& value, double step_terms, double coefficient_terms)
    {
        if constexpr (ScalarTraits<T>::exact) {
            running_ += value;
            out_.p.push_back(value);
            return true;
        } else {
            step_acc_ += step_terms;
            coefficient_acc_ += coefficient_terms;
            const double envelope = scale_ * (step_acc_ + coefficient_weight_ * coefficient_acc_);

            std::optional<BreakdownReason> reason;
            if (value < -config_.negative_tolerance) {
                reason = BreakdownReason::negative_probability;
            } else if (running_ + value > 1.0 + kMassTolerance) {
                reason = BreakdownReason::mass_exceeded;
            } else if (config_.detect_rounding_floor && value != 0.0 && std::fabs(value) <= envelope) {
                reason = BreakdownReason::rounding_floor;
            }
            if (reason) {
                out_.breakdown = Breakdown{*reason, k, value, envelope};
                return false;
            }
            running_ += value;
            out_.p.push_back(value);
            out_.error_envelope.push_back(envelope);
            return true;
        }
    }

    const std::vector<T>& values() const { return out_.p; }

    QueueDistribution<T> finish()
    {
        out_.mass_accounted = running_;
        out_.tail.resize(out_.p.size());
        T cumulative(0);
        for (std::size_t k = 0; k < out_.p.size(); ++k) {
            cumulative += out_.p[k];
            out_.tail[k] = T(1) - cumulative;
        }
        return std::move(out_);
    }

private:
    NumericConfig config_;
    QueueDistribution<T> out_;
    T running_ = T(0);
    double scale_ = 0.0;
    double coefficient_weight_ = 0.0;
    double step_acc_ = 0.0;
    double coefficient_acc_ = 0.0;
};

template <typename T>
double magnitude(const T& v)
{
    if constexpr (ScalarTraits<T>::exact) {
        return 0.0;
    } else {
        return std::fabs(v);
    }
}

template <typename T>
const BasicModel<T>& checked(const Validation<T>& validation)
{
    return validation.value();
}

} // namespace

template <typename T>
QueueDistribution<T> queue_distribution(const BasicModel<T>& spec, const NumericConfig& config)
{
    config.check();
    const std::size_t k_max = config.k_max;
    const CoefficientGrid<T> grid = g_coefficients(spec, k_max);
    const SeriesCoefficients<T> coeffs = series_coefficients(spec, grid, k_max);
    const MomentSummary<T> mom = moments(spec);
    const T& b0 = mom.b0;
    const T& d0 = coeffs.D[0];

    // D_i vanishes beyond the support of G, so the recursion only looks back a
    // bounded number of steps.
    std::size_t d_support = 0;
    for (std::size_t i = 0; i <= k_max; ++i)
        if (coeffs.D[i] != 0) d_support = i;
    const std::size_t recurrence_length = d_support + 1;

    const double d_prime_at_one = to_double(T(T(1) + (T(1) - mom.g_bar) * mom.f_bar));
    DistributionBuilder<T> builder(config, recurrence_length, spec.n() + spec.m(), d_prime_at_one);

    for (std::size_t k = 0; k <= k_max; ++k) {
        const std::vector<T>& p = builder.values();
        T acc = coeffs.N[k] * b0;
        double terms = magnitude(acc);
        const std::size_t lo = k > d_support ? k - d_support : 0;
        for (std::size_t i = lo; i < k; ++i) {
            const T& d = coeffs.D[k - i];
            if (d == 0) continue;
            const T term = p[i] * d;
            terms += magnitude(term);
            acc -= term;
        }
        const T value = acc / d0;
        terms += magnitude(T(value * d0));
        if (!builder.accept(k, value, terms, magnitude(coeffs.N[k]) + magnitude(coeffs.D[k]))) break;
    }
    return builder.finish();
}

template <typename T>
QueueDistribution<T> queue_distribution_constant_batch(const std::vector<T>& f, std::size_t r,
                                                       const NumericConfig& config)
{
    config.check();
    if (r == 0) throw Error(ErrorCode::invalid_argument, "batch size r must be >= 1");
    const Validation<T> validation = validate(constant_batch_model(f, r));
    const BasicModel<T>& spec = checked(validation);
    const std::vector<T>& fv = spec.f;
    const std::size_t n = spec.n();
    const std::size_t k_max = config.k_max;

    if (r == 1) {
        DistributionBuilder<T> builder(config, 2, n + 1, 1.0);
        for (std::size_t k = 0; k <= k_max; ++k) builder.accept(k, k == 0 ? T(1) : T(0), 1.0, 0.0);
        return builder.finish();
    }

    const std::size_t c = r - 1;
    const OnPeriodMoments<T> on = on_period_moments(fv);
    const T one(1);
    const T b0 = (one + on.f_bar - T(static_cast<long>(r)) * on.f_bar) / (one + on.f_bar);
    const T& f0 = fv[0];

    auto f_at = [&](std::size_t j) -> T { return j <= n ? fv[j] : T(0); };
    std::vector<T> cumulative(n + 2, T(0));
    for (std::size_t j = n + 1; j-- > 0;) cumulative[j] = cumulative[j + 1] + fv[j];
    auto cumulative_at = [&](std::size_t j) -> T { return j <= n ? cumulative[j] : T(0); };

    const double d_prime_at_one = to_double(T(one + (one - T(static_cast<long>(r))) * on.f_bar));
    DistributionBuilder<T> builder(config, n * c + 2, n + r, d_prime_at_one);

    // k = 0: P(Q=0) = b0 / f0, from N_0 = -1 and D_0 = -f0.
    if (!builder.accept(0, T(b0 / f0), magnitude(b0) + magnitude(f0) * magnitude(T(b0 / f0)),
                        1.0 + magnitude(f0))) {
        return builder.finish();
    }

    for (std::size_t k = 1; k <= k_max; ++k) {
        const std::vector<T>& p = builder.values();
        T acc = p[k - 1];
        double terms = magnitude(acc);
        // Lags k - j that are positive multiples of r - 1 up to n (r - 1).
        for (std::size_t lag = c; lag <= k && lag / c <= n; lag += c) {
            const T term = f_at(lag / c) * p[k - lag];
            terms += magnitude(term);
            acc -= term;
        }
        double coefficient_terms = (k == 1 ? 1.0 : 0.0);
        if ((k - 1) % c == 0) {
            const T& cm = cumulative_at((k - 1) / c);
            acc -= b0 * cm;
            terms += magnitude(T(b0 * cm));
            coefficient_terms += magnitude(cm);
        }
        if (k % c == 0) {
            const T& cm = cumulative_at(k / c);
            acc += b0 * cm;
            terms += magnitude(T(b0 * cm));
            coefficient_terms += magnitude(cm) + magnitude(f_at(k / c));
        }
        const T value = acc / f0;
        terms += magnitude(T(value * f0));
        if (!builder.accept(k, value, terms, coefficient_terms)) break;
    }
    return builder.finish();
}

AnyDistribution compute_distribution(const ExactModelSpec& spec, const NumericConfig& config)
{
    if (config.backend == Backend::exact) {
        return queue_distribution(validate(spec).value(), config);
    }
    return queue_distribution(validate(to_float(spec)).value(), config);
}

template <typename T>
T pgf_eval(const BasicModel<T>& spec, const T& z)
{
    if (z < 0 || z > 1) throw Error(ErrorCode::invalid_argument, "z must lie in [0, 1)");
    const std::size_t n = spec.n();

    // h = g(z) / z = sum_i g_i z^(i-1)
    T h(0);
    T zpow(1);
    for (std::size_t i = 1; i <= spec.m(); ++i) {
        h += spec.batch(i) * zpow;
        zpow *= z;
    }

    T numerator_sum(0);
    T denominator_sum(0);
    T hpow(1);        // h^i
    T partial(0);     // sum_{j <= i} h^j
    for (std::size_t i = 0; i <= n; ++i) {
        partial += hpow;
        numerator_sum += spec.f[i] * partial;
        denominator_sum += spec.f[i] * hpow;
        hpow *= h;
    }
    const T numerator = (z - T(1)) * numerator_sum;
    const T denominator = z - denominator_sum;

    if constexpr (ScalarTraits<T>::exact) {
        if (denominator == 0) throw Error(ErrorCode::pole_near, "D(z) = 0 at z = " + format_scalar(z));
    } else {
        if (std::fabs(denominator) < 1e-12)
            throw Error(ErrorCode::pole_near, "|D(z)| < 1e-12 at z = " + format_scalar(z));
    }
    return moments(spec).b0 * numerator / denominator;
}

template <typename T>
T truncated_pgf(const QueueDistribution<T>& dist, const T& z)
{
    // Horner from the highest coefficient.
    T acc(0);
    for (std::size_t k = dist.p.size(); k-- > 0;) acc = acc * z + dist.p[k];
    return acc;
}

template <typename T>
T truncated_mean(const QueueDistribution<T>& dist)
{
    T acc(0);
    for (std::size_t k = 1; k < dist.p.size(); ++k) acc += T(static_cast<long>(k)) * dist.p[k];
    return acc;
}

#define MMQ_INSTANTIATE_SERIES(T)                                                                    \
    template struct CoefficientGrid<T>;                                                              \
    template CoefficientGrid<T> g_coefficients(const BasicModel<T>&, std::size_t);                   \
    template SeriesCoefficients<T> series_coefficients(const BasicModel<T>&, const CoefficientGrid<T>&, \
                                                       std::size_t);                                 \
    template QueueDistribution<T> queue_distribution(const BasicModel<T>&, const NumericConfig&);    \
    template QueueDistribution<T> queue_distribution_constant_batch(const std::vector<T>&, std::size_t, \
                                                                    const NumericConfig&);           \
    template T pgf_eval(const BasicModel<T>&, const T&);                                             \
    template T truncated_pgf(const QueueDistribution<T>&, const T&);                                 \
    template T truncated_mean(const QueueDistribution<T>&);

MMQ_INSTANTIATE_SERIES(double)
MMQ_INSTANTIATE_SERIES(Rational)

#undef MMQ_INSTANTIATE_SERIES

} // namespace mmq
