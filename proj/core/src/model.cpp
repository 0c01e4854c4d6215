#include <mmq/model.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace mmq {

ModelSpec to_float(const ExactModelSpec& spec)
{
    ModelSpec out;
    out.f.reserve(spec.f.size());
    out.g.reserve(spec.g.size());
    for (const auto& v : spec.f) out.f.push_back(v.get_d());
    for (const auto& v : spec.g) out.g.push_back(v.get_d());
    return out;
}

template <typename T>
bool Validation<T>::has(ErrorCode code) const
{
    for (const auto& v : violations)
        if (v.code == code) return true;
    return false;
}

template <typename T>
const BasicModel<T>& Validation<T>::value() const
{
    if (!model) {
        if (violations.empty()) throw Error(ErrorCode::invalid_argument, "model not validated");
        throw Error(violations.front().code, violations.front().detail);
    }
    return *model;
}

namespace {

template <typename T>
T sum_of(const std::vector<T>& v)
{
    T total(0);
    for (const auto& x : v) total += x;
    return total;
}

template <typename T>
bool is_unit_sum(const T& sum)
{
    if constexpr (ScalarTraits<T>::exact) {
        return sum == 1;
    } else {
        return std::fabs(sum - 1.0) <= kSumTolerance;
    }
}

template <typename T>
bool in_unit_interval(const T& v)
{
    return v >= 0 && v <= 1;
}

template <typename T>
void check_vector(const std::vector<T>& v, const char* name, std::size_t first_index,
                  std::vector<Violation>& out)
{
    if (v.empty()) {
        out.push_back({ErrorCode::non_stochastic_vector, std::string(name) + " is empty"});
        return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!in_unit_interval(v[i])) {
            out.push_back({ErrorCode::non_stochastic_vector,
                           std::string(name) + "[" + std::to_string(i + first_index) + "] = " +
                               format_scalar(v[i]) + " is outside [0, 1]"});
        }
    }
    const T total = sum_of(v);
    if (!is_unit_sum(total)) {
        out.push_back({ErrorCode::non_stochastic_vector,
                       std::string(name) + " sums to " + format_scalar(total) + ", not 1"});
    }
}

template <typename T>
void trim_trailing_zeros(std::vector<T>& v, std::size_t keep)
{
    while (v.size() > keep && v.back() == 0) v.pop_back();
}

template <typename T>
T raw_mean(const std::vector<T>& v, std::size_t first_index)
{
    T acc(0);
    for (std::size_t i = 0; i < v.size(); ++i) acc += T(static_cast<long>(i + first_index)) * v[i];
    return acc;
}

} // namespace

template <typename T>
Validation<T> validate(const BasicModel<T>& spec)
{
    Validation<T> result;
    auto& out = result.violations;

    check_vector(spec.f, "f", 0, out);
    check_vector(spec.g, "g", 1, out);

    if (!spec.f.empty()) {
        const T& f0 = spec.f.front();
        if (!(f0 > 0 && f0 < 1)) {
            out.push_back({ErrorCode::not_ergodic,
                           "f[0] = " + format_scalar(f0) + " must lie strictly inside (0, 1)"});
        }
    }

    // Utilization on the sum-normalized vectors, so it is reported even when a
    // sum is slightly off.
    const T f_sum = spec.f.empty() ? T(0) : sum_of(spec.f);
    const T g_sum = spec.g.empty() ? T(0) : sum_of(spec.g);
    if (f_sum > 0 && g_sum > 0) {
        const T f_bar = raw_mean(spec.f, 0) / f_sum;
        const T g_bar = raw_mean(spec.g, 1) / g_sum;
        const T rho = g_bar * f_bar / (T(1) + f_bar);
        if (rho >= 1) {
            out.push_back({ErrorCode::unstable,
                           "rho = " + format_scalar(rho) + " >= 1, the queue grows without bound"});
        }
    }

    if (!out.empty()) return result;

    BasicModel<T> model = spec;
    trim_trailing_zeros(model.f, 1);
    trim_trailing_zeros(model.g, 1);
    if constexpr (!ScalarTraits<T>::exact) {
        const T fs = sum_of(model.f);
        const T gs = sum_of(model.g);
        for (auto& x : model.f) x /= fs;
        for (auto& x : model.g) x /= gs;
    }
    result.model = std::move(model);
    return result;
}

template <typename T>
OnPeriodMoments<T> on_period_moments(const std::vector<T>& f)
{
    OnPeriodMoments<T> out{T(0), T(0), T(0)};
    for (std::size_t i = 1; i < f.size(); ++i) {
        const T idx(static_cast<long>(i));
        out.f_bar += idx * f[i];
        out.f2_bar += idx * idx * f[i];
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        const T dev = T(static_cast<long>(i)) - out.f_bar;
        out.var_f += dev * dev * f[i];
    }
    return out;
}

template <typename T>
MomentSummary<T> moments(const BasicModel<T>& spec)
{
    const OnPeriodMoments<T> on = on_period_moments(spec.f);

    T g_bar(0), g2_bar(0);
    for (std::size_t i = 1; i <= spec.m(); ++i) {
        const T idx(static_cast<long>(i));
        g_bar += idx * spec.batch(i);
        g2_bar += idx * idx * spec.batch(i);
    }
    T var_g(0);
    for (std::size_t i = 1; i <= spec.m(); ++i) {
        const T dev = T(static_cast<long>(i)) - g_bar;
        var_g += dev * dev * spec.batch(i);
    }

    const T one(1);
    MomentSummary<T> s;
    s.f_bar = on.f_bar;
    s.f2_bar = on.f2_bar;
    s.var_f = on.var_f;
    s.g_bar = g_bar;
    s.g2_bar = g2_bar;
    s.var_g = var_g;
    s.pi0 = one / (one + s.f_bar);
    s.lambda = s.g_bar * (one - s.pi0);
    s.rho = s.g_bar * s.f_bar / (one + s.f_bar);
    // Boundary probability as the limit D'(1) / N'(1) of the generating function.
    s.b0 = (one + (one - s.g_bar) * s.f_bar) / (one + s.f_bar);
    return s;
}

template <typename T>
std::vector<T> stationary_distribution(const BasicModel<T>& spec)
{
    const std::size_t n = spec.n();
    const OnPeriodMoments<T> on = on_period_moments(spec.f);
    const T pi0 = T(1) / (T(1) + on.f_bar);

    std::vector<T> pi(n + 1);
    pi[0] = pi0;
    T tail(0);
    for (std::size_t i = n; i >= 1; --i) {
        tail += spec.f[i];
        pi[i] = pi0 * tail;
    }
    return pi;
}

template <typename T>
TransitionMatrix<T> transition_matrix(const BasicModel<T>& spec)
{
    TransitionMatrix<T> p;
    p.size = spec.n() + 1;
    p.entries.assign(p.size * p.size, T(0));
    for (std::size_t j = 0; j < p.size; ++j) p(0, j) = spec.f[j];
    for (std::size_t i = 1; i < p.size; ++i) p(i, i - 1) = T(1);
    return p;
}

template <typename T>
std::vector<T> left_multiply(const std::vector<T>& row, const TransitionMatrix<T>& matrix)
{
    std::vector<T> out(matrix.size, T(0));
    for (std::size_t i = 0; i < matrix.size; ++i)
        for (std::size_t j = 0; j < matrix.size; ++j) out[j] += row[i] * matrix(i, j);
    return out;
}

#define MMQ_INSTANTIATE_MODEL(T)                                                      \
    template struct Validation<T>;                                                    \
    template Validation<T> validate(const BasicModel<T>&);                            \
    template OnPeriodMoments<T> on_period_moments(const std::vector<T>&);             \
    template MomentSummary<T> moments(const BasicModel<T>&);                          \
    template std::vector<T> stationary_distribution(const BasicModel<T>&);            \
    template TransitionMatrix<T> transition_matrix(const BasicModel<T>&);             \
    template std::vector<T> left_multiply(const std::vector<T>&, const TransitionMatrix<T>&);

MMQ_INSTANTIATE_MODEL(double)
MMQ_INSTANTIATE_MODEL(Rational)

#undef MMQ_INSTANTIATE_MODEL

} // namespace mmq
