#include <mmq/analytic.hpp>

namespace mmq {

namespace {

template <typename T>
T queue_formula(const T& f_bar, const T& var_f, const T& g_bar, const T& var_g)
{
    const T one(1);
    const T numerator = g_bar * (g_bar - one) * var_f + f_bar * (one + f_bar) * var_g;
    const T denominator = T(2) * (one + f_bar) * (one + f_bar - f_bar * g_bar);
    return numerator / denominator;
}

template <typename T>
void require_stable_constant_batch(const T& f_bar, std::size_t r)
{
    if (r == 0) throw Error(ErrorCode::invalid_argument, "batch size r must be >= 1");
    const T rho = T(static_cast<long>(r)) * f_bar / (T(1) + f_bar);
    if (rho >= 1)
        throw Error(ErrorCode::unstable, "rho = " + format_scalar(rho) + " >= 1 for r = " + std::to_string(r));
}

} // namespace

template <typename T>
T expected_queue(const MomentSummary<T>& m)
{
    return queue_formula(m.f_bar, m.var_f, m.g_bar, m.var_g);
}

template <typename T>
T expected_delay(const MomentSummary<T>& m)
{
    if (m.lambda == 0) throw Error(ErrorCode::zero_arrival_rate, "lambda = 0, delay undefined");
    return expected_queue(m) / m.lambda;
}

template <typename T>
T expected_queue_constant_batch(const T& f_bar, const T& f2_bar, std::size_t r)
{
    require_stable_constant_batch(f_bar, r);
    const T rr(static_cast<long>(r));
    return queue_formula(f_bar, T(f2_bar - f_bar * f_bar), rr, T(0));
}

template <typename T>
T expected_queue_constant_batch(const std::vector<T>& f, std::size_t r)
{
    const OnPeriodMoments<T> on = on_period_moments(f);
    require_stable_constant_batch(on.f_bar, r);
    return queue_formula(on.f_bar, on.var_f, T(static_cast<long>(r)), T(0));
}

template <typename T>
AnalyticReport<T> analyze(const BasicModel<T>& spec)
{
    AnalyticReport<T> report{moments(spec), T(0), T(0)};
    report.expected_queue = expected_queue(report.moments);
    report.expected_delay = expected_delay(report.moments);
    return report;
}

#define MMQ_INSTANTIATE_ANALYTIC(T)                                                        \
    template T expected_queue(const MomentSummary<T>&);                                    \
    template T expected_delay(const MomentSummary<T>&);                                    \
    template T expected_queue_constant_batch(const T&, const T&, std::size_t);             \
    template T expected_queue_constant_batch(const std::vector<T>&, std::size_t);          \
    template AnalyticReport<T> analyze(const BasicModel<T>&);

MMQ_INSTANTIATE_ANALYTIC(double)
MMQ_INSTANTIATE_ANALYTIC(Rational)

#undef MMQ_INSTANTIATE_ANALYTIC

} // namespace mmq
