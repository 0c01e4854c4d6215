#ifndef MMQ_TESTS_FIXTURES_HPP
#define MMQ_TESTS_FIXTURES_HPP

// Shared fixtures and test-only reference computations. Nothing in here calls
// the series or analytic modules, so it can serve as an independent check.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <mmq/model.hpp>
#include <mmq/numeric.hpp>

namespace mmq::testing {

inline Rational q(const char* decimal) { return parse_decimal(decimal); }

inline std::vector<Rational> decimals(std::initializer_list<const char*> items)
{
    std::vector<Rational> out;
    for (const char* s : items) out.push_back(parse_decimal(s));
    return out;
}

inline ExactModelSpec table1_exact()
{
    return {decimals({"0.8", "0.1", "0.05", "0.05"}), decimals({"0.4", "0.4", "0.2"})};
}

inline ExactModelSpec table2_exact()
{
    return {decimals({"0.6", "0.2", "0.1", "0.05", "0.05"}), decimals({"0.2", "0.6", "0.1", "0.1"})};
}

inline ModelSpec table1() { return {{0.8, 0.1, 0.05, 0.05}, {0.4, 0.4, 0.2}}; }
inline ModelSpec table2() { return {{0.6, 0.2, 0.1, 0.05, 0.05}, {0.2, 0.6, 0.1, 0.1}}; }

inline Rational utilization(const ExactModelSpec& spec)
{
    Rational f_bar = 0, g_bar = 0;
    for (std::size_t i = 1; i < spec.f.size(); ++i) f_bar += Rational(static_cast<long>(i)) * spec.f[i];
    for (std::size_t i = 0; i < spec.g.size(); ++i) g_bar += Rational(static_cast<long>(i + 1)) * spec.g[i];
    return g_bar * f_bar / (1 + f_bar);
}

/// Random valid model with small-denominator rational entries.
/// f0 > 0, f_n > 0, g_m > 0 and utilization <= max_rho.
inline ExactModelSpec random_model(std::mt19937_64& rng, std::size_t max_n, std::size_t max_m, const Rational& max_rho)
{
    std::uniform_int_distribution<std::size_t> pick_n(1, max_n);
    std::uniform_int_distribution<std::size_t> pick_m(1, max_m);
    std::uniform_int_distribution<long> weight(0, 9);
    std::uniform_int_distribution<long> positive(1, 9);
    while (true) {
        const std::size_t n = pick_n(rng);
        const std::size_t m = pick_m(rng);
        std::vector<long> fw(n + 1), gw(m);
        fw[0] = positive(rng) * 3; // favour off states so low-load models are common
        for (std::size_t i = 1; i < n; ++i) fw[i] = weight(rng);
        fw[n] = positive(rng);
        for (std::size_t i = 0; i + 1 < m; ++i) gw[i] = weight(rng);
        gw[m - 1] = positive(rng);

        long fs = 0, gs = 0;
        for (long w : fw) fs += w;
        for (long w : gw) gs += w;
        ExactModelSpec spec;
        for (long w : fw) spec.f.push_back(Rational(w, fs));
        for (long w : gw) spec.g.push_back(Rational(w, gs));
        for (auto& v : spec.f) v.canonicalize();
        for (auto& v : spec.g) v.canonicalize();
        if (utilization(spec) <= max_rho) return spec;
    }
}

// ---- independent reference computations ----------------------------------

/// Naive polynomial product.
template <typename T>
std::vector<T> convolve(const std::vector<T>& a, const std::vector<T>& b)
{
    if (a.empty() || b.empty()) return {};
    std::vector<T> out(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

template <typename T>
std::vector<T> add_poly(std::vector<T> a, const std::vector<T>& b)
{
    if (a.size() < b.size()) a.resize(b.size(), T(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

template <typename T>
std::vector<T> scale_poly(std::vector<T> a, const T& s)
{
    for (auto& x : a) x *= s;
    return a;
}

/// Coefficients of N(z) = (z-1) sum_i f_i sum_{j<=i} h^j and D(z) = z - sum_i f_i h^i,
/// with h(z) = g(z)/z, built by explicit polynomial arithmetic.
struct ReferenceSeries {
    std::vector<Rational> N;
    std::vector<Rational> D;
};

inline ReferenceSeries reference_series(const ExactModelSpec& spec)
{
    const std::vector<Rational> h = spec.g; // h_i = g_{i+1}
    std::vector<std::vector<Rational>> powers{{Rational(1)}};
    for (std::size_t j = 1; j < spec.f.size(); ++j) powers.push_back(convolve(powers.back(), h));

    std::vector<Rational> inner{Rational(0)};
    std::vector<Rational> partial{Rational(0)};
    std::vector<Rational> d_sum{Rational(0)};
    for (std::size_t i = 0; i < spec.f.size(); ++i) {
        partial = add_poly(partial, powers[i]);
        inner = add_poly(inner, scale_poly(partial, spec.f[i]));
        d_sum = add_poly(d_sum, scale_poly(powers[i], spec.f[i]));
    }
    ReferenceSeries out;
    out.N = convolve(std::vector<Rational>{Rational(-1), Rational(1)}, inner);
    out.D = scale_poly(d_sum, Rational(-1));
    if (out.D.size() < 2) out.D.resize(2, Rational(0));
    out.D[1] += 1;
    return out;
}

/// Stationary vector of a small dense chain by exact Gaussian elimination.
inline std::vector<Rational> exact_stationary(const TransitionMatrix<Rational>& p)
{
    const std::size_t s = p.size;
    // Rows: (P^T - I) with the last equation replaced by sum pi = 1.
    std::vector<std::vector<Rational>> a(s, std::vector<Rational>(s + 1, Rational(0)));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) a[i][j] = p(j, i) - (i == j ? 1 : 0);
    for (std::size_t j = 0; j < s; ++j) a[s - 1][j] = 1;
    a[s - 1][s] = 1;
    for (std::size_t col = 0; col < s; ++col) {
        std::size_t pivot = col;
        while (a[pivot][col] == 0) ++pivot;
        std::swap(a[pivot], a[col]);
        for (std::size_t r = 0; r < s; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= s; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    std::vector<Rational> pi(s);
    for (std::size_t i = 0; i < s; ++i) pi[i] = a[i][s] / a[i][i];
    return pi;
}

} // namespace mmq::testing

#endif // MMQ_TESTS_FIXTURES_HPP
