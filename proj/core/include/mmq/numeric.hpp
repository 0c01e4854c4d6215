#ifndef MMQ_NUMERIC_HPP
#define MMQ_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mmq {

/// Exact rational scalar used by the `exact` backend.
using Rational = mpq_class;

enum class Backend { float64, exact };

std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view name);

/// Numeric settings for the queue-length distribution recursion.
///
/// The float64 backend stops at the first coefficient that is clearly wrong:
/// a value below -negative_tolerance, a running mass above 1 + 1e-9, or (when
/// detect_rounding_floor is set) a nonzero value that is no larger than the
/// accumulated rounding-error envelope. The exact backend always runs to k_max.
struct NumericConfig {
    Backend backend = Backend::float64;
    double negative_tolerance = 0.0;
    std::size_t k_max = 100;
    bool detect_rounding_floor = true;

    void check() const;
};

enum class ErrorCode {
    non_stochastic_vector,
    not_ergodic,
    unstable,
    zero_arrival_rate,
    pole_near,
    cap_too_small,
    no_convergence,
    invalid_argument,
    parse_error,
    io_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse a decimal literal ("0.05", "-1.5e-3", "7") into an exact fraction.
Rational parse_decimal(std::string_view text);

/// Parse a decimal literal into the nearest double.
double parse_decimal_double(std::string_view text);

/// Scalar operations that differ between double and Rational.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double from_int(long v) { return static_cast<double>(v); }
    static double from_decimal(std::string_view s) { return parse_decimal_double(s); }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static std::string format(double v);
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_int(long v) { return Rational(v); }
    static Rational from_decimal(std::string_view s) { return parse_decimal(s); }
    /// Correctly rounded (mpq_get_d truncates).
    static double to_double(const Rational& v);
    static Rational abs(const Rational& v) { return ::abs(v); }
    static std::string format(const Rational& v);
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return ScalarTraits<Rational>::to_double(v); }

/// %.17g for doubles, "num/den" (or "num") for rationals.
template <typename T>
std::string format_scalar(const T& v)
{
    return ScalarTraits<T>::format(v);
}

} // namespace mmq

#endif // MMQ_NUMERIC_HPP
