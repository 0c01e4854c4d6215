#include <mmq/numeric.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <charconv>
#include <cstdio>
#include <string>

namespace mmq {

std::string_view to_string(Backend backend)
{
    switch (backend) {
    case Backend::float64: return "float64";
    case Backend::exact: return "exact";
    }
    return "unknown";
}

Backend parse_backend(std::string_view name)
{
    if (name == "float64" || name == "float" || name == "double") return Backend::float64;
    if (name == "exact" || name == "rational") return Backend::exact;
    throw Error(ErrorCode::invalid_argument, "unknown backend '" + std::string(name) + "'");
}

void NumericConfig::check() const
{
    if (!(negative_tolerance >= 0.0))
        throw Error(ErrorCode::invalid_argument, "negative_tolerance must be >= 0");
}

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::non_stochastic_vector: return "NonStochasticVector";
    case ErrorCode::not_ergodic: return "NotErgodic";
    case ErrorCode::unstable: return "Unstable";
    case ErrorCode::zero_arrival_rate: return "ZeroArrivalRate";
    case ErrorCode::pole_near: return "PoleNear";
    case ErrorCode::cap_too_small: return "CapTooSmall";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IoError";
    }
    return "Unknown";
}

namespace {

struct DecimalParts {
    bool negative = false;
    std::string digits;  // integer and fraction digits concatenated
    long scale = 0;      // value = digits * 10^-scale
};

[[noreturn]] void bad_decimal(std::string_view text)
{
    throw Error(ErrorCode::parse_error, "not a decimal number: '" + std::string(text) + "'");
}

DecimalParts split_decimal(std::string_view text)
{
    DecimalParts parts;
    std::size_t pos = 0;
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = text.size();
    while (end > pos && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    text = text.substr(pos, end - pos);
    if (text.empty()) bad_decimal(text);

    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        parts.negative = text[i] == '-';
        ++i;
    }
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            parts.digits.push_back(c);
            seen_digit = true;
            if (seen_point) ++parts.scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) bad_decimal(text);

    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') bad_decimal(text);
        ++i;
        long exponent = 0;
        const char* first = text.data() + i;
        const char* last = text.data() + text.size();
        if (first != last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, exponent);
        if (ec != std::errc() || ptr != last) bad_decimal(text);
        parts.scale -= exponent;
    }
    return parts;
}

mpz_class pow10(unsigned long exponent)
{
    mpz_class result;
    mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
    return result;
}

} // namespace

Rational parse_decimal(std::string_view text)
{
    const DecimalParts parts = split_decimal(text);
    mpz_class numerator(parts.digits, 10);
    Rational value;
    if (parts.scale >= 0) {
        value = Rational(numerator, pow10(static_cast<unsigned long>(parts.scale)));
    } else {
        value = Rational(numerator * pow10(static_cast<unsigned long>(-parts.scale)));
    }
    value.canonicalize();
    if (parts.negative) value = -value;
    return value;
}

double parse_decimal_double(std::string_view text)
{
    // Validate with the same grammar as the exact parser.
    split_decimal(text);
    std::string trimmed(text);
    std::size_t start = trimmed.find_first_not_of(" \t\r\n");
    std::size_t stop = trimmed.find_last_not_of(" \t\r\n");
    trimmed = trimmed.substr(start, stop - start + 1);
    if (!trimmed.empty() && trimmed.front() == '+') trimmed.erase(0, 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
    if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) bad_decimal(text);
    return value;
}

std::string ScalarTraits<double>::format(double v)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

double ScalarTraits<Rational>::to_double(const Rational& v)
{
    if (v == 0) return 0.0;
    mpz_class num = ::abs(v.get_num());
    mpz_class den = v.get_den();
    // Scale so the integer quotient carries 55 significant bits; the remainder
    // becomes a sticky bit and the uint64 -> double conversion rounds to nearest.
    const long exponent = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                          static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    const long shift = 55 - exponent;
    if (shift >= 0) {
        num <<= static_cast<mp_bitcnt_t>(shift);
    } else {
        den <<= static_cast<mp_bitcnt_t>(-shift);
    }
    mpz_class quotient, remainder;
    mpz_tdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    std::uint64_t bits = mpz_get_ui(quotient.get_mpz_t());
    if (remainder != 0) bits |= 1u;
    const double magnitude = std::ldexp(static_cast<double>(bits), static_cast<int>(-shift));
    return v < 0 ? -magnitude : magnitude;
}

std::string ScalarTraits<Rational>::format(const Rational& v)
{
    return v.get_str(10);
}

} // namespace mmq
