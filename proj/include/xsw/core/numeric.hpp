#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "xsw/core/error.hpp"

namespace xsw {

namespace mp = boost::multiprecision;

/// Unbounded signed integer used for intermediates and signed profits.
using BigInt = mp::cpp_int;
/// Exact rational; probabilities, rates and prices live here.
using Rational = mp::cpp_rational;
/// Token quantity in base units. 256-bit, arithmetic overflow throws.
using TokenAmount = mp::checked_uint256_t;

inline const BigInt& max_token_amount() {
    static const BigInt max = (BigInt(1) << 256) - 1;
    return max;
}

inline TokenAmount to_amount(const BigInt& v) {
    if (v < 0) throw Error(ErrorCode::Overflow, "negative token amount");
    if (v > max_token_amount()) throw Error(ErrorCode::Overflow, "token amount exceeds 256 bits");
    return TokenAmount(v);
}

inline BigInt to_big(const TokenAmount& v) { return BigInt(v); }

// Non-negative operands only.
inline BigInt floor_div(const BigInt& num, const BigInt& den) { return num / den; }
inline BigInt ceil_div(const BigInt& num, const BigInt& den) { return (num + den - 1) / den; }

inline BigInt floor_rational(const Rational& r) {
    BigInt n = mp::numerator(r);
    BigInt d = mp::denominator(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

inline BigInt ceil_rational(const Rational& r) { return -floor_rational(-r); }

/// Base-10 digits only. Leading zeros are dropped first: the Boost string constructor
/// would otherwise read them as an octal prefix.
inline BigInt parse_decimal_digits(std::string_view digits) {
    if (digits.empty()) throw Error(ErrorCode::Parse, "empty number");
    for (char c : digits) {
        if (c < '0' || c > '9') throw Error(ErrorCode::Parse, "not a decimal integer: '" + std::string(digits) + "'");
    }
    auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return BigInt(0);
    return BigInt(std::string(digits.substr(first)));
}

inline BigInt parse_decimal_integer(std::string_view text) {
    bool negative = !text.empty() && text.front() == '-';
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
    BigInt v = parse_decimal_digits(text);
    return negative ? BigInt(-v) : v;
}

inline TokenAmount parse_amount(std::string_view text) {
    if (text.empty()) throw Error(ErrorCode::Parse, "empty amount");
    return to_amount(parse_decimal_digits(text));
}

inline std::string to_string(const TokenAmount& v) { return v.str(); }
inline std::string to_string(const BigInt& v) { return v.str(); }

/// Parses "0.57", "-0.047", "57/100", "3", "1e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { return Error(ErrorCode::Parse, "not a number: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt n, d;
        try {
            n = parse_decimal_integer(text.substr(0, slash));
            d = parse_decimal_integer(text.substr(slash + 1));
        } catch (const Error&) {
            throw fail();
        }
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (d == 0) throw fail();
        return Rational(n, d);
    }
    std::string_view mantissa = text;
    long long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        std::string exp_text(text.substr(e + 1));
        try {
            std::size_t used = 0;
            exponent = std::stoll(exp_text, &used);
            if (used != exp_text.size()) throw fail();
        } catch (const std::exception&) {
            throw fail();
        }
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    long long frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) throw fail();
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            throw fail();
        }
    }
    if (digits.empty()) throw fail();
    BigInt n = parse_decimal_digits(digits);
    long long scale = exponent - frac_digits;
    if (scale < -4000 || scale > 4000) throw fail();
    Rational r(n);
    BigInt p = mp::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    r = scale < 0 ? Rational(n, p) : Rational(n * p);
    return negative ? -r : r;
}

/// Fixed-point rendering, rounding half away from zero.
inline std::string format_decimal(const Rational& value, unsigned places) {
    BigInt scale = mp::pow(BigInt(10), places);
    Rational scaled = mp::abs(value) * scale;
    BigInt n = mp::numerator(scaled);
    BigInt d = mp::denominator(scaled);
    BigInt q = (2 * n + d) / (2 * d);
    std::string digits = q.str();
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - places);
    if (places > 0) out += "." + digits.substr(digits.size() - places);
    if (value < 0 && q != 0) out.insert(0, "-");
    return out;
}

inline std::string format_percent(const Rational& fraction, unsigned places) {
    return format_decimal(fraction * 100, places) + "%";
}

inline std::string rational_to_string(const Rational& r) {
    if (mp::denominator(r) == 1) return mp::numerator(r).str();
    return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// A ratio numerator/denominator with 64-bit parts.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Rational value() const { return Rational(BigInt(num), BigInt(den)); }
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Swap fee f in [0, 1). Zero is accepted so fee-free pools can be modeled.
struct FeeRate : Fraction {
    FeeRate() = default;
    FeeRate(std::uint64_t n, std::uint64_t d) : Fraction{n, d} {
        if (d == 0 || n >= d) throw Error(ErrorCode::InvalidArgument, "fee must satisfy 0 <= num/den < 1");
    }
    static FeeRate bps(std::uint64_t basis_points) { return FeeRate(basis_points, 10000); }
    /// (1 - f) as numerator over den.
    std::uint64_t kept() const { return den - num; }
};

/// Slippage tolerance s in (0, 1).
struct SlippageTolerance : Fraction {
    SlippageTolerance() : Fraction{1, 100} {}
    SlippageTolerance(std::uint64_t n, std::uint64_t d) : Fraction{n, d} {
        if (d == 0 || n == 0 || n >= d) throw Error(ErrorCode::InvalidArgument, "slippage must satisfy 0 < num/den < 1");
    }
};

/// Share theta of the victim's slippage buffer taken by the front-run, in (0, 1].
struct ExtractionFraction : Fraction {
    ExtractionFraction() : Fraction{1, 1} {}
    ExtractionFraction(std::uint64_t n, std::uint64_t d) : Fraction{n, d} {
        if (d == 0 || n == 0 || n > d) throw Error(ErrorCode::InvalidArgument, "theta must satisfy 0 < num/den <= 1");
    }
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::Overflow, "64-bit fraction product overflow");
    return out;
}

/// s * theta, the tolerance the front-run is allowed to consume.
inline SlippageTolerance effective_tolerance(const SlippageTolerance& s, const ExtractionFraction& theta) {
    return SlippageTolerance(checked_mul(s.num, theta.num), checked_mul(s.den, theta.den));
}

} // namespace xsw
