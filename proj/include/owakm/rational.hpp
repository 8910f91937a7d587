#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "owakm/errors.hpp"

namespace owakm {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// Exact value of a finite double (every finite double is a dyadic rational).
inline Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw InputError("rational_from_double: value is not finite");
    if (v == 0.0) return Rational(0);
    int e2         = 0;
    double mant    = std::frexp(v, &e2);
    auto mant_bits = static_cast<long long>(std::ldexp(mant, 53)); // exact, |mant_bits| < 2^53
    int shift      = e2 - 53;
    Rational r(mant_bits);
    if (shift > 0) {
        r *= Rational(BigInt(1) << shift);
    } else if (shift < 0) {
        r /= Rational(BigInt(1) << (-shift));
    }
    return r;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// cpp_int's string constructor treats a leading 0 as an octal prefix.
inline std::string strip_leading_zeros(std::string_view s) {
    std::size_t i = 0;
    while (i + 1 < s.size() && s[i] == '0') ++i;
    return std::string(s.substr(i));
}

inline BigInt pow10(long long e) {
    BigInt r = 1, b = 10;
    for (long long i = 0; i < e; ++i) r *= b;
    return r;
}

} // namespace detail

// Parses "42", "-0.125", "1e-3", "1/3" into an exact rational.
inline Rational rational_from_decimal(std::string_view s) {
    auto fail = [&] { throw InputError("cannot parse rational literal: '" + std::string(s) + "'"); };
    if (s.empty()) fail();

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
        bool neg = false;
        if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
            neg = num.front() == '-';
            num.remove_prefix(1);
        }
        if (!detail::all_digits(num) || !detail::all_digits(den)) fail();
        BigInt n{detail::strip_leading_zeros(num)};
        BigInt d{detail::strip_leading_zeros(den)};
        if (d == 0) throw InputError("rational literal has zero denominator: '" + std::string(s) + "'");
        Rational r(n, d);
        return neg ? -r : r;
    }

    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        s                   = s.substr(0, e);
        bool eneg           = false;
        if (!es.empty() && (es.front() == '-' || es.front() == '+')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!detail::all_digits(es) || es.size() > 6) fail();
        auto [p, ec] = std::from_chars(es.data(), es.data() + es.size(), exp10);
        if (ec != std::errc()) fail();
        if (eneg) exp10 = -exp10;
    }
    std::string digits;
    long long frac_len = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) fail();
        if (!ip.empty() && !detail::all_digits(ip)) fail();
        if (!fp.empty() && !detail::all_digits(fp)) fail();
        digits   = std::string(ip) + std::string(fp);
        frac_len = static_cast<long long>(fp.size());
    } else {
        if (!detail::all_digits(s)) fail();
        digits = std::string(s);
    }
    if (digits.empty()) fail();

    Rational r{BigInt{detail::strip_leading_zeros(digits)}};
    long long net = exp10 - frac_len;
    if (net > 0) r *= Rational(detail::pow10(net));
    if (net < 0) r /= Rational(detail::pow10(-net));
    return neg ? -r : r;
}

// Shortest decimal string that round-trips to the same double.
inline std::string shortest_decimal(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw InputError("shortest_decimal: formatting failed");
    return std::string(buf, p);
}

// Rational read of a double through its shortest decimal form, so that e.g.
// 0.1 becomes 1/10 rather than the underlying binary fraction.
inline Rational rational_from_shortest_decimal(double v) {
    if (!std::isfinite(v)) throw InputError("rational_from_shortest_decimal: value is not finite");
    return rational_from_decimal(shortest_decimal(v));
}

} // namespace owakm
