#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "kelleyscope/errors.hpp"

namespace kelleyscope {

// Exact arithmetic everywhere: all measure values, intersection numbers and
// LP data are arbitrary-precision rationals kept in lowest terms with a
// positive denominator (canonical zero is 0/1). No floating point touches
// any certificate.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(Integer n, Integer d) {
    if (d == 0) throw value_error("rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    return Rational(n, d);
}

// Canonical wire form is always "p/q" with q >= 1, e.g. "0/1", "-3/2".
inline std::string to_string(const Rational& q) {
    return num(q).str() + "/" + den(q).str();
}

inline std::optional<Rational> try_parse_rational(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t slash = s.find('/');
    std::string_view ns = s.substr(0, slash == std::string_view::npos ? s.size() : slash);
    std::string_view ds = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    auto is_int = [](std::string_view t) {
        if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    if (!is_int(ns) || !is_int(ds)) return std::nullopt;
    Integer n{std::string(ns)};
    Integer d{std::string(ds)};
    if (d == 0) return std::nullopt;
    return make_rational(std::move(n), std::move(d));
}

inline Rational parse_rational(std::string_view s) {
    auto q = try_parse_rational(s);
    if (!q) throw structural_error("rational: cannot parse '" + std::string(s) + "' (want p/q)");
    return *q;
}

// Decimal rendering for the convenience columns only; certificates never use
// it. Round half up at `digits` fractional places, trailing zeros trimmed.
inline std::string to_decimal_string(const Rational& q, unsigned digits = 12) {
    Integer n = num(q), d = den(q);
    bool neg = n < 0;
    if (neg) n = -n;
    Integer ip = n / d;
    Integer rem = n % d;
    Integer scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Integer frac = (rem * scale * 2 + d) / (2 * d); // round half up
    if (frac >= scale) { ip += 1; frac -= scale; }
    std::string fs = frac.str();
    if (fs.size() < digits) fs.insert(fs.begin(), digits - fs.size(), '0');
    while (fs.size() > 1 && fs.back() == '0') fs.pop_back();
    std::string out = (neg && (ip != 0 || frac != 0)) ? "-" : "";
    out += ip.str();
    if (!(fs.size() == 1 && fs[0] == '0')) out += "." + fs;
    return out;
}

} // namespace kelleyscope
