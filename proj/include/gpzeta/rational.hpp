#pragma once

// Exact rational arithmetic shared by the symbolic layer.

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace gpzeta {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline Integer num_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den_of(q) == 1; }

/// "p/q" or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    if (is_integer(q)) return num_of(q).str();
    return num_of(q).str() + "/" + den_of(q).str();
}

/// Accepts "p", "p/q", "-p/q" and plain decimals such as "0.25".
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Integer p(text.substr(0, slash));
        Integer q(text.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rational(p, q);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (digits == "-" || digits.empty()) digits += "0";
        Integer scale = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) scale *= 10;
        return Rational(Integer(digits), scale);
    }
    return Rational(Integer(text));
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Integer int_gcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Integer int_lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

inline Rational rat_pow(Rational base, int exponent) {
    if (exponent < 0) {
        if (base == 0) throw std::domain_error("0 raised to a negative power");
        base = Rational(1) / base;
        exponent = -exponent;
    }
    Rational out = 1;
    while (exponent > 0) {
        if (exponent & 1) out *= base;
        base *= base;
        exponent >>= 1;
    }
    return out;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace gpzeta
