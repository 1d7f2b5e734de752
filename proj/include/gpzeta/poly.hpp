#pragma once

// Sparse multivariate polynomials over the rationals. Used for numerators of
// merged rational functions and for exponents of e^{...} factors.

#include "gpzeta/linform.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gpzeta {

/// Sorted (variable, positive exponent) pairs; empty is the unit monomial.
using Monomial = std::vector<std::pair<std::string, int>>;

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

inline int monomial_degree(const Monomial& m) {
    int d = 0;
    for (const auto& [v, e] : m) d += e;
    return d;
}

class Poly {
public:
    Poly() = default;
    Poly(const Rational& c) {  // NOLINT(google-explicit-constructor)
        if (c != 0) terms_[Monomial{}] = c;
    }
    Poly(int c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    explicit Poly(const LinForm& f) {
        for (const auto& [v, c] : f.coeffs()) terms_[Monomial{{v, 1}}] = c;
        if (f.constant() != 0) terms_[Monomial{}] = f.constant();
    }

    static Poly variable(const std::string& name) {
        Poly p;
        p.terms_[Monomial{{name, 1}}] = 1;
        return p;
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    bool is_one() const { return is_constant() && constant_value() == 1; }
    Rational constant_value() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
        return d;
    }

    int degree_in(const std::string& var) const {
        int d = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m)
                if (v == var) d = std::max(d, e);
        return d;
    }

    bool has(const std::string& var) const { return degree_in(var) > 0; }

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m) out.insert(v);
        return out;
    }

    /// Coefficient of the first monomial in map order (the constant term when present).
    Rational leading_coefficient() const {
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }

    /// Returns the polynomial as a LinForm when its degree is at most one.
    bool as_linform(LinForm& out) const {
        LinForm f;
        for (const auto& [m, c] : terms_) {
            if (m.empty())
                f.set_constant(c);
            else if (m.size() == 1 && m[0].second == 1)
                f.set(m[0].first, c);
            else
                return false;
        }
        out = f;
        return true;
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Rational& q) {
        if (q == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= q;
        }
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rational& q) { return a *= q; }
    friend Poly operator*(const Rational& q, Poly a) { return a *= q; }
    Poly operator-() const { return *this * Rational(-1); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_constant() && !a.is_zero()) return b * a.constant_value();
        if (b.is_constant() && !b.is_zero()) return a * b.constant_value();
        Poly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_mul(ma, mb), ca * cb);
        return out;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(int e) const {
        if (e < 0) throw std::invalid_argument("negative power of a polynomial");
        Poly out(1);
        Poly base = *this;
        while (e > 0) {
            if (e & 1) out *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return out;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b) { return a.terms_ < b.terms_; }

    /// Replaces variables by linear forms; unassigned variables are kept.
    Poly substitute(const std::map<std::string, LinForm>& assignment) const {
        Poly out;
        std::map<std::string, std::vector<Poly>> powers;
        for (const auto& [m, c] : terms_) {
            Poly t(c);
            for (const auto& [v, e] : m) {
                auto it = assignment.find(v);
                if (it == assignment.end()) {
                    Poly vp;
                    vp.terms_[Monomial{{v, e}}] = 1;
                    t *= vp;
                    continue;
                }
                auto& cache = powers[v];
                if (cache.empty()) cache.push_back(Poly(1));
                while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * Poly(it->second));
                t *= cache[e];
            }
            out += t;
        }
        return out;
    }

    /// Coefficients of powers of `var`: result[k] is the coefficient of var^k.
    std::vector<Poly> coefficients_in(const std::string& var) const {
        std::vector<Poly> out(degree_in(var) + 1);
        for (const auto& [m, c] : terms_) {
            Monomial rest;
            int k = 0;
            for (const auto& [v, e] : m) {
                if (v == var)
                    k = e;
                else
                    rest.emplace_back(v, e);
            }
            out[k].add_term(rest, c);
        }
        return out;
    }

    Rational evaluate(const std::map<std::string, Rational>& point) const {
        Rational out = 0;
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (const auto& [v, e] : m) {
                auto it = point.find(v);
                if (it == point.end())
                    throw std::invalid_argument("no value supplied for variable '" + v + "'");
                t *= rat_pow(it->second, e);
            }
            out += t;
        }
        return out;
    }

    /// Generic evaluation; `value(name)` returns the numeric value of a variable.
    template <class T, class Lookup>
    T evaluate_with(Lookup&& value) const {
        T out(0);
        for (const auto& [m, c] : terms_) {
            T t = T(c);
            for (const auto& [v, e] : m) {
                T x = value(v);
                for (int k = 0; k < e; ++k) t = t * x;
            }
            out = out + t;
        }
        return out;
    }

    /// Exact division by a non-constant linear form. Returns false when the
    /// form does not divide this polynomial.
    bool divide_by_linear(const LinForm& form, Poly& quotient) const {
        if (form.is_constant()) throw std::invalid_argument("division by a constant form");
        const std::string pivot = form.coeffs().begin()->first;
        const Rational cp = form.coeffs().begin()->second;
        // form = cp * (pivot - r)
        LinForm rest = form;
        rest.set(pivot, 0);
        Poly r(rest * (Rational(-1) / cp));
        auto coeffs = coefficients_in(pivot);
        const int d = static_cast<int>(coeffs.size()) - 1;
        if (d == 0) {
            if (is_zero()) {
                quotient = Poly();
                return true;
            }
            return false;
        }
        std::vector<Poly> q(d);
        q[d - 1] = coeffs[d];
        for (int k = d - 1; k >= 1; --k) q[k - 1] = coeffs[k] + r * q[k];
        Poly remainder = coeffs[0] + r * q[0];
        if (!remainder.is_zero()) return false;
        Poly out;
        Poly pv = variable(pivot);
        Poly pk(1);
        for (int k = 0; k < d; ++k) {
            out += q[k] * pk;
            pk *= pv;
        }
        quotient = out * (Rational(1) / cp);
        return true;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            Rational a = rat_abs(c);
            if (out.empty()) {
                if (c < 0) out += "-";
            } else {
                out += c < 0 ? "-" : "+";
            }
            bool show_coeff = m.empty() || a != 1;
            if (show_coeff) out += is_integer(a) ? to_string(a) : "(" + to_string(a) + ")";
            bool first = !show_coeff;
            for (const auto& [v, e] : m) {
                if (!first) out += "*";
                first = false;
                out += v;
                if (e != 1) out += "^" + std::to_string(e);
            }
        }
        return out;
    }

private:
    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Monomial, Rational> terms_;
};

}  // namespace gpzeta
