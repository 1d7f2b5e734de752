#pragma once

// Affine-linear forms  c_1 x_1 + ... + c_k x_k + c_0  with exact rational
// coefficients. Zero coefficients are never stored.

#include "gpzeta/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gpzeta {

class LinForm {
public:
    LinForm() = default;
    explicit LinForm(Rational constant) : constant_(std::move(constant)) {}

    static LinForm variable(const std::string& name, const Rational& coeff = 1) {
        LinForm f;
        f.set(name, coeff);
        return f;
    }

    const std::map<std::string, Rational>& coeffs() const { return coeffs_; }
    const Rational& constant() const { return constant_; }

    Rational coeff(const std::string& name) const {
        auto it = coeffs_.find(name);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    void set(const std::string& name, const Rational& value) {
        if (value == 0)
            coeffs_.erase(name);
        else
            coeffs_[name] = value;
    }
    void set_constant(const Rational& value) { constant_ = value; }

    bool is_constant() const { return coeffs_.empty(); }
    bool is_zero() const { return coeffs_.empty() && constant_ == 0; }
    bool has(const std::string& name) const { return coeffs_.count(name) != 0; }

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& [v, c] : coeffs_) out.insert(v);
        return out;
    }

    LinForm& operator+=(const LinForm& o) {
        for (const auto& [v, c] : o.coeffs_) set(v, coeff(v) + c);
        constant_ += o.constant_;
        return *this;
    }
    LinForm& operator-=(const LinForm& o) {
        for (const auto& [v, c] : o.coeffs_) set(v, coeff(v) - c);
        constant_ -= o.constant_;
        return *this;
    }
    LinForm& operator*=(const Rational& q) {
        if (q == 0) {
            coeffs_.clear();
            constant_ = 0;
            return *this;
        }
        for (auto& [v, c] : coeffs_) c *= q;
        constant_ *= q;
        return *this;
    }

    friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
    friend LinForm operator-(LinForm a, const LinForm& b) { return a -= b; }
    friend LinForm operator*(LinForm a, const Rational& q) { return a *= q; }
    friend LinForm operator*(const Rational& q, LinForm a) { return a *= q; }
    friend LinForm operator+(LinForm a, const Rational& q) {
        a.constant_ += q;
        return a;
    }
    friend LinForm operator-(LinForm a, const Rational& q) {
        a.constant_ -= q;
        return a;
    }
    LinForm operator-() const { return *this * Rational(-1); }

    friend bool operator==(const LinForm& a, const LinForm& b) {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const LinForm& a, const LinForm& b) { return !(a == b); }
    friend bool operator<(const LinForm& a, const LinForm& b) {
        if (a.coeffs_ != b.coeffs_) return a.coeffs_ < b.coeffs_;
        return a.constant_ < b.constant_;
    }

    /// Compose with an assignment; unassigned variables stay as they are.
    LinForm substitute(const std::map<std::string, LinForm>& assignment) const {
        LinForm out(constant_);
        for (const auto& [v, c] : coeffs_) {
            auto it = assignment.find(v);
            if (it == assignment.end())
                out += LinForm::variable(v, c);
            else
                out += it->second * c;
        }
        return out;
    }

    Rational evaluate(const std::map<std::string, Rational>& point) const {
        Rational out = constant_;
        for (const auto& [v, c] : coeffs_) {
            auto it = point.find(v);
            if (it == point.end())
                throw std::invalid_argument("no value supplied for variable '" + v + "'");
            out += c * it->second;
        }
        return out;
    }

    /// Plain-text rendering accepted by the expression parser, e.g. "3s-2".
    std::string str() const {
        std::string out;
        for (const auto& [v, c] : coeffs_) {
            Rational a = rat_abs(c);
            if (out.empty()) {
                if (c < 0) out += "-";
            } else {
                out += c < 0 ? "-" : "+";
            }
            if (a != 1) out += is_integer(a) ? to_string(a) : "(" + to_string(a) + ")";
            out += v;
        }
        if (constant_ != 0 || out.empty()) {
            if (out.empty()) {
                out += to_string(constant_);
            } else {
                out += constant_ < 0 ? "-" : "+";
                out += to_string(rat_abs(constant_));
            }
        }
        return out;
    }

private:
    std::map<std::string, Rational> coeffs_;
    Rational constant_ = 0;
};

/// Splits L = multiplier * primitive where the primitive form has coprime
/// integer coefficients and a positive leading coefficient (first variable in
/// name order). Constant forms yield (L, 1).
inline std::pair<Rational, LinForm> normalize_primitive(const LinForm& form) {
    if (form.is_constant()) return {form.constant(), LinForm(Rational(1))};
    Integer den_lcm = 1;
    for (const auto& [v, c] : form.coeffs()) den_lcm = int_lcm(den_lcm, den_of(c));
    den_lcm = int_lcm(den_lcm, den_of(form.constant()));
    Integer g = 0;
    for (const auto& [v, c] : form.coeffs()) g = int_gcd(g, num_of(c * den_lcm));
    g = int_gcd(g, num_of(form.constant() * den_lcm));
    Rational scale(den_lcm, g);
    if (form.coeffs().begin()->second < 0) scale = -scale;
    LinForm prim = form * scale;
    return {Rational(1) / scale, prim};
}

}  // namespace gpzeta
