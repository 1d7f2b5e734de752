#pragma once

// Text, JSON and LaTeX forms of SymExpr.
//
// Plain text grammar (whitespace ignored, juxtaposition multiplies):
//   sum     := ['+'|'-'] product (('+'|'-') product)*
//   product := power (['*'|'/'] power)*
//   power   := primary ['^' ['-'] integer]
//   primary := number | name | a_k | xi'..'(sum) | exp(sum) | (sum)
// Names are variables. Parenthesised linear expressions become linear
// factors, so 1/((4s)(4s-3)) keeps its two denominators.

#include "gpzeta/symexpr.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpzeta {

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Product without canonicalization; linear factors stay separate.
inline Term raw_mul(const Term& a, const Term& b) {
    Term out;
    out.scalar = a.scalar * b.scalar;
    out.num = a.num * b.num;
    out.lin = a.lin;
    for (const auto& [f, e] : b.lin) {
        int& slot = out.lin[f];
        slot += e;
        if (slot == 0) out.lin.erase(f);
    }
    out.xi = a.xi;
    for (const auto& [x, e] : b.xi) out.mul_xi(x, e);
    out.expo = a.expo + b.expo;
    return out;
}

inline Term raw_pow(const Term& t, int k) {
    if (k < 0 && !t.num.is_one()) throw ParseError("cannot invert a polynomial numerator");
    if (k < 0 && t.scalar == 0) throw ParseError("division by zero");
    Term out;
    out.scalar = rat_pow(t.scalar, k);
    out.num = t.num.pow(std::max(k, 0));
    for (const auto& [f, e] : t.lin) out.lin[f] = e * k;
    for (const auto& [a, e] : t.xi) out.mul_xi(a, e * k);
    out.expo = t.expo * Rational(k);
    if (k == 0) out = Term{};
    return out;
}

class Parser {
public:
    explicit Parser(std::string text) : s_(std::move(text)) {}

    SymExpr parse() {
        auto terms = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        SymExpr out;
        for (auto& t : terms) {
            t.canonicalize();
            if (!t.is_zero()) out.terms.push_back(std::move(t));
        }
        return out;
    }

private:
    using Val = std::vector<Term>;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool starts_primary() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.' || c == '_';
    }

    Val sum() {
        Val out;
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        for (;;) {
            Val p = product();
            for (auto& t : p) {
                if (neg) t.scalar = -t.scalar;
                out.push_back(std::move(t));
            }
            if (eat('+'))
                neg = false;
            else if (eat('-'))
                neg = true;
            else
                break;
        }
        return out;
    }

    static Val multiply(const Val& a, const Val& b) {
        Val out;
        for (const auto& x : a)
            for (const auto& y : b) out.push_back(raw_mul(x, y));
        return out;
    }

    Val invert(const Val& v) {
        if (v.size() != 1) fail("cannot divide by a sum that is not linear");
        return {raw_pow(v.front(), -1)};
    }

    Val product() {
        Val acc = power();
        for (;;) {
            if (eat('*')) {
                acc = multiply(acc, power());
            } else if (eat('/')) {
                acc = multiply(acc, invert(power()));
            } else if (starts_primary()) {
                acc = multiply(acc, power());
            } else {
                break;
            }
        }
        return acc;
    }

    Val power() {
        Val base = primary();
        if (!eat('^')) return base;
        bool neg = false;
        bool paren = eat('(');
        if (eat('-')) neg = true;
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer exponent");
        int k = std::stoi(s_.substr(start, pos_ - start));
        if (paren) expect(')');
        if (neg) k = -k;
        if (base.size() != 1) {
            if (k < 0) fail("negative power of a sum");
            Val out{Term{}};
            for (int i = 0; i < k; ++i) out = multiply(out, base);
            return out;
        }
        return {raw_pow(base.front(), k)};
    }

    /// Collapses a polynomial-only sum to one term: a linear factor when
    /// non-constant and of degree one, else a numerator.
    static Val collapse(Val v) {
        if (v.size() == 1) return v;
        Poly p;
        for (const auto& t : v) {
            if (!t.xi.empty() || !t.expo.is_zero()) return v;
            Poly q = t.num * t.scalar;
            for (const auto& [f, e] : t.lin) {
                if (e < 0) return v;
                q *= Poly(f).pow(e);
            }
            p += q;
        }
        Term out;
        LinForm f;
        if (p.is_constant()) {
            out.scalar = p.constant_value();
        } else if (p.total_degree() == 1 && p.as_linform(f)) {
            auto [m, prim] = normalize_primitive(f);
            out.scalar = m;
            out.lin[prim] = 1;
        } else {
            out.num = p;
        }
        return {out};
    }

    LinForm linear_arg() {
        expect('(');
        Val v = collapse(sum());
        expect(')');
        const Term& t = v.front();
        if (v.size() != 1 || !t.xi.empty() || !t.expo.is_zero() || !t.num.is_one() || t.lin.size() > 1)
            fail("argument is not affine-linear");
        if (t.lin.empty()) return LinForm(t.scalar);
        if (t.lin.begin()->second != 1) fail("argument is not affine-linear");
        return t.lin.begin()->first * t.scalar;
    }

    Val primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Val v = sum();
            expect(')');
            return collapse(std::move(v));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            Term t;
            t.scalar = parse_rational(s_.substr(start, pos_ - start));
            return {t};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "xi") {
                int d = 0;
                while (pos_ < s_.size() && s_[pos_] == '\'') {
                    ++d;
                    ++pos_;
                }
                LinForm arg = linear_arg();
                Term t;
                try {
                    t.mul_xi(XiAtom::of(arg, d), 1);
                } catch (const SingularLocusError& e) {
                    fail(e.what());
                }
                return {t};
            }
            if (name == "exp") {
                expect('(');
                Val v = collapse(sum());
                expect(')');
                Term t;
                const Term& a = v.front();
                if (v.size() != 1 || !a.xi.empty() || !a.expo.is_zero()) fail("exponent must be a polynomial");
                t.expo = a.num * a.scalar;
                for (const auto& [f, e] : a.lin) t.expo *= Poly(f).pow(e);
                return {t};
            }
            if (name.size() > 2 && name.rfind("a_", 0) == 0 &&
                name.find_first_not_of("0123456789", 2) == std::string::npos) {
                Term t;
                t.mul_xi(XiAtom::laurent(std::stoi(name.substr(2))), 1);
                return {t};
            }
            Term t;
            t.lin[LinForm::variable(name)] = 1;
            return {t};
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

inline bool needs_parens(const std::string& s) {
    return s.find_first_of("+-*", 1) != std::string::npos || (!s.empty() && s[0] == '-');
}

}  // namespace detail

inline SymExpr parse_expr(const std::string& text) { return detail::Parser(text).parse(); }

/// Plain text accepted back by parse_expr.
inline std::string to_plain(const Term& t) {
    std::string out;
    Rational a = rat_abs(t.scalar);
    std::vector<std::string> top, bottom;
    if (!t.num.is_one()) top.push_back("(" + t.num.str() + ")");
    for (const auto& [x, e] : t.xi) {
        std::string s = x.str();
        if (std::abs(e) != 1) s += "^" + std::to_string(std::abs(e));
        (e > 0 ? top : bottom).push_back(s);
    }
    if (!t.expo.is_zero()) top.push_back("exp(" + t.expo.str() + ")");
    for (const auto& [f, e] : t.lin) {
        std::string s = "(" + f.str() + ")";
        if (std::abs(e) != 1) s += "^" + std::to_string(std::abs(e));
        (e > 0 ? top : bottom).push_back(s);
    }
    std::string head = to_string(a);
    if (a == 1 && !top.empty()) head.clear();
    out = head;
    for (const auto& s : top) out += (out.empty() ? "" : "*") + s;
    for (const auto& s : bottom) out += "/" + s;
    return out;
}

inline std::string to_plain(const SymExpr& e) {
    if (e.empty()) return "0";
    std::string out;
    for (const auto& t : e.terms) {
        std::string body = to_plain(t);
        if (out.empty())
            out = (t.scalar < 0 ? "-" : "") + body;
        else
            out += (t.scalar < 0 ? " - " : " + ") + body;
    }
    return out;
}

// ---------------------------------------------------------------- JSON

using nlohmann::json;

inline json to_json(const LinForm& f) {
    json j = json::object();
    for (const auto& [v, c] : f.coeffs()) j[v] = to_string(c);
    j["const"] = to_string(f.constant());
    return j;
}

inline LinForm linform_from_json(const json& j) {
    LinForm f;
    for (const auto& [k, v] : j.items()) {
        Rational q = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long long>());
        if (k == "const")
            f.set_constant(q);
        else
            f.set(k, q);
    }
    return f;
}

inline json to_json(const Poly& p) {
    json out = json::array();
    for (const auto& [m, c] : p.terms()) {
        json mono = json::object();
        for (const auto& [v, e] : m) mono[v] = e;
        out.push_back({{"coeff", to_string(c)}, {"mono", mono}});
    }
    return out;
}

inline Poly poly_from_json(const json& j) {
    Poly p;
    for (const auto& t : j) {
        Poly m(parse_rational(t.at("coeff").get<std::string>()));
        for (const auto& [v, e] : t.at("mono").items()) m *= Poly::variable(v).pow(e.get<int>());
        p += m;
    }
    return p;
}

inline json to_json(const XiAtom& a) {
    switch (a.kind) {
        case XiAtom::Kind::Laurent:
            return {{"kind", "laurent"}, {"index", a.index}};
        case XiAtom::Kind::Value:
            return {{"kind", "value"}, {"value", to_string(a.arg.constant())}, {"deriv", a.deriv}};
        case XiAtom::Kind::Form:
            return {{"kind", "form"}, {"arg", to_json(a.arg)}, {"deriv", a.deriv}};
    }
    return {};
}

inline XiAtom xiatom_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "laurent") return XiAtom::laurent(j.at("index").get<int>());
    int d = j.value("deriv", 0);
    if (kind == "value") return XiAtom::value(parse_rational(j.at("value").get<std::string>()), d);
    if (kind == "form") return XiAtom::of(linform_from_json(j.at("arg")), d);
    throw ParseError("unknown xi atom kind '" + kind + "'");
}

inline json to_json(const Term& t) {
    json j;
    j["scalar"] = to_string(t.scalar);
    if (!t.num.is_one()) j["num"] = to_json(t.num);
    j["lin"] = json::array();
    for (const auto& [f, e] : t.lin) j["lin"].push_back({{"form", to_json(f)}, {"exp", e}});
    j["xi"] = json::array();
    for (const auto& [a, e] : t.xi) j["xi"].push_back({{"atom", to_json(a)}, {"exp", e}});
    j["expfactor"] = t.expo.is_zero() ? json(nullptr) : to_json(t.expo);
    if (t.tag >= 0) j["tag"] = t.tag;
    return j;
}

inline Term term_from_json(const json& j) {
    Term t;
    t.scalar = parse_rational(j.at("scalar").get<std::string>());
    if (j.contains("num")) t.num = poly_from_json(j.at("num"));
    if (j.contains("lin"))
        for (const auto& l : j.at("lin")) {
            // stored forms are already primitive; keep them as they are
            LinForm f = linform_from_json(l.at("form"));
            auto [m, prim] = normalize_primitive(f);
            int e = l.at("exp").get<int>();
            t.scalar *= rat_pow(m, e);
            t.lin[prim] += e;
            if (t.lin[prim] == 0) t.lin.erase(prim);
        }
    if (j.contains("xi"))
        for (const auto& x : j.at("xi")) t.mul_xi(xiatom_from_json(x.at("atom")), x.at("exp").get<int>());
    if (j.contains("expfactor") && !j.at("expfactor").is_null()) t.expo = poly_from_json(j.at("expfactor"));
    t.tag = j.value("tag", -1);
    return t;
}

inline json to_json(const SymExpr& e) {
    json j;
    if (!e.label.empty()) j["label"] = e.label;
    j["terms"] = json::array();
    for (const auto& t : e.terms) j["terms"].push_back(to_json(t));
    return j;
}

/// Inverse of to_json; terms are kept in stored order and not merged.
inline SymExpr symexpr_from_json(const json& j) {
    SymExpr e;
    e.label = j.value("label", "");
    for (const auto& t : j.at("terms")) {
        Term x = term_from_json(t);
        if (!x.is_zero()) e.terms.push_back(std::move(x));
    }
    return e;
}

// ---------------------------------------------------------------- LaTeX

namespace detail {

inline std::string latex_rational(const Rational& q) {
    if (is_integer(q)) return to_string(q);
    return "\\frac{" + num_of(q).str() + "}{" + den_of(q).str() + "}";
}

inline std::string latex_linform(const LinForm& f) {
    std::string out;
    for (const auto& [v, c] : f.coeffs()) {
        Rational a = rat_abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? "-" : "+";
        }
        if (a != 1) out += latex_rational(a);
        out += v.size() > 1 ? v.substr(0, 1) + "_{" + v.substr(1) + "}" : v;
    }
    const Rational& k = f.constant();
    if (k != 0 || out.empty()) {
        if (!out.empty()) out += k < 0 ? "-" : "+";
        else if (k < 0) out += "-";
        out += latex_rational(rat_abs(k));
    }
    return out;
}

inline std::string latex_atom(const XiAtom& a) {
    if (a.is_laurent()) return "a_{" + std::to_string(a.index) + "}";
    return "\\xi" + std::string(a.deriv, '\'') + "(" + latex_linform(a.arg) + ")";
}

}  // namespace detail

inline std::string to_latex(const Term& t, bool leading) {
    std::string sign = t.scalar < 0 ? "-" : (leading ? "" : "+");
    Rational a = rat_abs(t.scalar);
    std::string coeff = a == 1 ? "" : detail::latex_rational(a) + "\\cdot ";
    std::string den;
    for (const auto& [f, e] : t.lin) {
        if (e > 0) continue;
        den += "(" + detail::latex_linform(f) + ")";
        if (e < -1) den += "^{" + std::to_string(-e) + "}";
    }
    std::string numer = t.num.is_one() ? "1" : t.num.str();
    for (const auto& [f, e] : t.lin)
        if (e > 0) numer += "(" + detail::latex_linform(f) + ")" + (e > 1 ? "^{" + std::to_string(e) + "}" : "");
    std::string frac = den.empty() ? (numer == "1" ? "" : numer + "\\cdot ") : "\\frac{" + numer + "}{" + den + "}\\cdot ";
    std::string xi_num, xi_den;
    for (const auto& [x, e] : t.xi) {
        std::string s = detail::latex_atom(x);
        if (std::abs(e) > 1) s += "^{" + std::to_string(std::abs(e)) + "}";
        (e > 0 ? xi_num : xi_den) += s;
    }
    std::string body = coeff + frac;
    if (!xi_den.empty())
        body += "\\frac{" + (xi_num.empty() ? std::string("1") : xi_num) + "}{" + xi_den + "}";
    else
        body += xi_num;
    if (!t.expo.is_zero()) body += "\\, e^{" + t.expo.str() + "}";
    while (body.size() >= 6 && body.compare(body.size() - 6, 6, "\\cdot ") == 0) body.resize(body.size() - 6);
    if (body.empty()) body = "1";
    return sign + body;
}

inline std::string to_latex(const SymExpr& e) {
    if (e.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        if (i) out += "\n";
        out += to_latex(e.terms[i], i == 0);
    }
    return out;
}

enum class Format { Plain, Latex, Json };

inline Format parse_format(const std::string& s) {
    if (s == "plain" || s == "text") return Format::Plain;
    if (s == "latex" || s == "tex") return Format::Latex;
    if (s == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + s + "'");
}

inline std::string to_display(const SymExpr& e, Format f) {
    switch (f) {
        case Format::Plain:
            return to_plain(e);
        case Format::Latex:
            return to_latex(e);
        case Format::Json:
            return to_json(e).dump(2);
    }
    return {};
}

}  // namespace gpzeta
