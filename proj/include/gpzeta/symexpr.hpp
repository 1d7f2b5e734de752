#pragma once

// Symbolic sums of terms  scalar * num / prod(L^e) * prod(xi-atoms^e) * exp(E).
// The period of a root system and its T-version are built here.

#include "gpzeta/poly.hpp"
#include "gpzeta/rootsys.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace gpzeta {

struct SingularLocusError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An opaque symbol standing for a value of the completed zeta function.
///   Form:    xi^{(deriv)}(L) with L non-constant
///   Value:   xi^{(deriv)}(q) for a rational constant q (deriv > 0 is a derivative value)
///   Laurent: a_index in xi(1+e) = 1/e + a_0 + a_1 e + ...
struct XiAtom {
    enum class Kind { Form, Value, Laurent };
    Kind kind = Kind::Value;
    LinForm arg;
    int deriv = 0;
    int index = 0;

    static XiAtom of(const LinForm& arg, int deriv = 0) {
        if (arg.is_constant()) return value(arg.constant(), deriv);
        XiAtom a;
        a.kind = Kind::Form;
        a.arg = arg;
        a.deriv = deriv;
        return a;
    }
    /// Constant arguments are stored as given; see canonical_value for the
    /// reflected representative used by the Laurent machinery.
    static XiAtom value(const Rational& q, int deriv = 0) {
        if (q == 0 || q == 1)
            throw SingularLocusError("xi evaluated at its pole s=" + to_string(q));
        XiAtom a;
        a.kind = Kind::Value;
        a.arg = LinForm(q);
        a.deriv = deriv;
        return a;
    }
    static XiAtom laurent(int index) {
        XiAtom a;
        a.kind = Kind::Laurent;
        a.index = index;
        return a;
    }

    bool is_form() const { return kind == Kind::Form; }
    bool is_value() const { return kind == Kind::Value; }
    bool is_laurent() const { return kind == Kind::Laurent; }
    /// Atoms that never appear in a finished closed form.
    bool is_auxiliary() const { return kind == Kind::Laurent || deriv > 0; }

    friend bool operator==(const XiAtom& a, const XiAtom& b) {
        return a.kind == b.kind && a.arg == b.arg && a.deriv == b.deriv && a.index == b.index;
    }
    friend bool operator!=(const XiAtom& a, const XiAtom& b) { return !(a == b); }
    friend bool operator<(const XiAtom& a, const XiAtom& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.arg != b.arg) return a.arg < b.arg;
        if (a.deriv != b.deriv) return a.deriv < b.deriv;
        return a.index < b.index;
    }

    std::string str() const {
        if (kind == Kind::Laurent) return "a_" + std::to_string(index);
        return "xi" + std::string(deriv, '\'') + "(" + arg.str() + ")";
    }
};

/// xi^{(d)}(q) = sign * atom with the atom's argument >= 1/2, using
/// xi^{(d)}(q) = (-1)^d xi^{(d)}(1-q). sign is 0 for odd derivatives at 1/2.
inline std::pair<int, XiAtom> canonical_value(const Rational& q, int deriv) {
    if (q >= Rational(1, 2)) {
        if (q == Rational(1, 2) && deriv % 2 == 1) return {0, XiAtom::value(q, deriv)};
        return {1, XiAtom::value(q, deriv)};
    }
    return {deriv % 2 ? -1 : 1, XiAtom::value(1 - q, deriv)};
}

struct Term {
    Rational scalar = 1;
    Poly num = Poly(1);
    std::map<LinForm, int> lin;  // primitive forms; negative exponents after canonicalize
    std::map<XiAtom, int> xi;
    Poly expo;                   // exponent of e^{...}; zero means no factor
    int tag = -1;                // originating Weyl element, -1 once merged

    bool is_zero() const { return scalar == 0; }

    void mul_linear(const LinForm& f, int e) {
        if (e == 0) return;
        if (f.is_constant()) {
            if (f.constant() == 0) {
                if (e < 0) throw SingularLocusError("substitution lands on singular locus");
                scalar = 0;
                return;
            }
            scalar *= rat_pow(f.constant(), e);
            return;
        }
        auto [m, prim] = normalize_primitive(f);
        scalar *= rat_pow(m, e);
        int& slot = lin[prim];
        slot += e;
        if (slot == 0) lin.erase(prim);
    }

    void mul_xi(const XiAtom& a, int e) {
        if (e == 0) return;
        int& slot = xi[a];
        slot += e;
        if (slot == 0) xi.erase(a);
    }

    /// Folds positive linear factors into the numerator, cancels linear
    /// factors dividing the numerator and makes the numerator monic.
    void canonicalize() {
        if (scalar == 0 || num.is_zero()) {
            *this = zero_like();
            return;
        }
        for (auto it = lin.begin(); it != lin.end();) {
            if (it->second > 0) {
                num *= Poly(it->first).pow(it->second);
                it = lin.erase(it);
            } else {
                ++it;
            }
        }
        if (!num.is_constant()) {
            for (auto it = lin.begin(); it != lin.end();) {
                Poly q;
                while (it->second < 0 && num.divide_by_linear(it->first, q)) {
                    num = q;
                    ++it->second;
                }
                if (it->second == 0)
                    it = lin.erase(it);
                else
                    ++it;
            }
        }
        for (auto it = xi.begin(); it != xi.end();) {
            if (it->second == 0)
                it = xi.erase(it);
            else
                ++it;
        }
        Rational lead = num.leading_coefficient();
        scalar *= lead;
        num *= Rational(1) / lead;
    }

    Term zero_like() const {
        Term z;
        z.scalar = 0;
        z.tag = tag;
        return z;
    }

    std::set<std::string> variables() const {
        std::set<std::string> out = num.variables();
        for (const auto& [f, e] : lin)
            for (const auto& v : f.variables()) out.insert(v);
        for (const auto& [a, e] : xi)
            for (const auto& v : a.arg.variables()) out.insert(v);
        for (const auto& v : expo.variables()) out.insert(v);
        return out;
    }

    bool has_auxiliary_atoms() const {
        for (const auto& [a, e] : xi)
            if (a.is_auxiliary()) return true;
        return false;
    }

    /// Same factors apart from the rational scalar.
    bool same_shape(const Term& o) const {
        return num == o.num && lin == o.lin && xi == o.xi && expo == o.expo;
    }

    friend bool operator==(const Term& a, const Term& b) {
        return a.scalar == b.scalar && a.same_shape(b);
    }

    friend Term operator*(const Term& a, const Term& b) {
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
        out.tag = a.tag == b.tag ? a.tag : (a.tag < 0 ? b.tag : (b.tag < 0 ? a.tag : -1));
        out.canonicalize();
        return out;
    }

    Term substitute(const std::map<std::string, LinForm>& assignment) const {
        Term out;
        out.scalar = scalar;
        out.tag = tag;
        out.num = num.substitute(assignment);
        for (const auto& [f, e] : lin) out.mul_linear(f.substitute(assignment), e);
        for (const auto& [a, e] : xi) {
            if (a.is_form()) {
                LinForm g = a.arg.substitute(assignment);
                if (g.is_constant() && (g.constant() == 0 || g.constant() == 1))
                    throw SingularLocusError("substitution lands on singular locus: " + a.str() +
                                             " becomes xi(" + g.str() + ")");
                out.mul_xi(XiAtom::of(g, a.deriv), e);
            } else {
                out.mul_xi(a, e);
            }
        }
        out.expo = expo.substitute(assignment);
        out.canonicalize();
        return out;
    }
};

/// Canonical ordering key; scalars compared last.
inline bool term_order(const Term& a, const Term& b) {
    if (a.xi != b.xi) return a.xi < b.xi;
    if (a.expo != b.expo) return a.expo < b.expo;
    if (a.lin != b.lin) return a.lin < b.lin;
    if (a.num != b.num) return a.num < b.num;
    if (a.scalar != b.scalar) return a.scalar < b.scalar;
    return a.tag < b.tag;
}

struct SymExpr {
    std::vector<Term> terms;
    std::string label;

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& t : terms)
            for (const auto& v : t.variables()) out.insert(v);
        return out;
    }

    bool has_auxiliary_atoms() const {
        return std::any_of(terms.begin(), terms.end(), [](const Term& t) { return t.has_auxiliary_atoms(); });
    }

    SymExpr& operator+=(const SymExpr& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    friend SymExpr operator+(SymExpr a, const SymExpr& b) { return a += b; }
    SymExpr& operator*=(const Rational& q) {
        if (q == 0) {
            terms.clear();
            return *this;
        }
        for (auto& t : terms) t.scalar *= q;
        return *this;
    }
    friend SymExpr operator*(SymExpr a, const Rational& q) { return a *= q; }
    friend SymExpr operator-(const SymExpr& a, const SymExpr& b) { return a + b * Rational(-1); }

    friend SymExpr operator*(const SymExpr& a, const Term& t) {
        SymExpr out;
        out.label = a.label;
        for (const auto& x : a.terms) {
            Term p = x * t;
            if (!p.is_zero()) out.terms.push_back(std::move(p));
        }
        return out;
    }
    friend SymExpr operator*(const SymExpr& a, const SymExpr& b) {
        SymExpr out;
        for (const auto& x : a.terms)
            for (const auto& y : b.terms) {
                Term p = x * y;
                if (!p.is_zero()) out.terms.push_back(std::move(p));
            }
        return out;
    }

    static SymExpr from_term(Term t) {
        SymExpr e;
        t.canonicalize();
        if (!t.is_zero()) e.terms.push_back(std::move(t));
        return e;
    }
    static SymExpr constant(const Rational& q) {
        Term t;
        t.scalar = q;
        return from_term(t);
    }
};

inline SymExpr substitute(const SymExpr& e, const std::map<std::string, LinForm>& assignment) {
    SymExpr out;
    out.label = e.label;
    for (const auto& t : e.terms) {
        Term s = t.substitute(assignment);
        if (!s.is_zero()) out.terms.push_back(std::move(s));
    }
    return out;
}

namespace detail {

/// Exact sum of terms sharing xi atoms and exponential factor.
inline Term merge_group(const std::vector<const Term*>& group) {
    std::map<LinForm, int> common;
    for (const Term* t : group)
        for (const auto& [f, e] : t->lin) {
            auto it = common.find(f);
            if (it == common.end() || e < it->second) common[f] = e;
        }
    Poly total;
    for (const Term* t : group) {
        Poly n = t->num * t->scalar;
        for (const auto& [f, e] : common) {
            auto it = t->lin.find(f);
            int own = it == t->lin.end() ? 0 : it->second;
            if (own > e) n *= Poly(f).pow(own - e);
        }
        total += n;
    }
    Term out;
    out.scalar = 1;
    out.num = total;
    out.lin = common;
    out.xi = group.front()->xi;
    out.expo = group.front()->expo;
    int tag = group.front()->tag;
    for (const Term* t : group)
        if (t->tag != tag) tag = -1;
    out.tag = tag;
    out.canonicalize();
    return out;
}

}  // namespace detail

/// Merges terms with identical xi atoms and exponential factor (and, when
/// per_tag is set, identical provenance tag), drops zeros, sorts canonically.
inline SymExpr simplify(const SymExpr& e, bool per_tag = false) {
    using Key = std::tuple<std::map<XiAtom, int>, Poly, int>;
    std::map<Key, std::vector<const Term*>> groups;
    std::vector<Term> canon;
    canon.reserve(e.terms.size());
    for (auto t : e.terms) {
        t.canonicalize();
        if (!t.is_zero()) canon.push_back(std::move(t));
    }
    for (const auto& t : canon) groups[Key{t.xi, t.expo, per_tag ? t.tag : 0}].push_back(&t);
    SymExpr out;
    out.label = e.label;
    for (const auto& [key, group] : groups) {
        Term m = detail::merge_group(group);
        if (!m.is_zero()) out.terms.push_back(std::move(m));
    }
    std::sort(out.terms.begin(), out.terms.end(), term_order);
    return out;
}

/// Structural comparison of canonical forms: returns q with e1 = q * e2.
inline std::optional<Rational> structural_ratio(const SymExpr& e1, const SymExpr& e2) {
    SymExpr a = simplify(e1), b = simplify(e2);
    if (a.size() != b.size() || a.empty()) return std::nullopt;
    std::optional<Rational> q;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a.terms[i].same_shape(b.terms[i])) return std::nullopt;
        Rational r = a.terms[i].scalar / b.terms[i].scalar;
        if (q && *q != r) return std::nullopt;
        q = r;
    }
    return q;
}

/// The rational scalar is the only difference between the expressions.
inline bool structurally_equal(const SymExpr& e1, const SymExpr& e2) {
    SymExpr a = simplify(e1), b = simplify(e2);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a.terms[i] == b.terms[i])) return false;
    return true;
}

/// Multiplies every term so that the first canonical term has scalar +1.
inline SymExpr normalize_scalar(const SymExpr& e, Rational* factor = nullptr) {
    SymExpr s = simplify(e);
    if (s.empty()) return s;
    Rational f = Rational(1) / s.terms.front().scalar;
    if (factor) *factor = f;
    return s * f;
}

inline std::vector<LinForm> weyl_apply(const RootSystem& rs, const WeylElement& w,
                                       const std::vector<LinForm>& vec) {
    std::vector<LinForm> out(rs.dim);
    for (int i = 0; i < rs.dim; ++i)
        for (int j = 0; j < rs.dim; ++j)
            if (w.action[i][j] != 0) out[i] += vec[j] * w.action[i][j];
    return out;
}

/// prod over inversions of xi(<λ,α∨>) / xi(<λ,α∨>+1).
inline Term intertwining_factor(const RootSystem& rs, const WeylElement& w) {
    Term t;
    for (const auto& a : inversion_set(rs, w)) {
        LinForm p = rs.pairing(a);
        t.mul_xi(XiAtom::of(p), 1);
        t.mul_xi(XiAtom::of(p + Rational(1)), -1);
    }
    return t;
}

/// How w enters the exponent <wλ-ρ,T> of the T-version period. Direct uses the
/// same action as the intertwining factor; LowerIndex permutes the coordinates
/// of λ by w, which is the action of w^{-1}.
enum class ExponentAction { Direct, LowerIndex };

namespace detail {

inline std::size_t weyl_inverse_index(const std::vector<WeylElement>& weyl, std::size_t k) {
    const auto& m = weyl[k].action;
    for (std::size_t j = 0; j < weyl.size(); ++j) {
        const auto& n = weyl[j].action;
        bool ok = true;
        for (std::size_t r = 0; r < m.size() && ok; ++r)
            for (std::size_t c = 0; c < m.size() && ok; ++c) {
                Rational v = 0;
                for (std::size_t i = 0; i < m.size(); ++i) v += n[r][i] * m[i][c];
                ok = v == (r == c ? Rational(1) : Rational(0));
            }
        if (ok) return j;
    }
    throw std::logic_error("Weyl element without inverse");
}

inline SymExpr build_period_impl(const RootSystem& rs, bool with_t, ExponentAction act = ExponentAction::Direct) {
    auto weyl = weyl_group(rs);
    std::vector<LinForm> tvec;
    if (with_t) tvec = rs.symbolic_vector("t");
    SymExpr out;
    out.label = rs.name() + (with_t ? " period T" : " period");
    for (std::size_t k = 0; k < weyl.size(); ++k) {
        const auto& w = weyl[k];
        Term t = intertwining_factor(rs, w);
        auto wl = weyl_apply(rs, w, rs.lambda);
        for (const auto& a : rs.simple_roots) {
            LinForm f = RootSystem::pairing_with(wl, rs.coroot(a)) - dot(rs.rho, rs.coroot(a));
            t.mul_linear(f, -1);
        }
        if (with_t) {
            auto el = act == ExponentAction::Direct ? wl
                                                     : weyl_apply(rs, weyl[weyl_inverse_index(weyl, k)], rs.lambda);
            Poly expo;
            for (int i = 0; i < rs.dim; ++i) {
                LinForm c = el[i] - rs.rho[i];
                expo += Poly(c) * Poly(tvec[i]);
            }
            t.expo = expo;
        }
        t.tag = static_cast<int>(k);
        t.canonicalize();
        out.terms.push_back(t);
    }
    return out;
}

}  // namespace detail

/// Weyl sum of 1/prod<wλ-ρ,α∨> times the intertwining factor; one term per w.
inline SymExpr build_period(const RootSystem& rs) { return detail::build_period_impl(rs, false); }

/// As build_period with e^{<wλ-ρ,T>} attached; T has coordinates t1..tr in the λ convention.
inline SymExpr build_period_T(const RootSystem& rs, ExponentAction act = ExponentAction::Direct) {
    return detail::build_period_impl(rs, true, act);
}

}  // namespace gpzeta
