#pragma once

// Laurent expansion of terms along a hyperplane and iterated residues of the
// period along the hyperplanes <λ-ρ,β∨> = 0.

#include "gpzeta/symexpr.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpzeta {

struct ExpansionDepthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LaurentLimits {
    int max_pole_order = 4;
    int max_laurent_index = 3;
};

struct Hyperplane {
    LinForm form;       // u = form; the hyperplane is form = 0
    int root = -1;      // index of the source simple root, -1 when not from a root
    std::string pivot;  // variable eliminated by the change of coordinates

    static Hyperplane from_form(const LinForm& f, int root = -1) {
        if (f.is_constant()) throw std::invalid_argument("hyperplane form must be non-constant");
        Hyperplane h;
        h.form = f;
        h.root = root;
        h.pivot = f.coeffs().begin()->first;
        return h;
    }

    /// pivot = (u - rest) / c_pivot
    LinForm pivot_value(const LinForm& u) const {
        Rational c = form.coeff(pivot);
        LinForm rest = form;
        rest.set(pivot, 0);
        return (u - rest) * (Rational(1) / c);
    }

    /// Restriction to the hyperplane: pivot = -rest / c_pivot.
    std::map<std::string, LinForm> restriction() const { return {{pivot, pivot_value(LinForm())}}; }
};

/// u^order * sum_k coeffs[k] u^k
struct LaurentSeries {
    int order = 0;
    std::vector<SymExpr> coeffs;

    int truncation() const { return order + static_cast<int>(coeffs.size()) - 1; }
    SymExpr at(int k) const {
        int i = k - order;
        if (i < 0 || i >= static_cast<int>(coeffs.size())) return SymExpr{};
        return coeffs[i];
    }
};

namespace detail {

inline const std::string kU = "__u";

inline SymExpr term_expr(Term t) { return SymExpr::from_term(std::move(t)); }

/// Truncated product of relative coefficient lists.
inline std::vector<SymExpr> series_mul(const std::vector<SymExpr>& a, const std::vector<SymExpr>& b, int k_max) {
    std::vector<SymExpr> out(k_max + 1);
    for (int i = 0; i <= k_max && i < static_cast<int>(a.size()); ++i) {
        if (a[i].empty()) continue;
        for (int j = 0; i + j <= k_max && j < static_cast<int>(b.size()); ++j) {
            if (b[j].empty()) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    for (auto& c : out) c = simplify(c);
    return out;
}

inline Rational binomial_general(int e, int j) {
    Rational out = 1;
    for (int i = 0; i < j; ++i) out = out * Rational(e - i) / Rational(i + 1);
    return out;
}

/// (c0 * (1 + g))^e truncated, where c0 is a single invertible term.
inline std::vector<SymExpr> series_pow(const Term& c0, const std::vector<SymExpr>& c, int e, int k_max) {
    Term inv;
    inv.scalar = Rational(1) / c0.scalar;
    for (const auto& [a, x] : c0.xi) inv.mul_xi(a, -x);
    if (!c0.num.is_one() || !c0.lin.empty() || !c0.expo.is_zero())
        throw std::logic_error("series_pow needs a pure leading coefficient");
    std::vector<SymExpr> g(k_max + 1);
    for (int k = 1; k <= k_max && k < static_cast<int>(c.size()); ++k) g[k] = simplify(c[k] * inv);
    Term lead;
    lead.scalar = rat_pow(c0.scalar, e);
    for (const auto& [a, x] : c0.xi) lead.mul_xi(a, x * e);
    std::vector<SymExpr> total(k_max + 1);
    total[0] = SymExpr::constant(1);
    std::vector<SymExpr> gp(k_max + 1);
    gp[0] = SymExpr::constant(1);
    for (int j = 1; j <= k_max; ++j) {
        gp = series_mul(gp, g, k_max);
        Rational b = binomial_general(e, j);
        if (b == 0) break;
        for (int k = 0; k <= k_max; ++k)
            if (!gp[k].empty()) total[k] += gp[k] * b;
    }
    for (auto& t : total) t = simplify(t * lead);
    return total;
}

struct FactorSeries {
    int order = 0;
    std::vector<SymExpr> c;  // relative coefficients
};

inline Term atom_term(const XiAtom& a, const Rational& scalar = 1) {
    Term t;
    t.scalar = scalar;
    t.mul_xi(a, 1);
    return t;
}

/// Value atom through the reflection xi^{(d)}(q) = (-1)^d xi^{(d)}(1-q).
inline Term value_term(const Rational& q, int deriv, const Rational& scalar) {
    auto [sign, atom] = canonical_value(q, deriv);
    if (sign == 0) return Term{}.zero_like();
    return atom_term(atom, scalar * sign);
}

/// Derivative atom of a form or a constant argument.
inline Term deriv_term(const LinForm& arg, int deriv, const Rational& scalar) {
    if (arg.is_constant()) return value_term(arg.constant(), deriv, scalar);
    return atom_term(XiAtom::of(arg, deriv), scalar);
}

/// xi^{(d)}(1 + c u): (-1)^d d! (cu)^{-d-1} + sum_{j>=d} a_j j!/(j-d)! (cu)^{j-d}
inline FactorSeries xi_pole_series(int d, const Rational& cu, int k_max, const LaurentLimits& lim) {
    FactorSeries s;
    s.order = -(d + 1);
    s.c.assign(k_max + 1, SymExpr{});
    Rational fact = 1;
    for (int i = 2; i <= d; ++i) fact *= i;
    s.c[0] = SymExpr::constant((d % 2 ? -fact : fact) * rat_pow(cu, -(d + 1)));
    for (int k = d + 1; k <= k_max; ++k) {
        int m = k - d - 1;  // power of (cu) in the regular part
        int j = d + m;      // Laurent index
        if (j > lim.max_laurent_index)
            throw ExpansionDepthError("expansion depth exceeded: Laurent constant a_" + std::to_string(j) +
                                      " required");
        Rational f = 1;
        for (int i = m + 1; i <= j; ++i) f *= i;  // j!/m!
        s.c[k] = term_expr(atom_term(XiAtom::laurent(j), f * rat_pow(cu, m)));
    }
    return s;
}

struct TermExpander {
    const Hyperplane& h;
    LaurentLimits lim;
    std::map<std::string, LinForm> to_u;  // pivot -> expression in u and remaining variables

    TermExpander(const Hyperplane& hp, LaurentLimits l) : h(hp), lim(l) {
        to_u[h.pivot] = h.pivot_value(LinForm::variable(kU));
    }

    /// Splits L(pivot) = L0 + L1 u.
    std::pair<LinForm, Rational> split(const LinForm& f) const {
        LinForm g = f.substitute(to_u);
        Rational c = g.coeff(kU);
        g.set(kU, 0);
        return {g, c};
    }

    int atom_order(const XiAtom& a, int e) const {
        if (!a.is_form()) return 0;
        auto [l0, l1] = split(a.arg);
        if (l1 == 0 || !l0.is_constant()) return 0;
        if (l0.constant() == 0 || l0.constant() == 1) return -(a.deriv + 1) * e;
        return 0;
    }

    int linear_order(const LinForm& f, int e) const {
        auto [l0, l1] = split(f);
        return l0.is_zero() ? e : 0;
    }

    /// Pole-order estimate of the term at u = 0 (exact up to numerator cancellation).
    int order(const Term& t) const {
        int m = 0;
        for (const auto& [f, e] : t.lin) m += linear_order(f, e);
        for (const auto& [a, e] : t.xi) m += atom_order(a, e);
        auto nc = t.num.substitute(to_u).coefficients_in(kU);
        int k = 0;
        while (k < static_cast<int>(nc.size()) && nc[k].is_zero()) ++k;
        return m + k;
    }

    FactorSeries linear_series(const LinForm& f, int e, int k_max) const {
        auto [l0, l1] = split(f);
        FactorSeries s;
        if (l0.is_zero()) {
            s.order = e;
            s.c = {SymExpr::constant(rat_pow(l1, e))};
            return s;
        }
        s.c.assign(k_max + 1, SymExpr{});
        for (int k = 0; k <= k_max; ++k) {
            Rational b = binomial_general(e, k);
            if (b == 0) break;
            Term t;
            t.scalar = b * rat_pow(l1, k);
            t.mul_linear(l0, e - k);
            s.c[k] = term_expr(t);
        }
        return s;
    }

    FactorSeries atom_series(const XiAtom& a, int e, int k_max) const {
        auto [l0, l1] = split(a.arg);
        const int d = a.deriv;
        FactorSeries base;
        Term c0;
        if (l0.is_constant() && (l0.constant() == 1 || l0.constant() == 0)) {
            // pole of xi^{(d)} at 1, or at 0 through xi^{(d)}(x) = (-1)^d xi^{(d)}(1-x)
            if (d + 1 > lim.max_pole_order)
                throw ExpansionDepthError("expansion depth exceeded: pole of order " + std::to_string(d + 1));
            bool at_zero = l0.constant() == 0;
            Rational cu = at_zero ? Rational(-l1) : l1;
            base = xi_pole_series(d, cu, k_max, lim);
            if (at_zero && d % 2)
                for (auto& c : base.c) c *= Rational(-1);
            c0 = base.c[0].terms.front();
            auto pw = series_pow(c0, base.c, e, k_max);
            return FactorSeries{base.order * e, pw};
        }
        // regular: sum_k xi^{(d+k)}(L0) (L1 u)^k / k!
        base.order = 0;
        base.c.assign(k_max + 1, SymExpr{});
        Rational kf = 1;
        for (int k = 0; k <= k_max; ++k) {
            if (k > 0) kf *= k;
            base.c[k] = term_expr(deriv_term(l0, d + k, rat_pow(l1, k) / kf));
        }
        if (base.c[0].empty()) {
            // odd derivative at 1/2 vanishes; only positive powers can be expanded
            if (e < 0) throw SingularLocusError("division by a vanishing derivative of xi at 1/2");
            int shift = 1;
            while (shift <= k_max && base.c[shift].empty()) ++shift;
            std::vector<SymExpr> unit(base.c.begin() + std::min(shift, k_max + 1), base.c.end());
            std::vector<SymExpr> acc{SymExpr::constant(1)};
            for (int i = 0; i < e; ++i) acc = series_mul(acc, unit, k_max);
            return FactorSeries{shift * e, acc};
        }
        c0 = base.c[0].terms.front();
        return FactorSeries{0, series_pow(c0, base.c, e, k_max)};
    }

    FactorSeries exp_series(const Poly& expo, int k_max) const {
        auto parts = expo.substitute(to_u).coefficients_in(kU);
        Poly e0 = parts[0];
        Poly e1 = parts.size() > 1 ? parts[1] : Poly();
        if (parts.size() > 2) throw std::logic_error("exponential factor is not affine in the pivot");
        FactorSeries s;
        s.c.assign(k_max + 1, SymExpr{});
        Rational kf = 1;
        Poly p(1);
        for (int k = 0; k <= k_max; ++k) {
            if (k > 0) {
                kf *= k;
                p *= e1;
            }
            if (p.is_zero()) break;
            Term t;
            t.num = p;
            t.scalar = Rational(1) / kf;
            t.expo = e0;
            s.c[k] = term_expr(t);
        }
        return s;
    }

    /// Full Laurent expansion of t up to (and including) u^{upto}.
    LaurentSeries expand(const Term& t, int upto) const {
        int m = 0;
        Term constant_part;
        constant_part.scalar = t.scalar;
        constant_part.tag = t.tag;
        struct Pending {
            enum { Lin, Atom, Num, Exp } kind;
            LinForm f;
            XiAtom a;
            int e;
        };
        std::vector<Pending> pending;
        for (const auto& [f, e] : t.lin) {
            auto [l0, l1] = split(f);
            if (l1 == 0) {
                constant_part.mul_linear(l0, e);
                continue;
            }
            m += l0.is_zero() ? e : 0;
            pending.push_back({Pending::Lin, f, XiAtom{}, e});
        }
        for (const auto& [a, e] : t.xi) {
            if (!a.is_form()) {
                constant_part.mul_xi(a, e);
                continue;
            }
            auto [l0, l1] = split(a.arg);
            if (l1 == 0) {
                constant_part.mul_xi(XiAtom::of(l0, a.deriv), e);
                continue;
            }
            m += atom_order(a, e);
            pending.push_back({Pending::Atom, LinForm(), a, e});
        }
        auto nc = t.num.substitute(to_u).coefficients_in(kU);
        int nk = 0;
        while (nk < static_cast<int>(nc.size()) && nc[nk].is_zero()) ++nk;
        if (nk == static_cast<int>(nc.size())) return LaurentSeries{0, {}};
        m += nk;
        if (m < -lim.max_pole_order)
            throw ExpansionDepthError("expansion depth exceeded: pole of order " + std::to_string(-m));
        LaurentSeries out;
        out.order = m;
        int k_max = upto - m;
        if (k_max < 0) return out;
        std::vector<SymExpr> acc{term_expr(constant_part)};
        if (constant_part.is_zero()) return out;
        for (const auto& p : pending) {
            FactorSeries fs = p.kind == Pending::Lin ? linear_series(p.f, p.e, k_max)
                                                      : atom_series(p.a, p.e, k_max);
            acc = series_mul(acc, fs.c, k_max);
        }
        {
            std::vector<SymExpr> ns(k_max + 1);
            for (int k = 0; k <= k_max && nk + k < static_cast<int>(nc.size()); ++k) {
                Term x;
                x.num = nc[nk + k];
                ns[k] = term_expr(x);
            }
            acc = series_mul(acc, ns, k_max);
        }
        if (!t.expo.is_zero()) acc = series_mul(acc, exp_series(t.expo, k_max).c, k_max);
        acc.resize(k_max + 1);
        for (auto& c : acc)
            for (auto& term : c.terms) term.tag = t.tag;
        out.coeffs = std::move(acc);
        return out;
    }
};

}  // namespace detail

/// Laurent expansion of one term in u = h.form, up to u^{upto}.
inline LaurentSeries laurent_term(const Term& t, const Hyperplane& h, int upto = -1,
                                  const LaurentLimits& lim = {}) {
    detail::TermExpander ex(h, lim);
    return ex.expand(t, upto);
}

/// Residue in the coordinate u = h.form; the result lives on the hyperplane
/// (the pivot variable is eliminated).
inline SymExpr residue(const SymExpr& e, const Hyperplane& h, const LaurentLimits& lim = {},
                       bool per_tag = false) {
    detail::TermExpander ex(h, lim);
    SymExpr out;
    out.label = e.label;
    for (const auto& t : e.terms) {
        if (ex.order(t) >= 0) continue;
        LaurentSeries s = ex.expand(t, -1);
        out += s.at(-1);
    }
    return simplify(out, per_tag);
}

/// One hyperplane per retained simple root, in simple-root order β_1, β_2, ...
/// Forms are expressed in the variables left after the preceding residues.
inline std::vector<Hyperplane> hyperplanes_for(const RootSystem& rs, const ParabolicDescriptor& p) {
    std::vector<Hyperplane> out;
    std::map<std::string, LinForm> acc;
    for (int b : p.retained) {
        const RVec& beta = rs.simple_roots[b];
        LinForm f = rs.pairing(beta) - dot(rs.rho, rs.coroot(beta));
        f = f.substitute(acc);
        Hyperplane h = Hyperplane::from_form(f, b);
        out.push_back(h);
        auto r = h.restriction();
        for (auto& [v, g] : acc) g = g.substitute(r);
        acc.insert(r.begin(), r.end());
    }
    return out;
}

/// Composite restriction map after all hyperplanes of the parabolic.
inline std::map<std::string, LinForm> restriction_map(const std::vector<Hyperplane>& hs) {
    std::map<std::string, LinForm> acc;
    for (const auto& h : hs) {
        auto r = h.restriction();
        for (auto& [v, g] : acc) g = g.substitute(r);
        acc.insert(r.begin(), r.end());
    }
    return acc;
}

/// Target leading coefficient of the surviving variable in the xi arguments.
/// Zero means "keep the natural scale".
inline int rescale_target(const RootSystem& rs, const ParabolicDescriptor& p) {
    const int r = rs.rank;
    switch (rs.family) {
        case Family::A: {
            const int n = r + 1;
            if (n == 2) return 2;
            if (p.removed == 0 || p.removed == r - 1) return n;
            if (n == 4) return 2;
            if (n == 5) return 5;
            return 0;
        }
        case Family::C:
            return r == 2 ? 2 : 0;
        case Family::G:
            return p.removed == 1 ? 3 : 2;
        default:
            return 0;
    }
}

struct IteratedResidue {
    SymExpr result;                 // in the variable s
    std::string surviving;          // the variable left before renaming
    Rational scale = 1;             // surviving = scale * s
    std::vector<Hyperplane> hyperplanes;
    std::vector<SymExpr> stages;    // after each residue (before renaming)
    bool auxiliary_atoms = false;   // Laurent or derivative atoms survived
};

/// Orientation and scale for the final variable; returns v = scale * s.
inline Rational choose_scale(const SymExpr& e, const std::string& v, const LinForm& ap_pairing, int target) {
    Rational sign = ap_pairing.coeff(v) < 0 ? Rational(-1) : Rational(1);
    if (target == 0) return sign;
    Rational amax = 0;
    for (const auto& t : e.terms)
        for (const auto& [a, x] : t.xi)
            if (a.is_form()) amax = std::max(amax, rat_abs(a.arg.coeff(v)));
    if (amax == 0) return sign;
    return sign * Rational(target) / amax;
}

/// Iterated residues along hyperplanes_for(rs, p); the surviving variable is
/// renamed to `s` after orientation and rescaling.
inline IteratedResidue iterated_residue(const SymExpr& period, const RootSystem& rs, const ParabolicDescriptor& p,
                                        const LaurentLimits& lim = {}, bool per_tag = false,
                                        const std::string& var = "s") {
    IteratedResidue out;
    out.hyperplanes = hyperplanes_for(rs, p);
    SymExpr cur = simplify(period, per_tag);
    for (const auto& h : out.hyperplanes) {
        cur = residue(cur, h, lim, per_tag);
        out.stages.push_back(cur);
    }
    if (cur.empty()) throw std::runtime_error("zero iterated residue");
    auto acc = restriction_map(out.hyperplanes);
    std::string surviving;
    for (const auto& v : rs.variables)
        if (!acc.count(v)) surviving = v;
    out.surviving = surviving;
    LinForm ap = rs.pairing(rs.simple_roots[p.removed]).substitute(acc);
    out.scale = choose_scale(cur, surviving, ap, rescale_target(rs, p));
    std::map<std::string, LinForm> rename{{surviving, LinForm::variable(var, out.scale)}};
    out.result = simplify(substitute(cur, rename), per_tag);
    out.result.label = rs.name() + "/" + p.name;
    out.auxiliary_atoms = out.result.has_auxiliary_atoms();
    return out;
}

}  // namespace gpzeta
