#pragma once

// ξ-clearing, functional-equation constant, centering and exact pole data of
// a single-variable zeta.

#include "gpzeta/residue.hpp"
#include "gpzeta/xinum.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpzeta {

struct NormalizationError : std::logic_error {
    using std::logic_error::logic_error;
};

struct FeCandidate {
    Rational c;
    double residual = 0;
};

struct NormalizationRecord {
    std::string var = "s";
    std::vector<std::pair<Rational, Rational>> I_factors;  // xi(a s + b), with multiplicity
    std::vector<Rational> J_factors;                       // xi(c), with multiplicity
    std::optional<Rational> c;                             // unset: unverified
    double fe_residual = 0;
    std::vector<FeCandidate> candidates;
    Rational scale = 1;   // variable rescaling of the residue step
    Rational shift = 0;   // centered(s) = xi_o(s + shift)
    Rational scalar = 1;  // centered = scalar * xi_o(s + shift)

    Term clearing_term() const {
        Term t;
        for (const auto& [a, b] : I_factors) t.mul_xi(XiAtom::of(LinForm::variable(var, a) + LinForm(b)), 1);
        for (const auto& q : J_factors) t.mul_xi(XiAtom::value(q), 1);
        return t;
    }
};

/// I and J multisets: for each denominator atom, the largest multiplicity
/// occurring in a single term.
inline NormalizationRecord clearing_factors(const SymExpr& expr, const std::string& var = "s") {
    NormalizationRecord rec;
    rec.var = var;
    std::map<XiAtom, int> need;
    for (const auto& t : simplify(expr).terms)
        for (const auto& [a, e] : t.xi) {
            if (e >= 0) continue;
            if (a.is_auxiliary()) throw NormalizationError("auxiliary atom " + a.str() + " in a denominator");
            if (a.is_form()) {
                for (const auto& v : a.arg.variables())
                    if (v != var) throw NormalizationError("xi argument " + a.arg.str() + " is not in " + var);
            }
            need[a] = std::max(need[a], -e);
        }
    for (const auto& [a, m] : need)
        for (int i = 0; i < m; ++i) {
            if (a.is_form())
                rec.I_factors.emplace_back(a.arg.coeff(var), a.arg.constant());
            else
                rec.J_factors.push_back(a.arg.constant());
        }
    return rec;
}

/// Rewrites xi(-a s + b) as xi(a s + 1 - b) for a > 0, using xi(u) = xi(1 - u);
/// a k-th derivative picks up (-1)^k.
inline SymExpr reflect_xi_arguments(const SymExpr& expr, const std::string& var = "s") {
    SymExpr out;
    out.label = expr.label;
    for (const auto& t : expr.terms) {
        Term u = t;
        u.xi.clear();
        for (const auto& [a, e] : t.xi) {
            if (a.is_form() && a.arg.coeff(var) < 0) {
                u.mul_xi(XiAtom::of(LinForm(Rational(1)) - a.arg, a.deriv), e);
                if ((a.deriv * e) % 2 != 0) u.scalar = -u.scalar;
            } else {
                u.mul_xi(a, e);
            }
        }
        out.terms.push_back(u);
    }
    return simplify(out);
}

/// [prod xi(a_i s + b_i) prod xi(c_j)] * expr, simplified.
inline SymExpr normalize_o(const SymExpr& expr, const NormalizationRecord& rec) {
    SymExpr out = simplify(expr * rec.clearing_term());
    for (const auto& t : out.terms)
        for (const auto& [a, e] : t.xi)
            if (e < 0) throw NormalizationError("xi denominator " + a.str() + " survived the clearing product");
    out.label = expr.label;
    return out;
}

inline SymExpr normalize_o(const SymExpr& expr, const std::string& var = "s") {
    return normalize_o(expr, clearing_factors(expr, var));
}

/// Candidates c with f(c - s) = f(s), from pairs of xi arguments and of
/// linear factors.
inline std::vector<Rational> fe_candidates(const SymExpr& expr, const std::string& var = "s") {
    std::vector<std::pair<Rational, Rational>> args, lins;
    for (const auto& t : expr.terms) {
        for (const auto& [a, e] : t.xi)
            if (a.is_form()) args.emplace_back(a.arg.coeff(var), a.arg.constant());
        for (const auto& [f, e] : t.lin) lins.emplace_back(f.coeff(var), f.constant());
    }
    std::set<Rational> out;
    for (const auto& [a, b] : args)
        for (const auto& [a2, b2] : args) {
            // xi(a(c-s)+b) = xi(1 - (a s + 1 - a c - b)) matches xi(a s + b2)
            if (a2 == a) out.insert((1 - b - b2) / a);
            // direct match with xi(-a s + b2)
            if (a2 == -a) out.insert((b2 - b) / a);
        }
    for (const auto& [a, b] : lins)
        for (const auto& [a2, b2] : lins)
            if (a2 == a) out.insert(-(b + b2) / a);
    return {out.begin(), out.end()};
}

namespace detail {

/// Seeded sample points s = center + u, |Re u| <= 3, 0.4 <= |Im u| <= 4.
inline std::vector<std::pair<double, double>> sample_points(int n, std::uint64_t seed, double center) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.4, 4.0), sign(0.0, 1.0);
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < n; ++i) {
        double x = center + re(rng);
        double y = im(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0);
        out.emplace_back(x, y);
    }
    return out;
}

}  // namespace detail

/// Max over sample points of |f(c-s) - f(s)| / max(|f(s)|, |f(c-s)|).
template <class R>
double fe_residual(const SymExpr& expr, const Rational& c, const Evaluator<R>& ev, int points,
                   std::uint64_t seed, const std::string& var = "s") {
    double worst = 0;
    R cr = real_from_rational<R>(c);
    for (auto [x, y] : detail::sample_points(points, seed, to_double(c) / 2)) {
        Cx<R> s{R(x), R(y)};
        Cx<R> m = Cx<R>(cr) - s;
        Cx<R> a = ev.at(expr, var, s);
        Cx<R> b = ev.at(expr, var, m);
        R den = std::max(cabs(a), cabs(b));
        if (den == 0) continue;
        worst = std::max(worst, to_dbl(R(cabs(a - b) / den)));
    }
    return worst;
}

/// Tests every candidate on 50 seeded points; records the unique passing one.
template <class R>
NormalizationRecord& find_fe_constant(NormalizationRecord& rec, const SymExpr& xi_o, const Evaluator<R>& ev,
                                      std::uint64_t seed = 1, double tol = 1e-9, int points = 50) {
    rec.candidates.clear();
    rec.c.reset();
    std::vector<Rational> passing;
    for (const auto& c : fe_candidates(xi_o, rec.var)) {
        double r = fe_residual(xi_o, c, ev, points, seed, rec.var);
        rec.candidates.push_back({c, r});
        if (r < tol) passing.push_back(c);
    }
    if (passing.size() == 1) {
        rec.c = passing.front();
        for (const auto& k : rec.candidates)
            if (k.c == *rec.c) rec.fe_residual = k.residual;
    }
    return rec;
}

/// s -> s + (c-1)/2.
inline SymExpr center(const SymExpr& expr, const Rational& c, const std::string& var = "s") {
    Rational shift = (c - 1) / 2;
    if (shift == 0) return expr;
    SymExpr out = simplify(substitute(expr, {{var, LinForm::variable(var) + LinForm(shift)}}));
    out.label = expr.label;
    return out;
}

struct Pole {
    Rational at;
    int order = 0;
};

struct PoleReport {
    std::vector<Pole> poles;
    std::vector<Rational> candidates;
    std::vector<Rational> cancelled;  // candidates whose Laurent principal part vanishes
    Rational scan_lo, scan_hi;        // every pole lies in [scan_lo, scan_hi]

    std::set<Rational> locations() const {
        std::set<Rational> out;
        for (const auto& p : poles) out.insert(p.at);
        return out;
    }
    int order_at(const Rational& q) const {
        for (const auto& p : poles)
            if (p.at == q) return p.order;
        return 0;
    }
};

/// Candidate singularities of a single-variable expression.
inline std::vector<Rational> pole_candidates(const SymExpr& expr, const std::string& var = "s") {
    std::set<Rational> out;
    for (const auto& t : expr.terms) {
        for (const auto& [f, e] : t.lin)
            if (e < 0) out.insert(-f.constant() / f.coeff(var));
        for (const auto& [a, e] : t.xi) {
            if (!a.is_form() || e <= 0) continue;
            Rational k = a.arg.coeff(var), b = a.arg.constant();
            out.insert(-b / k);
            out.insert((1 - b) / k);
        }
    }
    return {out.begin(), out.end()};
}

/// Exact order of the pole of expr at q (0 when regular).
inline int pole_order_at(const SymExpr& expr, const Rational& q, const std::string& var = "s",
                         const LaurentLimits& lim = {}) {
    Hyperplane h = Hyperplane::from_form(LinForm::variable(var) - LinForm(q));
    detail::TermExpander ex(h, lim);
    int lowest = 0;
    for (const auto& t : expr.terms) lowest = std::min(lowest, ex.order(t));
    if (lowest >= 0) return 0;
    std::vector<LaurentSeries> series;
    for (const auto& t : expr.terms) series.push_back(ex.expand(t, -1));
    for (int k = lowest; k < 0; ++k) {
        SymExpr c;
        for (const auto& s : series) c += s.at(k);
        if (!simplify(c).empty()) return -k;
    }
    return 0;
}

inline PoleReport pole_report(const SymExpr& expr, const std::string& var = "s", const LaurentLimits& lim = {}) {
    PoleReport rep;
    rep.candidates = pole_candidates(expr, var);
    for (const auto& q : rep.candidates) {
        int m = pole_order_at(expr, q, var, lim);
        if (m > 0)
            rep.poles.push_back({q, m});
        else
            rep.cancelled.push_back(q);
    }
    if (!rep.candidates.empty()) {
        rep.scan_lo = rep.candidates.front();
        rep.scan_hi = rep.candidates.back();
    }
    return rep;
}

inline nlohmann::json to_json(const NormalizationRecord& r) {
    nlohmann::json j;
    j["variable"] = r.var;
    j["I_factors"] = nlohmann::json::array();
    for (const auto& [a, b] : r.I_factors) j["I_factors"].push_back({{"a", to_string(a)}, {"b", to_string(b)}});
    j["J_factors"] = nlohmann::json::array();
    for (const auto& q : r.J_factors) j["J_factors"].push_back(to_string(q));
    j["c"] = r.c ? nlohmann::json(to_string(*r.c)) : nlohmann::json("unverified");
    j["fe_residual"] = r.fe_residual;
    j["candidates"] = nlohmann::json::array();
    for (const auto& k : r.candidates) j["candidates"].push_back({{"c", to_string(k.c)}, {"residual", k.residual}});
    j["scale"] = to_string(r.scale);
    j["shift"] = to_string(r.shift);
    j["scalar"] = to_string(r.scalar);
    return j;
}

inline nlohmann::json to_json(const PoleReport& r) {
    nlohmann::json j;
    j["poles"] = nlohmann::json::array();
    for (const auto& p : r.poles) j["poles"].push_back({{"s", to_string(p.at)}, {"order", p.order}});
    j["candidates"] = nlohmann::json::array();
    for (const auto& q : r.candidates) j["candidates"].push_back(to_string(q));
    j["cancelled"] = nlohmann::json::array();
    for (const auto& q : r.cancelled) j["cancelled"].push_back(to_string(q));
    j["scan"] = {to_string(r.scan_lo), to_string(r.scan_hi)};
    return j;
}

}  // namespace gpzeta
