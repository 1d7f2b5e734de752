#pragma once

// Independent numeric residues: trapezoidal quadrature of (1/2πi)∮ f du on a
// circle, nested once per hyperplane, with a sample-doubling error estimate.

#include "gpzeta/residue.hpp"
#include "gpzeta/xinum.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpzeta {

using Cd = Cx<double>;

struct OracleError : std::runtime_error {
    double coarse_re, coarse_im, fine_re, fine_im;
    OracleError(const std::string& what, Cd coarse, Cd fine)
        : std::runtime_error(what), coarse_re(coarse.re), coarse_im(coarse.im), fine_re(fine.re), fine_im(fine.im) {}
};

struct OracleReport {
    Cd value;
    double error_estimate = 0;
    int samples = 0;
    double radius = 0;
    std::map<std::string, double> anchor;  // remaining-variable values
};

namespace detail {

/// (1/N) sum f(c + r w^k) r w^k, the trapezoidal rule for (1/2πi)∮ f.
template <class F>
Cd trapezoid_circle(F&& f, Cd center, double r, int n) {
    Cd acc(0.0);
    for (int k = 0; k < n; ++k) {
        double th = 2 * std::numbers::pi * (k + 0.5) / n;
        Cd du{r * std::cos(th), r * std::sin(th)};
        acc += f(center + du) * du;
    }
    return acc / static_cast<double>(n);
}

}  // namespace detail

/// Residue of a one-variable function at `center`.
template <class F>
OracleReport contour_residue(F&& f, Cd center, double radius, int samples, double max_error = 1e-6) {
    Cd coarse = detail::trapezoid_circle(f, center, radius, samples);
    Cd fine = detail::trapezoid_circle(f, center, radius, 2 * samples);
    OracleReport rep;
    rep.value = fine;
    rep.error_estimate = cabs(fine - coarse);
    rep.samples = 2 * samples;
    rep.radius = radius;
    if (!(rep.error_estimate <= max_error))
        throw OracleError("contour quadrature did not converge", coarse, fine);
    return rep;
}

/// Nested residues Res_{h_k} ... Res_{h_1} of expr, taken numerically with the
/// variables left after all restrictions fixed at `anchor`.
class ResidueOracle {
public:
    ResidueOracle(const Evaluator<double>& ev, std::vector<Hyperplane> hs, double radius = 0.05, int samples = 48)
        : ev_(ev), hs_(std::move(hs)), radius_(radius), samples_(samples) {}

    OracleReport run(const SymExpr& expr, const std::map<std::string, double>& anchor,
                     double max_error = 1e-6) const {
        Point p;
        for (const auto& [v, x] : anchor) p[v] = Cd(x);
        Cd coarse = level(expr, static_cast<int>(hs_.size()), p, samples_);
        Cd fine = level(expr, static_cast<int>(hs_.size()), p, 2 * samples_);
        OracleReport rep;
        rep.value = fine;
        rep.error_estimate = cabs(fine - coarse);
        rep.samples = 2 * samples_;
        rep.radius = radius_;
        rep.anchor = anchor;
        if (!(rep.error_estimate <= max_error))
            throw OracleError("nested contour quadrature did not converge", coarse, fine);
        return rep;
    }

private:
    using Point = Evaluator<double>::Point;

    // Inner contours shrink by a factor 3 per level so that loci through the
    // anchor, which move with the outer variable, stay outside them.
    Cd level(const SymExpr& e, int k, Point p, int n) const {
        if (k == 0) return ev_(e, p);
        double r = radius_ * std::pow(1.0 / 3.0, static_cast<double>(hs_.size()) - k);
        const Hyperplane& h = hs_[k - 1];
        Cd base = value(h.pivot_value(LinForm()), p);
        Cd slope(to_double(Rational(1) / h.form.coeff(h.pivot)));
        return detail::trapezoid_circle(
            [&](Cd u) {
                Point q = p;
                q[h.pivot] = base + slope * u;
                return level(e, k - 1, q, n);
            },
            Cd(0.0), r, n);
    }

    static Cd value(const LinForm& f, const Point& p) {
        Cd out(to_double(f.constant()));
        for (const auto& [v, c] : f.coeffs()) out += p.at(v) * to_double(c);
        return out;
    }

    const Evaluator<double>& ev_;
    std::vector<Hyperplane> hs_;
    double radius_;
    int samples_;
};

/// Distance in u = h.form from the anchor (on h) to the nearest other singular
/// locus of expr: zeros of denominator linear factors and the points where a
/// numerator xi argument equals 0 or 1. Loci through the anchor itself are the
/// ones the enclosing contours wind around and are skipped.
inline double singular_distance(const SymExpr& expr, const Hyperplane& h,
                                const std::map<std::string, Rational>& anchor, bool skip_through = true) {
    std::map<std::string, LinForm> to_u{{h.pivot, h.pivot_value(LinForm::variable(detail::kU))}};
    std::map<std::string, LinForm> at;
    for (const auto& [v, x] : anchor)
        if (v != h.pivot) at[v] = LinForm(x);
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const LinForm& g) {
        LinForm r = g.substitute(to_u);
        LinForm rest = r;
        rest.set(detail::kU, 0);
        if (rest.is_constant() && rest.constant() == 0) return;  // the hyperplane itself
        r = r.substitute(at);
        Rational slope = r.coeff(detail::kU);
        Rational v0 = r.constant();
        if (v0 == 0) {
            if (!skip_through) best = 0;
            return;
        }
        if (slope == 0) {
            // constant along the circle; only the anchor itself can be near it
            best = std::min(best, std::abs(to_double(v0)) < 0.1 ? std::abs(to_double(v0)) : best);
            return;
        }
        best = std::min(best, std::abs(to_double(v0 / slope)));
    };
    for (const auto& t : expr.terms) {
        for (const auto& [f, e] : t.lin)
            if (e < 0) consider(f);
        for (const auto& [a, e] : t.xi)
            if (a.is_form() && e > 0) {
                consider(a.arg);
                consider(a.arg - Rational(1));
            }
    }
    return best;
}

/// Smallest |value| of a denominator form, or of a numerator xi argument minus
/// 0 or 1, at a point.
inline double locus_margin(const SymExpr& expr, const std::map<std::string, Rational>& at) {
    double best = std::numeric_limits<double>::infinity();
    auto val = [&](const LinForm& f) {
        Rational out = f.constant();
        for (const auto& [v, c] : f.coeffs()) out += c * at.at(v);
        return std::abs(to_double(out));
    };
    for (const auto& t : expr.terms) {
        for (const auto& [f, e] : t.lin)
            if (e < 0) best = std::min(best, val(f));
        for (const auto& [a, e] : t.xi)
            if (a.is_form() && e > 0) best = std::min({best, val(a.arg), val(a.arg - Rational(1))});
    }
    return best;
}

/// Seeded rational anchors (denominator <= 97) for the surviving variables,
/// kept only when every stage is at least `min_dist` away from other singular
/// loci. stages[k] is the expression before the k-th residue and
/// stages[hs.size()] the symbolic result.
inline std::vector<std::map<std::string, Rational>> oracle_anchors(const std::vector<SymExpr>& stages,
                                                                   const std::vector<Hyperplane>& hs,
                                                                   const std::vector<std::string>& free_vars,
                                                                   int count, std::uint64_t seed,
                                                                   double min_dist = 0.1, double span = 2.5) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> den(1, 97);
    std::vector<std::map<std::string, Rational>> out;
    for (int tries = 0; static_cast<int>(out.size()) < count && tries < 200 * count; ++tries) {
        std::map<std::string, Rational> q;
        for (const auto& v : free_vars) {
            int d = den(rng);
            int lim = static_cast<int>(span * d);
            std::uniform_int_distribution<int> num(-lim, lim);
            q[v] = Rational(num(rng), d);
        }
        // pivot values, from the last hyperplane back to the first
        std::map<std::string, Rational> full = q;
        for (int k = static_cast<int>(hs.size()) - 1; k >= 0; --k) {
            LinForm pv = hs[k].pivot_value(LinForm());
            Rational val = pv.constant();
            for (const auto& [v, c] : pv.coeffs()) val += c * full.at(v);
            full[hs[k].pivot] = val;
        }
        bool ok = true;
        for (std::size_t k = 0; k < hs.size() && ok; ++k)
            ok = singular_distance(stages[k], hs[k], full, k + 1 < hs.size()) >= min_dist;
        if (ok && stages.size() > hs.size()) ok = locus_margin(stages[hs.size()], q) >= min_dist;
        if (ok) out.push_back(q);
    }
    return out;
}

inline std::map<std::string, double> to_double_map(const std::map<std::string, Rational>& m) {
    std::map<std::string, double> out;
    for (const auto& [v, x] : m) out[v] = to_double(x);
    return out;
}

inline nlohmann::json to_json(const OracleReport& r) {
    nlohmann::json j;
    j["contour_value"] = {r.value.re, r.value.im};
    j["error_estimate"] = r.error_estimate;
    j["samples"] = r.samples;
    j["radius"] = r.radius;
    j["anchor"] = r.anchor;
    return j;
}

}  // namespace gpzeta
