#pragma once

// Zeros of a centered zeta on Re s = 1/2 by sign changes of the real
// restriction, and argument-principle counts in rectangles.

#include "gpzeta/normalize.hpp"
#include "gpzeta/xinum.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpzeta {

struct NotCenteredError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroEntry {
    double t = 0;
    double absf = 0;    // |f(1/2 + i t)| at the refined point
    double rel = 0;     // absf over the larger neighbouring grid value
    bool multiple = false;
};

struct ZeroList {
    std::vector<ZeroEntry> zeros;
    double t_min = 0, t_max = 0, step = 0, tol = 0;
    std::vector<double> excluded;  // grid points skipped for pole proximity

    int count_in(double lo, double hi) const {
        int n = 0;
        for (const auto& z : zeros)
            if (z.t > lo && z.t < hi) n += z.multiple ? 2 : 1;
        return n;
    }
};

struct Rect {
    double sigma_lo = -0.2, sigma_hi = 1.2, t_lo = 0, t_hi = 30;
};

struct BoxCertificate {
    Rect rect;
    int winding = 0;
    int pole_orders = 0;
    std::vector<Pole> poles;
    int online = 0;
    bool consistent = false;
    bool flagged = false;  // inconsistent, but tolerated by policy
    int evaluations = 0;
};

struct ZetaReport {
    std::string label;
    ZeroList zeros;
    std::vector<BoxCertificate> boxes;
    PoleReport poles;
    double fe_residual_max = 0;
    double imag_max = 0;  // largest |Im f| / (1 + |f|) on the scan grid

    bool consistent() const {
        for (const auto& b : boxes)
            if (!b.consistent && !b.flagged) return false;
        return true;
    }
    bool any_flagged() const {
        for (const auto& b : boxes)
            if (b.flagged) return true;
        return false;
    }
};

struct ScanConfig {
    double step = 0.05;
    double tol = 1e-10;
    double imag_bound = 1e-9;
    double multiple_ratio = 1e-8;  // dip depth that marks a touching double zero
    double box_height = 4;
    double first_box = 2;          // height of the box holding the real axis
    double bottom = -0.01;         // bottom edge, just below the real axis
    double margin = 1e-3;
    double segment = 0.1;          // initial contour segment length
    int max_depth = 30;
    int jobs = 1;
    int digits = 30;
    bool tolerate_central = false; // flag instead of fail an inconsistent first box
};

namespace detail {

template <class R>
double mag(const R& x) {
    using std::abs;
    return to_dbl(R(abs(x)));
}

}  // namespace detail

/// The zeta on the critical line, f(1/2 + i t), real for a centered zeta.
template <class R>
class CriticalLine {
public:
    CriticalLine(const SymExpr& zeta, const Evaluator<R>& ev, double imag_bound = 1e-9, std::string var = "s")
        : zeta_(zeta), ev_(ev), bound_(imag_bound), var_(std::move(var)) {}

    Cx<R> value(const Cx<R>& s) const { return ev_.at(zeta_, var_, s); }
    Cx<R> value(double sigma, double t) const { return value(Cx<R>{R(sigma), R(t)}); }

    /// Re f(1/2 + i t); throws when the imaginary part is not negligible.
    R operator()(double t) const {
        Cx<R> v = value(0.5, t);
        double im = detail::mag(v.im);
        double mag = to_dbl(cabs(v));
        worst_ = std::max(worst_, im / (1 + mag));
        if (im > bound_ * (1 + mag)) {
            std::ostringstream os;
            os << "not FE-centered: Im f(1/2+" << t << "i) = " << im;
            throw NotCenteredError(os.str());
        }
        return v.re;
    }

    double imag_max() const { return worst_; }
    const SymExpr& zeta() const { return zeta_; }
    const Evaluator<R>& evaluator() const { return ev_; }

private:
    SymExpr zeta_;
    const Evaluator<R>& ev_;
    double bound_;
    std::string var_;
    mutable double worst_ = 0;
};

template <class R>
CriticalLine<R> real_restriction(const SymExpr& zeta, const Evaluator<R>& ev, double imag_bound = 1e-9) {
    return CriticalLine<R>(zeta, ev, imag_bound);
}

namespace detail {

template <class R>
int sgn(const R& x) {
    return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

/// Bisection of a bracketed sign change to width tol.
template <class R, class F>
double bisect(F& f, double a, double b, R fa, double tol) {
    while (b - a > tol) {
        double m = 0.5 * (a + b);
        R fm = f(m);
        if (fm == 0) return m;
        if (sgn(fm) == sgn(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Golden-section minimisation of |f| on [a, b].
template <class R, class F>
std::pair<double, double> min_abs(F& f, double a, double b, double tol) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = mag(f(c)), fd = mag(f(d));
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = mag(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = mag(f(d));
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace detail

/// Sign-change scan of the real restriction on (t_lo, t_hi], refined by
/// bisection; touching double zeros are located by their |f| dips.
template <class R>
ZeroList scan_zeros(const CriticalLine<R>& f, double t_lo, double t_hi, const ScanConfig& cfg = {},
                    const std::vector<Rational>& pole_ts = {}) {
    ZeroList out;
    out.t_min = t_lo;
    out.t_max = t_hi;
    out.step = cfg.step;
    out.tol = cfg.tol;
    int n = static_cast<int>(std::ceil((t_hi - t_lo) / cfg.step - 1e-9));
    std::vector<double> ts;
    std::vector<R> vs;
    for (int i = 0; i <= n; ++i) {
        double t = std::min(t_hi, t_lo + i * cfg.step);
        bool near = false;
        for (const auto& p : pole_ts) near = near || std::abs(t - to_double(p)) < cfg.margin;
        if (near) {
            out.excluded.push_back(t);
            continue;
        }
        ts.push_back(t);
        vs.push_back(f(t));
    }
    auto mag = [](const R& x) { return detail::mag(x); };
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (vs[i] == 0) {
            out.zeros.push_back({ts[i], 0, 0, false});
            continue;
        }
        if (detail::sgn(vs[i]) != detail::sgn(vs[i + 1]) && vs[i + 1] != 0) {
            double t = detail::bisect<R>(f, ts[i], ts[i + 1], vs[i], cfg.tol);
            double a = mag(f(t));
            out.zeros.push_back({t, a, a / std::max(mag(vs[i]), mag(vs[i + 1])), false});
        }
    }
    // touching zeros: a grid-local minimum of |f| without a sign change
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        if (detail::sgn(vs[i - 1]) != detail::sgn(vs[i]) || detail::sgn(vs[i]) != detail::sgn(vs[i + 1])) continue;
        double m = mag(vs[i]);
        if (!(m < mag(vs[i - 1]) && m < mag(vs[i + 1]))) continue;
        auto [t, a] = detail::min_abs<R>(f, ts[i - 1], ts[i + 1], cfg.tol * 100);
        double ref = std::max(mag(vs[i - 1]), mag(vs[i + 1]));
        if (a <= cfg.multiple_ratio * ref) out.zeros.push_back({t, a, a / ref, true});
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
    return out;
}

namespace detail {

template <class R>
struct Tracker {
    const CriticalLine<R>& f;
    const ScanConfig& cfg;
    int evals = 0;

    Cx<R> at(double x, double y) {
        ++evals;
        return f.value(x, y);
    }

    /// Total change of arg f along the straight segment a -> b.
    double along(double ax, double ay, double bx, double by) {
        double len = std::hypot(bx - ax, by - ay);
        int pieces = std::max(1, static_cast<int>(std::ceil(len / cfg.segment)));
        double total = 0;
        double px = ax, py = ay;
        Cx<R> pv = at(px, py);
        for (int k = 1; k <= pieces; ++k) {
            double qx = ax + (bx - ax) * k / pieces, qy = ay + (by - ay) * k / pieces;
            Cx<R> qv = at(qx, qy);
            total += refine(px, py, pv, qx, qy, qv, 0);
            px = qx;
            py = qy;
            pv = qv;
        }
        return total;
    }

    /// Accepts a segment once both of its halves turn the phase by less than
    /// pi/2; otherwise subdivides.
    double refine(double ax, double ay, const Cx<R>& av, double bx, double by, const Cx<R>& bv, int depth) {
        double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
        Cx<R> mv = at(mx, my);
        double d1 = step_arg(av, mv), d2 = step_arg(mv, bv);
        if (std::abs(d1) < std::numbers::pi / 2 && std::abs(d2) < std::numbers::pi / 2) return d1 + d2;
        if (depth >= cfg.max_depth) {
            std::ostringstream os;
            os << "indeterminate contour near " << mx << (my < 0 ? "" : "+") << my << "i";
            throw ContourError(os.str());
        }
        return refine(ax, ay, av, mx, my, mv, depth + 1) + refine(mx, my, mv, bx, by, bv, depth + 1);
    }

    static double step_arg(const Cx<R>& a, const Cx<R>& b) {
        if (cabs(a) == 0 || cabs(b) == 0) throw ContourError("zero on the contour");
        Cx<R> q = b / a;
        return to_dbl(carg(q));
    }
};

}  // namespace detail

/// Argument-principle certificate for one rectangle. Zeros inside must equal
/// winding + enclosed pole orders; the on-line zeros come from `line`.
template <class R>
BoxCertificate count_zeros_box(const CriticalLine<R>& f, Rect rect, const PoleReport& poles, const ZeroList& line,
                               const ScanConfig& cfg = {}) {
    // keep the boundary away from poles and from on-line zeros
    for (const auto& p : poles.poles) {
        double x = to_double(p.at);
        if (std::abs(x - rect.sigma_lo) < cfg.margin) rect.sigma_lo -= 10 * cfg.margin;
        if (std::abs(x - rect.sigma_hi) < cfg.margin) rect.sigma_hi += 10 * cfg.margin;
    }
    for (double* edge : {&rect.t_lo, &rect.t_hi})
        for (const auto& z : line.zeros)
            if (std::abs(z.t - *edge) < cfg.margin) *edge += 10 * cfg.margin;
    BoxCertificate cert;
    cert.rect = rect;
    detail::Tracker<R> tr{f, cfg};
    double total = tr.along(rect.sigma_lo, rect.t_lo, rect.sigma_hi, rect.t_lo) +
                   tr.along(rect.sigma_hi, rect.t_lo, rect.sigma_hi, rect.t_hi) +
                   tr.along(rect.sigma_hi, rect.t_hi, rect.sigma_lo, rect.t_hi) +
                   tr.along(rect.sigma_lo, rect.t_hi, rect.sigma_lo, rect.t_lo);
    double w = total / (2 * std::numbers::pi);
    cert.winding = static_cast<int>(std::lround(w));
    if (std::abs(w - cert.winding) > 1e-6) throw ContourError("non-integral winding " + std::to_string(w));
    cert.evaluations = tr.evals;
    if (rect.t_lo < 0 && rect.t_hi > 0)
        for (const auto& p : poles.poles) {
            double x = to_double(p.at);
            if (x > rect.sigma_lo && x < rect.sigma_hi) {
                cert.poles.push_back(p);
                cert.pole_orders += p.order;
            }
        }
    cert.online = line.count_in(rect.t_lo, rect.t_hi);
    cert.consistent = cert.winding + cert.pole_orders == cert.online;
    return cert;
}

/// Tiles [-0.2, 1.2] x [bottom, t_max] with box certificates. Boxes run in
/// parallel when cfg.jobs > 1; each worker sets its own working precision.
template <class R>
ZetaReport rh_report(const SymExpr& zeta, const Evaluator<R>& ev, double t_max, const ScanConfig& cfg = {}) {
    ZetaReport rep;
    rep.label = zeta.label;
    rep.poles = pole_report(zeta);
    CriticalLine<R> f(zeta, ev, cfg.imag_bound);
    rep.fe_residual_max = fe_residual(zeta, Rational(1), ev, 50, 1);
    // single terms may be singular at s = 1/2 even where the sum is not
    rep.zeros = scan_zeros(f, cfg.margin, t_max, cfg);
    rep.imag_max = f.imag_max();
    std::vector<Rect> rects;
    double lo = cfg.bottom;
    double hi = cfg.first_box;
    while (lo < t_max) {
        rects.push_back({-0.2, 1.2, lo, std::min(hi, t_max)});
        lo = hi;
        hi = lo + cfg.box_height;
    }
    auto one = [&](const Rect& r) {
        PrecisionGuard g(cfg.digits);
        CriticalLine<R> local(zeta, ev, cfg.imag_bound);
        return count_zeros_box(local, r, rep.poles, rep.zeros, cfg);
    };
    if (cfg.jobs > 1) {
        std::vector<std::future<BoxCertificate>> fut;
        for (std::size_t i = 0; i < rects.size(); ++i) fut.push_back(std::async(std::launch::async, one, rects[i]));
        for (auto& x : fut) rep.boxes.push_back(x.get());
    } else {
        for (const auto& r : rects) rep.boxes.push_back(one(r));
    }
    if (cfg.tolerate_central && !rep.boxes.empty() && !rep.boxes.front().consistent)
        rep.boxes.front().flagged = true;
    return rep;
}

inline nlohmann::json to_json(const ZeroList& z) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : z.zeros) {
        nlohmann::json x{{"t", e.t}, {"absf", e.absf}, {"rel", e.rel}};
        if (e.multiple) x["multiple"] = true;
        j.push_back(x);
    }
    return j;
}

inline nlohmann::json to_json(const BoxCertificate& b) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : b.poles) poles.push_back({{"s", to_string(p.at)}, {"order", p.order}});
    return {{"rect", {b.rect.sigma_lo, b.rect.sigma_hi, b.rect.t_lo, b.rect.t_hi}},
            {"winding", b.winding},
            {"poles", poles},
            {"online", b.online},
            {"verdict", b.consistent ? "consistent" : (b.flagged ? "flagged" : "discrepancy")}};
}

inline nlohmann::json to_json(const ZetaReport& r) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : r.boxes) boxes.push_back(to_json(b));
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : r.poles.poles) poles.push_back({{"s", to_string(p.at)}, {"order", p.order}});
    return {{"label", r.label},
            {"zeros", to_json(r.zeros)},
            {"boxes", boxes},
            {"fe_residual_max", r.fe_residual_max},
            {"imag_max", r.imag_max},
            {"poles", poles},
            {"consistent", r.consistent()}};
}

inline std::string zeros_csv(const ZeroList& z) {
    std::ostringstream os;
    os.precision(17);
    os << "t,absf,multiple\n";
    for (const auto& e : z.zeros) os << e.t << ',' << e.absf << ',' << (e.multiple ? 1 : 0) << '\n';
    return os.str();
}

/// t, f(1/2 + i t) samples for external plotting.
template <class R>
std::string plot_csv(const CriticalLine<R>& f, double t_lo, double t_hi, double step) {
    std::ostringstream os;
    os.precision(17);
    os << "t,f\n";
    for (double t = t_lo; t <= t_hi + 1e-12; t += step) os << t << ',' << to_dbl(R(f(t))) << '\n';
    return os.str();
}

}  // namespace gpzeta
