#pragma once

// Period -> iterated residue -> normalization for a named (group, parabolic),
// comparison against the golden corpus, and the SL(3) version with T.

#include "gpzeta/normalize.hpp"
#include "gpzeta/serialize.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef GPZETA_GOLDEN_DIR
#define GPZETA_GOLDEN_DIR "data/golden"
#endif

namespace gpzeta {

struct GoldenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GoldenFormula {
    std::string id;
    std::string group;
    std::string parabolic;
    std::string frame;    // centered | xi_o | t_rho | t_general
    std::string reading;  // verbatim | corrected
    std::string differs;  // how a corrected or reinterpreted reading departs from the printed one
    int displayed_terms = 0;
    std::string text;
    SymExpr expr;
};

inline std::filesystem::path default_golden_dir() {
    if (const char* env = std::getenv("GPZETA_GOLDEN_DIR")) return env;
    return GPZETA_GOLDEN_DIR;
}

/// Loads every *.json file of the directory; the plain text must parse to the
/// stored expression.
inline std::vector<GoldenFormula> golden_corpus(const std::filesystem::path& dir = default_golden_dir()) {
    if (!std::filesystem::is_directory(dir)) throw GoldenError("golden directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<GoldenFormula> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw GoldenError(f.string() + ": " + e.what());
        }
        GoldenFormula g;
        g.id = j.at("id").get<std::string>();
        g.group = j.at("group").get<std::string>();
        g.parabolic = j.at("parabolic").get<std::string>();
        g.frame = j.at("frame").get<std::string>();
        g.reading = j.at("reading").get<std::string>();
        g.differs = j.value("differs", "");
        g.displayed_terms = j.at("displayed_terms").get<int>();
        g.text = j.at("text").get<std::string>();
        g.expr = symexpr_from_json(j.at("expr"));
        SymExpr parsed;
        try {
            parsed = parse_expr(g.text);
        } catch (const std::exception& e) {
            throw GoldenError(g.id + ": text does not parse: " + e.what());
        }
        if (!structurally_equal(parsed, g.expr)) throw GoldenError(g.id + ": text and stored expression differ");
        out.push_back(std::move(g));
    }
    return out;
}

inline std::vector<const GoldenFormula*> find_golden(const std::vector<GoldenFormula>& corpus, const std::string& group,
                                                     const std::string& parabolic, const std::set<std::string>& frames) {
    std::vector<const GoldenFormula*> out;
    for (const auto& g : corpus)
        if (g.group == group && g.parabolic == parabolic && frames.count(g.frame)) out.push_back(&g);
    return out;
}

/// Continued-fraction approximation with denominator at most max_den.
inline std::optional<Rational> rational_reconstruct(double x, long max_den = 1000000, double tol = 1e-9) {
    if (!std::isfinite(x)) return std::nullopt;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (std::abs(a) > 1e12) break;
        long ai = static_cast<long>(a);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x))) return Rational(p1, q1);
        double frac = r - a;
        if (frac == 0) break;
        r = 1 / frac;
    }
    return std::nullopt;
}

enum class MatchKind { Scalar, Numeric, Mismatch };

inline std::string to_string(MatchKind k) {
    switch (k) {
        case MatchKind::Scalar: return "scalar found";
        case MatchKind::Numeric: return "weak match";
        case MatchKind::Mismatch: return "mismatch";
    }
    return "";
}

struct Comparison {
    std::string golden_id;
    std::string reading;
    MatchKind kind = MatchKind::Mismatch;
    std::optional<Rational> scalar;  // ours = scalar * golden
    double ratio = 0;                // numeric ratio at the first sample
    double spread = 0;               // max relative deviation of the sampled ratios
    int points = 0;
    std::string note;

    bool matched() const { return kind != MatchKind::Mismatch; }
};

namespace detail {

/// Seeded point: s complex off the real axis, other variables real in [-1, 1].
inline std::map<std::string, Cx<Mp>> random_point(const std::set<std::string>& vars, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-2.5, 3.5), im(0.4, 4.0), unit(-1.0, 1.0), coin(0.0, 1.0);
    std::map<std::string, Cx<Mp>> p;
    for (const auto& v : vars) {
        if (v == "s") {
            double x = re(rng), y = im(rng) * (coin(rng) < 0.5 ? -1 : 1);
            p[v] = Cx<Mp>(Mp(x), Mp(y));
        } else {
            p[v] = Cx<Mp>(Mp(unit(rng)));
        }
    }
    return p;
}

}  // namespace detail

/// e1 = q * e2 for a rational q: structurally, or else numerically at `trials`
/// seeded points within `tol` relative, with q reconstructed from the ratio.
inline Comparison equals_up_to_scalar(const SymExpr& e1, const SymExpr& e2, const Evaluator<Mp>& ev, int trials = 20,
                                      std::uint64_t seed = 1, double tol = 1e-9) {
    Comparison cmp;
    if (auto q = structural_ratio(e1, e2)) {
        cmp.kind = MatchKind::Scalar;
        cmp.scalar = q;
        cmp.ratio = to_double(*q);
        return cmp;
    }
    std::set<std::string> vars = e1.variables();
    for (const auto& v : e2.variables()) vars.insert(v);
    std::mt19937_64 rng(seed);
    std::vector<Cx<Mp>> ratios;
    for (int attempt = 0; static_cast<int>(ratios.size()) < trials && attempt < 10 * trials; ++attempt) {
        auto p = detail::random_point(vars, rng);
        try {
            auto a = ev.evaluate(e1, p), b = ev.evaluate(e2, p);
            if (a.near_singular || b.near_singular || cabs(b.value) == 0) continue;
            ratios.push_back(a.value / b.value);
        } catch (const PoleError&) {
        }
    }
    cmp.points = static_cast<int>(ratios.size());
    if (ratios.empty()) {
        cmp.note = "no regular sample points";
        return cmp;
    }
    const Cx<Mp>& r0 = ratios.front();
    double mag0 = to_dbl(cabs(r0));
    for (const auto& r : ratios) cmp.spread = std::max(cmp.spread, to_dbl(cabs(r - r0)) / std::max(mag0, 1e-300));
    cmp.ratio = to_dbl(r0.re);
    bool real = std::abs(to_dbl(r0.im)) <= tol * mag0;
    if (cmp.points == trials && cmp.spread <= tol && real && mag0 > 0) {
        cmp.scalar = rational_reconstruct(cmp.ratio, 1000000, tol);
        cmp.kind = cmp.scalar ? MatchKind::Numeric : MatchKind::Mismatch;
        if (!cmp.scalar) cmp.note = "constant ratio is not a small rational";
    } else {
        cmp.note = "ratio varies across sample points";
    }
    return cmp;
}

/// max |fa(1-s, rest) - fb(s, rest)| / max(|fa|, |fb|) over seeded samples.
inline double cross_fe_residual(const SymExpr& fa, const SymExpr& fb, const Evaluator<Mp>& ev, int samples = 20,
                                std::uint64_t seed = 1) {
    std::set<std::string> vars = fa.variables();
    for (const auto& v : fb.variables()) vars.insert(v);
    vars.insert("s");
    std::mt19937_64 rng(seed);
    double worst = 0;
    int done = 0;
    for (int attempt = 0; done < samples && attempt < 10 * samples; ++attempt) {
        auto p = detail::random_point(vars, rng);
        auto q = p;
        q["s"] = Cx<Mp>(Mp(1)) - p["s"];
        try {
            Cx<Mp> a = ev(fa, q), b = ev(fb, p);
            Mp den = std::max(cabs(a), cabs(b));
            if (den == 0) continue;
            worst = std::max(worst, to_dbl(Mp(cabs(a - b) / den)));
            ++done;
        } catch (const PoleError&) {
        }
    }
    if (done < samples) throw std::runtime_error("not enough regular sample points for the cross relation");
    return worst;
}

struct PipelineConfig {
    int digits = 30;
    std::uint64_t seed = 1;
    int compare_points = 20;
    double compare_tol = 1e-9;
    bool compare = true;
    std::filesystem::path golden_dir = default_golden_dir();
};

struct PipelineRun {
    std::string group, parabolic;
    std::string mode = "plain";   // plain | t_general | t_rho
    SymExpr period;
    IteratedResidue residue;
    SymExpr xi_o;
    SymExpr centered;              // for t_general: the xi_o frame with T
    NormalizationRecord record;
    PoleReport poles;
    std::size_t grouped_terms = 0;  // terms when merging only within one Weyl element
    std::vector<Comparison> comparisons;
    std::vector<std::string> errors;

    bool has_golden() const { return !comparisons.empty(); }
    /// The verbatim reading matched.
    bool verbatim_match() const {
        for (const auto& c : comparisons)
            if (c.reading == "verbatim") return c.matched();
        return false;
    }
    /// Some reading matched.
    bool any_match() const {
        for (const auto& c : comparisons)
            if (c.matched()) return true;
        return false;
    }
    bool pure() const { return !centered.has_auxiliary_atoms() && !xi_o.has_auxiliary_atoms(); }
};

class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg = {})
        : cfg_(std::move(cfg)), num_(cfg_.digits), ev_(num_, EvalConfig{cfg_.digits}) {
        if (cfg_.compare) corpus_ = golden_corpus(cfg_.golden_dir);
    }

    const std::vector<GoldenFormula>& corpus() const { return corpus_; }
    const Evaluator<Mp>& evaluator() const { return ev_; }
    const PipelineConfig& config() const { return cfg_; }

    PipelineRun run(const std::string& group, const std::string& parabolic) const {
        RootSystem rs = build_root_system(group);
        ParabolicDescriptor P = rs.parabolic(parabolic);
        PipelineRun out;
        out.group = group;
        out.parabolic = P.name;
        out.period = build_period(rs);
        out.residue = iterated_residue(out.period, rs, P);
        out.record = clearing_factors(out.residue.result);
        out.record.scale = out.residue.scale;
        out.xi_o = normalize_o(out.residue.result, out.record);
        find_fe_constant(out.record, out.xi_o, ev_, cfg_.seed);
        if (!out.record.c) {
            out.errors.push_back("no functional-equation constant verified");
            out.centered = out.xi_o;
        } else {
            out.record.shift = (*out.record.c - 1) / 2;
            out.centered = center(out.xi_o, *out.record.c);
        }
        out.centered.label = rs.name() + "/" + P.name;
        out.poles = pole_report(out.centered);
        out.grouped_terms = grouped_count(out.period, rs, P, out.record);
        if (cfg_.compare) compare(out, group, find_golden(corpus_, group, P.name, {"centered", "xi_o"}));
        return out;
    }

    /// SL(3) with the exponential factors e^{<w^{-1} lambda - rho, T>}, framed by
    /// e^{2<rho, T>} and written in the coordinate z_{j+2} of the retained root.
    PipelineRun run_T(const std::string& parabolic, bool rho_line) const {
        RootSystem rs = build_root_system("SL3");
        ParabolicDescriptor P = rs.parabolic(parabolic);
        PipelineRun out;
        out.group = "SL3";
        out.parabolic = P.name;
        out.mode = rho_line ? "t_rho" : "t_general";

        IteratedResidue plain = iterated_residue(build_period(rs), rs, P);
        SymExpr z0 = in_retained_coordinate(plain, rs, P);
        out.record = clearing_factors(z0);
        find_fe_constant(out.record, normalize_o(z0, out.record), ev_, cfg_.seed);

        out.period = build_period_T(rs, ExponentAction::LowerIndex);
        out.residue = iterated_residue(out.period, rs, P);
        SymExpr zt = in_retained_coordinate(out.residue, rs, P);
        LinForm x = LinForm::variable("x"), y = LinForm::variable("y");
        std::map<std::string, LinForm> tmap{{"t1", x}, {"t2", y}};
        Term frame;
        LinForm two_rho_t;
        auto tv = rs.symbolic_vector("t");
        for (int i = 0; i < rs.dim; ++i) two_rho_t += tv[i] * (rs.rho[i] * 2);
        frame.expo = Poly(two_rho_t.substitute(tmap));
        out.xi_o = normalize_o(simplify(substitute(zt, tmap) * frame), out.record);
        if (rho_line) {
            SymExpr on_line = simplify(substitute(out.xi_o, {{"y", LinForm()}}));
            if (!out.record.c) throw NormalizationError("no functional-equation constant for the T = 0 zeta");
            out.record.shift = (*out.record.c - 1) / 2;
            out.centered = center(on_line, *out.record.c);
        } else {
            out.centered = out.xi_o;
        }
        out.centered.label = "SL3/" + P.name + (rho_line ? ";T=x rho" : ";T");
        out.grouped_terms = out.centered.size();
        if (cfg_.compare) compare(out, "SL3", find_golden(corpus_, "SL3", P.name, {rho_line ? "t_rho" : "t_general"}));
        return out;
    }

private:
    static SymExpr in_retained_coordinate(const IteratedResidue& ir, const RootSystem& rs,
                                          const ParabolicDescriptor& P) {
        auto acc = restriction_map(ir.hyperplanes);
        LinForm z = rs.lambda.at(P.retained.at(0) + 1).substitute(acc);
        Rational a = z.coeff(ir.surviving), b = z.constant();
        Rational k = Rational(1) / (a * ir.scale);
        auto e = substitute(ir.result, {{"s", LinForm::variable("s", k) + LinForm(-b * k)}});
        return reflect_xi_arguments(simplify(e));
    }

    // The same chain keeping terms of different Weyl elements apart.
    static std::size_t grouped_count(const SymExpr& period, const RootSystem& rs, const ParabolicDescriptor& P,
                                     const NormalizationRecord& rec) {
        IteratedResidue ir = iterated_residue(period, rs, P, {}, true);
        SymExpr e = simplify(ir.result * rec.clearing_term(), true);
        if (rec.c && rec.shift != 0)
            e = simplify(substitute(e, {{"s", LinForm::variable("s") + LinForm(rec.shift)}}), true);
        return e.size();
    }

    void compare(PipelineRun& out, const std::string& group, const std::vector<const GoldenFormula*>& goldens) const {
        if (out.centered.has_auxiliary_atoms()) {
            std::string list;
            for (const auto& t : out.centered.terms)
                if (t.has_auxiliary_atoms()) list += "\n  " + to_plain(t);
            out.errors.push_back("auxiliary atoms survive in " + group + "/" + out.parabolic + ":" + list);
        }
        for (const GoldenFormula* g : goldens) {
            SymExpr target = g->expr;
            std::string note;
            if (g->frame == "xi_o") {
                NormalizationRecord own;
                find_fe_constant(own, target, ev_, cfg_.seed);
                if (own.c) {
                    target = center(target, *own.c);
                    note = "golden centered by its own constant " + to_string(*own.c);
                }
            }
            Comparison c = equals_up_to_scalar(out.centered, target, ev_, cfg_.compare_points, cfg_.seed,
                                               cfg_.compare_tol);
            c.golden_id = g->id;
            c.reading = g->reading;
            if (!note.empty()) c.note = c.note.empty() ? note : note + "; " + c.note;
            out.comparisons.push_back(std::move(c));
        }
    }

    PipelineConfig cfg_;
    XiNumerics<Mp> num_;
    Evaluator<Mp> ev_;
    std::vector<GoldenFormula> corpus_;
};

inline nlohmann::json to_json(const Comparison& c) {
    nlohmann::json j;
    j["golden"] = c.golden_id;
    j["reading"] = c.reading;
    j["outcome"] = to_string(c.kind);
    j["scalar"] = c.scalar ? nlohmann::json(to_string(*c.scalar)) : nlohmann::json(nullptr);
    j["ratio"] = c.ratio;
    j["spread"] = c.spread;
    j["points"] = c.points;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline nlohmann::json summary_json(const PipelineRun& r) {
    nlohmann::json j;
    j["group"] = r.group;
    j["parabolic"] = r.parabolic;
    j["mode"] = r.mode;
    j["terms"] = r.centered.size();
    j["grouped_terms"] = r.grouped_terms;
    j["surviving_variable"] = r.residue.surviving;
    j["record"] = to_json(r.record);
    j["poles"] = to_json(r.poles);
    j["comparisons"] = nlohmann::json::array();
    for (const auto& c : r.comparisons) j["comparisons"].push_back(to_json(c));
    j["errors"] = r.errors;
    j["auxiliary_atoms"] = !r.pure();
    j["final"] = to_plain(r.centered);
    return j;
}

inline std::string run_id(const PipelineRun& r) {
    std::string id = r.group + "_" + r.parabolic;
    if (r.mode != "plain") id += "_" + r.mode;
    for (auto& ch : id)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
    return id;
}

/// Writes <dir>/<run id>/ with one JSON file per stage, the final formula in
/// LaTeX and a summary, then records the run in <dir>/manifest.json.
inline std::filesystem::path save_run(const PipelineRun& r, const std::filesystem::path& dir,
                                      const nlohmann::json& extra = {}) {
    namespace fs = std::filesystem;
    fs::path sub = dir / run_id(r);
    fs::create_directories(sub);
    auto put = [&](const std::string& name, const nlohmann::json& j) {
        std::ofstream(sub / name) << j.dump(1) << "\n";
    };
    put("period.json", to_json(r.period));
    put("residue.json", to_json(r.residue.result));
    put("xi_o.json", to_json(r.xi_o));
    put("centered.json", to_json(r.centered));
    nlohmann::json summary = summary_json(r);
    if (!extra.is_null()) summary["extra"] = extra;
    put("summary.json", summary);
    std::ofstream(sub / "centered.tex") << to_latex(r.centered) << "\n";

    fs::path manifest = dir / "manifest.json";
    nlohmann::json m = nlohmann::json::object();
    if (fs::exists(manifest)) {
        try {
            std::ifstream(manifest) >> m;
        } catch (const std::exception&) {
            m = nlohmann::json::object();
        }
    }
    nlohmann::json entry;
    entry["path"] = run_id(r);
    entry["group"] = r.group;
    entry["parabolic"] = r.parabolic;
    entry["mode"] = r.mode;
    entry["files"] = {"period.json", "residue.json", "xi_o.json", "centered.json", "centered.tex", "summary.json"};
    entry["timestamp"] = static_cast<long long>(std::time(nullptr));
    m["runs"][run_id(r)] = entry;
    std::ofstream(manifest) << m.dump(1) << "\n";
    return sub;
}

}  // namespace gpzeta
