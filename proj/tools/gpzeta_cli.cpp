// gpzeta: derive, evaluate and verify zeta functions attached to maximal
// parabolics. Exit status: 0 success, 1 verification failure, 2 usage error,
// 3 internal error.

#include "gpzeta/gpzeta.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace gpzeta;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2, kInternal = 3;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    int digits = 30;
    std::uint64_t seed = 1;
    int jobs = 1;
    double step = 0.05;
    double tol = 1e-10;
    std::string outdir;

    fs::path out() const {
        if (!outdir.empty()) return outdir;
        if (const char* env = std::getenv("GPZETA_OUTDIR")) return env;
        return {};
    }
    PipelineConfig pipeline(bool compare) const {
        PipelineConfig c;
        c.digits = digits;
        c.seed = seed;
        c.compare = compare;
        return c;
    }
    void validate() const {
        EvalConfig{digits}.validate();
        if (!(step > 0) || !(tol > 0)) throw UsageError("step and tolerance must be positive");
        if (jobs < 1) throw UsageError("--jobs must be at least 1");
    }
};

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

/// A linear form typed as an expression, e.g. "z2-z3-1".
LinForm parse_form(const std::string& text) {
    SymExpr e = simplify(parse_expr(text));
    LinForm out;
    for (const auto& t : e.terms) {
        if (!t.xi.empty() || !t.expo.is_zero()) throw UsageError("'" + text + "' is not a linear form");
        Poly p = t.num * Poly(LinForm(t.scalar));
        for (const auto& [f, x] : t.lin) {
            if (x < 0) throw UsageError("'" + text + "' is not a linear form");
            for (int k = 0; k < x; ++k) p = p * Poly(f);
        }
        for (const auto& [m, c] : p.terms()) {
            if (m.empty())
                out += LinForm(c);
            else if (m.size() == 1 && m.begin()->second == 1)
                out += LinForm::variable(m.begin()->first, c);
            else
                throw UsageError("'" + text + "' is not a linear form");
        }
    }
    return out;
}

/// "z2=0.25,z3=1/3"
std::map<std::string, double> parse_anchor(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("anchor entries look like name=value");
        out[item.substr(0, eq)] = to_double(parse_rational(item.substr(eq + 1)));
    }
    return out;
}

std::pair<double, double> parse_complex(const std::string& text) {
    auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("--s expects re or re,im");
    }
}

PipelineRun derive(const Pipeline& p, const std::string& group, const std::string& parabolic, const std::string& t) {
    if (t.empty()) return p.run(group, parabolic);
    if (group != "SL3") throw UsageError("--T is available for SL3 only");
    if (t != "rho" && t != "general") throw UsageError("--T takes rho or general");
    return p.run_T(parabolic, t == "rho");
}

int cmd_inspect(const std::string& group, bool weyl, const std::string& format) {
    RootSystem rs = build_root_system(group);
    nlohmann::json j = to_json(rs, weyl);
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << rs.name() << "  rank " << rs.rank << "  |W| = " << weyl_group(rs).size() << "\n";
    std::cout << "positive roots: " << j.at("positive_roots").size() << "\n";
    for (const auto& key : {"simple_roots", "positive_roots", "coroots"}) {
        if (!j.contains(key)) continue;
        std::cout << key << ":\n";
        for (const auto& r : j.at(key)) std::cout << "  " << r.dump() << "\n";
    }
    std::cout << "rho: " << j.at("rho").dump() << "\n";
    std::cout << "<rho, simple coroot>:";
    for (const auto& a : rs.simple_roots) std::cout << " " << to_string(dot(rs.rho, rs.coroot(a)));
    std::cout << "\n";
    return kOk;
}

int cmd_zeta(const Common& c, const std::string& group, const std::string& parabolic, const std::string& stage,
             const std::string& format, bool report, const std::string& t) {
    Format f = parse_format(format);
    Pipeline p(c.pipeline(true));
    PipelineRun r = derive(p, group, parabolic, t);
    std::map<std::string, const SymExpr*> stages{
        {"period", &r.period}, {"residue", &r.residue.result}, {"xi_o", &r.xi_o}, {"centered", &r.centered}};
    auto it = stages.find(stage);
    if (it == stages.end()) throw UsageError("--stage takes period, residue, xi_o or centered");
    std::cout << to_display(*it->second, f) << "\n";
    if (report) std::cout << summary_json(r).dump(2) << "\n";
    for (const auto& e : r.errors) std::cerr << "warning: " << e << "\n";
    if (fs::path out = c.out(); !out.empty()) {
        fs::path dir = save_run(r, out);
        std::cerr << "wrote " << dir.string() << "\n";
    }
    return kOk;
}

int cmd_eval(const Common& c, const std::string& group, const std::string& parabolic, const std::string& s_text,
             const std::string& t, const std::string& vars) {
    auto [re, im] = parse_complex(s_text);
    Pipeline p(c.pipeline(false));
    PipelineRun r = derive(p, group, parabolic, t);
    Evaluator<Mp>::Point pt{{"s", Cx<Mp>(Mp(re), Mp(im))}};
    for (const auto& [v, x] : parse_anchor(vars)) pt[v] = Cx<Mp>(Mp(x));
    nlohmann::json j;
    try {
        auto res = p.evaluator().evaluate(r.centered, pt);
        j["value"] = {real_str(res.value.re, 20), real_str(res.value.im, 20)};
        j["near_singular"] = res.near_singular;
        j["offending"] = res.offending;
    } catch (const PoleError& e) {
        j["error"] = e.what();
        j["s"] = {re, im};
        std::cout << j.dump(2) << "\n";
        return kFail;
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_verify(const Common& c, const std::string& group, const std::string& parabolic, bool fe, bool poles,
               bool rh, double tmax, bool tolerate_central) {
    if (!fe && !poles && !rh) fe = poles = rh = true;
    Pipeline p(c.pipeline(false));
    PipelineRun r = p.run(group, parabolic);
    fs::path out = c.out();
    fs::path dir = out.empty() ? fs::path() : out / run_id(r);
    bool ok = true;
    nlohmann::json j;
    j["zeta"] = r.centered.label;
    if (fe) {
        double res = r.record.c ? fe_residual(r.centered, Rational(1), p.evaluator(), 50, c.seed) : 1.0;
        bool pass = r.record.c.has_value() && res < 1e-9;
        ok = ok && pass;
        j["fe"] = {{"c", r.record.c ? to_string(*r.record.c) : "unverified"}, {"residual", res}, {"pass", pass}};
        std::cout << "functional equation: c = " << (r.record.c ? to_string(*r.record.c) : "unverified")
                  << ", residual of f(s) = f(1-s): " << res << (pass ? "  PASS" : "  FAIL") << "\n";
    }
    if (poles) {
        std::string list;
        bool symmetric = true;
        for (const auto& q : r.poles.poles) {
            list += (list.empty() ? "" : ", ") + to_string(q.at) + (q.order > 1 ? "^" + std::to_string(q.order) : "");
            symmetric = symmetric && r.poles.order_at(1 - q.at) == q.order;
        }
        ok = ok && symmetric;
        j["poles"] = to_json(r.poles);
        j["poles"]["symmetric"] = symmetric;
        std::cout << "poles: {" << list << "}" << (symmetric ? "" : "  not symmetric under s -> 1-s") << "\n";
        if (!r.poles.cancelled.empty()) {
            std::cout << "cancelled candidates:";
            for (const auto& q : r.poles.cancelled) std::cout << " " << to_string(q);
            std::cout << "\n";
        }
    }
    if (rh) {
        ScanConfig cfg;
        cfg.step = c.step;
        cfg.tol = c.tol;
        cfg.jobs = c.jobs;
        cfg.digits = c.digits;
        cfg.tolerate_central = tolerate_central;
        ZetaReport rep = rh_report(r.centered, p.evaluator(), tmax, cfg);
        ok = ok && rep.consistent();
        j["rh"] = to_json(rep);
        std::cout << "zeros on the line up to t = " << tmax << ": " << rep.zeros.zeros.size() << "\n";
        for (const auto& b : rep.boxes)
            std::cout << "  box t in [" << b.rect.t_lo << ", " << b.rect.t_hi << "]: winding " << b.winding
                      << ", poles " << b.pole_orders << ", line zeros " << b.online << "  "
                      << (b.consistent ? "consistent" : (b.flagged ? "flagged" : "discrepancy")) << "\n";
        std::cout << "critical-line check: " << (rep.consistent() ? "PASS" : "FAIL") << "\n";
        if (!dir.empty()) write_file(dir / "zeros.csv", zeros_csv(rep.zeros));
    }
    if (!dir.empty()) {
        write_file(dir / "verify.json", j.dump(1) + "\n");
        std::cerr << "wrote " << (dir / "verify.json").string() << "\n";
    }
    return ok ? kOk : kFail;
}

int cmd_oracle(const Common& c, const std::string& expr_text, const std::string& along, const std::string& at,
               double radius, int samples) {
    SymExpr e = parse_expr(expr_text);
    Hyperplane h = Hyperplane::from_form(parse_form(along));
    auto anchor = parse_anchor(at);
    XiNumerics<double> num;
    Evaluator<double> ev(num);
    ResidueOracle orc(ev, {h}, radius, samples);
    OracleReport rep = orc.run(e, anchor);
    nlohmann::json j = to_json(rep);
    try {
        SymExpr sym = residue(e, h);
        Evaluator<double>::Point pt;
        for (const auto& [v, x] : anchor) pt[v] = Cd(x);
        Cd v = ev(sym, pt);
        j["symbolic"] = to_plain(sym);
        j["symbolic_value"] = {v.re, v.im};
        j["relative_difference"] = cabs(v - rep.value) / std::max(1e-300, cabs(v));
    } catch (const std::exception& ex) {
        j["symbolic_error"] = ex.what();
    }
    std::cout << j.dump(2) << "\n";
    (void)c;
    return kOk;
}

int cmd_oracle_run(const Common& c, const std::string& group, const std::string& parabolic, int count) {
    XiNumerics<double> num;
    Evaluator<double> ev(num);
    auto rs = build_root_system(group);
    auto per = build_period(rs);
    auto ir = iterated_residue(per, rs, rs.parabolic(parabolic));
    std::vector<SymExpr> stages{simplify(per)};
    for (const auto& s : ir.stages) stages.push_back(s);
    auto acc = restriction_map(ir.hyperplanes);
    std::vector<std::string> free;
    for (const auto& v : rs.variables)
        if (!acc.count(v)) free.push_back(v);
    ResidueOracle orc(ev, ir.hyperplanes, 0.05, ir.hyperplanes.size() > 2 ? 24 : 48);
    nlohmann::json reports = nlohmann::json::array();
    double worst = 0;
    for (const auto& a : oracle_anchors(stages, ir.hyperplanes, free, count, c.seed)) {
        auto ad = to_double_map(a);
        Evaluator<double>::Point pt;
        for (const auto& [v, x] : ad) pt[v] = Cd(x);
        Cd sym = ev(ir.stages.back(), pt);
        OracleReport rep = orc.run(per, ad);
        double rel = cabs(sym - rep.value) / std::max(1e-300, cabs(sym));
        worst = std::max(worst, rel);
        nlohmann::json j = to_json(rep);
        j["symbolic_value"] = {sym.re, sym.im};
        j["relative_difference"] = rel;
        reports.push_back(j);
    }
    nlohmann::json out{{"group", group}, {"parabolic", parabolic}, {"anchors", reports}, {"worst", worst}};
    std::cout << out.dump(2) << "\n";
    return reports.size() == static_cast<std::size_t>(count) && worst < 1e-6 ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zeta functions for maximal parabolics: derivation and verification"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--precision", c.digits, "Working precision in decimal digits")->capture_default_str();
    app.add_option("--seed", c.seed, "Seed for all sampled points")->capture_default_str();
    app.add_option("--jobs", c.jobs, "Parallel verification jobs")->capture_default_str();
    app.add_option("--step", c.step, "Critical-line scan step")->capture_default_str();
    app.add_option("--tol", c.tol, "Zero bisection tolerance")->capture_default_str();
    app.add_option("--outdir", c.outdir, "Output directory (default: $GPZETA_OUTDIR)");

    std::string group, parabolic, t;

    auto* inspect = app.add_subcommand("inspect", "Root system and Weyl group data");
    bool weyl = false;
    std::string inspect_format = "plain";
    inspect->add_option("group", group, "SL<n>, Sp<2n>, SO<n>, G2 or a Cartan label")->required();
    inspect->add_flag("--weyl", weyl, "Include Weyl group matrices");
    inspect->add_option("--format", inspect_format, "plain or json")->check(CLI::IsMember({"plain", "json"}));

    auto* zeta = app.add_subcommand("zeta", "Derive the zeta function");
    std::string stage = "centered", format = "plain";
    bool report = false;
    zeta->add_option("group", group)->required();
    zeta->add_option("parabolic", parabolic)->required();
    zeta->add_option("--stage", stage, "period, residue, xi_o or centered")->capture_default_str();
    zeta->add_option("--format", format, "plain, latex or json")->capture_default_str();
    zeta->add_flag("--report", report, "Print the normalization record, poles and golden comparisons");
    zeta->add_option("--T", t, "SL3 only: rho or general exponential variant");

    auto* eval = app.add_subcommand("eval", "Evaluate the centered zeta");
    std::string s_text, vars;
    eval->add_option("group", group)->required();
    eval->add_option("parabolic", parabolic)->required();
    eval->add_option("--s", s_text, "re or re,im")->required();
    eval->add_option("--T", t, "SL3 only: rho or general");
    eval->add_option("--vars", vars, "Extra variables, e.g. x=1/2,y=0");

    auto* verify = app.add_subcommand("verify", "Check functional equation, poles and zeros");
    bool fe = false, poles = false, rh = false, tolerate = false;
    double tmax = 30;
    verify->add_option("group", group)->required();
    verify->add_option("parabolic", parabolic)->required();
    verify->add_flag("--fe", fe, "Functional equation f(s) = f(1-s)");
    verify->add_flag("--poles", poles, "Exact pole set");
    verify->add_flag("--rh", rh, "Zeros on the critical line, with box certificates");
    verify->add_option("--tmax", tmax, "Height of the zero scan")->capture_default_str();
    verify->add_flag("--tolerate-central", tolerate, "Flag, rather than fail, a discrepancy in the lowest box");

    auto* oracle = app.add_subcommand("oracle", "Numeric contour residues");
    std::string residue_expr, along, at;
    double radius = 0.05;
    int samples = 48, anchors = 5;
    oracle->add_option("group", group, "Compare a full derivation at seeded anchors");
    oracle->add_option("parabolic", parabolic);
    oracle->add_option("--residue", residue_expr, "Expression, e.g. \"xi(u+1)\"");
    oracle->add_option("--along", along, "Hyperplane form, e.g. \"z2-z3-1\"");
    oracle->add_option("--at", at, "Remaining variables, e.g. z1=1/3,z2=0.2");
    oracle->add_option("--radius", radius)->capture_default_str();
    oracle->add_option("--samples", samples)->capture_default_str();
    oracle->add_option("--anchors", anchors, "Anchor count for a derivation")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        c.validate();
        PrecisionGuard guard(c.digits);
        if (*inspect) return cmd_inspect(group, weyl, inspect_format);
        if (*zeta) return cmd_zeta(c, group, parabolic, stage, format, report, t);
        if (*eval) return cmd_eval(c, group, parabolic, s_text, t, vars);
        if (*verify) return cmd_verify(c, group, parabolic, fe, poles, rh, tmax, tolerate);
        if (*oracle) {
            if (!residue_expr.empty()) {
                if (along.empty()) throw UsageError("--residue needs --along");
                return cmd_oracle(c, residue_expr, along, at, radius, samples);
            }
            if (group.empty() || parabolic.empty()) throw UsageError("oracle needs --residue or GROUP PARABOLIC");
            return cmd_oracle_run(c, group, parabolic, anchors);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const OracleError& e) {
        std::cerr << "oracle: " << e.what() << " (coarse " << e.coarse_re << ", fine " << e.fine_re << ")\n";
        return kFail;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
