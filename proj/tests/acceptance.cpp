// Acceptance run: one PASS/FAIL line per criterion. With --expect, the exit
// status is 0 exactly when the failing criteria are the listed known ones.

#include "gpzeta/gpzeta.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace gpzeta;

namespace {

struct Outcome {
    int id;
    bool pass;
    std::string title;
    std::vector<std::string> details;
};

struct Case {
    std::string group, parabolic;
};

const std::vector<Case> kGolden = {{"SL2", "B"},    {"SL3", "P21"},    {"SL4", "P31"},  {"SL4", "P22"},
                                   {"SL5", "P41"},  {"SL5", "P32"},    {"Sp4", "Pe1-e2"}, {"Sp4", "P2e2"},
                                   {"G2", "Plong"}, {"G2", "Pshort"}};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

class Acceptance {
public:
    Acceptance(int jobs, std::uint64_t seed) : jobs_(jobs), seed_(seed), pipe_(PipelineConfig{30, seed}) {}

    const PipelineRun& run(const std::string& g, const std::string& p) {
        auto key = g + "/" + p;
        auto it = runs_.find(key);
        if (it == runs_.end()) it = runs_.emplace(key, pipe_.run(g, p)).first;
        return it->second;
    }

    Outcome golden_derivations() {
        Outcome o{1, true, "golden derivations reproduced up to a rational scalar", {}};
        auto t0 = std::chrono::steady_clock::now();
        for (const auto& c : kGolden) {
            const auto& r = run(c.group, c.parabolic);
            bool verbatim = r.verbatim_match();
            o.pass = o.pass && verbatim;
            for (const auto& cmp : r.comparisons) {
                std::string line = c.group + "/" + c.parabolic + " vs " + cmp.golden_id + " (" + cmp.reading +
                                   "): " + to_string(cmp.kind);
                if (cmp.scalar) line += ", scalar " + to_string(*cmp.scalar);
                if (!cmp.note.empty()) line += "; " + cmp.note;
                o.details.push_back(line);
            }
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.details.push_back("derivation time " + fmt(secs) + " s");
        return o;
    }

    Outcome term_counts() {
        Outcome o{2, true, "term counts SL4/P31 = 12, SL5/P41 = 28", {}};
        for (auto [g, p, want] : {std::tuple{"SL4", "P31", 12}, {"SL5", "P41", 28}}) {
            const auto& r = run(g, p);
            bool ok = static_cast<int>(r.grouped_terms) == want;
            o.pass = o.pass && ok;
            o.details.push_back(std::string(g) + "/" + p + ": " + std::to_string(r.grouped_terms) +
                                " terms grouped by Weyl element, " + std::to_string(r.centered.size()) +
                                " fully merged");
        }
        return o;
    }

    Outcome parabolic_symmetry() {
        Outcome o{3, true, "P(n-1,1) and P(1,n-1) zetas agree up to scalar; P32 and P23 as well", {}};
        for (auto [g, a, b] : {std::tuple{"SL3", "P21", "P12"}, {"SL4", "P31", "P13"}, {"SL5", "P41", "P14"},
                               {"SL5", "P32", "P23"}}) {
            auto c = equals_up_to_scalar(run(g, a).centered, run(g, b).centered, pipe_.evaluator());
            o.pass = o.pass && c.matched();
            o.details.push_back(std::string(g) + " " + a + " vs " + b + ": " + to_string(c.kind) +
                                (c.scalar ? ", scalar " + to_string(*c.scalar) : ""));
        }
        return o;
    }

    Outcome functional_equations() {
        Outcome o{4, true, "f(s) = f(1-s) at 100 points, |s| <= 10", {}};
        const auto& ev = pipe_.evaluator();
        const double delta = 0.01;
        for (const auto& c : kGolden) {
            const auto& r = run(c.group, c.parabolic);
            std::mt19937_64 rng(seed_);
            std::uniform_real_distribution<double> u(-10, 10);
            double worst = 0;
            int n = 0, skipped = 0;
            while (n < 100) {
                double x = u(rng), y = u(rng);
                if (x * x + y * y > 100) continue;
                bool near = false;
                for (const auto& p : r.poles.poles)
                    for (double q : {to_double(p.at), 1 - to_double(p.at)})
                        near = near || std::hypot(x - q, y) < delta;
                if (near) continue;
                Cx<Mp> s{Mp(x), Mp(y)};
                try {
                    auto a = ev.at(r.centered, "s", s);
                    auto b = ev.at(r.centered, "s", Cx<Mp>(Mp(1)) - s);
                    double lhs = to_dbl(Mp(cabs(a - b)));
                    worst = std::max(worst, lhs / (1 + to_dbl(Mp(cabs(a)))));
                    ++n;
                } catch (const PoleError&) {
                    ++skipped;
                }
            }
            bool ok = worst <= 1e-9;
            o.pass = o.pass && ok;
            o.details.push_back(c.group + "/" + c.parabolic + ": max |f(s)-f(1-s)|/(1+|f(s)|) = " + fmt(worst) +
                                (skipped ? ", " + std::to_string(skipped) + " points on a term singularity redrawn" : ""));
        }
        return o;
    }

    Outcome pole_sets() {
        Outcome o{5, true, "SL3 poles {0,1/3,2/3,1}; SL2 poles {0,1} simple; finitely many poles", {}};
        auto list = [](const PoleReport& p) {
            std::string s = "{";
            for (const auto& q : p.poles)
                s += (s.size() > 1 ? ", " : "") + to_string(q.at) + (q.order > 1 ? "^" + std::to_string(q.order) : "");
            return s + "}";
        };
        const auto& sl3 = run("SL3", "P21");
        bool ok3 = sl3.poles.locations() == std::set<Rational>{0, Rational(1, 3), Rational(2, 3), 1};
        std::string cancelled;
        for (const auto& q : sl3.poles.cancelled) cancelled += " " + to_string(q);
        o.details.push_back("SL3/P21: principal parts cancel at" + cancelled);
        const auto& sl2 = run("SL2", "B");
        bool ok2 = sl2.poles.locations() == std::set<Rational>{0, 1} && sl2.poles.order_at(0) == 1 &&
                   sl2.poles.order_at(1) == 1;
        bool finite = true;
        for (const auto& c : kGolden) {
            const auto& r = run(c.group, c.parabolic);
            finite = finite && r.poles.poles.size() <= r.poles.candidates.size();
            o.details.push_back(c.group + "/" + c.parabolic + " poles " + list(r.poles));
        }
        o.pass = ok3 && ok2 && finite;
        return o;
    }

    Outcome desk_rh() {
        Outcome o{6, true, "argument-principle boxes consistent up to t = 30", {}};
        ScanConfig cfg;
        cfg.jobs = jobs_;
        for (auto [g, p, tolerate] : {std::tuple{"SL2", "B", false}, {"SL3", "P21", false}, {"Sp4", "Pe1-e2", false},
                                      {"G2", "Plong", false}, {"G2", "Pshort", false}, {"Sp4", "P2e2", true}}) {
            cfg.tolerate_central = tolerate;
            std::string name = std::string(g) + "/" + p;
            try {
                auto rep = rh_report(run(g, p).centered, pipe_.evaluator(), 30.0, cfg);
                bool ok = rep.consistent();
                o.pass = o.pass && ok;
                o.details.push_back(name + ": " + std::to_string(rep.zeros.zeros.size()) + " line zeros, " +
                                    std::to_string(rep.boxes.size()) + " boxes, " +
                                    (ok ? (rep.any_flagged() ? "central box flagged" : "all consistent")
                                        : "discrepancy"));
            } catch (const std::exception& e) {
                o.pass = false;
                o.details.push_back(name + ": " + e.what());
            }
        }
        return o;
    }

    Outcome oracle() {
        Outcome o{7, true, "symbolic residues match contour residues at 50 anchors", {}};
        XiNumerics<double> num;
        Evaluator<double> ev(num);
        int total = 0;
        for (auto [g, p, count, samples] :
             {std::tuple{"SL3", "P21", 12, 48}, {"SL4", "P31", 8, 24}, {"Sp4", "Pe1-e2", 8, 48},
              {"Sp4", "P2e2", 7, 48}, {"G2", "Plong", 8, 48}, {"G2", "Pshort", 7, 48}}) {
            std::string name = std::string(g) + "/" + p;
            auto rs = build_root_system(g);
            auto per = build_period(rs);
            auto ir = iterated_residue(per, rs, rs.parabolic(p));
            std::vector<SymExpr> stages{simplify(per)};
            for (const auto& s : ir.stages) stages.push_back(s);
            auto acc = restriction_map(ir.hyperplanes);
            std::vector<std::string> free;
            for (const auto& v : rs.variables)
                if (!acc.count(v)) free.push_back(v);
            ResidueOracle orc(ev, ir.hyperplanes, 0.05, samples);
            auto anchors = oracle_anchors(stages, ir.hyperplanes, free, count, seed_ + 7);
            double worst = 0;
            int done = 0;
            for (const auto& a : anchors) {
                auto ad = to_double_map(a);
                Evaluator<double>::Point pt;
                for (const auto& [v, x] : ad) pt[v] = Cd(x);
                try {
                    Cd sym = ev(ir.stages.back(), pt);
                    Cd res = orc.run(per, ad).value;
                    worst = std::max(worst, cabs(sym - res) / std::max(1e-300, cabs(sym)));
                    ++done;
                } catch (const std::exception& e) {
                    o.pass = false;
                    o.details.push_back(name + ": " + e.what());
                }
            }
            total += done;
            o.pass = o.pass && done == count && worst < 1e-6;
            o.details.push_back(name + ": " + std::to_string(done) + " anchors, worst relative error " + fmt(worst));
        }
        o.details.push_back(std::to_string(total) + " anchors in total");
        o.pass = o.pass && total == 50;
        return o;
    }

    Outcome xi_numerics() {
        Outcome o{8, true, "zeta(2), zeta(0), Gamma(1/2), xi FE at 500 points, residues of xi", {}};
        XiNumerics<Mp> num(30);
        const double work = 1e-27;
        Mp pi = boost::math::constants::pi<Mp>();
        auto err = [](const Cx<Mp>& a, const Cx<Mp>& b) { return to_dbl(Mp(cabs(a - b))); };
        double e1 = err(num.zeta(Cx<Mp>(Mp(2))), Cx<Mp>(Mp(pi * pi / 6)));
        double e2 = err(num.zeta(Cx<Mp>(Mp(0))), Cx<Mp>(Mp(-0.5)));
        double e3 = err(num.gamma(Cx<Mp>(Mp(0.5))), Cx<Mp>(Mp(sqrt(pi))));
        o.details.push_back("special values: errors " + fmt(e1) + ", " + fmt(e2) + ", " + fmt(e3));
        o.pass = e1 < work && e2 < work && e3 < work;
        std::mt19937_64 rng(seed_);
        std::uniform_real_distribution<double> re(-4, 5), im(-40, 40);
        double fe = 0;
        for (int k = 0; k < 500; ++k) {
            Cx<Mp> s{Mp(re(rng)), Mp(im(rng))};
            auto a = num.xi_direct(s);
            fe = std::max(fe, to_dbl(Mp(cabs(num.xi_direct(Cx<Mp>(Mp(1)) - s) - a) / cabs(a))));
        }
        o.details.push_back("xi(s) = xi(1-s) at 500 points: max relative error " + fmt(fe));
        o.pass = o.pass && fe < 1e-25;
        for (auto [center, want] : {std::pair{1, 1.0}, {0, -1.0}}) {
            const int n = 64;
            Cx<Mp> acc(Mp(0));
            for (int k = 0; k < n; ++k) {
                Mp th = 2 * pi * (k + Mp(0.5)) / n;
                Cx<Mp> du(Mp(0.25) * cos(th), Mp(0.25) * sin(th));
                acc += num.xi(Cx<Mp>(Mp(center)) + du) * du;
            }
            acc = acc / Cx<Mp>(Mp(n));
            double e = to_dbl(Mp(cabs(acc - Cx<Mp>(Mp(want)))));
            o.details.push_back("contour residue of xi at " + std::to_string(center) + ": error " + fmt(e));
            o.pass = o.pass && e < 1e-10;
        }
        return o;
    }

    Outcome t_version() {
        Outcome o{9, true, "T-version displays reproduced; cross functional equation at 20 samples", {}};
        for (const char* p : {"P21", "P12"})
            for (bool rho : {true, false}) {
                auto r = pipe_.run_T(p, rho);
                t_runs_.push_back(r);
                for (const auto& c : r.comparisons) {
                    o.pass = o.pass && c.matched();
                    o.details.push_back(std::string(p) + (rho ? " rho line" : " general T") + " vs " + c.golden_id +
                                        ": " + to_string(c.kind) + (c.scalar ? ", scalar " + to_string(*c.scalar) : ""));
                }
                if (r.comparisons.empty()) {
                    o.pass = false;
                    o.details.push_back(std::string(p) + ": no golden display found");
                }
            }
        const auto& a = t_runs_[0].centered;
        const auto& b = t_runs_[2].centered;
        double r1 = cross_fe_residual(a, b, pipe_.evaluator(), 20, seed_);
        double r2 = cross_fe_residual(b, a, pipe_.evaluator(), 20, seed_ + 1);
        o.details.push_back("cross relation residuals " + fmt(r1) + ", " + fmt(r2));
        o.pass = o.pass && r1 < 1e-9 && r2 < 1e-9;
        return o;
    }

    Outcome purity() {
        Outcome o{10, true, "no Laurent or derivative atoms in golden outputs", {}};
        for (const auto& c : kGolden) {
            bool ok = run(c.group, c.parabolic).pure();
            o.pass = o.pass && ok;
            if (!ok) o.details.push_back(c.group + "/" + c.parabolic + " carries auxiliary atoms");
        }
        for (const auto& r : t_runs_) {
            o.pass = o.pass && r.pure();
            if (!r.pure()) o.details.push_back(run_id(r) + " carries auxiliary atoms");
        }
        o.details.push_back(std::to_string(kGolden.size() + t_runs_.size()) + " outputs checked");
        return o;
    }

private:
    int jobs_;
    std::uint64_t seed_;
    Pipeline pipe_;
    std::map<std::string, PipelineRun> runs_;
    std::vector<PipelineRun> t_runs_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::string expect_path, json_path;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed = 1;
    bool verbose = true;
    app.add_option("--expect", expect_path, "JSON file listing criteria known to fail");
    app.add_option("--json", json_path, "Write the outcomes as JSON");
    app.add_option("--jobs", jobs, "Parallel box certificates");
    app.add_option("--seed", seed, "Seed for sample points and anchors");
    app.add_flag("!--quiet", verbose, "Only print the verdict lines");
    CLI11_PARSE(app, argc, argv);

    std::set<int> expected_fail;
    if (!expect_path.empty()) {
        std::ifstream in(expect_path);
        if (!in) {
            std::cerr << "cannot read " << expect_path << "\n";
            return 2;
        }
        nlohmann::json j;
        in >> j;
        for (const auto& e : j.at("known_failures")) expected_fail.insert(e.at("criterion").get<int>());
    }

    Acceptance acc(jobs, seed);
    std::vector<Outcome> out;
    using Step = Outcome (Acceptance::*)();
    for (Step step : {&Acceptance::golden_derivations, &Acceptance::term_counts, &Acceptance::parabolic_symmetry,
                      &Acceptance::functional_equations, &Acceptance::pole_sets, &Acceptance::desk_rh,
                      &Acceptance::oracle, &Acceptance::xi_numerics, &Acceptance::t_version, &Acceptance::purity}) {
        Outcome o;
        try {
            o = (acc.*step)();
        } catch (const std::exception& e) {
            o = Outcome{static_cast<int>(out.size()) + 1, false, "aborted", {e.what()}};
        }
        std::cout << "criterion " << o.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.title << "\n";
        if (verbose)
            for (const auto& d : o.details) std::cout << "    " << d << "\n";
        std::cout.flush();
        out.push_back(o);
    }

    std::set<int> failed;
    for (const auto& o : out)
        if (!o.pass) failed.insert(o.id);
    if (!json_path.empty()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& o : out) j.push_back({{"criterion", o.id}, {"pass", o.pass}, {"title", o.title}, {"details", o.details}});
        std::ofstream(json_path) << j.dump(1) << "\n";
    }
    std::cout << failed.size() << " of " << out.size() << " criteria failed\n";
    if (expect_path.empty()) return failed.empty() ? 0 : 1;
    if (failed == expected_fail) {
        std::cout << "failures match the documented known failures\n";
        return 0;
    }
    std::cout << "failures differ from the documented known failures\n";
    return 1;
}
