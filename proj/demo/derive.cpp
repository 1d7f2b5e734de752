// Walks one derivation stage by stage: period, iterated residue, xi-clearing,
// functional-equation constant, centering, poles.

#include "gpzeta/gpzeta.hpp"

#include <iostream>

using namespace gpzeta;

int main(int argc, char** argv) {
    std::string group = argc > 1 ? argv[1] : "G2";
    std::string parabolic = argc > 2 ? argv[2] : "Plong";
    try {
        Pipeline pipe;
        PipelineRun r = pipe.run(group, parabolic);

        std::cout << group << "/" << r.parabolic << "\n";
        std::cout << "period: " << r.period.size() << " terms\n";
        std::cout << "residues along:";
        for (const auto& h : r.residue.hyperplanes) std::cout << "  " << h.form.str() << " = 0";
        std::cout << "\n";
        std::cout << "surviving variable " << r.residue.surviving << ", rescaled by " << to_string(r.residue.scale)
                  << "\n";
        std::cout << "residue: " << r.residue.result.size() << " terms\n\n";

        std::cout << "clearing factors:";
        for (const auto& [a, b] : r.record.I_factors)
            std::cout << " " << XiAtom::of(LinForm::variable("s", a) + LinForm(b)).str();
        for (const auto& q : r.record.J_factors) std::cout << " " << XiAtom::value(q).str();
        std::cout << "\n";
        std::cout << "functional equation xi_o(c - s) = xi_o(s) with c = "
                  << (r.record.c ? to_string(*r.record.c) : "unverified") << " (residual " << r.record.fe_residual
                  << ")\n\n";

        std::cout << "centered zeta, " << r.centered.size() << " terms:\n" << to_plain(r.centered) << "\n\n";
        std::cout << "LaTeX:\n" << to_latex(r.centered) << "\n\n";

        std::cout << "poles:";
        for (const auto& p : r.poles.poles)
            std::cout << " " << to_string(p.at) << (p.order > 1 ? " (order " + std::to_string(p.order) + ")" : "");
        std::cout << "\n";
        for (const auto& c : r.comparisons) {
            std::cout << "reference " << c.golden_id << ": " << to_string(c.kind);
            if (c.scalar) std::cout << ", scalar " << to_string(*c.scalar);
            std::cout << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
