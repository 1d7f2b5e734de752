// Zeros of a centered zeta on Re s = 1/2 and the argument-principle boxes
// that account for every zero in [-0.2, 1.2] x [0, t_max].

#include "gpzeta/gpzeta.hpp"

#include <iomanip>
#include <iostream>

using namespace gpzeta;

int main(int argc, char** argv) {
    std::string group = argc > 1 ? argv[1] : "SL3";
    std::string parabolic = argc > 2 ? argv[2] : "P21";
    double t_max = argc > 3 ? std::stod(argv[3]) : 30;
    try {
        PipelineConfig cfg;
        cfg.compare = false;
        Pipeline pipe(cfg);
        PipelineRun r = pipe.run(group, parabolic);
        ZetaReport rep = rh_report(r.centered, pipe.evaluator(), t_max);

        std::cout << r.centered.label << ": zeros 1/2 + it up to t = " << t_max << "\n";
        std::cout << std::setprecision(12);
        for (const auto& z : rep.zeros.zeros)
            std::cout << "  t = " << z.t << (z.multiple ? "  (double)" : "") << "\n";
        std::cout << "\nboxes (winding + poles = zeros on the line):\n" << std::setprecision(4);
        for (const auto& b : rep.boxes)
            std::cout << "  t in [" << b.rect.t_lo << ", " << b.rect.t_hi << "]: " << b.winding << " + "
                      << b.pole_orders << " = " << b.online << (b.consistent ? "" : "  <- discrepancy") << "\n";
        std::cout << (rep.consistent() ? "all zeros found lie on the line\n" : "off-line zeros present\n");
        return rep.consistent() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
