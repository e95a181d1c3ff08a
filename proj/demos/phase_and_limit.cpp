// Walks b down through the two critical hyperbolas at a = 1 and then
// follows the N^- level to b = 0 at lambda = 1.

#include "kirchhoff/kirchhoff.hpp"

#include <cstdio>
#include <cstdlib>

using namespace kirchhoff;

int main(int argc, char** argv) {
    const int M = argc > 1 ? std::atoi(argv[1]) : 256;
    const auto mesh = make_mesh(5, M);
    const auto sob = discrete_sobolev_constant(mesh);
    const auto cc = critical_constants(5, sob.S_h);
    std::printf("M = %d  S_h = %.6f  (sharp %.6f)\n", M, sob.S_h, talenti_constant(5));
    std::printf("C1_h = %.6e  C2_h = %.6e\n\n", cc.C1, cc.C2);

    std::vector<double> bs;
    for (double s : {2.0, 1.05, 1.0, 0.97, 0.95, 0.9, 0.5, 0.2}) {
        bs.push_back(s * cc.C2);
    }
    PhaseOptions opt;
    const auto cells = phase_diagram({1.0}, bs, mesh, opt);
    std::printf("%12s %10s %14s %14s\n", "b", "regime_h", "nehari_empty", "negative_min");
    for (const auto& c : cells) {
        std::printf("%12.5e %10s %14d %14d\n", c.b, std::string(to_string(c.regime_h)).c_str(),
                    c.nehari_empty_at_lambda0, c.negative_energy_at_lambda0);
    }

    std::vector<double> seq;
    for (double s : {0.8, 0.4, 0.2, 0.1, 0.05}) {
        seq.push_back(s * cc.C2);
    }
    seq.push_back(0.0);
    ProblemParams pr;
    pr.lambda = 1.0;
    const auto res = continuation_b_to_zero(pr, seq, sob.minimizer);
    std::printf("\n%12s %14s %12s\n", "b", "level", "residual");
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
        std::printf("%12.5e %14.6f %12.3e\n", seq[k], res.steps[k].level, res.steps[k].pde_residual);
    }
    if (res.limit) {
        std::printf("\nS_h^{5/2}/5 = %.6f, Pohozaev defect at b = 0: %.3e\n", std::pow(sob.S_h, 2.5) / 5.0,
                    res.limit->pohozaev_defect);
    }
    return res.completed ? 0 : 2;
}
