// Generates a random approval profile, runs the LP + rounding pipeline and
// compares against the brute-force optimum.

#include <cstdio>

#include "owakm/approx.hpp"
#include "owakm/exact.hpp"
#include "owakm/gen.hpp"

int main() {
    using namespace owakm;
    const auto inst = gen::gen_approval(10, 15, 4, 0.5, 12345);
    const auto ex   = exact::solve(inst);

    approx::Options opt;
    opt.exact_opt  = ex.value;
    const auto rep = approx::approx_solve(inst, 200, 7, opt);

    std::printf("LP optimum:        %.6f\n", rep.lp.objective);
    std::printf("exact optimum:     %.6f\n", ex.value);
    std::printf("mean rounded cost: %.6f (stdev %.6f)\n", rep.stats.mean_cost, rep.stats.stdev_cost);
    std::printf("mean cost/LP:      %.4f\n", rep.stats.mean_ratio_lp);
    std::printf("best trial cost:   %.6f (committee:", rep.best.cost);
    for (int i : rep.best.committee.members) std::printf(" %d", i);
    std::printf(")\n");
    return 0;
}
