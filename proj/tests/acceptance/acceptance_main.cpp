// Acceptance suite: nine end-to-end criteria, each printing one PASS/FAIL
// line (with diagnostics on failure) and enforcing its own runtime budget.
// Run with no arguments for all criteria, or with a criterion number.

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "owakm/approx.hpp"
#include "owakm/ballots.hpp"
#include "owakm/bound.hpp"
#include "owakm/distribution.hpp"
#include "owakm/exact.hpp"
#include "owakm/gen.hpp"
#include "owakm/lp.hpp"
#include "owakm/reduce.hpp"
#include "owakm/rounding.hpp"

#ifndef OWAKM_CLI_PATH
#define OWAKM_CLI_PATH ""
#endif

namespace {

using namespace owakm;
namespace fs = std::filesystem;

struct Ctx {
    std::ostringstream log;
    bool ok = true;

    template <class... Args>
    void fail(Args&&... args) {
        ok = false;
        (log << ... << args) << "\n";
    }
    template <class... Args>
    void note(Args&&... args) {
        (log << ... << args) << "\n";
    }
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("owakm_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto out     = scratch_dir() / ("cli" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(OWAKM_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int rc          = std::system(cmd.c_str());
    CmdResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    res.out = ss.str();
    return res;
}

// ---------------------------------------------------------------- C1
void c1_bound_table(Ctx& c) {
    const auto cli = run_cli("bound --lmax 88");
    if (cli.exit_code != 0) {
        c.fail("bound --lmax 88 exited with ", cli.exit_code);
        return;
    }
    // parse the emitted table
    std::vector<double> table(89, 0.0);
    std::istringstream ss(cli.out);
    std::string line;
    std::getline(ss, line);
    if (line != "ell,ratio_upper") c.fail("unexpected CSV header: ", line);
    int rows = 0;
    while (std::getline(ss, line)) {
        const auto comma = line.find(',');
        const int ell    = std::stoi(line.substr(0, comma));
        table[static_cast<std::size_t>(ell)] = std::stod(line.substr(comma + 1));
        ++rows;
    }
    if (rows != 88) c.fail("expected 88 rows, got ", rows);

    const std::array<std::pair<int, double>, 12> reference{{{1, 1.0},
                                                            {2, 1.90},
                                                            {3, 2.32},
                                                            {4, 2.3589},
                                                            {5, 2.26},
                                                            {6, 2.11},
                                                            {7, 1.98},
                                                            {8, 1.86},
                                                            {9, 1.78},
                                                            {10, 1.70},
                                                            {11, 1.65},
                                                            {12, 1.60}}};
    for (const auto& [ell, ref] : reference) {
        const double got = table[static_cast<std::size_t>(ell)];
        if (std::abs(got - ref) > 5e-3)
            c.fail("  row ell=", ell, ": computed ", got, ", reference ", ref, ", |diff| ",
                   std::abs(got - ref), " > 5e-3");
    }
    double mx = 0.0;
    int arg   = 0;
    for (int ell = 1; ell <= 88; ++ell)
        if (table[static_cast<std::size_t>(ell)] > mx) {
            mx  = table[static_cast<std::size_t>(ell)];
            arg = ell;
        }
    if (arg != 4) c.fail("  global max attained at ell=", arg, ", expected 4");
    if (std::abs(mx - 2.3589) > 1e-4)
        c.fail("  global max ", mx, " outside 2.3589 +/- 1e-4 (|diff| ", std::abs(mx - 2.3589), ")");
}

// ---------------------------------------------------------------- C2
void c2_tail_bound(Ctx& c) {
    for (int ell = 89; ell <= 1000; ++ell) {
        const double tb = bound::tail_bound(ell);
        if (!(tb < 2.3551)) {
            c.fail("  tail_bound(", ell, ") = ", tb, " not < 2.3551");
            break;
        }
        if (ell <= 200 && tb < bound::ratio_upper(ell)) {
            c.fail("  tail_bound(", ell, ") = ", tb, " < ratio_upper = ", bound::ratio_upper(ell));
            break;
        }
    }
}

// ---------------------------------------------------------------- C3
rounding::TournamentTree random_tree(Rng& rng, const std::vector<int>& vars) {
    rounding::TournamentTree t;
    auto build = [&](auto&& self, std::vector<int> vs) -> int {
        if (vs.size() == 1) return t.add_leaf(vs[0]);
        const std::size_t cut = 1 + static_cast<std::size_t>(uniform_below(rng, vs.size() - 1));
        std::vector<int> left(vs.begin(), vs.begin() + static_cast<long>(cut));
        std::vector<int> right(vs.begin() + static_cast<long>(cut), vs.end());
        const int l = self(self, std::move(left));
        const int r = self(self, std::move(right));
        return t.add_internal(l, r);
    };
    t.set_root(build(build, vars));
    t.finalize(static_cast<int>(vars.size()));
    return t;
}

std::vector<Rational> random_rational_y(Rng& rng, int m, int denom) {
    for (;;) {
        std::vector<long long> units(static_cast<std::size_t>(m));
        long long total = 0;
        for (auto& u : units) {
            u = static_cast<long long>(uniform_below(rng, static_cast<std::uint64_t>(denom) + 1));
            total += u;
        }
        long long target = (total + denom / 2) / denom * denom;
        if (target == 0) target = denom;
        if (target > static_cast<long long>(m) * denom) target = static_cast<long long>(m) * denom;
        long long defect = target - total;
        for (std::size_t i = 0; i < units.size() && defect != 0; ++i) {
            const long long room = defect > 0 ? denom - units[i] : units[i];
            const long long step = std::min(std::abs(defect), room);
            units[i] += defect > 0 ? step : -step;
            defect += defect > 0 ? -step : step;
        }
        if (defect != 0) continue;
        std::vector<Rational> y;
        y.reserve(units.size());
        for (long long u : units) y.emplace_back(u, denom);
        return y;
    }
}

void c3_exact_certification(Ctx& c) {
    Rng rng(31337);
    const int vectors = 51;
    long long bna_pairs = 0;
    for (int v = 0; v < vectors; ++v) {
        const int m      = 5 + v % 4; // 5..8
        const int denoms[] = {4, 6, 8, 10, 12};
        const auto y     = random_rational_y(rng, m, denoms[v % 5]);
        std::vector<int> vars(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) vars[static_cast<std::size_t>(i)] = i;
        const auto tree = v % 3 == 0   ? rounding::TournamentTree::balanced(m)
                          : v % 3 == 1 ? rounding::TournamentTree::linear(m)
                                       : random_tree(rng, vars);
        const auto dist = rounding::enumerate_distribution(y, tree);
        for (int i = 0; i < m; ++i)
            if (dist.marginal(i) != y[static_cast<std::size_t>(i)]) {
                c.fail("  vector ", v, ": marginal ", i, " off");
                return;
            }
        Rational total = 0;
        for (const auto& [mask, p] : dist.pmf) {
            if (std::popcount(mask) != dist.k) {
                c.fail("  vector ", v, ": sum preservation violated in the support");
                return;
            }
            total += p;
        }
        if (total != 1) {
            c.fail("  vector ", v, ": probabilities sum to ", to_double(total));
            return;
        }
        if (!rounding::check_nc_all(dist)) {
            c.fail("  vector ", v, ": negative correlation violated");
            return;
        }
        const auto scan = rounding::check_bna_all(dist, 5);
        bna_pairs += static_cast<long long>(scan.pairs_checked);
        if (!scan.all_hold) {
            c.fail("  vector ", v, ": BNA violated");
            return;
        }
    }
    c.note("  ", vectors, " vectors certified; ", bna_pairs, " monotone function pairs checked");
}

// ---------------------------------------------------------------- C4
void c4_adversary(Ctx& c) {
    const auto dist = rounding::adaptive_adversary_distribution();
    Rational pr_alpha = 0, pr_beta = 0, pr_both = 0;
    for (const auto& [mask, p] : dist.pmf) {
        const bool alpha = (mask >> 1 & 1) + (mask >> 2 & 1) + (mask >> 3 & 1) >= 2;
        const bool beta  = (mask >> 4 & 1) != 0;
        if (alpha) pr_alpha += p;
        if (beta) pr_beta += p;
        if (alpha && beta) pr_both += p;
    }
    if (pr_alpha != Rational(1, 2)) c.fail("  Pr[alpha] = ", to_double(pr_alpha), ", expected exactly 1/2");
    if (pr_beta != Rational(1, 2)) c.fail("  Pr[beta] = ", to_double(pr_beta), ", expected exactly 1/2");
    if (pr_both != Rational(5, 16)) c.fail("  Pr[alpha and beta] = ", to_double(pr_both), ", expected exactly 5/16");
    if (rounding::check_bna(dist, {1, 2, 3}, {4}, 0b11101000, 0b10))
        c.fail("  BNA unexpectedly holds for the adversary witness");
    if (!rounding::check_nc_all(dist)) c.fail("  NC should hold on the adversary distribution");
}

// ---------------------------------------------------------------- C5
void c5_end_to_end(Ctx& c) {
    const int instances = 100;
    int under_1_5       = 0;
    for (int i = 0; i < instances; ++i) {
        const int k     = 3 + i % 3;
        const auto inst = gen::gen_approval(10, 15, k, 0.5, 9000 + static_cast<std::uint64_t>(i));
        approx::Options opt;
        opt.keep_trials = true;
        const auto rep  = approx::approx_solve(inst, 200, 500 + static_cast<std::uint64_t>(i), opt);
        if (rep.stats.lp_degenerate) {
            c.fail("  instance ", i, ": LP optimum is zero (degenerate ratio)");
            continue;
        }
        const double mean = rep.stats.mean_ratio_lp;
        if (!(mean <= 2.3589)) c.fail("  instance ", i, ": mean ratio ", mean, " exceeds 2.3589");
        if (mean <= 1.5) ++under_1_5;

        const auto ex = exact::solve(inst);
        if (rep.best.cost < ex.value - 1e-9)
            c.fail("  instance ", i, ": best trial ", rep.best.cost, " beats the exact optimum ", ex.value);
        if (rep.lp.objective > ex.value + 1e-9)
            c.fail("  instance ", i, ": LP ", rep.lp.objective, " above the exact optimum ", ex.value);
    }
    c.note("  ", under_1_5, "/", instances, " instances with mean ratio <= 1.5");
    if (under_1_5 < 95) c.fail("  only ", under_1_5, " instances under 1.5, need >= 95");
}

// ---------------------------------------------------------------- C6
WeightVector c6_weights(Rng& rng, int k, int which) {
    switch (which % 4) {
        case 0: return WeightVector::harmonic(k);
        case 1: return WeightVector::geometric(k, Rational(1, 2));
        case 2: return WeightVector::top_r(k, 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k))));
        default: {
            std::vector<Rational> vals;
            Rational cur(1 + static_cast<long long>(uniform_below(rng, 4)), 1);
            for (int i = 0; i < k; ++i) {
                vals.push_back(cur);
                const Rational drop(static_cast<long long>(uniform_below(rng, 3)),
                                    1 + static_cast<long long>(uniform_below(rng, 6)));
                cur = cur - (drop > cur ? cur : drop);
                if (cur < 0) cur = 0;
            }
            if (vals[0] == 0) vals[0] = 1;
            return WeightVector::custom_rational(std::move(vals));
        }
    }
}

void c6_reduction_identity(Ctx& c) {
    Rng rng(606);
    for (int i = 0; i < 50; ++i) {
        const int m = 4 + static_cast<int>(uniform_below(rng, 3));
        const int n = 2 + static_cast<int>(uniform_below(rng, 3));
        const int k = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::min(3, m - 1))));
        std::vector<std::vector<double>> costs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m)));
        for (auto& row : costs)
            for (auto& v : row) v = static_cast<double>(uniform_below(rng, 64)) / 4.0; // dyadic
        const Instance inst(m, n, k, costs, c6_weights(rng, k, i));

        const auto idrep = reduce::verify_cost_identity(inst, 100, 4242 + static_cast<std::uint64_t>(i));
        if (!idrep.ok) {
            c.fail("  instance ", i, ": identity deviation ", to_double(idrep.max_deviation));
            return;
        }
        const auto ft   = reduce::reduce_owa_to_ft(inst);
        const auto owa  = exact::solve_exact(inst);
        const auto ftr  = exact::solve_ft(ft);
        if (ftr.value != Rational(ft.Q) * owa.value) {
            c.fail("  instance ", i, ": FT optimum != Q * OWA optimum");
            return;
        }
    }
}

// ---------------------------------------------------------------- C7
void c7_hardness_instances(Ctx& c) {
    const std::vector<std::array<int, 3>> planted{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {1, 2, 3}, {4, 6, 8}};
    const auto x = gen::gen_x3c(9, planted, 0.5);
    const auto r = exact::solve_exact(x.inst);
    if (r.value != Rational(0)) c.fail("  planted cover: optimum ", to_double(r.value), ", expected 0");

    const std::vector<std::array<int, 3>> uncoverable{{0, 1, 2}, {2, 3, 4}}; // element 5 uncovered
    const auto xu = gen::gen_x3c(6, uncoverable, 0.5);
    const auto ru = exact::solve_exact(xu.inst);
    if (ru.value < Rational(1)) c.fail("  uncoverable system: optimum ", to_double(ru.value), ", expected >= 1");
}

// ---------------------------------------------------------------- C8
void c8_proportionality(Ctx& c) {
    const auto inst = gen::gen_cities({4, 2}, 3);
    const auto res  = exact::solve(inst);
    int city1 = 0, city2 = 0;
    for (int i : res.committee.members) (i < 3 ? city1 : city2)++;
    if (city1 != 2 || city2 != 1)
        c.fail("  city split (", city1, ",", city2, "), expected (2,1)");

    // the same structure as approval ballots through the PAV pipeline
    const auto ballots = scratch_dir() / "bloc_ballots.txt";
    {
        std::ofstream b(ballots);
        for (int i = 0; i < 4; ++i) b << "0 1 2\n";
        for (int i = 0; i < 2; ++i) b << "3 4 5\n";
    }
    const auto cli = run_cli("pav --ballots " + ballots.string() + " --k 3 --trials 100 --seed 11");
    if (cli.exit_code != 0) {
        c.fail("  pav command exited with ", cli.exit_code);
        return;
    }
    std::istringstream ss(cli.out);
    std::string line, exact_line;
    while (std::getline(ss, line))
        if (line.rfind("exact_committee: ", 0) == 0) exact_line = line.substr(17);
    if (exact_line.empty()) {
        c.fail("  pav output carries no exact committee");
        return;
    }
    int big = 0, small = 0;
    std::istringstream cs(exact_line);
    int idx;
    while (cs >> idx) (idx < 3 ? big : small)++;
    if (big != 2 || small != 1) c.fail("  pav bloc split (", big, ",", small, "), expected (2,1)");
}

// ---------------------------------------------------------------- C9
void c9_lp_cross_validation(Ctx& c) {
    Rng rng(909);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int m = 6 + static_cast<int>(uniform_below(rng, 5));
        const int n = 6 + static_cast<int>(uniform_below(rng, 7));
        const int k = 2 + static_cast<int>(uniform_below(rng, 4));
        const auto inst = gen::gen_random(m, n, std::min(k, m), i % 2 ? gen::RandomMode::metric : gen::RandomMode::nonmetric,
                                          7000 + static_cast<std::uint64_t>(i));
        const auto sol = lp::solve_lp(lp::build_lp(inst));
        for (int j = 0; j < inst.n; ++j) {
            const double wf   = lp::waterfill_client_cost(inst, sol.y, j);
            const double diff = std::abs(sol.per_client_lp_cost[static_cast<std::size_t>(j)] - wf);
            worst             = std::max(worst, diff);
            if (diff > 1e-6) {
                c.fail("  instance ", i, " client ", j, ": |simplex - waterfill| = ", diff);
                return;
            }
        }
    }
    c.note("  worst per-client deviation ", worst);
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Ctx&)> fn;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> cs{
        {1, "bound table reproduction", 1.0, c1_bound_table},
        {2, "analytic tail bound", 1.0, c2_tail_bound},
        {3, "exact rounding certification (marginals/sum/NC/BNA)", 120.0, c3_exact_certification},
        {4, "adaptive-adversary counterexample", 5.0, c4_adversary},
        {5, "end-to-end expectation guarantee", 600.0, c5_end_to_end},
        {6, "fault-tolerant reduction identity", 60.0, c6_reduction_identity},
        {7, "hardness-instance soundness", 30.0, c7_hardness_instances},
        {8, "proportionality on city blocks and PAV blocs", 5.0, c8_proportionality},
        {9, "per-client LP cross-validation", 120.0, c9_lp_cross_validation},
    };
    return cs;
}

} // namespace

int main(int argc, char** argv) {
    int which = 0;
    if (argc > 1) which = std::atoi(argv[1]);

    int failures = 0;
    for (const auto& crit : criteria()) {
        if (which != 0 && crit.id != which) continue;
        Ctx ctx;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(ctx);
        } catch (const std::exception& e) {
            ctx.fail("  exception: ", e.what());
        }
        const double secs =
            std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= crit.budget_seconds)
            ctx.fail("  runtime ", secs, " s exceeded the ", crit.budget_seconds, " s budget");
        std::cout << (ctx.ok ? "[PASS] " : "[FAIL] ") << "C" << crit.id << " " << crit.name << " ("
                  << std::fixed << std::setprecision(2) << secs << " s)\n"
                  << std::defaultfloat << std::setprecision(6);
        const std::string log = ctx.log.str();
        if (!log.empty()) std::cout << log;
        if (!ctx.ok) ++failures;
    }
    if (which == 0)
        std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures;
}
