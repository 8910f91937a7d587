#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "owakm/instance.hpp"
#include "owakm/lp.hpp"
#include "owakm/owa.hpp"
#include "owakm/rng.hpp"
#include "owakm/rounding.hpp"

namespace owakm::approx {

struct TrialReport {
    Committee committee;
    double cost = 0.0;
    std::vector<double> per_client_cost;
    std::uint64_t seed  = 0;
    double lp_objective = 0.0;
    double ratio_vs_lp  = std::numeric_limits<double>::quiet_NaN(); // NaN when the LP optimum is zero
    std::optional<double> ratio_vs_opt;
};

struct Options {
    int jobs = 1;
    bool keep_trials = true;
    std::optional<double> exact_opt; // enables ratio_vs_opt when the exact oracle was feasible
    std::optional<rounding::TournamentTree> tree; // default: balanced over the facilities
    lp::SimplexOptions lp_options;
    std::uint64_t lp_capacity = 2'000'000;
};

struct Stats {
    double mean_cost = 0.0, stdev_cost = 0.0;
    double mean_ratio_lp = std::numeric_limits<double>::quiet_NaN();
    double stdev_ratio_lp = std::numeric_limits<double>::quiet_NaN();
    bool lp_degenerate = false; // LP optimum is zero, ratios are undefined
};

struct SolveReport {
    lp::FractionalSolution lp;
    std::vector<Rational> snapped_y;
    std::vector<TrialReport> trials; // populated when keep_trials
    TrialReport best;
    Stats stats;
    int trial_count = 0;
};

// The full pipeline: solve the LP relaxation once, snap y* to the rational
// grid, then independently per trial run tournament-tree rounding and assign
// clients greedily (the OWA cost of the rounded committee is already the
// optimal assignment). Trials are seeded independently, so order and thread
// count cannot change the results.
inline SolveReport approx_solve(const Instance& inst, int trials, std::uint64_t seed, Options opt = {}) {
    if (trials < 1) throw InputError("approx_solve: need at least one trial");
    SolveReport rep;
    rep.trial_count = trials;

    const auto prog = lp::build_lp(inst, opt.lp_capacity);
    rep.lp          = lp::solve_lp(prog, opt.lp_options);
    rep.snapped_y   = rounding::snap_to_grid(rep.lp.y);
    const rounding::TournamentTree tree =
        opt.tree ? *opt.tree : rounding::TournamentTree::balanced(inst.m);

    const double lp_obj  = rep.lp.objective;
    const bool degenerate = !(lp_obj > 1e-12);

    std::vector<TrialReport> all(static_cast<std::size_t>(trials));
    auto run_trial = [&](int t) {
        TrialReport tr;
        tr.seed = trial_seed(seed, static_cast<std::uint64_t>(t));
        Rng rng(tr.seed);
        const auto outcome = rounding::round_tree_exact(rep.snapped_y, tree, rng);
        tr.committee       = Committee::from_bits(outcome.bits);
        tr.per_client_cost.resize(static_cast<std::size_t>(inst.n));
        tr.cost = 0.0;
        for (int j = 0; j < inst.n; ++j) {
            const double cj = owa_client_cost(inst, tr.committee, j);
            tr.per_client_cost[static_cast<std::size_t>(j)] = cj;
            tr.cost += cj;
        }
        tr.lp_objective = lp_obj;
        if (!degenerate) tr.ratio_vs_lp = tr.cost / lp_obj;
        if (opt.exact_opt && *opt.exact_opt > 0) tr.ratio_vs_opt = tr.cost / *opt.exact_opt;
        if (tr.cost < lp_obj - 1e-9 * (1.0 + std::abs(lp_obj)))
            throw SolverError("approx_solve: trial cost fell below the LP lower bound");
        all[static_cast<std::size_t>(t)] = std::move(tr);
    };

    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || trials < 2 * jobs) {
        for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                for (int t = w; t < trials; t += jobs) run_trial(t);
            });
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sum2 = 0.0;
    int best_idx = 0;
    for (int t = 0; t < trials; ++t) {
        const double c = all[static_cast<std::size_t>(t)].cost;
        sum += c;
        sum2 += c * c;
        if (c < all[static_cast<std::size_t>(best_idx)].cost) best_idx = t;
    }
    rep.stats.mean_cost = sum / trials;
    rep.stats.stdev_cost =
        trials > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / trials) / (trials - 1))) : 0.0;
    rep.stats.lp_degenerate = degenerate;
    if (!degenerate) {
        rep.stats.mean_ratio_lp  = rep.stats.mean_cost / lp_obj;
        rep.stats.stdev_ratio_lp = rep.stats.stdev_cost / lp_obj;
    }
    rep.best = all[static_cast<std::size_t>(best_idx)];
    if (opt.keep_trials) rep.trials = std::move(all);
    return rep;
}

struct RatioEstimate {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stdev = std::numeric_limits<double>::quiet_NaN();
    double ci_lo = std::numeric_limits<double>::quiet_NaN();
    double ci_hi = std::numeric_limits<double>::quiet_NaN();
    int trials = 0;
    bool degenerate = false; // LP optimum was zero; no ratio is defined
};

// Monte Carlo estimate of cost / OPT_LP with a normal-approximation interval.
inline RatioEstimate estimate_expected_ratio(const Instance& inst, int trials, std::uint64_t seed,
                                             Options opt = {}) {
    opt.keep_trials = false;
    const auto rep  = approx_solve(inst, trials, seed, opt);
    RatioEstimate est;
    est.trials     = trials;
    est.degenerate = rep.stats.lp_degenerate;
    if (est.degenerate) return est;
    est.mean  = rep.stats.mean_ratio_lp;
    est.stdev = rep.stats.stdev_ratio_lp;
    const double half = 1.96 * est.stdev / std::sqrt(static_cast<double>(trials));
    est.ci_lo = est.mean - half;
    est.ci_hi = est.mean + half;
    return est;
}

} // namespace owakm::approx
