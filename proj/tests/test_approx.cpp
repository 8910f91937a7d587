#include <doctest.h>

#include <cmath>

#include "owakm/approx.hpp"
#include "owakm/exact.hpp"
#include "owakm/gen.hpp"
#include "test_util.hpp"

using namespace owakm;

TEST_CASE("an integral LP optimum makes every trial deterministic") {
    // with k = m the opening constraint forces y = 1 everywhere
    Rng rng(1);
    auto inst      = testutil::random_instance(rng, 4, 5, 4);
    const auto rep = approx::approx_solve(inst, 20, 7);
    CHECK(rep.stats.stdev_cost == doctest::Approx(0.0));
    CHECK(rep.stats.mean_ratio_lp == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& t : rep.trials) CHECK(t.committee == Committee({0, 1, 2, 3}));

    const auto est = approx::estimate_expected_ratio(inst, 20, 7);
    CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.stdev == doctest::Approx(0.0));
}

TEST_CASE("fixed seeds reproduce the full trial sequence bit for bit") {
    Rng rng(2);
    auto inst = gen::gen_approval(8, 10, 3, 0.5, 11);
    const auto a = approx::approx_solve(inst, 30, 99);
    const auto b = approx::approx_solve(inst, 30, 99);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t t = 0; t < a.trials.size(); ++t) {
        CHECK(a.trials[t].committee == b.trials[t].committee);
        CHECK(a.trials[t].cost == b.trials[t].cost);
        CHECK(a.trials[t].seed == b.trials[t].seed);
    }
    // a different seed changes the sequence
    const auto c = approx::approx_solve(inst, 30, 100);
    bool any_diff = false;
    for (std::size_t t = 0; t < a.trials.size(); ++t)
        if (!(a.trials[t].committee == c.trials[t].committee)) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("thread count does not change the results") {
    Rng rng(3);
    auto inst = gen::gen_approval(9, 8, 4, 0.5, 21);
    approx::Options serial, parallel;
    parallel.jobs = 4;
    const auto a = approx::approx_solve(inst, 40, 5, serial);
    const auto b = approx::approx_solve(inst, 40, 5, parallel);
    for (std::size_t t = 0; t < a.trials.size(); ++t) {
        CHECK(a.trials[t].committee == b.trials[t].committee);
        CHECK(a.trials[t].cost == b.trials[t].cost);
    }
}

TEST_CASE("every trial opens exactly k facilities and clears the LP floor") {
    Rng rng(4);
    auto inst = testutil::random_instance(rng, 9, 7, 4);
    const auto rep = approx::approx_solve(inst, 50, 13);
    for (const auto& t : rep.trials) {
        CHECK(t.committee.size() == 4);
        CHECK(t.cost >= rep.lp.objective - 1e-9);
        CHECK(t.ratio_vs_lp >= 1.0 - 1e-9);
    }
    CHECK(rep.best.cost <= rep.stats.mean_cost + 1e-12);
}

TEST_CASE("top-1 weights make each trial cost the k-median cost of its committee") {
    auto inst = gen::gen_random(8, 6, 3, gen::RandomMode::nonmetric, 31, WeightVector::top_r(3, 1));
    const auto rep = approx::approx_solve(inst, 25, 17);
    for (const auto& t : rep.trials) {
        double kmed = 0.0;
        for (int j = 0; j < inst.n; ++j) {
            double mn = std::numeric_limits<double>::infinity();
            for (int i : t.committee.members) mn = std::min(mn, inst.cost(j, i));
            kmed += mn;
        }
        CHECK(t.cost == doctest::Approx(kmed));
    }
}

TEST_CASE("mean ratios stay under the guarantee on random approval instances") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto inst      = gen::gen_approval(8, 10, 3, 0.5, seed * 101);
        const auto est = approx::estimate_expected_ratio(inst, 100, seed);
        if (est.degenerate) continue;
        CHECK(est.mean <= 2.3589);
        const auto ex = exact::solve(inst);
        const auto rep = approx::approx_solve(inst, 100, seed);
        CHECK(rep.best.cost >= ex.value - 1e-9);
        CHECK(rep.lp.objective <= ex.value + 1e-9);
    }
}

TEST_CASE("a zero-cost LP is reported as degenerate") {
    // one facility free for everyone, k = 1
    Instance inst(3, 4, 1,
                  {{0.0, 1.0, 1.0}, {0.0, 1.0, 0.5}, {0.0, 0.2, 1.0}, {0.0, 1.0, 1.0}},
                  WeightVector::harmonic(1));
    const auto est = approx::estimate_expected_ratio(inst, 10, 3);
    CHECK(est.degenerate);
    const auto rep = approx::approx_solve(inst, 10, 3);
    CHECK(rep.stats.lp_degenerate);
    CHECK(std::isnan(rep.trials[0].ratio_vs_lp));
}

TEST_CASE("city instances round to the proportional optimum") {
    const auto inst = gen::gen_cities({4, 2}, 3);
    const auto ex   = exact::solve(inst);
    const auto est  = approx::estimate_expected_ratio(inst, 50, 5);
    CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-9));
    const auto rep = approx::approx_solve(inst, 50, 5);
    CHECK(rep.lp.objective == doctest::Approx(ex.value).epsilon(1e-9));
}

TEST_CASE("linear and custom trees are accepted") {
    Rng rng(6);
    auto inst = gen::gen_approval(6, 6, 2, 0.5, 3);
    approx::Options opt;
    opt.tree = rounding::TournamentTree::linear(6);
    const auto rep = approx::approx_solve(inst, 10, 1, opt);
    for (const auto& t : rep.trials) CHECK(t.committee.size() == 2);
}
