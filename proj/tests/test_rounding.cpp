#include <doctest.h>

#include <cmath>
#include <set>

#include "owakm/distribution.hpp"
#include "owakm/rounding.hpp"
#include "test_util.hpp"

using namespace owakm;
using namespace owakm::rounding;

TEST_CASE("pairwise step branch probabilities match the worked cases") {
    CHECK(dr_prob_a_rounded(Rational(2, 5), Rational(4, 5)) == Rational(1, 4));
    CHECK(dr_prob_a_rounded(Rational(3, 10), Rational(1, 5)) == Rational(2, 5));
    CHECK(dr_prob_a_rounded(Rational(1, 2), Rational(1, 2)) == Rational(1, 2));
}

TEST_CASE("pairwise step preserves sums and marginals exactly") {
    Rng rng(100);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = Rational(1 + static_cast<long long>(uniform_below(rng, 18)), 20);
        const auto b = Rational(1 + static_cast<long long>(uniform_below(rng, 18)), 20);
        const Rational p = dr_prob_a_rounded(a, b);
        // expectation over both branches reproduces each input
        Rational ea, eb;
        if (a + b < 1) {
            ea = p * 0 + (1 - p) * (a + b);
            eb = p * (a + b) + (1 - p) * 0;
        } else {
            ea = p * 1 + (1 - p) * (a + b - 1);
            eb = p * (a + b - 1) + (1 - p) * 1;
        }
        CHECK(ea == a);
        CHECK(eb == b);

        const auto st = dr_step(a, b, rng);
        CHECK(st.a_after + st.b_after == a + b);
        CHECK((is_integral(st.a_after) || is_integral(st.b_after)));
    }
    Rng rng2(5);
    CHECK_THROWS_AS(dr_step(Rational(1), Rational(1, 2), rng2), InputError);
    CHECK_THROWS_AS(dr_step(Rational(1, 2), Rational(0), rng2), InputError);
}

TEST_CASE("snap to grid produces exact small-denominator rationals") {
    const auto snapped = snap_to_grid({0.4, 0.8, 0.8});
    CHECK(snapped[0] == Rational(2, 5));
    CHECK(snapped[1] == Rational(4, 5));
    CHECK(snapped[2] == Rational(4, 5));
    Rational sum = 0;
    for (const auto& v : snapped) sum += v;
    CHECK(sum == Rational(2));

    // slight float noise is absorbed into an exact integer sum
    const auto noisy = snap_to_grid({0.5 + 2e-10, 0.5 - 1e-10, 0.5, 0.5 - 1e-10});
    Rational s2 = 0;
    for (const auto& v : noisy) s2 += v;
    CHECK(s2 == Rational(2));

    CHECK_THROWS_AS(snap_to_grid({0.4, 0.4}), InputError);
    CHECK_THROWS_AS(snap_to_grid({1.5, 0.5}), InputError);
}

TEST_CASE("integral vectors round to themselves") {
    Rng rng(7);
    const std::vector<double> y{1.0, 0.0, 1.0, 0.0, 0.0, 1.0};
    for (int rep = 0; rep < 10; ++rep) {
        const auto out = round_tree(y, TournamentTree::balanced(6), rng);
        CHECK(out.bits == std::vector<int>{1, 0, 1, 0, 0, 1});
    }
}

TEST_CASE("tree shapes validate their leaves") {
    CHECK(TournamentTree::balanced(6).leaf_count() == 6);
    CHECK(TournamentTree::linear(5).leaf_count() == 5);
    TournamentTree bad;
    const int l0 = bad.add_leaf(0);
    const int l1 = bad.add_leaf(0); // duplicate variable
    bad.set_root(bad.add_internal(l0, l1));
    CHECK_THROWS_AS(bad.finalize(2), InputError);
}

namespace {

// The three-level shape ((0,1),(2,3)) | (4,5) used by the worked rounding run.
TournamentTree figure_tree() {
    TournamentTree t;
    const int a  = t.add_leaf(0);
    const int b  = t.add_leaf(1);
    const int c  = t.add_leaf(2);
    const int d  = t.add_leaf(3);
    const int e  = t.add_leaf(4);
    const int f  = t.add_leaf(5);
    const int ab = t.add_internal(a, b);
    const int cd = t.add_internal(c, d);
    const int ef = t.add_internal(e, f);
    t.set_root(t.add_internal(t.add_internal(ab, cd), ef));
    t.finalize(6);
    return t;
}

} // namespace

TEST_CASE("the worked six-leaf run is a reachable outcome, and sampling matches the support") {
    const std::vector<double> yd{0.7, 0.5, 0.5, 0.5, 0.2, 0.6};
    const auto y    = snap_to_grid(yd);
    const auto tree = figure_tree();
    const auto dist = enumerate_distribution(y, tree);

    // outcome with variables 2, 3 and 6 (1-based) opened
    const std::uint32_t target = (1u << 1) | (1u << 2) | (1u << 5);
    CHECK(dist.pr(target) > 0);
    CHECK(dist.k == 3);

    // sampled outcomes agree with the enumerated support
    std::set<std::uint32_t> support;
    for (const auto& [mask, p] : dist.pmf) support.insert(mask);
    std::set<std::uint32_t> seen;
    Rng rng(2025);
    for (int s = 0; s < 20000; ++s) {
        const auto out = round_tree_exact(y, tree, rng);
        std::uint32_t mask = 0;
        int count          = 0;
        for (int i = 0; i < 6; ++i)
            if (out.bits[static_cast<std::size_t>(i)]) {
                mask |= 1u << i;
                ++count;
            }
        CHECK(count == 3); // sum preservation on every draw
        CHECK(support.count(mask) == 1);
        seen.insert(mask);
    }
    CHECK(seen == support);
}

TEST_CASE("marginals concentrate at y over many draws") {
    const int m = 8, samples = 100000;
    const std::vector<double> y(8, 0.5);
    const auto snapped = snap_to_grid(y);
    const auto tree    = TournamentTree::balanced(m);
    std::vector<int> counts(static_cast<std::size_t>(m), 0);
    Rng rng(99);
    for (int s = 0; s < samples; ++s) {
        const auto out = round_tree_exact(snapped, tree, rng);
        for (int i = 0; i < m; ++i) counts[static_cast<std::size_t>(i)] += out.bits[static_cast<std::size_t>(i)];
    }
    const double sigma = std::sqrt(0.25 * samples);
    for (int i = 0; i < m; ++i)
        CHECK(std::abs(counts[static_cast<std::size_t>(i)] - 0.5 * samples) <= 3.0 * sigma);
}

TEST_CASE("marginal frequencies track fractional vectors within four sigma") {
    Rng rng(123);
    const auto y = testutil::random_rational_y(rng, 7, 10);
    const auto tree = TournamentTree::linear(7);
    const int samples = 40000;
    std::vector<int> counts(7, 0);
    for (int s = 0; s < samples; ++s) {
        const auto out = round_tree_exact(y, tree, rng);
        for (int i = 0; i < 7; ++i) counts[static_cast<std::size_t>(i)] += out.bits[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < 7; ++i) {
        const double p     = to_double(y[static_cast<std::size_t>(i)]);
        const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) * samples);
        CHECK(std::abs(counts[static_cast<std::size_t>(i)] - p * samples) <= 4.0 * sigma + 1e-9);
    }
}

TEST_CASE("trace records the pairing decisions") {
    Rng rng(1);
    const auto y   = snap_to_grid({0.5, 0.5, 0.5, 0.5});
    const auto out = round_tree_exact(y, TournamentTree::balanced(4), rng, true);
    REQUIRE(out.trace.has_value());
    CHECK_FALSE(out.trace->empty());
    for (const auto& e : *out.trace) {
        CHECK(e.leaf_a >= 0);
        CHECK(e.leaf_b >= 0);
        CHECK(e.prob_a_rounded > 0.0);
        CHECK(e.prob_a_rounded < 1.0);
    }
}

TEST_CASE("non-integral sums are rejected") {
    Rng rng(2);
    const std::vector<Rational> y{Rational(1, 2), Rational(1, 3)};
    CHECK_THROWS_AS(round_tree_exact(y, TournamentTree::balanced(2), rng), InputError);
}
