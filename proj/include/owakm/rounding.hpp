#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "owakm/rational.hpp"
#include "owakm/rng.hpp"
#include "owakm/tournament.hpp"

namespace owakm::rounding {

inline bool is_integral(const Rational& v) { return v == 0 || v == 1; }

inline void require_fractional(const Rational& v, const char* what) {
    if (!(v > 0 && v < 1)) throw InputError(std::string(what) + ": value must be strictly inside (0,1)");
}

// Probability that, in one pairwise rounding step on (a, b), it is `a` that
// becomes the integer. Forced by marginal preservation:
//   a + b <  1: a drops to 0 with probability b / (a + b)
//   a + b >= 1: a rises to 1 with probability (1 - b) / (2 - a - b)
inline Rational dr_prob_a_rounded(const Rational& a, const Rational& b) {
    require_fractional(a, "dr_step");
    require_fractional(b, "dr_step");
    const Rational s = a + b;
    if (s < 1) return b / s;
    return (1 - b) / (2 - s);
}

struct DrStep {
    Rational a_after, b_after;
    bool a_rounded = false; // whether `a` is the variable that became integral
};

// One basic dependent-rounding step: the sum is preserved exactly and at
// least one of the two variables becomes 0 or 1.
inline DrStep dr_step(const Rational& a, const Rational& b, Rng& rng) {
    const Rational p = dr_prob_a_rounded(a, b);
    const Rational s = a + b;
    DrStep out;
    out.a_rounded = bernoulli_exact(rng, p);
    if (s < 1) {
        out.a_after = out.a_rounded ? Rational(0) : s;
        out.b_after = out.a_rounded ? s : Rational(0);
    } else {
        out.a_after = out.a_rounded ? Rational(1) : s - 1;
        out.b_after = out.a_rounded ? s - 1 : Rational(1);
    }
    return out;
}

struct TraceEntry {
    int leaf_a = -1, leaf_b = -1;
    double prob_a_rounded = 0.0;
    bool a_rounded        = false;
};

struct RoundingOutcome {
    std::vector<int> bits;
    std::optional<std::vector<TraceEntry>> trace;
};

// Snap a float opening vector to the 1e-6 rational grid and restore an exact
// integer sum by adjusting the largest fractional entries. Rejects vectors
// whose sum is farther than 1e-9 from an integer.
inline std::vector<Rational> snap_to_grid(const std::vector<double>& y, std::int64_t denom = 1'000'000) {
    double sum = 0.0;
    for (double v : y) {
        if (!(v >= -1e-9) || !(v <= 1.0 + 1e-9)) throw InputError("snap_to_grid: entries must lie in [0,1]");
        sum += v;
    }
    const auto target = static_cast<std::int64_t>(std::llround(sum));
    if (std::abs(sum - static_cast<double>(target)) > 1e-9 * static_cast<double>(std::max<std::size_t>(y.size(), 1)))
        throw InputError("snap_to_grid: entries must sum to an integer");

    std::vector<std::int64_t> units(y.size());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto u = static_cast<std::int64_t>(std::llround(y[i] * static_cast<double>(denom)));
        u        = std::max<std::int64_t>(0, std::min(denom, u));
        units[i] = u;
        total += u;
    }
    std::int64_t defect = target * denom - total;
    while (defect != 0) {
        // push the correction into the most interior fractional entry
        std::size_t pick  = y.size();
        std::int64_t best = -1;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const std::int64_t room = defect > 0 ? denom - units[i] : units[i];
            if (room <= 0) continue;
            const std::int64_t interior = std::min(units[i], denom - units[i]);
            if (interior > best) {
                best = interior;
                pick = i;
            }
        }
        if (pick == y.size()) throw InputError("snap_to_grid: cannot rebalance to an integer sum");
        const std::int64_t room = defect > 0 ? denom - units[pick] : units[pick];
        const std::int64_t step = std::min(std::abs(defect), room);
        units[pick] += defect > 0 ? step : -step;
        defect += defect > 0 ? -step : step;
    }

    std::vector<Rational> out;
    out.reserve(y.size());
    for (std::int64_t u : units) out.emplace_back(u, denom);
    return out;
}

namespace detail {

struct Carrier {
    int leaf = -1;
    Rational value;
};

// Post-order tournament resolution. Returns the surviving fractional
// variable of the subtree, if any.
inline std::optional<Carrier> resolve(const TournamentTree& tree, int node_id, std::vector<Rational>& vals,
                                      std::vector<int>& bits, Rng& rng, std::vector<TraceEntry>* trace) {
    const auto& nd = tree.node(node_id);
    if (nd.leaf >= 0) {
        const Rational& v = vals[static_cast<std::size_t>(nd.leaf)];
        if (is_integral(v)) {
            bits[static_cast<std::size_t>(nd.leaf)] = v == 1 ? 1 : 0;
            return std::nullopt;
        }
        return Carrier{nd.leaf, v};
    }
    auto left  = resolve(tree, nd.left, vals, bits, rng, trace);
    auto right = resolve(tree, nd.right, vals, bits, rng, trace);
    if (!left) return right;  // comparing against the empty slot promotes as-is
    if (!right) return left;

    const Rational p = dr_prob_a_rounded(left->value, right->value);
    const DrStep st  = dr_step(left->value, right->value, rng);
    if (trace)
        trace->push_back(TraceEntry{left->leaf, right->leaf, to_double(p), st.a_rounded});

    const Carrier rounded  = st.a_rounded ? *left : *right;
    const Rational rounded_val = st.a_rounded ? st.a_after : st.b_after;
    const Carrier survivor = st.a_rounded ? *right : *left;
    const Rational survivor_val = st.a_rounded ? st.b_after : st.a_after;

    bits[static_cast<std::size_t>(rounded.leaf)] = rounded_val == 1 ? 1 : 0;
    if (is_integral(survivor_val)) {
        bits[static_cast<std::size_t>(survivor.leaf)] = survivor_val == 1 ? 1 : 0;
        return std::nullopt;
    }
    return Carrier{survivor.leaf, survivor_val};
}

} // namespace detail

// Tournament-tree dependent rounding of an exactly rational opening vector.
// Requires an integer sum; preserves it exactly on every draw.
inline RoundingOutcome round_tree_exact(const std::vector<Rational>& y, const TournamentTree& tree, Rng& rng,
                                        bool want_trace = false) {
    if (static_cast<int>(y.size()) != tree.leaf_count())
        throw InputError("round_tree: tree leaf count must match vector length");
    Rational sum = 0;
    for (const auto& v : y) {
        if (v < 0 || v > 1) throw InputError("round_tree: entries must lie in [0,1]");
        sum += v;
    }
    if (denominator(sum) != 1) throw InputError("round_tree: entries must sum to an integer");

    std::vector<Rational> vals = y;
    RoundingOutcome out;
    out.bits.assign(y.size(), 0);
    std::vector<TraceEntry> trace;
    auto carrier = detail::resolve(tree, tree.root(), vals, out.bits, rng, want_trace ? &trace : nullptr);
    if (carrier) throw SolverError("round_tree: fractional survivor at the root despite integral sum");

    BigInt opened = 0;
    for (int b : out.bits) opened += b;
    if (Rational(opened) != sum) throw SolverError("round_tree: sum preservation violated");
    if (want_trace) out.trace = std::move(trace);
    return out;
}

// Float front end: snaps to the 1e-6 grid first (LP output is rational but
// arrives as doubles).
inline RoundingOutcome round_tree(const std::vector<double>& y, const TournamentTree& tree, Rng& rng,
                                  bool want_trace = false) {
    return round_tree_exact(snap_to_grid(y), tree, rng, want_trace);
}

} // namespace owakm::rounding
