#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "owakm/instance.hpp"
#include "owakm/owa.hpp"
#include "owakm/rng.hpp"

namespace owakm::reduce {

// Fault-tolerant k-median client: connects to its `requirement` nearest open
// facilities, weighted by an exact (possibly huge) multiplicity. Multiplicities
// stay in the compact encoding; clones are never materialized.
struct FTClient {
    std::vector<double> costs;
    int requirement = 1;
    BigInt multiplicity{1};
};

struct FTInstance {
    int m = 0;
    int k = 0;
    std::vector<FTClient> clients;
    BigInt Q{1}; // product of the canonical weight denominators

    void validate() const {
        if (m < 1 || k < 1 || k > m) throw InputError("FT instance requires 1 <= k <= m");
        for (const auto& c : clients) {
            if (static_cast<int>(c.costs.size()) != m) throw InputError("FT client cost row has wrong length");
            if (c.requirement < 1 || c.requirement > k) throw InputError("FT requirement must lie in [1, k]");
            if (c.multiplicity < 1) throw InputError("FT multiplicity must be positive");
        }
    }
};

// Expansion of an OWA instance into a fault-tolerant one: each client splits
// into at most k clients with requirements 1..k and multiplicities
//   mult_l = (w_l - w_{l+1}) * Q   (l < k),   mult_k = w_k * Q,
// where Q is the product of the weight denominators in canonical form.
// Zero-multiplicity clients are dropped. Requires exact rational weights.
inline FTInstance reduce_owa_to_ft(const Instance& inst) {
    if (!inst.weights.has_exact())
        throw InputError("reduce_owa_to_ft: weight vector must carry exact rational values");
    const auto& w = inst.weights.exact();

    FTInstance ft;
    ft.m = inst.m;
    ft.k = inst.k;
    ft.Q = 1;
    for (const auto& wi : w) ft.Q *= denominator(wi);

    std::vector<std::pair<int, BigInt>> mults; // (requirement, multiplicity)
    for (int l = 0; l < inst.k; ++l) {
        const Rational diff = (l + 1 < inst.k ? w[static_cast<std::size_t>(l)] - w[static_cast<std::size_t>(l + 1)]
                                              : w[static_cast<std::size_t>(l)]);
        const Rational scaled = diff * Rational(ft.Q);
        if (denominator(scaled) != 1) throw SolverError("reduce_owa_to_ft: non-integral multiplicity");
        BigInt mult = numerator(scaled);
        if (mult < 0) throw SolverError("reduce_owa_to_ft: negative multiplicity");
        if (mult > 0) mults.emplace_back(l + 1, std::move(mult));
    }

    for (int j = 0; j < inst.n; ++j)
        for (const auto& [req, mult] : mults) {
            FTClient c;
            c.costs        = inst.costs[static_cast<std::size_t>(j)];
            c.requirement  = req;
            c.multiplicity = mult;
            ft.clients.push_back(std::move(c));
        }
    ft.validate();
    return ft;
}

// Exact fault-tolerant cost of a committee: sum over clients of
// multiplicity * (sum of the requirement-many smallest committee costs).
inline Rational ft_cost(const FTInstance& ft, const Committee& com) {
    com.validate(ft.m, ft.k);
    Rational total = 0;
    std::vector<double> cs;
    for (const auto& client : ft.clients) {
        cs.clear();
        for (int i : com.members) cs.push_back(client.costs[static_cast<std::size_t>(i)]);
        std::sort(cs.begin(), cs.end());
        Rational row = 0;
        for (int r = 0; r < client.requirement; ++r) row += rational_from_double(cs[static_cast<std::size_t>(r)]);
        total += row * Rational(client.multiplicity);
    }
    return total;
}

struct IdentityReport {
    int samples = 0;
    Rational max_deviation{0}; // must be exactly zero
    bool ok = true;
};

// Spot check of the exact cost identity ft_cost(C) = Q * owa_total_cost(C)
// over random committees. Any nonzero deviation signals an implementation bug.
inline IdentityReport verify_cost_identity(const Instance& inst, int samples, std::uint64_t seed) {
    const FTInstance ft = reduce_owa_to_ft(inst);
    IdentityReport rep;
    rep.samples = samples;
    Rng rng(seed);
    std::vector<int> pool(static_cast<std::size_t>(inst.m));
    for (int i = 0; i < inst.m; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < inst.k; ++i) {
            const auto j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(inst.m - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        Committee com(std::vector<int>(pool.begin(), pool.begin() + inst.k));
        const Rational lhs  = ft_cost(ft, com);
        const Rational rhs  = Rational(ft.Q) * owa_total_cost_exact(inst, com);
        const Rational dev  = lhs >= rhs ? lhs - rhs : rhs - lhs;
        if (dev > rep.max_deviation) rep.max_deviation = dev;
    }
    rep.ok = rep.max_deviation == 0;
    return rep;
}

} // namespace owakm::reduce
