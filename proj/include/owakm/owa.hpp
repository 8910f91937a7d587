#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "owakm/instance.hpp"

namespace owakm {

namespace detail {

// Committee costs of one client, ascending; equal costs ordered by facility
// index so tie-breaking is fixed.
inline std::vector<std::pair<double, int>> sorted_committee_costs(const Instance& inst, const Committee& com, int j) {
    std::vector<std::pair<double, int>> cs;
    cs.reserve(com.members.size());
    for (int i : com.members) cs.emplace_back(inst.cost(j, i), i);
    std::sort(cs.begin(), cs.end());
    return cs;
}

} // namespace detail

// OWA cost of client j: weights applied to the ascending sort of the client's
// committee costs, highest weight on the lowest cost.
inline double owa_client_cost(const Instance& inst, const Committee& com, int j) {
    if (j < 0 || j >= inst.n) throw InputError("client index out of range");
    com.validate(inst);
    auto cs    = detail::sorted_committee_costs(inst, com, j);
    double sum = 0.0;
    const int kpos = inst.weights.positive_count();
    for (int pos = 0; pos < kpos; ++pos) sum += inst.weights[pos] * cs[static_cast<std::size_t>(pos)].first;
    return sum;
}

inline double owa_total_cost(const Instance& inst, const Committee& com) {
    com.validate(inst);
    double sum = 0.0;
    for (int j = 0; j < inst.n; ++j) {
        auto cs = detail::sorted_committee_costs(inst, com, j);
        const int kpos = inst.weights.positive_count();
        for (int pos = 0; pos < kpos; ++pos) sum += inst.weights[pos] * cs[static_cast<std::size_t>(pos)].first;
    }
    return sum;
}

// Exact-rational evaluation over the exact values of the stored doubles.
// Requires a weight vector with exact rational values.
inline Rational owa_client_cost_exact(const Instance& inst, const Committee& com, int j) {
    if (j < 0 || j >= inst.n) throw InputError("client index out of range");
    com.validate(inst);
    const auto& w = inst.weights.exact();
    auto cs       = detail::sorted_committee_costs(inst, com, j);
    Rational sum  = 0;
    for (std::size_t pos = 0; pos < cs.size(); ++pos) {
        if (w[pos] == 0) break;
        sum += w[pos] * rational_from_double(cs[pos].first);
    }
    return sum;
}

inline Rational owa_total_cost_exact(const Instance& inst, const Committee& com) {
    Rational sum = 0;
    for (int j = 0; j < inst.n; ++j) sum += owa_client_cost_exact(inst, com, j);
    return sum;
}

} // namespace owakm
