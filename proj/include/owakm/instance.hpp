#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "owakm/errors.hpp"
#include "owakm/rational.hpp"
#include "owakm/weights.hpp"

namespace owakm {

// An OWA-k-median instance: n clients, m candidate facilities, a nonnegative
// cost matrix (row j = client j), a committee size k and a weight vector of
// length k. Immutable after construction; identity is positional.
struct Instance {
    int m = 0; // facilities
    int n = 0; // clients
    int k = 0;
    std::vector<std::vector<double>> costs; // costs[j][i] = cost of client j for facility i
    WeightVector weights;
    std::optional<bool> metric_flag; // informational provenance only

    Instance(int m_, int n_, int k_, std::vector<std::vector<double>> costs_, WeightVector weights_,
             std::optional<bool> metric = std::nullopt)
        : m(m_), n(n_), k(k_), costs(std::move(costs_)), weights(std::move(weights_)), metric_flag(metric) {
        validate();
    }

    double cost(int client, int facility) const {
        return costs[static_cast<std::size_t>(client)][static_cast<std::size_t>(facility)];
    }

    Rational cost_exact(int client, int facility) const { return rational_from_double(cost(client, facility)); }

    void validate() const {
        if (m < 1 || n < 1) throw InputError("instance needs at least one facility and one client");
        if (k < 1 || k > m) throw InputError("instance requires 1 <= k <= m");
        if (weights.k() != k) throw InputError("weight vector length must equal k");
        if (static_cast<int>(costs.size()) != n) throw InputError("cost matrix must have one row per client");
        for (const auto& row : costs) {
            if (static_cast<int>(row.size()) != m) throw InputError("cost matrix rows must have one entry per facility");
            for (double c : row)
                if (!std::isfinite(c) || c < 0.0) throw InputError("costs must be finite and nonnegative");
        }
    }
};

// A size-k subset of facilities, stored sorted ascending.
struct Committee {
    std::vector<int> members;

    Committee() = default;
    explicit Committee(std::vector<int> ms) : members(std::move(ms)) { std::sort(members.begin(), members.end()); }

    static Committee from_bits(const std::vector<int>& bits) {
        Committee c;
        for (int i = 0; i < static_cast<int>(bits.size()); ++i)
            if (bits[i]) c.members.push_back(i);
        return c;
    }

    int size() const { return static_cast<int>(members.size()); }
    bool contains(int i) const { return std::binary_search(members.begin(), members.end(), i); }

    void validate(const Instance& inst) const { validate(inst.m, inst.k); }

    void validate(int m, int k) const {
        if (size() != k) throw InputError("committee must have exactly k members");
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (members[i] < 0 || members[i] >= m) throw InputError("committee member index out of range");
            if (i > 0 && members[i] == members[i - 1]) throw InputError("committee members must be distinct");
        }
    }

    bool operator==(const Committee& o) const { return members == o.members; }
    bool operator<(const Committee& o) const { return members < o.members; }
};

} // namespace owakm
