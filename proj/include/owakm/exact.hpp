#pragma once

#include <cstdint>
#include <vector>

#include "owakm/instance.hpp"
#include "owakm/owa.hpp"
#include "owakm/reduce.hpp"

namespace owakm::exact {

inline std::uint64_t committee_count(int m, int k, std::uint64_t cap) {
    // C(m, k) with saturation at cap
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<std::uint64_t>(m - k + i) / static_cast<std::uint64_t>(i);
        if (c > cap) return cap + 1;
    }
    return c;
}

namespace detail {

// Lexicographic committee enumeration with incremental per-client sorted cost
// buffers: O(n k) work per visited node, leaf evaluation is a dot product.
template <class Value, class CostAt, class LeafEval>
void enumerate_committees(int m, int n, int k, CostAt cost_at, LeafEval leaf) {
    std::vector<std::vector<Value>> buf(static_cast<std::size_t>(n));
    for (auto& b : buf) b.reserve(static_cast<std::size_t>(k));
    std::vector<std::vector<int>> pos(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(n)));
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(k));

    auto push = [&](int depth, int facility) {
        for (int j = 0; j < n; ++j) {
            auto& b       = buf[static_cast<std::size_t>(j)];
            const Value c = cost_at(j, facility);
            auto it       = std::upper_bound(b.begin(), b.end(), c);
            pos[static_cast<std::size_t>(depth)][static_cast<std::size_t>(j)] = static_cast<int>(it - b.begin());
            b.insert(it, c);
        }
    };
    auto pop = [&](int depth) {
        for (int j = 0; j < n; ++j) {
            auto& b = buf[static_cast<std::size_t>(j)];
            b.erase(b.begin() + pos[static_cast<std::size_t>(depth)][static_cast<std::size_t>(j)]);
        }
    };

    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) {
            leaf(chosen, buf);
            return;
        }
        for (int i = start; i <= m - (k - depth); ++i) {
            push(depth, i);
            chosen.push_back(i);
            self(self, i + 1, depth + 1);
            chosen.pop_back();
            pop(depth);
        }
    };
    rec(rec, 0, 0);
}

} // namespace detail

struct Result {
    Committee committee;
    double value = 0.0;
};

struct ResultExact {
    Committee committee;
    Rational value;
};

// Brute-force optimum by committee enumeration; first committee in
// lexicographic order attaining the minimum wins ties.
inline Result solve(const Instance& inst, std::uint64_t max_committees = 2'000'000) {
    if (committee_count(inst.m, inst.k, max_committees) > max_committees)
        throw CapacityError("exact::solve: committee count exceeds the enumeration limit");
    const int kpos = inst.weights.positive_count();
    Result best;
    bool have = false;
    detail::enumerate_committees<double>(
        inst.m, inst.n, inst.k, [&](int j, int i) { return inst.cost(j, i); },
        [&](const std::vector<int>& chosen, const std::vector<std::vector<double>>& buf) {
            double total = 0.0;
            for (int j = 0; j < inst.n; ++j) {
                const auto& b = buf[static_cast<std::size_t>(j)];
                for (int p = 0; p < kpos; ++p) total += inst.weights[p] * b[static_cast<std::size_t>(p)];
            }
            if (!have || total < best.value) {
                have       = true;
                best.value = total;
                best.committee = Committee(chosen);
            }
        });
    return best;
}

// Same enumeration with exact rational values; for rational-valued instances
// (hardness constructions, reduction identities).
inline ResultExact solve_exact(const Instance& inst, std::uint64_t max_committees = 2'000'000) {
    if (committee_count(inst.m, inst.k, max_committees) > max_committees)
        throw CapacityError("exact::solve_exact: committee count exceeds the enumeration limit");
    if (!inst.weights.has_exact()) throw InputError("exact::solve_exact: needs exact rational weights");
    const auto& w = inst.weights.exact();
    std::vector<std::vector<Rational>> cost_cache(static_cast<std::size_t>(inst.n),
                                                  std::vector<Rational>(static_cast<std::size_t>(inst.m)));
    for (int j = 0; j < inst.n; ++j)
        for (int i = 0; i < inst.m; ++i)
            cost_cache[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = inst.cost_exact(j, i);

    ResultExact best;
    bool have = false;
    detail::enumerate_committees<Rational>(
        inst.m, inst.n, inst.k,
        [&](int j, int i) { return cost_cache[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; },
        [&](const std::vector<int>& chosen, const std::vector<std::vector<Rational>>& buf) {
            Rational total = 0;
            for (int j = 0; j < inst.n; ++j) {
                const auto& b = buf[static_cast<std::size_t>(j)];
                for (int p = 0; p < inst.k; ++p) {
                    if (w[static_cast<std::size_t>(p)] == 0) break;
                    total += w[static_cast<std::size_t>(p)] * b[static_cast<std::size_t>(p)];
                }
            }
            if (!have || total < best.value) {
                have           = true;
                best.value     = total;
                best.committee = Committee(chosen);
            }
        });
    return best;
}

// Brute-force fault-tolerant optimum with exact multiplicities.
inline ResultExact solve_ft(const reduce::FTInstance& ft, std::uint64_t max_committees = 2'000'000) {
    ft.validate();
    if (committee_count(ft.m, ft.k, max_committees) > max_committees)
        throw CapacityError("exact::solve_ft: committee count exceeds the enumeration limit");
    const int n = static_cast<int>(ft.clients.size());
    std::vector<std::vector<Rational>> cost_cache(static_cast<std::size_t>(n),
                                                  std::vector<Rational>(static_cast<std::size_t>(ft.m)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < ft.m; ++i)
            cost_cache[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                rational_from_double(ft.clients[static_cast<std::size_t>(j)].costs[static_cast<std::size_t>(i)]);

    ResultExact best;
    bool have = false;
    detail::enumerate_committees<Rational>(
        ft.m, n, ft.k,
        [&](int j, int i) { return cost_cache[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]; },
        [&](const std::vector<int>& chosen, const std::vector<std::vector<Rational>>& buf) {
            Rational total = 0;
            for (int j = 0; j < n; ++j) {
                const auto& client = ft.clients[static_cast<std::size_t>(j)];
                const auto& b      = buf[static_cast<std::size_t>(j)];
                Rational row       = 0;
                for (int r = 0; r < client.requirement; ++r) row += b[static_cast<std::size_t>(r)];
                total += row * Rational(client.multiplicity);
            }
            if (!have || total < best.value) {
                have           = true;
                best.value     = total;
                best.committee = Committee(chosen);
            }
        });
    return best;
}

} // namespace owakm::exact
