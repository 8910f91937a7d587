#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "owakm/instance.hpp"
#include "owakm/owa.hpp"
#include "owakm/rng.hpp"
#include "owakm/weights.hpp"

namespace owakm::gen {

enum class RandomMode { metric, nonmetric };

// Seeded random instance. Non-metric costs are i.i.d. U[0,1]; metric mode
// places clients and facilities in the unit square and uses Euclidean
// distances. Default weights are harmonic.
inline Instance gen_random(int m, int n, int k, RandomMode mode, std::uint64_t seed,
                           std::optional<WeightVector> weights = std::nullopt) {
    if (m < 1 || n < 1 || k < 1 || k > m) throw InputError("gen_random: requires 1 <= k <= m, n >= 1");
    Rng rng(mix64(seed));
    std::vector<std::vector<double>> costs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m)));
    if (mode == RandomMode::nonmetric) {
        for (auto& row : costs)
            for (auto& c : row) c = u01(rng);
    } else {
        std::vector<std::array<double, 2>> fac(static_cast<std::size_t>(m)), cli(static_cast<std::size_t>(n));
        for (auto& p : fac) p = {u01(rng), u01(rng)};
        for (auto& p : cli) p = {u01(rng), u01(rng)};
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i)
                costs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    std::hypot(cli[static_cast<std::size_t>(j)][0] - fac[static_cast<std::size_t>(i)][0],
                               cli[static_cast<std::size_t>(j)][1] - fac[static_cast<std::size_t>(i)][1]);
    }
    return Instance(m, n, k, std::move(costs), weights ? std::move(*weights) : WeightVector::harmonic(k),
                    mode == RandomMode::metric);
}

// Seeded random 0/1-cost instance (an approval profile read as costs:
// 0 = approved). Harmonic weights.
inline Instance gen_approval(int m, int n, int k, double zero_prob, std::uint64_t seed) {
    if (m < 1 || n < 1 || k < 1 || k > m) throw InputError("gen_approval: requires 1 <= k <= m, n >= 1");
    if (!(zero_prob >= 0.0 && zero_prob <= 1.0)) throw InputError("gen_approval: zero_prob must lie in [0,1]");
    Rng rng(mix64(seed));
    std::vector<std::vector<double>> costs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m)));
    for (auto& row : costs)
        for (auto& c : row) c = u01(rng) < zero_prob ? 0.0 : 1.0;
    return Instance(m, n, k, std::move(costs), WeightVector::harmonic(k), false);
}

// City-block instance: per city, k candidate facility slots; travel inside a
// city is free and between cities costs one. Under harmonic weights the exact
// optimum opens facilities proportionally to the city populations whenever
// k * pop_i is divisible by the total population.
inline Instance gen_cities(const std::vector<int>& populations, int k,
                           std::optional<WeightVector> weights = std::nullopt) {
    if (populations.empty()) throw InputError("gen_cities: need at least one city");
    int n = 0;
    for (int p : populations) {
        if (p < 1) throw InputError("gen_cities: populations must be positive");
        n += p;
    }
    const int cities = static_cast<int>(populations.size());
    const int m      = cities * k;
    std::vector<std::vector<double>> costs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m), 1.0));
    int j = 0;
    for (int c = 0; c < cities; ++c)
        for (int p = 0; p < populations[static_cast<std::size_t>(c)]; ++p, ++j)
            for (int slot = 0; slot < k; ++slot) costs[static_cast<std::size_t>(j)][static_cast<std::size_t>(c * k + slot)] = 0.0;
    return Instance(m, n, k, std::move(costs), weights ? std::move(*weights) : WeightVector::harmonic(k), false);
}

inline bool cities_divisible(const std::vector<int>& populations, int k) {
    const int n = std::accumulate(populations.begin(), populations.end(), 0);
    for (int p : populations)
        if ((static_cast<long long>(k) * p) % n != 0) return false;
    return true;
}

// The clean-case proportional split n_i = k * pop_i / n.
inline std::vector<int> proportional_split(const std::vector<int>& populations, int k) {
    if (!cities_divisible(populations, k)) throw InputError("proportional_split: k * pop_i not divisible by n");
    const int n = std::accumulate(populations.begin(), populations.end(), 0);
    std::vector<int> split;
    split.reserve(populations.size());
    for (int p : populations) split.push_back(static_cast<int>(static_cast<long long>(k) * p / n));
    return split;
}

// Expected served cost of client j when each committee facility fails
// independently with probability p and the client falls through to the next
// nearest open one; the all-fail event carries cost zero. Equals the OWA cost
// under the geometric weight vector scaled by (1 - p).
inline double geometric_failure_cost(const Instance& inst, const Committee& com, int j) {
    if (inst.weights.family() != WeightFamily::geometric)
        throw InputError("geometric_failure_cost: instance must carry geometric weights");
    const double p = inst.weights.geometric_p();
    return (1.0 - p) * owa_client_cost(inst, com, j);
}

// Monte Carlo oracle for the failure model above.
inline double simulate_failure_cost(const Instance& inst, const Committee& com, int j, int draws, Rng& rng) {
    if (inst.weights.family() != WeightFamily::geometric)
        throw InputError("simulate_failure_cost: instance must carry geometric weights");
    const double p = inst.weights.geometric_p();
    auto cs        = detail::sorted_committee_costs(inst, com, j);
    double sum     = 0.0;
    for (int d = 0; d < draws; ++d) {
        for (const auto& [cost, idx] : cs) {
            if (u01(rng) >= p) { // facility survives
                sum += cost;
                break;
            }
        }
        // all failed: cost zero
    }
    return sum / draws;
}

// Hard 0/1 instance from an exact-cover-by-3-sets input: facilities are the
// triples plus two dummy groups H (free for everyone) and H' (matched 1:1 to
// dummy clients); committee size k = ceil(n / (1 - lambda)) and top-p weights
// with p = floor(lambda k). The exact optimum is 0 iff the triple system has
// an exact cover.
struct X3cInstance {
    Instance inst;
    int n_sets   = 0; // facilities 0 .. n_sets-1 are the triples
    int h_count  = 0; // then |H| dummy facilities
    int hp_count = 0; // then |H'| matched dummy facilities
    int elements = 0; // clients 0 .. elements-1 are element clients, then |H'| dummy clients
    int p        = 0; // last positive weight index
    int k        = 0;
};

inline X3cInstance gen_x3c(int num_elements, const std::vector<std::array<int, 3>>& triples, double lambda) {
    if (num_elements < 3 || num_elements % 3 != 0) throw InputError("gen_x3c: element count must be a positive multiple of 3");
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("gen_x3c: lambda must lie in (0,1)");
    const int n = num_elements / 3;
    if (static_cast<int>(triples.size()) < n) throw InputError("gen_x3c: need at least n triples");
    for (const auto& t : triples) {
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) throw InputError("gen_x3c: triple entries must be distinct");
        for (int e : t)
            if (e < 0 || e >= num_elements) throw InputError("gen_x3c: triple entry out of range");
    }

    const int k = static_cast<int>(std::ceil(static_cast<double>(n) / (1.0 - lambda)));
    const int p = static_cast<int>(std::floor(lambda * k));
    if (p < 1) throw InputError("gen_x3c: lambda k < 1, no positive weight index fits");
    if (k - p < n) throw InputError("gen_x3c: construction slack violated (k - p < n)");

    const int h  = p - 1;
    const int hp = k - n - p + 1;
    const int m  = static_cast<int>(triples.size()) + h + hp;
    const int nc = num_elements + hp;
    if (k > m) throw InputError("gen_x3c: fewer facilities than committee seats");

    std::vector<std::vector<double>> costs(static_cast<std::size_t>(nc), std::vector<double>(static_cast<std::size_t>(m), 1.0));
    const int h_begin  = static_cast<int>(triples.size());
    const int hp_begin = h_begin + h;
    for (int j = 0; j < nc; ++j)
        for (int i = h_begin; i < hp_begin; ++i) costs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 0.0;
    for (int s = 0; s < static_cast<int>(triples.size()); ++s)
        for (int e : triples[static_cast<std::size_t>(s)]) costs[static_cast<std::size_t>(e)][static_cast<std::size_t>(s)] = 0.0;
    for (int t = 0; t < hp; ++t)
        costs[static_cast<std::size_t>(num_elements + t)][static_cast<std::size_t>(hp_begin + t)] = 0.0;

    X3cInstance out{Instance(m, nc, k, std::move(costs), WeightVector::top_r(k, p), false),
                    static_cast<int>(triples.size()),
                    h,
                    hp,
                    num_elements,
                    p,
                    k};
    return out;
}

// Text form: first line is the element count 3n, then one triple per line as
// space-separated 0-based element indices.
inline std::pair<int, std::vector<std::array<int, 3>>> parse_x3c(std::istream& in) {
    std::string line;
    int num_elements = -1;
    std::vector<std::array<int, 3>> triples;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        if (num_elements < 0) {
            if (!(ls >> num_elements)) throw InputError("x3c input: first line must give the element count");
            continue;
        }
        std::array<int, 3> t{};
        if (!(ls >> t[0] >> t[1] >> t[2])) {
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            throw InputError("x3c input: each triple line needs three element indices");
        }
        int extra;
        if (ls >> extra) throw InputError("x3c input: each triple line needs exactly three element indices");
        triples.push_back(t);
    }
    if (num_elements < 0) throw InputError("x3c input: empty file");
    return {num_elements, std::move(triples)};
}

} // namespace owakm::gen
