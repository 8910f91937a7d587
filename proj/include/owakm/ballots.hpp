#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "owakm/instance.hpp"
#include "owakm/weights.hpp"

namespace owakm::ballots {

// Approval ballots, one voter per line: space-separated approved candidate
// indices (0-based). A blank line is an empty ballot; empty ballots cost the
// full harmonic sum no matter the committee, so they are rejected unless
// explicitly allowed.
inline std::vector<std::vector<int>> parse_ballots(std::istream& in, bool allow_empty = false) {
    std::vector<std::vector<int>> ballots;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<int> approved;
        int idx;
        while (ls >> idx) {
            if (idx < 0) throw InputError("ballots: negative candidate index on line " + std::to_string(lineno));
            approved.push_back(idx);
        }
        if (!ls.eof()) throw InputError("ballots: non-numeric token on line " + std::to_string(lineno));
        if (approved.empty() && !allow_empty)
            throw InputError("ballots: empty ballot on line " + std::to_string(lineno) +
                             " (pass --allow-empty to accept)");
        ballots.push_back(std::move(approved));
    }
    if (ballots.empty()) throw InputError("ballots: no voters");
    return ballots;
}

// Minimization-PAV instance over approval ballots: cost 0 iff the voter
// approves the candidate, harmonic weights.
inline Instance build_pav_instance(const std::vector<std::vector<int>>& ballots, int k,
                                   int num_candidates = -1) {
    int m = num_candidates;
    if (m < 0) {
        m = 0;
        for (const auto& b : ballots)
            for (int idx : b) m = std::max(m, idx + 1);
    }
    if (m < 1) throw InputError("pav: no candidates present");
    for (const auto& b : ballots)
        for (int idx : b)
            if (idx >= m) throw InputError("pav: candidate index " + std::to_string(idx) + " out of range");
    if (k < 1 || k > m) throw InputError("pav: requires 1 <= k <= number of candidates");

    const int n = static_cast<int>(ballots.size());
    std::vector<std::vector<double>> costs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m), 1.0));
    for (int j = 0; j < n; ++j)
        for (int idx : ballots[static_cast<std::size_t>(j)])
            costs[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)] = 0.0;
    return Instance(m, n, k, std::move(costs), WeightVector::harmonic(k), false);
}

} // namespace owakm::ballots
