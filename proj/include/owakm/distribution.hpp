#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "owakm/rational.hpp"
#include "owakm/rng.hpp"
#include "owakm/rounding.hpp"
#include "owakm/tournament.hpp"

namespace owakm::rounding {

// Exact law of a rounding process over 0/1 vectors, keyed by bitmask
// (bit i = variable i opened). Probabilities are exact rationals and sum to 1.
struct ExactDistribution {
    int m = 0;
    int k = 0; // common popcount of the support
    std::vector<std::pair<std::uint32_t, Rational>> pmf; // sorted by mask

    Rational pr(std::uint32_t mask) const {
        auto it = std::lower_bound(pmf.begin(), pmf.end(), mask,
                                   [](const auto& a, std::uint32_t b) { return a.first < b; });
        if (it != pmf.end() && it->first == mask) return it->second;
        return Rational(0);
    }

    Rational marginal(int i) const {
        Rational s = 0;
        for (const auto& [mask, p] : pmf)
            if (mask >> i & 1u) s += p;
        return s;
    }

    void validate() const {
        Rational total = 0;
        for (const auto& [mask, p] : pmf) {
            if (p <= 0) throw SolverError("distribution: nonpositive atom");
            if (std::popcount(mask) != k) throw SolverError("distribution: support violates sum preservation");
            total += p;
        }
        if (total != 1) throw SolverError("distribution: probabilities do not sum to one");
    }
};

namespace detail {

struct EnumBranch {
    std::uint32_t ones = 0;
    std::optional<Carrier> carrier;
    Rational prob{1};
};

inline std::vector<EnumBranch> enumerate_node(const TournamentTree& tree, int node_id,
                                              const std::vector<Rational>& y) {
    const auto& nd = tree.node(node_id);
    if (nd.leaf >= 0) {
        EnumBranch b;
        const Rational& v = y[static_cast<std::size_t>(nd.leaf)];
        if (is_integral(v)) {
            if (v == 1) b.ones |= 1u << nd.leaf;
        } else {
            b.carrier = Carrier{nd.leaf, v};
        }
        return {b};
    }
    const auto left  = enumerate_node(tree, nd.left, y);
    const auto right = enumerate_node(tree, nd.right, y);
    std::vector<EnumBranch> out;
    out.reserve(left.size() * right.size() * 2);
    for (const auto& lb : left)
        for (const auto& rb : right) {
            EnumBranch base;
            base.ones = lb.ones | rb.ones;
            base.prob = lb.prob * rb.prob;
            if (!lb.carrier || !rb.carrier) {
                base.carrier = lb.carrier ? lb.carrier : rb.carrier;
                out.push_back(std::move(base));
                continue;
            }
            const Rational &a = lb.carrier->value, &b = rb.carrier->value;
            const Rational s = a + b;
            const Rational pa = dr_prob_a_rounded(a, b); // a becomes integral
            for (int branch = 0; branch < 2; ++branch) {
                const bool a_rounded = branch == 0;
                const Rational bp    = a_rounded ? pa : 1 - pa;
                if (bp == 0) continue;
                EnumBranch nb        = base;
                nb.prob *= bp;
                const int rounded_leaf  = a_rounded ? lb.carrier->leaf : rb.carrier->leaf;
                const int survivor_leaf = a_rounded ? rb.carrier->leaf : lb.carrier->leaf;
                Rational rounded_val, survivor_val;
                if (s < 1) {
                    rounded_val  = 0;
                    survivor_val = s;
                } else {
                    rounded_val  = 1;
                    survivor_val = s - 1;
                }
                if (rounded_val == 1) nb.ones |= 1u << rounded_leaf;
                if (is_integral(survivor_val)) {
                    if (survivor_val == 1) nb.ones |= 1u << survivor_leaf;
                } else {
                    nb.carrier = Carrier{survivor_leaf, survivor_val};
                }
                out.push_back(std::move(nb));
            }
        }
    return out;
}

} // namespace detail

// Exhaustive branch enumeration of tournament-tree rounding; the exact test
// oracle behind the marginal / sum-preservation / NC / BNA certifications.
// Limited to m <= 16 leaves.
inline ExactDistribution enumerate_distribution(const std::vector<Rational>& y, const TournamentTree& tree) {
    const int m = static_cast<int>(y.size());
    if (m > 16) throw CapacityError("enumerate_distribution: limited to m <= 16");
    if (m != tree.leaf_count()) throw InputError("enumerate_distribution: tree leaf count mismatch");
    Rational sum = 0;
    for (const auto& v : y) {
        if (v < 0 || v > 1) throw InputError("enumerate_distribution: entries must lie in [0,1]");
        sum += v;
    }
    if (denominator(sum) != 1) throw InputError("enumerate_distribution: entries must sum to an integer");

    auto branches = detail::enumerate_node(tree, tree.root(), y);
    std::map<std::uint32_t, Rational> acc;
    for (auto& b : branches) {
        if (b.carrier) throw SolverError("enumerate_distribution: fractional survivor at the root");
        acc[b.ones] += b.prob;
    }
    ExactDistribution dist;
    dist.m = m;
    dist.k = static_cast<int>(numerator(sum).convert_to<long long>());
    dist.pmf.assign(acc.begin(), acc.end());
    dist.validate();
    return dist;
}

inline std::uint32_t mask_of(const std::vector<int>& idx, int m) {
    std::uint32_t mask = 0;
    for (int i : idx) {
        if (i < 0 || i >= m) throw InputError("index set entry out of range");
        if (mask >> i & 1u) throw InputError("index set entries must be distinct");
        mask |= 1u << i;
    }
    return mask;
}

// Negative correlation on one subset: both product inequalities, exact.
//   Pr[all of S open]  <= prod marginals
//   Pr[all of S closed] <= prod (1 - marginals)
inline bool check_nc(const ExactDistribution& dist, const std::vector<int>& S) {
    const std::uint32_t s = mask_of(S, dist.m);
    Rational all_one = 0, all_zero = 0;
    for (const auto& [mask, p] : dist.pmf) {
        if ((mask & s) == s) all_one += p;
        if ((mask & s) == 0) all_zero += p;
    }
    Rational prod_one = 1, prod_zero = 1;
    for (int i : S) {
        const Rational mi = dist.marginal(i);
        prod_one *= mi;
        prod_zero *= 1 - mi;
    }
    return all_one <= prod_one && all_zero <= prod_zero;
}

// Negative correlation over every nonempty subset of [m].
inline bool check_nc_all(const ExactDistribution& dist) {
    const int m           = dist.m;
    const std::uint32_t n = 1u << m;
    std::vector<Rational> ones(n, Rational(0)), zeros(n, Rational(0));
    for (const auto& [mask, p] : dist.pmf) {
        ones[mask] += p;
        zeros[(~mask) & (n - 1)] += p;
    }
    // superset sums: ones[S] = Pr[mask covers S]; zeros[S] = Pr[mask avoids S]
    for (int b = 0; b < m; ++b)
        for (std::uint32_t s = 0; s < n; ++s)
            if (!(s >> b & 1u)) {
                ones[s] += ones[s | (1u << b)];
                zeros[s] += zeros[s | (1u << b)];
            }
    std::vector<Rational> prod_one(n), prod_zero(n);
    prod_one[0] = prod_zero[0] = 1;
    std::vector<Rational> marg(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) marg[static_cast<std::size_t>(i)] = dist.marginal(i);
    for (std::uint32_t s = 1; s < n; ++s) {
        const int b  = std::countr_zero(s);
        prod_one[s]  = prod_one[s & (s - 1)] * marg[static_cast<std::size_t>(b)];
        prod_zero[s] = prod_zero[s & (s - 1)] * (1 - marg[static_cast<std::size_t>(b)]);
        if (ones[s] > prod_one[s] || zeros[s] > prod_zero[s]) return false;
    }
    return true;
}

// Monotone (nondecreasing) 0/1 functions given as truth tables: bit u of the
// table is the value on input mask u. Arity capped at 4 for enumeration.
inline bool is_monotone_table(int arity, std::uint32_t table) {
    const std::uint32_t points = 1u << arity;
    for (std::uint32_t u = 0; u < points; ++u)
        for (int b = 0; b < arity; ++b)
            if (!(u >> b & 1u) && (table >> u & 1u) > (table >> (u | (1u << b)) & 1u)) return false;
    return true;
}

inline const std::vector<std::uint32_t>& all_monotone_tables(int arity) {
    static std::vector<std::vector<std::uint32_t>> cache(5);
    if (arity < 0 || arity > 4) throw CapacityError("all_monotone_tables: arity capped at 4");
    auto& entry = cache[static_cast<std::size_t>(arity)];
    if (entry.empty()) {
        const std::uint64_t tables = 1ull << (1u << arity);
        for (std::uint64_t t = 0; t < tables; ++t)
            if (is_monotone_table(arity, static_cast<std::uint32_t>(t))) entry.push_back(static_cast<std::uint32_t>(t));
    }
    return entry;
}

namespace detail {

inline std::uint32_t project(std::uint32_t mask, const std::vector<int>& bits) {
    std::uint32_t u = 0;
    for (std::size_t t = 0; t < bits.size(); ++t)
        if (mask >> bits[t] & 1u) u |= 1u << t;
    return u;
}

} // namespace detail

// Binary negative association for one witness: monotone 0/1 functions f on S
// and g on Q, disjoint S and Q; holds iff Pr[f=1 and g=1] <= Pr[f=1] Pr[g=1].
inline bool check_bna(const ExactDistribution& dist, const std::vector<int>& S, const std::vector<int>& Q,
                      std::uint32_t f_table, std::uint32_t g_table) {
    const std::uint32_t sm = mask_of(S, dist.m), qm = mask_of(Q, dist.m);
    if ((sm & qm) != 0) throw InputError("check_bna: S and Q must be disjoint");
    if (S.size() > 5 || Q.size() > 5) throw CapacityError("check_bna: index sets capped at 5 variables");
    if (!is_monotone_table(static_cast<int>(S.size()), f_table) ||
        !is_monotone_table(static_cast<int>(Q.size()), g_table))
        throw InputError("check_bna: functions must be monotone nondecreasing");

    Rational pf = 0, pg = 0, pfg = 0;
    for (const auto& [mask, p] : dist.pmf) {
        const bool fv = f_table >> detail::project(mask, S) & 1u;
        const bool gv = g_table >> detail::project(mask, Q) & 1u;
        if (fv) pf += p;
        if (gv) pg += p;
        if (fv && gv) pfg += p;
    }
    return pfg <= pf * pg;
}

struct BnaScan {
    bool all_hold              = true;
    std::uint64_t pairs_checked = 0;
    // first violation found, if any
    std::vector<int> S, Q;
    std::uint32_t f_table = 0, g_table = 0;
};

// Exhaustive BNA certification over all disjoint (S, Q) with
// |S| + |Q| <= max_total and all monotone function pairs on them. Works on a
// common-denominator integer view to keep the scan fast and exact.
inline BnaScan check_bna_all(const ExactDistribution& dist, int max_total = 5) {
    BnaScan scan;
    const int m = dist.m;

    BigInt common = 1;
    for (const auto& [mask, p] : dist.pmf) common = boost::multiprecision::lcm(common, denominator(p));
    std::vector<std::pair<std::uint32_t, BigInt>> atoms;
    atoms.reserve(dist.pmf.size());
    for (const auto& [mask, p] : dist.pmf) atoms.emplace_back(mask, numerator(p) * (common / denominator(p)));

    std::vector<int> sbits, qbits;
    const std::uint32_t n = 1u << m;
    for (std::uint32_t smask = 1; smask < n; ++smask) {
        const int s = std::popcount(smask);
        if (s > max_total - 1 || s > 4) continue;
        for (std::uint32_t qmask = smask + 1; qmask < n; ++qmask) {
            if (qmask & smask) continue;
            const int q = std::popcount(qmask);
            if (q == 0 || s + q > max_total || q > 4) continue;

            sbits.clear();
            qbits.clear();
            for (int b = 0; b < m; ++b) {
                if (smask >> b & 1u) sbits.push_back(b);
                if (qmask >> b & 1u) qbits.push_back(b);
            }
            const std::uint32_t su = 1u << s, qu = 1u << q;
            std::vector<BigInt> joint(static_cast<std::size_t>(su) * qu), ps(su), pq(qu);
            for (const auto& [mask, w] : atoms) {
                const std::uint32_t u = detail::project(mask, sbits);
                const std::uint32_t v = detail::project(mask, qbits);
                joint[static_cast<std::size_t>(u) * qu + v] += w;
                ps[u] += w;
                pq[v] += w;
            }
            std::vector<BigInt> cond(qu);
            for (std::uint32_t ftab : all_monotone_tables(s)) {
                BigInt nf = 0;
                for (std::uint32_t v = 0; v < qu; ++v) cond[v] = 0;
                for (std::uint32_t u = 0; u < su; ++u) {
                    if (!(ftab >> u & 1u)) continue;
                    nf += ps[u];
                    for (std::uint32_t v = 0; v < qu; ++v) cond[v] += joint[static_cast<std::size_t>(u) * qu + v];
                }
                for (std::uint32_t gtab : all_monotone_tables(q)) {
                    BigInt ng = 0, nfg = 0;
                    for (std::uint32_t v = 0; v < qu; ++v) {
                        if (!(gtab >> v & 1u)) continue;
                        ng += pq[v];
                        nfg += cond[v];
                    }
                    ++scan.pairs_checked;
                    if (nfg * common > nf * ng) {
                        scan.all_hold = false;
                        scan.S        = sbits;
                        scan.Q        = qbits;
                        scan.f_table  = ftab;
                        scan.g_table  = gtab;
                        return scan;
                    }
                }
            }
        }
    }
    return scan;
}

// The adaptive-adversary pairing on eight half-open variables with k = 4:
// first (y1,y5) and (y2,y6); if y1 and y2 round the same way, pair (y3,y7)
// and (y4,y8), otherwise (y3,y4) and (y7,y8). Not realizable by any fixed
// tournament tree, and it breaks BNA while NC still holds.
inline ExactDistribution adaptive_adversary_distribution() {
    std::map<std::uint32_t, Rational> acc;
    const Rational w(1, 16);
    for (int v = 0; v < 2; ++v)
        for (int wv = 0; wv < 2; ++wv)
            for (int t = 0; t < 2; ++t)
                for (int u = 0; u < 2; ++u) {
                    std::uint32_t mask = 0;
                    auto set = [&](int var, int bit) { // var is 1-based
                        if (bit) mask |= 1u << (var - 1);
                    };
                    set(1, v);
                    set(5, 1 - v);
                    set(2, wv);
                    set(6, 1 - wv);
                    if (v == wv) {
                        set(3, t);
                        set(7, 1 - t);
                        set(4, u);
                        set(8, 1 - u);
                    } else {
                        set(3, t);
                        set(4, 1 - t);
                        set(7, u);
                        set(8, 1 - u);
                    }
                    acc[mask] += w;
                }
    ExactDistribution dist;
    dist.m = 8;
    dist.k = 4;
    dist.pmf.assign(acc.begin(), acc.end());
    dist.validate();
    return dist;
}

inline RoundingOutcome adaptive_adversary_round(Rng& rng) {
    const auto flip = [&rng] { return static_cast<int>(uniform_below(rng, 2)); };
    const int v = flip(), w = flip(), t = flip(), u = flip();
    std::vector<int> bits(8, 0);
    bits[0] = v;
    bits[4] = 1 - v;
    bits[1] = w;
    bits[5] = 1 - w;
    if (v == w) {
        bits[2] = t;
        bits[6] = 1 - t;
        bits[3] = u;
        bits[7] = 1 - u;
    } else {
        bits[2] = t;
        bits[3] = 1 - t;
        bits[6] = u;
        bits[7] = 1 - u;
    }
    RoundingOutcome out;
    out.bits = std::move(bits);
    return out;
}

} // namespace owakm::rounding
