#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "owakm/instance.hpp"
#include "owakm/owa.hpp"
#include "owakm/simplex.hpp"

namespace owakm::lp {

// LP relaxation of the committee-selection ILP:
//   min  sum_{j,l,i} w_l c_{ij} x_{ij}^l
//   s.t. sum_i y_i = k
//        sum_l x_{ij}^l <= y_i           for all i, j
//        sum_i x_{ij}^l >= 1             for all j, l
//        y, x in [0,1]
// Copies l with w_l = 0 carry no objective mass and are dropped before
// solving, which shrinks instances whose weight vector has trailing zeros.
struct LpProgram {
    const Instance* inst = nullptr;
    int m = 0, n = 0, k = 0;
    int k_eff = 0; // copies with strictly positive weight
    std::optional<std::vector<double>> fixed_y;

    int y_col(int i) const { return i; }
    int x_col(int j, int l, int i) const { return m + (j * k_eff + l) * m + i; }
    int var_count() const { return m + n * k_eff * m; }

    int row_open_k() const { return 0; }
    int row_capacity(int i, int j) const { return 1 + j * m + i; }     // Eq: sum_l x <= y_i
    int row_served(int j, int l) const { return 1 + n * m + j * k_eff + l; } // Eq: sum_i x >= 1
    int row_count() const { return 1 + n * m + n * k_eff; }

    // Pin the opening vector; used to evaluate the LP at a fixed y.
    void fix_y(std::vector<double> y) {
        if (static_cast<int>(y.size()) != m) throw InputError("fix_y: wrong length");
        fixed_y = std::move(y);
    }
};

inline LpProgram build_lp(const Instance& inst, std::size_t max_vars = 2'000'000) {
    LpProgram p;
    p.inst  = &inst;
    p.m     = inst.m;
    p.n     = inst.n;
    p.k     = inst.k;
    p.k_eff = inst.weights.positive_count();
    const std::size_t vars =
        static_cast<std::size_t>(p.m) + static_cast<std::size_t>(p.n) * static_cast<std::size_t>(p.k_eff) * static_cast<std::size_t>(p.m);
    if (vars > max_vars) throw CapacityError("LP exceeds variable capacity limit");
    return p;
}

// Optimal fractional solution. per_client_lp_cost is the per-client objective
// share taken from the simplex assignment variables.
struct FractionalSolution {
    std::vector<double> y;
    std::vector<double> x; // flat tensor, index (j * k_eff + l) * m + i
    int k_eff = 0;
    double objective = 0.0;
    std::vector<double> per_client_lp_cost;
    std::vector<int> basis; // for reproducibility of the chosen vertex
    int iterations = 0;
    double max_residual = 0.0;

    double x_at(int j, int l, int i, int m) const {
        return x[static_cast<std::size_t>((j * k_eff + l) * m + i)];
    }
};

inline FractionalSolution solve_lp(const LpProgram& p, const SimplexOptions& opt = {}) {
    const Instance& inst = *p.inst;
    DenseSimplex s(p.var_count());

    for (int j = 0; j < p.var_count(); ++j) s.set_bounds(j, 0.0, 1.0);
    if (p.fixed_y) {
        for (int i = 0; i < p.m; ++i) s.set_bounds(p.y_col(i), (*p.fixed_y)[static_cast<std::size_t>(i)],
                                                   (*p.fixed_y)[static_cast<std::size_t>(i)]);
    }
    for (int j = 0; j < p.n; ++j)
        for (int l = 0; l < p.k_eff; ++l)
            for (int i = 0; i < p.m; ++i) s.set_objective(p.x_col(j, l, i), inst.weights[l] * inst.cost(j, i));

    {
        std::vector<std::pair<int, double>> open_k;
        open_k.reserve(static_cast<std::size_t>(p.m));
        for (int i = 0; i < p.m; ++i) open_k.emplace_back(p.y_col(i), 1.0);
        s.add_row(std::move(open_k), RowSense::eq, static_cast<double>(p.k));
    }
    for (int j = 0; j < p.n; ++j)
        for (int i = 0; i < p.m; ++i) {
            std::vector<std::pair<int, double>> row;
            row.reserve(static_cast<std::size_t>(p.k_eff) + 1);
            for (int l = 0; l < p.k_eff; ++l) row.emplace_back(p.x_col(j, l, i), 1.0);
            row.emplace_back(p.y_col(i), -1.0);
            s.add_row(std::move(row), RowSense::le, 0.0);
        }
    for (int j = 0; j < p.n; ++j)
        for (int l = 0; l < p.k_eff; ++l) {
            std::vector<std::pair<int, double>> row;
            row.reserve(static_cast<std::size_t>(p.m));
            for (int i = 0; i < p.m; ++i) row.emplace_back(p.x_col(j, l, i), 1.0);
            s.add_row(std::move(row), RowSense::ge, 1.0);
        }

    const auto res = s.solve(opt);
    if (res.status == SolveStatus::iteration_limit) throw SolverError("LP solve hit the iteration limit");
    if (res.status != SolveStatus::optimal)
        throw SolverError("LP solve failed (infeasible/unbounded reported on a well-formed program)");

    FractionalSolution f;
    f.k_eff = p.k_eff;
    f.y.assign(res.x.begin(), res.x.begin() + p.m);
    f.x.assign(res.x.begin() + p.m, res.x.end());
    f.objective    = res.objective;
    f.basis        = res.basis;
    f.iterations   = res.iterations;
    f.max_residual = res.max_residual;

    f.per_client_lp_cost.assign(static_cast<std::size_t>(p.n), 0.0);
    for (int j = 0; j < p.n; ++j) {
        double cj = 0.0;
        for (int l = 0; l < p.k_eff; ++l)
            for (int i = 0; i < p.m; ++i) cj += inst.weights[l] * inst.cost(j, i) * f.x_at(j, l, i, p.m);
        f.per_client_lp_cost[static_cast<std::size_t>(j)] = cj;
    }

    double sum_y = 0.0;
    for (double v : f.y) sum_y += v;
    if (std::abs(sum_y - p.k) > 1e-9) throw SolverError("LP solution violates the opening-count constraint");
    if (f.max_residual > 1e-9) throw SolverError("LP solution violates feasibility tolerance");
    double per_client_sum = 0.0;
    for (double v : f.per_client_lp_cost) per_client_sum += v;
    if (std::abs(per_client_sum - f.objective) > 1e-9 * (1.0 + std::abs(f.objective)))
        throw SolverError("LP objective does not match per-client decomposition");
    return f;
}

// Closed-form optimal per-client cost at a fixed opening vector: sort the
// client's facilities by cost, then copy l consumes the opening mass lying in
// the cumulative interval [l-1, l].
inline double waterfill_client_cost(const Instance& inst, const std::vector<double>& y, int j) {
    if (j < 0 || j >= inst.n) throw InputError("client index out of range");
    if (static_cast<int>(y.size()) != inst.m) throw InputError("opening vector has wrong length");
    double sum_y = 0.0;
    for (double v : y) {
        if (v < -1e-12 || v > 1.0 + 1e-12) throw InputError("opening vector entries must lie in [0,1]");
        sum_y += v;
    }
    if (std::abs(sum_y - inst.k) > 1e-9) throw InputError("opening vector must sum to k");

    std::vector<std::pair<double, int>> order;
    order.reserve(static_cast<std::size_t>(inst.m));
    for (int i = 0; i < inst.m; ++i) order.emplace_back(inst.cost(j, i), i);
    std::sort(order.begin(), order.end());

    const int kpos = inst.weights.positive_count();
    double cum = 0.0, total = 0.0;
    for (const auto& [c, i] : order) {
        double remaining = y[static_cast<std::size_t>(i)];
        while (remaining > 0.0) {
            int copy = static_cast<int>(std::floor(cum + 1e-12));
            if (copy >= inst.k) break; // sum rounding spill beyond the k-th copy
            const double room = (copy + 1) - cum;
            const double take = std::min(remaining, room);
            if (copy < kpos) total += inst.weights[copy] * take * c;
            cum += take;
            remaining -= take;
        }
    }
    return total;
}

// Fixed MPS layout (free-format columns) for cross-checks with external
// solvers. Objective row COST, rows C0.. in program order, bounds from the
// box constraints.
inline void export_mps(const LpProgram& p, std::ostream& os) {
    const Instance& inst = *p.inst;
    auto var_name = [&](int col) {
        if (col < p.m) return "Y" + std::to_string(col);
        const int rest = col - p.m;
        const int i    = rest % p.m;
        const int l    = (rest / p.m) % p.k_eff;
        const int j    = rest / (p.m * p.k_eff);
        return "X" + std::to_string(j) + "_" + std::to_string(l) + "_" + std::to_string(i);
    };
    os << "NAME OWAKMLP\n";
    os << "ROWS\n N COST\n";
    os << " E OPENK\n";
    for (int j = 0; j < p.n; ++j)
        for (int i = 0; i < p.m; ++i) os << " L CAP" << j << "_" << i << "\n";
    for (int j = 0; j < p.n; ++j)
        for (int l = 0; l < p.k_eff; ++l) os << " G SRV" << j << "_" << l << "\n";
    os << "COLUMNS\n";
    for (int i = 0; i < p.m; ++i) {
        os << " " << var_name(i) << " OPENK 1\n";
        for (int j = 0; j < p.n; ++j) os << " " << var_name(i) << " CAP" << j << "_" << i << " -1\n";
    }
    for (int j = 0; j < p.n; ++j)
        for (int l = 0; l < p.k_eff; ++l)
            for (int i = 0; i < p.m; ++i) {
                const auto name = var_name(p.x_col(j, l, i));
                const double w  = inst.weights[l] * inst.cost(j, i);
                if (w != 0.0) os << " " << name << " COST " << w << "\n";
                os << " " << name << " CAP" << j << "_" << i << " 1\n";
                os << " " << name << " SRV" << j << "_" << l << " 1\n";
            }
    os << "RHS\n RHS OPENK " << p.k << "\n";
    for (int j = 0; j < p.n; ++j)
        for (int l = 0; l < p.k_eff; ++l) os << " RHS SRV" << j << "_" << l << " 1\n";
    os << "BOUNDS\n";
    for (int col = 0; col < p.var_count(); ++col) {
        double lo = 0.0, hi = 1.0;
        if (p.fixed_y && col < p.m) lo = hi = (*p.fixed_y)[static_cast<std::size_t>(col)];
        os << " LO BND " << var_name(col) << " " << lo << "\n";
        os << " UP BND " << var_name(col) << " " << hi << "\n";
    }
    os << "ENDATA\n";
}

} // namespace owakm::lp
