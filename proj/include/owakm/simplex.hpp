#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "owakm/errors.hpp"

namespace owakm::lp {

enum class RowSense { le, ge, eq };

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

struct SimplexOptions {
    double feas_tol    = 1e-9;  // primal/dual feasibility
    double pivot_tol   = 1e-10; // ratio-test pivot threshold
    int max_iterations = 0;     // 0 = auto from problem size
};

// Dense two-phase primal simplex with native [lo, up] variable bounds, so box
// constraints cost no rows. Dantzig pricing with a Bland fallback after
// 10 * rows consecutive degenerate pivots.
class DenseSimplex {
public:
    explicit DenseSimplex(int num_vars)
        : nv_(num_vars), lo_(static_cast<std::size_t>(num_vars), 0.0), up_(static_cast<std::size_t>(num_vars), inf()),
          c_(static_cast<std::size_t>(num_vars), 0.0) {
        if (num_vars < 1) throw InputError("simplex: need at least one variable");
    }

    static double inf() { return std::numeric_limits<double>::infinity(); }

    void set_objective(int var, double coef) { c_.at(static_cast<std::size_t>(var)) = coef; }

    void set_bounds(int var, double lo, double up) {
        if (!(lo <= up) || !std::isfinite(lo)) throw InputError("simplex: bounds require finite lo <= up");
        lo_.at(static_cast<std::size_t>(var)) = lo;
        up_.at(static_cast<std::size_t>(var)) = up;
    }

    int add_row(std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs) {
        for (auto& [j, v] : coeffs)
            if (j < 0 || j >= nv_) throw InputError("simplex: row coefficient index out of range");
        rows_.push_back(Row{std::move(coeffs), sense, rhs});
        return static_cast<int>(rows_.size()) - 1;
    }

    struct Result {
        SolveStatus status = SolveStatus::optimal;
        double objective   = 0.0;
        std::vector<double> x;
        std::vector<int> basis; // column basic in each row (slack/artificial columns included)
        int iterations      = 0;
        double max_residual = 0.0;
    };

    Result solve(const SimplexOptions& opt = {}) {
        build(opt);
        Result res;
        if (has_artificials_) {
            std::vector<double> c1(static_cast<std::size_t>(ncols_), 0.0);
            for (int j = art_begin_; j < ncols_; ++j) c1[static_cast<std::size_t>(j)] = 1.0;
            const SolveStatus st = run(c1, opt, res.iterations);
            if (st != SolveStatus::optimal) {
                res.status = st;
                return res;
            }
            double art_sum = 0.0;
            for (int i = 0; i < nrows_; ++i)
                if (basis_[static_cast<std::size_t>(i)] >= art_begin_) art_sum += xb_[static_cast<std::size_t>(i)];
            if (art_sum > 1e-7) {
                res.status = SolveStatus::infeasible;
                return res;
            }
            // Artificials stay in the pool but pinned to zero.
            for (int j = art_begin_; j < ncols_; ++j) wup_[static_cast<std::size_t>(j)] = 0.0;
        }
        std::vector<double> c2(static_cast<std::size_t>(ncols_), 0.0);
        for (int j = 0; j < nv_; ++j) c2[static_cast<std::size_t>(j)] = c_[static_cast<std::size_t>(j)];
        res.status = run(c2, opt, res.iterations);
        if (res.status != SolveStatus::optimal) return res;

        refine_basic_values();
        const std::vector<double> full = column_values();
        res.x.assign(full.begin(), full.begin() + nv_);
        res.objective = 0.0;
        for (int j = 0; j < nv_; ++j) res.objective += c_[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
        res.basis        = basis_;
        res.max_residual = max_row_residual(full);
        return res;
    }

private:
    enum class Status : std::uint8_t { basic, at_lower, at_upper };

    struct Row {
        std::vector<std::pair<int, double>> coeffs;
        RowSense sense;
        double rhs;
    };

    double& t(int i, int j) {
        return tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(j)];
    }
    double tc(int i, int j) const {
        return tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(j)];
    }

    // Coefficient of `col` in the original (unscaled) row.
    double original_coef(int row, int col) const {
        const auto& r = rows_[static_cast<std::size_t>(row)];
        if (col < nv_) {
            for (auto [j, v] : r.coeffs)
                if (j == col) return v;
            return 0.0;
        }
        if (col == slack_col_[static_cast<std::size_t>(row)]) return r.sense == RowSense::le ? 1.0 : -1.0;
        if (col == art_col_[static_cast<std::size_t>(row)]) return row_sigma_[static_cast<std::size_t>(row)];
        return 0.0;
    }

    std::vector<double> column_values() const {
        std::vector<double> v(static_cast<std::size_t>(ncols_));
        for (int j = 0; j < ncols_; ++j)
            v[static_cast<std::size_t>(j)] = stat_[static_cast<std::size_t>(j)] == Status::at_upper
                                                 ? wup_[static_cast<std::size_t>(j)]
                                                 : wlo_[static_cast<std::size_t>(j)];
        for (int i = 0; i < nrows_; ++i) v[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = xb_[static_cast<std::size_t>(i)];
        return v;
    }

    void build(const SimplexOptions& opt) {
        nrows_ = static_cast<int>(rows_.size());
        if (nrows_ == 0) throw InputError("simplex: no constraint rows");

        slack_col_.assign(static_cast<std::size_t>(nrows_), -1);
        art_col_.assign(static_cast<std::size_t>(nrows_), -1);
        row_sigma_.assign(static_cast<std::size_t>(nrows_), 1.0);

        int next = nv_;
        for (int i = 0; i < nrows_; ++i)
            if (rows_[static_cast<std::size_t>(i)].sense != RowSense::eq) slack_col_[static_cast<std::size_t>(i)] = next++;

        // Nonbasic start: every structural variable at its lower bound.
        std::vector<double> resid(static_cast<std::size_t>(nrows_));
        for (int i = 0; i < nrows_; ++i) {
            double act = 0.0;
            for (auto [j, v] : rows_[static_cast<std::size_t>(i)].coeffs) act += v * lo_[static_cast<std::size_t>(j)];
            resid[static_cast<std::size_t>(i)] = rows_[static_cast<std::size_t>(i)].rhs - act;
        }

        std::vector<bool> slack_basic(static_cast<std::size_t>(nrows_), false);
        for (int i = 0; i < nrows_; ++i) {
            const auto& row = rows_[static_cast<std::size_t>(i)];
            const double r  = resid[static_cast<std::size_t>(i)];
            if ((row.sense == RowSense::le && r >= 0.0) || (row.sense == RowSense::ge && r <= 0.0))
                slack_basic[static_cast<std::size_t>(i)] = true;
            else
                art_col_[static_cast<std::size_t>(i)] = next++;
        }
        art_begin_       = next;
        has_artificials_ = false;
        for (int i = 0; i < nrows_; ++i) {
            if (art_col_[static_cast<std::size_t>(i)] >= 0) has_artificials_ = true;
        }
        // artificial columns live at the tail; recompute art_begin_ as first artificial
        art_begin_ = ncols_ = next;
        for (int i = 0; i < nrows_; ++i)
            if (art_col_[static_cast<std::size_t>(i)] >= 0) art_begin_ = std::min(art_begin_, art_col_[static_cast<std::size_t>(i)]);

        wlo_.assign(static_cast<std::size_t>(ncols_), 0.0);
        wup_.assign(static_cast<std::size_t>(ncols_), inf());
        for (int j = 0; j < nv_; ++j) {
            wlo_[static_cast<std::size_t>(j)] = lo_[static_cast<std::size_t>(j)];
            wup_[static_cast<std::size_t>(j)] = up_[static_cast<std::size_t>(j)];
        }

        tab_.assign(static_cast<std::size_t>(nrows_) * static_cast<std::size_t>(ncols_), 0.0);
        basis_.assign(static_cast<std::size_t>(nrows_), -1);
        xb_.assign(static_cast<std::size_t>(nrows_), 0.0);
        stat_.assign(static_cast<std::size_t>(ncols_), Status::at_lower);

        for (int i = 0; i < nrows_; ++i) {
            const auto& row = rows_[static_cast<std::size_t>(i)];
            const double r  = resid[static_cast<std::size_t>(i)];
            // The stored row is sigma * (original row), so the initial basic
            // column carries coefficient +1.
            double sigma;
            if (slack_basic[static_cast<std::size_t>(i)]) {
                sigma                               = row.sense == RowSense::le ? 1.0 : -1.0;
                basis_[static_cast<std::size_t>(i)] = slack_col_[static_cast<std::size_t>(i)];
                xb_[static_cast<std::size_t>(i)]    = sigma * r;
            } else {
                sigma                               = r >= 0.0 ? 1.0 : -1.0;
                basis_[static_cast<std::size_t>(i)] = art_col_[static_cast<std::size_t>(i)];
                xb_[static_cast<std::size_t>(i)]    = std::abs(r);
            }
            row_sigma_[static_cast<std::size_t>(i)] = sigma;
            for (auto [j, v] : row.coeffs) t(i, j) = sigma * v;
            if (slack_col_[static_cast<std::size_t>(i)] >= 0)
                t(i, slack_col_[static_cast<std::size_t>(i)]) = sigma * (row.sense == RowSense::le ? 1.0 : -1.0);
            if (art_col_[static_cast<std::size_t>(i)] >= 0) t(i, art_col_[static_cast<std::size_t>(i)]) = 1.0;
            stat_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = Status::basic;
        }

        max_iters_ = opt.max_iterations > 0 ? opt.max_iterations : 200 + 30 * (nrows_ + ncols_);
    }

    SolveStatus run(const std::vector<double>& cost, const SimplexOptions& opt, int& iterations) {
        // Reduced costs from scratch: d = c - c_B^T tableau.
        std::vector<double> d(cost);
        for (int i = 0; i < nrows_; ++i) {
            const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
            if (cb == 0.0) continue;
            for (int j = 0; j < ncols_; ++j) d[static_cast<std::size_t>(j)] -= cb * tc(i, j);
        }

        const int bland_threshold = 10 * nrows_;
        int degen_streak          = 0;
        bool bland                = false;

        for (;;) {
            if (++iterations > max_iters_) return SolveStatus::iteration_limit;

            int q       = -1;
            double best = opt.feas_tol;
            for (int j = 0; j < ncols_; ++j) {
                const Status s = stat_[static_cast<std::size_t>(j)];
                if (s == Status::basic) continue;
                if (wup_[static_cast<std::size_t>(j)] - wlo_[static_cast<std::size_t>(j)] < 1e-15) continue;
                const double dj   = d[static_cast<std::size_t>(j)];
                const double viol = s == Status::at_lower ? -dj : dj;
                if (viol > best) {
                    best = viol;
                    q    = j;
                    if (bland) break; // first eligible index
                }
            }
            if (q < 0) return SolveStatus::optimal;

            const double dir = stat_[static_cast<std::size_t>(q)] == Status::at_lower ? 1.0 : -1.0;

            // Ratio test over basic variables plus the entering bound flip.
            double delta = wup_[static_cast<std::size_t>(q)] - wlo_[static_cast<std::size_t>(q)];
            int leave    = -1; // -1 = bound flip
            for (int i = 0; i < nrows_; ++i) {
                const double w = dir * tc(i, q);
                const int bi   = basis_[static_cast<std::size_t>(i)];
                double limit;
                if (w > opt.pivot_tol) {
                    limit = (xb_[static_cast<std::size_t>(i)] - wlo_[static_cast<std::size_t>(bi)]) / w;
                } else if (w < -opt.pivot_tol && std::isfinite(wup_[static_cast<std::size_t>(bi)])) {
                    limit = (wup_[static_cast<std::size_t>(bi)] - xb_[static_cast<std::size_t>(i)]) / (-w);
                } else {
                    continue;
                }
                if (limit < 0.0) limit = 0.0;
                bool better;
                if (limit < delta - 1e-12) {
                    better = true;
                } else if (limit <= delta + 1e-12 && leave >= 0) {
                    better = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]
                                   : std::abs(tc(i, q)) > std::abs(tc(leave, q));
                } else {
                    better = false;
                }
                if (better) {
                    delta = std::min(delta, limit);
                    leave = i;
                }
            }
            if (!std::isfinite(delta)) return SolveStatus::unbounded;

            if (delta <= 1e-11) {
                if (++degen_streak > bland_threshold) bland = true;
            } else {
                degen_streak = 0;
                bland        = false;
            }

            if (leave < 0) {
                // Bound flip: the entering variable crosses to its other bound.
                for (int i = 0; i < nrows_; ++i) xb_[static_cast<std::size_t>(i)] -= dir * delta * tc(i, q);
                stat_[static_cast<std::size_t>(q)] =
                    stat_[static_cast<std::size_t>(q)] == Status::at_lower ? Status::at_upper : Status::at_lower;
                continue;
            }

            const int out          = basis_[static_cast<std::size_t>(leave)];
            const double enter_val = (stat_[static_cast<std::size_t>(q)] == Status::at_lower
                                          ? wlo_[static_cast<std::size_t>(q)]
                                          : wup_[static_cast<std::size_t>(q)]) +
                                     dir * delta;
            for (int i = 0; i < nrows_; ++i)
                if (i != leave) xb_[static_cast<std::size_t>(i)] -= dir * delta * tc(i, q);

            const double w_leave                    = dir * tc(leave, q);
            stat_[static_cast<std::size_t>(out)]    = w_leave > 0.0 ? Status::at_lower : Status::at_upper;
            stat_[static_cast<std::size_t>(q)]      = Status::basic;
            basis_[static_cast<std::size_t>(leave)] = q;
            xb_[static_cast<std::size_t>(leave)]    = enter_val;

            pivot(leave, q, d);
        }
    }

    void pivot(int r, int q, std::vector<double>& d) {
        const double piv = tc(r, q);
        if (std::abs(piv) < 1e-13) throw SolverError("simplex: numerically singular pivot");
        const double inv = 1.0 / piv;
        double* rowr     = &t(r, 0);
        for (int j = 0; j < ncols_; ++j) rowr[j] *= inv;
        rowr[q] = 1.0;
        for (int i = 0; i < nrows_; ++i) {
            if (i == r) continue;
            const double f = tc(i, q);
            if (f == 0.0) continue;
            double* rowi = &t(i, 0);
            for (int j = 0; j < ncols_; ++j) rowi[j] -= f * rowr[j];
            rowi[q] = 0.0;
        }
        const double fd = d[static_cast<std::size_t>(q)];
        if (fd != 0.0) {
            for (int j = 0; j < ncols_; ++j) d[static_cast<std::size_t>(j)] -= fd * rowr[j];
            d[static_cast<std::size_t>(q)] = 0.0;
        }
    }

    // Re-solve B x_B = b - N x_N against the original column data to shed the
    // rounding drift accumulated by tableau updates.
    void refine_basic_values() {
        const int nr = nrows_;
        const std::vector<double> vals = column_values();
        std::vector<double> M(static_cast<std::size_t>(nr) * static_cast<std::size_t>(nr), 0.0);
        std::vector<double> rhs(static_cast<std::size_t>(nr), 0.0);
        for (int i = 0; i < nr; ++i) {
            const auto& row = rows_[static_cast<std::size_t>(i)];
            double b        = row.rhs;
            for (auto [j, v] : row.coeffs)
                if (stat_[static_cast<std::size_t>(j)] != Status::basic) b -= v * vals[static_cast<std::size_t>(j)];
            const int sc = slack_col_[static_cast<std::size_t>(i)];
            if (sc >= 0 && stat_[static_cast<std::size_t>(sc)] != Status::basic)
                b -= original_coef(i, sc) * vals[static_cast<std::size_t>(sc)];
            rhs[static_cast<std::size_t>(i)] = b;
            for (int col = 0; col < nr; ++col)
                M[static_cast<std::size_t>(i) * static_cast<std::size_t>(nr) + static_cast<std::size_t>(col)] =
                    original_coef(i, basis_[static_cast<std::size_t>(col)]);
        }
        if (!solve_dense(M, rhs, nr)) return; // keep tableau values on a near-singular basis
        for (int i = 0; i < nr; ++i) {
            // clamp tiny violations introduced by the re-solve
            const int bi = basis_[static_cast<std::size_t>(i)];
            double v     = rhs[static_cast<std::size_t>(i)];
            v            = std::max(v, wlo_[static_cast<std::size_t>(bi)] - 1e-9);
            v            = std::min(v, wup_[static_cast<std::size_t>(bi)] + 1e-9);
            xb_[static_cast<std::size_t>(i)] = v;
        }
    }

    static bool solve_dense(std::vector<double>& M, std::vector<double>& rhs, int n) {
        auto m = [&](int i, int j) -> double& { return M[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; };
        for (int c = 0; c < n; ++c) {
            int p = c;
            for (int i = c + 1; i < n; ++i)
                if (std::abs(m(i, c)) > std::abs(m(p, c))) p = i;
            if (std::abs(m(p, c)) < 1e-13) return false;
            if (p != c) {
                for (int j = c; j < n; ++j) std::swap(m(p, j), m(c, j));
                std::swap(rhs[static_cast<std::size_t>(p)], rhs[static_cast<std::size_t>(c)]);
            }
            for (int i = c + 1; i < n; ++i) {
                const double f = m(i, c) / m(c, c);
                if (f == 0.0) continue;
                for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
                rhs[static_cast<std::size_t>(i)] -= f * rhs[static_cast<std::size_t>(c)];
            }
        }
        for (int c = n - 1; c >= 0; --c) {
            double v = rhs[static_cast<std::size_t>(c)];
            for (int j = c + 1; j < n; ++j) v -= m(c, j) * rhs[static_cast<std::size_t>(j)];
            rhs[static_cast<std::size_t>(c)] = v / m(c, c);
        }
        return true;
    }

    double max_row_residual(const std::vector<double>& vals) const {
        double worst = 0.0;
        for (int i = 0; i < nrows_; ++i) {
            const auto& row = rows_[static_cast<std::size_t>(i)];
            double act      = 0.0;
            for (auto [j, v] : row.coeffs) act += v * vals[static_cast<std::size_t>(j)];
            double r = 0.0;
            switch (row.sense) {
                case RowSense::eq: r = std::abs(act - row.rhs); break;
                case RowSense::le: r = std::max(0.0, act - row.rhs); break;
                case RowSense::ge: r = std::max(0.0, row.rhs - act); break;
            }
            worst = std::max(worst, r);
        }
        return worst;
    }

    int nv_ = 0;
    std::vector<double> lo_, up_, c_;
    std::vector<Row> rows_;

    // solver workspace
    int nrows_ = 0, ncols_ = 0, art_begin_ = 0, max_iters_ = 0;
    bool has_artificials_ = false;
    std::vector<double> tab_, xb_, wlo_, wup_;
    std::vector<int> basis_, slack_col_, art_col_;
    std::vector<double> row_sigma_;
    std::vector<Status> stat_;
};

} // namespace owakm::lp
