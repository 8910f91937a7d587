#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "owakm/errors.hpp"

namespace owakm::bound {

// Largest interval index the per-interval evaluator supports; beyond it only
// the closed-form tail expression is meaningful.
inline constexpr int kMaxEll = 200;
inline constexpr int kTailSwitch = 89;

namespace detail {

template <class Real>
Real pow_int(Real base, int e) {
    Real r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// I_t(a, b) = integral of e^-x x^t over [a, b], by the upward recurrence
// I_t = (e^-a a^t - e^-b b^t) + t I_{t-1}, I_0 = e^-a - e^-b. All summands
// stay positive for t <= a, so the recurrence does not cancel there.
template <class Real>
Real exp_moment_integral_impl(int t, Real a, Real b) {
    using std::exp;
    const Real ea = exp(-a), eb = exp(-b);
    Real value = ea - eb;
    Real pa = 1, pb = 1;
    for (int tt = 1; tt <= t; ++tt) {
        pa *= a;
        pb *= b;
        value = (ea * pa - eb * pb) + tt * value;
    }
    return value;
}

// Lower integral P(t, x) = integral of e^-u u^t over [0, x], from the
// all-positive series t! e^-x sum_{i > t} x^i / i!.
inline long double exp_moment_lower(int t, long double x) {
    if (x <= 0) return 0.0L;
    long double fact = 1.0L;
    for (int i = 2; i <= t; ++i) fact *= i;
    long double term = 1.0L; // becomes x^{t+1} / (t+1)!
    for (int i = 1; i <= t + 1; ++i) term *= x / i;
    long double sum = 0.0L;
    for (int i = t + 1; i < 200000; ++i) {
        sum += term;
        term *= x / (i + 1);
        if (i > x && term < sum * 1e-25L) break;
    }
    return fact * std::exp(-x) * sum;
}

// Per-interval ratio bound: 1 + l * sum_{t=1}^{l-1} 1/(t(t+1)) (e/t)^t I_t(l-1, l).
template <class Real>
Real ratio_upper_impl(int ell) {
    using std::exp;
    const Real a = ell - 1, b = ell;
    const Real ea = exp(-a), eb = exp(-b);
    Real integral = ea - eb;
    Real pa = 1, pb = 1;
    Real sum = 0;
    for (int t = 1; t <= ell - 1; ++t) {
        pa *= a;
        pb *= b;
        integral = (ea * pa - eb * pb) + t * integral;
        const Real coef = pow_int(exp(Real(1)) / t, t) / (Real(t) * (t + 1));
        sum += coef * integral;
    }
    return 1 + ell * sum;
}

} // namespace detail

inline double exp_moment_integral(int t, double a, double b) {
    if (t < 0 || t > kMaxEll) throw InputError("exp_moment_integral: t out of range [0, 200]");
    if (!(a >= 0.0) || !(b >= a)) throw InputError("exp_moment_integral: requires 0 <= a <= b");
    return static_cast<double>(detail::exp_moment_integral_impl<long double>(t, a, b));
}

inline double ratio_upper(int ell) {
    if (ell < 1 || ell > kMaxEll) throw InputError("ratio_upper: ell out of range [1, 200]");
    return static_cast<double>(detail::ratio_upper_impl<long double>(ell));
}

// 3 sqrt(2 pi) e^{13/12}; the coefficient of 1/sqrt(l) in the analytic tail.
inline double tail_coefficient() {
    const long double pi = 3.14159265358979323846264338328L;
    return static_cast<double>(3.0L * std::sqrt(2.0L * pi) * std::exp(13.0L / 12.0L));
}

// Closed-form analytic tail bound, valid from the switch point l = 89 on; at
// l = 89 it evaluates to about 2.35506 < 2.3551 and it decreases in l.
inline double tail_bound(int ell) {
    if (ell < kTailSwitch) throw InputError("tail_bound: requires ell >= 89");
    return tail_coefficient() / std::sqrt(static_cast<double>(ell));
}

struct BoundRow {
    int ell = 0;
    double ratio_upper = 0.0;
    std::optional<double> tail_bound; // present from ell = 89 on
};

inline std::vector<BoundRow> bound_table(int l_max) {
    if (l_max < 1 || l_max > kMaxEll) throw InputError("bound_table: l_max out of range [1, 200]");
    std::vector<BoundRow> rows;
    rows.reserve(static_cast<std::size_t>(l_max));
    for (int ell = 1; ell <= l_max; ++ell) {
        BoundRow row;
        row.ell         = ell;
        row.ratio_upper = ratio_upper(ell);
        if (ell >= kTailSwitch) row.tail_bound = tail_bound(ell);
        rows.push_back(row);
    }
    return rows;
}

struct MaxRatio {
    double value = 0.0;
    int argmax   = 0;
};

inline MaxRatio max_ratio(int l_max) {
    MaxRatio best;
    for (const auto& row : bound_table(l_max)) {
        if (row.ratio_upper > best.value) {
            best.value  = row.ratio_upper;
            best.argmax = row.ell;
        }
    }
    return best;
}

// The chain of successive upper bounds behind the analytic tail, evaluated
// numerically: stage 0 is the per-interval expression minus one, each later
// stage replaces one estimate (integrand sup, Stirling, e^{1/(12t)} <= e^{1/12},
// sqrt(l/t) <= l/t, 1/t <= 3/(t+2), Taylor) and so must not decrease.
inline std::array<double, 7> tail_chain_stages(int ell) {
    if (ell < 2 || ell > kMaxEll) throw InputError("tail_chain_stages: ell out of range [2, 200]");
    const long double pi    = 3.14159265358979323846264338328L;
    const long double L     = ell;
    const long double logL  = std::log(L);
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0;
    for (int t = 1; t <= ell - 1; ++t) {
        const long double T = t;
        const long double logT = std::log(T);
        s1 += std::exp(-logT - std::log(T + 1) + T - T * logT - (L - 1) + T * logL);
        s2 += std::exp(-logT - std::log(T + 1) + 0.5L * std::log(2 * pi * T) + 1 / (12 * T) -
                       std::lgamma(T + 1) - (L - 1) + T * logL);
        s3 += std::exp((T + 1) * logL - std::lgamma(T + 2) - 0.5L * logT - (L - 1));
        s4 += std::exp((T + 1) * logL - std::lgamma(T + 2) + logL - logT - L);
        s5 += std::exp((T + 2) * logL - std::lgamma(T + 3) - L);
    }
    const long double c0 = std::sqrt(2 * pi);
    const long double e112 = std::exp(1.0L / 12.0L);
    const long double e1312 = std::exp(13.0L / 12.0L);
    std::array<double, 7> stages{};
    stages[0] = ratio_upper(ell) - 1.0;
    stages[1] = static_cast<double>(L * s1);
    stages[2] = static_cast<double>(L * s2);
    stages[3] = static_cast<double>(c0 * e112 * s3);
    stages[4] = static_cast<double>(c0 * e1312 / std::sqrt(L) * s4);
    stages[5] = static_cast<double>(3 * c0 * e1312 / std::sqrt(L) * s5);
    stages[6] = tail_coefficient() / std::sqrt(static_cast<double>(ell));
    return stages;
}

} // namespace owakm::bound
