#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "owakm/errors.hpp"
#include "owakm/rational.hpp"

namespace owakm {

enum class WeightFamily { harmonic, geometric, top_r, custom };

inline const char* family_name(WeightFamily f) {
    switch (f) {
        case WeightFamily::harmonic: return "harmonic";
        case WeightFamily::geometric: return "geometric";
        case WeightFamily::top_r: return "top_r";
        case WeightFamily::custom: return "custom";
    }
    return "?";
}

// Non-increasing weight vector (w_1, ..., w_k), w_1 > 0. The named families
// additionally keep exact rational values, which the fault-tolerant reduction
// requires; float-valued custom vectors have no exact view.
class WeightVector {
public:
    static WeightVector harmonic(int k) {
        WeightVector w(WeightFamily::harmonic, k);
        std::vector<Rational> exact;
        exact.reserve(k);
        for (int i = 0; i < k; ++i) exact.emplace_back(1, i + 1);
        w.assign_exact(std::move(exact));
        return w;
    }

    static WeightVector geometric(int k, const Rational& p) {
        if (p <= 0 || p >= 1) throw InputError("geometric weights require 0 < p < 1");
        WeightVector w(WeightFamily::geometric, k);
        w.geom_p_ = to_double(p);
        std::vector<Rational> exact;
        exact.reserve(k);
        Rational cur = 1;
        for (int i = 0; i < k; ++i) {
            exact.push_back(cur);
            cur *= p;
        }
        w.assign_exact(std::move(exact));
        return w;
    }

    // The double is read through its shortest decimal form, so geometric(k, 0.5)
    // has exact ratio 1/2 and geometric(k, 0.1) has exact ratio 1/10.
    static WeightVector geometric(int k, double p) { return geometric(k, rational_from_shortest_decimal(p)); }

    static WeightVector top_r(int k, int r) {
        if (r < 1 || r > k) throw InputError("top_r weights require 1 <= r <= k");
        WeightVector w(WeightFamily::top_r, k);
        w.top_r_ = r;
        std::vector<Rational> exact(k, Rational(0));
        for (int i = 0; i < r; ++i) exact[i] = 1;
        w.assign_exact(std::move(exact));
        return w;
    }

    static WeightVector custom(std::vector<double> values) {
        WeightVector w(WeightFamily::custom, static_cast<int>(values.size()));
        w.values_ = std::move(values);
        w.validate();
        return w;
    }

    static WeightVector custom_rational(std::vector<Rational> values) {
        WeightVector w(WeightFamily::custom, static_cast<int>(values.size()));
        w.assign_exact(std::move(values));
        return w;
    }

    int k() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

    WeightFamily family() const { return family_; }
    double geometric_p() const { return geom_p_; }
    int top_r_count() const { return top_r_; }

    bool has_exact() const { return exact_.has_value(); }
    const std::vector<Rational>& exact() const {
        if (!exact_) throw InputError("weight vector has no exact rational values");
        return *exact_;
    }

    // Number of strictly positive weights; trailing zero-weight copies carry
    // no objective mass and are dropped from the LP.
    int positive_count() const {
        int c = 0;
        while (c < k() && values_[static_cast<std::size_t>(c)] > 0.0) ++c;
        return c;
    }

private:
    WeightVector(WeightFamily f, int k) : family_(f) {
        if (k < 1) throw InputError("weight vector must have positive length");
        values_.resize(static_cast<std::size_t>(k));
    }

    void assign_exact(std::vector<Rational> exact) {
        for (std::size_t i = 0; i < exact.size(); ++i) values_[i] = to_double(exact[i]);
        exact_ = std::move(exact);
        validate();
    }

    void validate() const {
        if (values_.empty() || !(values_.front() > 0.0))
            throw InputError("weight vector must start with a positive weight");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            double v = values_[i];
            if (!std::isfinite(v) || v < 0.0) throw InputError("weights must be finite and nonnegative");
            if (i + 1 < values_.size() && values_[i + 1] > v + 0.0)
                throw InputError("weights must be non-increasing");
        }
        if (exact_) {
            for (std::size_t i = 0; i + 1 < exact_->size(); ++i)
                if ((*exact_)[i + 1] > (*exact_)[i]) throw InputError("weights must be non-increasing");
            if ((*exact_)[0] <= 0) throw InputError("weight vector must start with a positive weight");
        }
    }

    WeightFamily family_;
    std::vector<double> values_;
    std::optional<std::vector<Rational>> exact_;
    double geom_p_ = 0.0;
    int top_r_     = 0;
};

} // namespace owakm
