// Prints the per-interval ratio table next to the analytic tail bound.

#include <cstdio>

#include "owakm/bound.hpp"

int main() {
    using namespace owakm;
    std::printf("%4s %12s %12s\n", "ell", "ratio_upper", "tail_bound");
    for (const auto& row : bound::bound_table(100)) {
        if (row.tail_bound)
            std::printf("%4d %12.6f %12.6f\n", row.ell, row.ratio_upper, *row.tail_bound);
        else
            std::printf("%4d %12.6f %12s\n", row.ell, row.ratio_upper, "-");
    }
    const auto mx = bound::max_ratio(88);
    std::printf("max over [1,88]: %.6f at ell=%d\n", mx.value, mx.argmax);
    return 0;
}
