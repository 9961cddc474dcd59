#pragma once

#include <string>

#include "dkposc/errors.hpp"

namespace dkposc {

/// Generalized Laguerre polynomial L_n^order(x), evaluated by the three-term
/// recurrence upward in n. Stable for the moderate n (<~ 50) needed here.
inline double laguerre(int n, double order, double x) {
    if (n < 0) {
        throw DomainError("laguerre: n must be >= 0, got " + std::to_string(n));
    }
    if (!(order > -1.0)) {
        throw DomainError("laguerre: order must be > -1, got " + std::to_string(order));
    }
    if (!(x >= 0.0)) {
        throw DomainError("laguerre: x must be >= 0, got " + std::to_string(x));
    }
    double prev = 1.0;  // L_0
    if (n == 0) return prev;
    double cur = 1.0 + order - x;  // L_1
    for (int j = 1; j < n; ++j) {
        const double next =
            ((2.0 * j + 1.0 + order - x) * cur - (j + order) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace dkposc
