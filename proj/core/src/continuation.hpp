#pragma once

#include <algorithm>

namespace rodsim::statics::detail {

// Drives the load factor from 0 to 1 in uniform increments of 1/load_steps.
// A failed increment is retried at half size, at most max_cutbacks times in a
// row; attempt(lambda) must leave the state untouched when it fails.
template <typename Attempt>
bool run_continuation(int load_steps, int max_cutbacks, Attempt&& attempt) {
    const double base = 1.0 / load_steps;
    double lambda = 0.0, inc = base;
    int cuts = 0;
    while (lambda < 1.0) {
        double target = lambda + inc;
        if (1.0 - target < 1e-12) target = 1.0;
        if (attempt(target)) {
            lambda = target;
            cuts = 0;
            inc = std::min(base, 2.0 * inc);
        } else {
            if (++cuts > max_cutbacks) return false;
            inc *= 0.5;
        }
    }
    return true;
}

}  // namespace rodsim::statics::detail
