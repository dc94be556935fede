#include <cmath>
#include <numbers>

#include "rodsim/discretization.hpp"
#include "rodsim/errors.hpp"

namespace rodsim::fem {

QuadRule gauss_legendre(int n) {
    if (n < 1 || n > 32) throw ValidationError("gauss_legendre: order must be in [1, 32]");
    QuadRule q;
    q.xi.resize(n);
    q.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            const double p = n == 1 ? x : p1;
            dp = n * (x * p - p0) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (n == 1) dp = 1.0;
        // Map from [-1, 1] to [0, 1], ascending.
        q.xi[n - 1 - i] = 0.5 * (x + 1.0);
        q.w[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace rodsim::fem
