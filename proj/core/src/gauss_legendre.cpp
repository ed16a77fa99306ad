#include "gauss_legendre.hpp"

#include <cmath>

#include "condtab/errors.hpp"

namespace condtab {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw validation_error("gauss_legendre: order must be >= 1");
    std::vector<double> nodes((std::size_t)n), weights((std::size_t)n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(M_PI * ((double)i + 0.75) / ((double)n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / (double)k;
                p0 = p1;
                p1 = p2;
            }
            dp = (double)n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[(std::size_t)i] = -x;
        nodes[(std::size_t)(n - 1 - i)] = x;
        weights[(std::size_t)i] = w;
        weights[(std::size_t)(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes[(std::size_t)(n / 2)] = 0.0;
    return {nodes, weights};
}

} // namespace condtab
