#include "qdl/quadrature.hpp"

#include <numbers>

namespace qdl::quad {

GaussLegendre::GaussLegendre(int order) : nodes_(order), weights_(order) {
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussLegendre& gauss_legendre20() {
    static const GaussLegendre rule(20);
    return rule;
}

}  // namespace qdl::quad
