#include "pwschatten/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "pwschatten/lattice.hpp"

namespace pws {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw Error("Gauss-Legendre order must be positive");
    QuadratureRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
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
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

QuadratureRule composite_gauss_legendre(double lo, double hi, double panel, int order) {
    if (!(hi > lo) || !(panel > 0.0)) throw Error("composite quadrature needs lo < hi and a positive panel");
    const auto base = gauss_legendre(order);
    QuadratureRule r;
    for (double left = lo; left < hi; left += panel) {
        const double right = std::min(hi, left + panel);
        if (right - left < 1e-14 * panel) break;
        const double mid = 0.5 * (left + right), half = 0.5 * (right - left);
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            r.nodes.push_back(mid + half * base.nodes[i]);
            r.weights.push_back(half * base.weights[i]);
        }
    }
    return r;
}

QuadratureRule trapezoid(double lo, double hi, double h) {
    if (!(hi > lo) || !(h > 0.0)) throw Error("trapezoid rule needs lo < hi and h > 0");
    const auto n = static_cast<long>(std::llround((hi - lo) / h));
    QuadratureRule r;
    for (long i = 0; i <= n; ++i) {
        r.nodes.push_back(lo + h * static_cast<double>(i));
        r.weights.push_back((i == 0 || i == n) ? 0.5 * h : h);
    }
    return r;
}

}  // namespace pws
