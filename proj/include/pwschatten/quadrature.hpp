#pragma once

#include <vector>

namespace pws {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [−1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss–Legendre of the given order on consecutive panels of length
/// `panel` covering [lo, hi] (the last panel is shortened if needed).
QuadratureRule composite_gauss_legendre(double lo, double hi, double panel, int order = 16);

/// Trapezoid nodes lo, lo+h, ..., hi with end weights h/2. For integrands
/// of exponential type < 2π/h that decay at infinity this is the
/// Poisson-summation exact rule up to truncation.
QuadratureRule trapezoid(double lo, double hi, double h);

}  // namespace pws
