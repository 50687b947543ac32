#pragma once

#include <span>
#include <vector>

#include "pwschatten/lattice.hpp"

namespace pws {

/// Least-absolute-deviation polynomial fit.
struct L1Fit {
    /// Monomial coefficients in x, lowest degree first (length n+1).
    std::vector<double> coeffs;
    /// (1/m)·Σ|y_i − P(x_i)| at the optimum.
    double mean_abs_residual = 0.0;
    /// Simplex iterations used.
    int iterations = 0;
};

struct ComplexL1Fit {
    std::vector<cplx> coeffs;
    double mean_abs_residual = 0.0;
};

/// Global minimizer of (1/m)·Σ|ys_i − P(xs_i)| over polynomials of degree <= n.
///
/// The optimum is attained at a polynomial interpolating n+1 of the points;
/// the solver walks those interpolating bases (a primal simplex whose ratio
/// test is an exact weighted-median line search) until no edge descends.
/// Throws on empty input or non-increasing xs.
L1Fit l1_poly_fit(std::span<const double> xs, std::span<const double> ys, int n);

/// Complex data. SplitParts fits real and imaginary parts separately and
/// reports (1/m)Σ(|Re r_i| + |Im r_i|); Modulus minimizes (1/m)Σ|r_i| by
/// reweighted least squares seeded from the split fits.
ComplexL1Fit l1_poly_fit_complex(std::span<const double> xs, std::span<const cplx> ys, int n, ComplexOsc mode);

namespace detail {

/// Optimal mean absolute residual for data at equispaced abscissae.
double lad_uniform(std::span<const double> ys, int n);

/// Optimal mean complex-modulus residual at equispaced abscissae.
double lad_uniform_modulus(std::span<const cplx> ys, int n);

}  // namespace detail

}  // namespace pws
