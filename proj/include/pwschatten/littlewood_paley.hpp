#pragma once

#include <span>
#include <vector>

#include "pwschatten/lattice.hpp"

namespace pws {

/// Smooth step: 1 on (−∞, 1/2], 0 on [1, ∞), built from exp(−1/x).
double smooth_step(double x);

/// ν_j on [0, 1] for the telescoping partition ν_j(x) = S(x/2^j) − S(x/2^{j−1})
/// (j <= −1), its reflection ν_j(x) = ν_{−j}(1 − x) (j >= 1), and ν_0 = 1 − Σ_{j≠0} ν_j.
double partition_piece(int j, double x, int j_max);

struct RochbergPellerGrid {
    int j_max = 6;
    /// Zero padding factor of the inverse FFT.
    int pad_factor = 8;
};

struct RochbergPellerValue {
    /// a·Σ_j 2^{−|j|}‖F^{−1}(ν_{2a,j}·φ̂)‖_p^p
    double value = 0.0;
    /// index j + j_max holds the unweighted ‖·‖_p^p of piece j
    std::vector<double> terms;
    /// Fraction of the p-th power mass on the outer tenth of the FFT window,
    /// a proxy for wrap-around error.
    double aliasing_estimate = 0.0;
};

/// Diagnostic estimate of the Rochberg–Peller functional from samples of φ̂
/// on a uniform grid covering [−2a, 2a] including both endpoints.
RochbergPellerValue rochberg_peller_functional(std::span<const cplx> phi_hat, double a, double p,
                                               const RochbergPellerGrid& grid = {});

}  // namespace pws
