#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pwschatten/lattice.hpp"

namespace pws {

enum class KernelFamily {
    /// ρ_{a,λ}, spectrum [−a, a]
    FullBand,
    /// k_{a,λ}, spectrum [0, a]
    HalfBand,
    /// spectrum [−a, 0]
    NegativeHalfBand,
};

/// Reproducing kernel at λ of a Paley–Wiener space: (f, κ_λ) = f(λ).
struct KernelSpec {
    KernelFamily family = KernelFamily::FullBand;
    double a = 1.0;
    cplx lambda{};
};

cplx kernel_eval(const KernelSpec& spec, cplx z);

/// ‖κ_λ‖² = κ_λ(λ).
double kernel_norm_sq(const KernelSpec& spec);

/// G[i][j] = ⟨κ_{λ_j}, κ_{λ_i}⟩ = κ_{λ_j}(λ_i). All specs must share family and a.
Eigen::MatrixXcd gram_matrix(std::span<const KernelSpec> specs);

enum class PointKind { UPlus, UMinus, LatticePoint };

struct StructuredPoint {
    cplx z;
    PointKind kind;
};

/// Box |Re λ| <= max_abs_re, |Im λ| <= max_abs_im.
struct PointWindow {
    double max_abs_re = 0.0;
    double max_abs_im = 0.0;
};

/// Λ_{ηa,ε} ∩ window: the points (1+ε)^m(εx ± i) with |Im| > ε/(ηa) and the
/// lattice Z_{ηa}. Sorted by (Im, Re), duplicates removed.
std::vector<StructuredPoint> generate_lambda_set(double eps, double eta, double a, const PointWindow& window);

struct EmbeddingCheck {
    double defect = 0.0;
    /// Bound on the contribution of lattice points beyond the window.
    double tail_bound = 0.0;
};

/// max over pairs of |⟨κ_λ,κ_μ⟩ − Σ_{|k|<=radius} w·κ_λ(x_k)·conj(κ_μ(x_k))|.
/// Half-band kernels (either sign) are sampled on Z_a with weight 2π/a;
/// full-band kernels on (π/a)ℤ with weight π/a. radius < 0 means an empty window.
EmbeddingCheck sampling_embedding_check(double a, std::span<const KernelSpec> specs, index_t radius);

}  // namespace pws
