#pragma once

#include <array>
#include <vector>

#include "pwschatten/lattice.hpp"
#include "pwschatten/operators.hpp"
#include "pwschatten/spectrum.hpp"

namespace pws {

/// H[j][k] = 1/(π(j−k)), zero diagonal, on Z_a indices k_min..k_max in the
/// orthonormal weighted-delta basis.
DenseOperator hilbert_matrix(double a, index_t k_min, index_t k_max);

enum class CommutatorVariant {
    /// C_ψ on L²(μ_a)
    Square,
    /// C̃_ψ: L²(μ_{a/2}) → L²(ν_{a/2}); columns at even, rows at odd indices of Z_a
    Rectangular,
};

struct CommutatorSpec {
    LatticeFunction psi;
    CommutatorVariant variant = CommutatorVariant::Square;
    /// Z_a index window; the rectangular variant uses its even and odd members.
    index_t k_min = 0;
    index_t k_max = -1;
};

/// Square: (ψ_j − ψ_k)/(π(j−k)). Rectangular: 2(ψ_{2i+1} − ψ_{2k})/(π(2i+1−2k)).
DenseOperator commutator_matrix(const CommutatorSpec& spec);

/// Exact singular values of the full (untruncated) commutator for a
/// compactly supported ψ (zero tail): C = M_ψH − HM_ψ is a finite-rank
/// operator whose Gram matrices are known in closed form.
SingularSpectrum commutator_singular_values(const LatticeFunction& psi, CommutatorVariant variant,
                                            double rank_cutoff = kDefaultRankCutoff);

enum class SymbolOrder {
    /// Im λ/(t − λ̄)
    First,
    /// |Im λ|²/(t − λ̄)²
    Second,
};

/// Samples of ψ_λ on Z_a with the exact sampler attached.
LatticeFunction counterexample_symbol(SymbolOrder order, cplx lambda, double a);

enum class MultiplierKind {
    /// Im λ/(x − λ̄)²
    First,
    /// 2|Im λ|²/(x − λ̄)³
    Third,
};

struct LatticeSeries {
    /// Σ_{x∈Z_a} |m(x)|^p
    double p_sum = 0.0;
    /// (p_sum)^{1/p}
    double quasinorm = 0.0;
    /// Half-width of the bracket on the tail beyond the summed range.
    double uncertainty = 0.0;
};

/// Schatten quasinorm of a multiplication operator on L²(μ_a); its singular
/// values are the moduli of the multiplier on the lattice.
/// Raises Error when the series diverges (2p <= 1 for First, 3p <= 1 for Third).
LatticeSeries multiplication_schatten(MultiplierKind kind, cplx lambda, double a, double p);

/// Σ_{x∈Z_a} (2π/a)/|x − λ̄|², in closed form.
double lattice_cauchy_energy(cplx lambda, double a);

/// Norm of the rank-one K_{ψ_λ} (order-one symbol) on L²(μ_a), with the
/// (1/π)-normalization of C_ψ: (|Im λ|/π)·‖1/(x − λ̄)‖²_{L²(μ_a)}.
/// Its S^p quasinorm is this value for every p.
double rank_one_K(cplx lambda, double a);

/// The two singular values of the rank-two K_{ψ_λ} for the order-two symbol.
std::array<double, 2> rank_two_K(cplx lambda, double a);

struct TruncatedCommutator {
    /// Bracket on Σσ^p of the truncation to |k| <= window.
    double lower_p_sum = 0.0;
    double upper_p_sum = 0.0;
    index_t window = 0;
    /// True when the bracket collapsed to a dense SVD value.
    bool dense = false;
};

/// Σσ^p of C_{ψ_λ} (order-one symbol) truncated to Z_a indices |k| <= window.
/// Small windows use a dense SVD; larger ones use the interlacing bracket of
/// a rank-one perturbation of a diagonal matrix.
TruncatedCommutator truncated_commutator_schatten(cplx lambda, double a, double p, index_t window,
                                                  index_t dense_limit = 700);

struct HankelAtom {
    /// Point of the kernel of PW_{[−a,0]} (bandwidth a).
    cplx mu;
    cplx c;
};

struct HankelCommutatorCheck {
    Eigen::MatrixXcd hankel;
    /// C̃_ψ on the same rows and columns.
    Eigen::MatrixXcd commutator;
    /// max |Γ − (−i)·C̃| entrywise.
    double diff_minus_i = 0.0;
    /// max |Γ − (i/2)·C̃| entrywise. Evaluating the sampling embeddings on
    /// the interleaved lattices gives F(x) = (1/(πi))∫f(t)/(t−x)dμ(t), hence
    /// the constant i/2 in place of −i.
    double diff_half_i = 0.0;
    double tail_bound = 0.0;
};

/// Compares, on rows/columns −N..N, the truncated Hankel operator
/// Γ_Ψ: PW_{[0,a/2]} → PW_{[−a/2,0]} with Ψ = Σ c·K_{a,μ} (spectrum in [−a,0]),
/// conjugated by the sampling embeddings onto the lattices of C̃, against −i·C̃_ψ
/// for ψ = Ψ on Z_a. The integrals use the trapezoid rule with step π/a, exact
/// for the band-limited integrand up to truncation at |x| <= half_length.
HankelCommutatorCheck hankel_commutator_identity(const std::vector<HankelAtom>& atoms, double a, index_t N,
                                                 double half_length);

}  // namespace pws
