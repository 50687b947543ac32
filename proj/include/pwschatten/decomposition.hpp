#pragma once

#include <utility>
#include <vector>

#include "pwschatten/besov.hpp"
#include "pwschatten/operators.hpp"

namespace pws {

struct RankTwoDiff {
    /// ‖T_{φ_λ} − T_{φ_ζ}‖_{S^p}, φ_λ = ρ_{2a,λ}/‖ρ_{a,λ}‖².
    double exact = 0.0;
    /// 2^{1/p+1/2}(1 − Re ρ_{a,ζ}(λ)/(‖ρ_{a,ζ}‖‖ρ_{a,λ}‖))^{1/2}
    double bound = 0.0;
};

RankTwoDiff rank_two_diff_schatten(cplx lambda, cplx zeta, double a, double p);

/// Nearest point of Λ_{ηa,ε} to z. Ties go to the smaller (Im, Re).
cplx nearest_structured_point(cplx z, double eps, double eta, double a);

struct EtaGrid {
    /// Multiplicative (1+ε)-cells sampled below the height cut ε/(ηa).
    int cells = 6;
    /// Real positions per height, spread over one period of Z_{ηa}.
    int re_samples = 17;
    /// Largest exponent k tried for η = 2^k.
    int max_log2 = 30;
};

struct EtaChoice {
    double eta = 1.0;
    /// sup over the sample grid of ‖T_{φ_λ} − T_{φ_{ζ_λ}}‖^p at the chosen η.
    double sup_p = 0.0;
    /// (η, sup) for every η tried, in order.
    std::vector<std::pair<double, double>> trace;
};

/// Points of Λ_ε = U_ε^± ∪ Z_{2a} that are not in Λ_{ηa,ε} and lie within
/// `cells` height cells of the cut, over one period; the grid used by choose_eta.
std::vector<cplx> eta_sample_grid(double eps, double eta, double a, const EtaGrid& grid);

/// Smallest η = 2^k (k >= 1) whose grid supremum is <= 1/2. The grid covers a
/// few cells below the cut and relies on approximate scale covariance,
/// so this is a heuristic choice, not a proof.
EtaChoice choose_eta(double p, double eps, double a, const EtaGrid& grid = {});

struct SnapResult {
    AtomicSymbol snapped;
    /// (λ, ζ_λ) per input atom, in input order.
    std::vector<std::pair<cplx, cplx>> mapping;
    /// Σ|c_λ|^p·‖T_{φ_λ} − T_{φ_{ζ_λ}}‖^p, which bounds the p-th power of the residual.
    double residual_bound_p = 0.0;
};

/// Moves every atom to its nearest point of Λ_{ηa,ε} and merges coefficients.
SnapResult snap_atoms(const AtomicSymbol& sym, double eta, double eps, double p);

/// Σσ^p of T_φ − T_ψ, both atomic over the same bandwidth.
double toeplitz_difference_p_sum(const AtomicSymbol& phi, const AtomicSymbol& psi, double p);

/// Atom of the Besov decomposition on Z_a: c·k_{a,λ}/‖k_{a/2,λ}‖².
struct LatticeAtom {
    cplx lambda;
    cplx c;
};

/// F = Σ c·k_{a,λ}/‖k_{a/2,λ}‖² sampled on Z_a (sampler attached, 1/|k| decay declared).
LatticeFunction synthesize_P4(const std::vector<LatticeAtom>& atoms, double a);

struct P4Ratio {
    BesovNorm besov;
    double coefficient_p_sum = 0.0;
    /// ‖F‖^p / Σ|c|^p
    double ratio = 0.0;
};

P4Ratio p4_ratio(const std::vector<LatticeAtom>& atoms, double a, const BesovParams& params);

/// ‖k_{a,λ}|_{Z_a}‖_{B_p(a,osc)}/‖k_{a/2,λ}‖², the Besov size of one normalized atom.
BesovNorm kernel_atom_besov(cplx lambda, double a, const BesovParams& params);

struct PursuitResult {
    std::vector<LatticeAtom> atoms;
    /// Weighted ℓ² norm of f − Σ atoms on the window of f.
    double residual = 0.0;
    /// max_atoms was reached with the residual still above tolerance.
    bool exhausted = false;
};

/// Orthogonal matching pursuit over {k_{a,λ}/‖k_{a/2,λ}‖² : λ in dictionary}
/// on the stored window of f. No optimality claim.
PursuitResult matching_pursuit_fit(const LatticeFunction& f, const std::vector<cplx>& dictionary, int max_atoms,
                                   double tolerance = 1e-10);

}  // namespace pws
