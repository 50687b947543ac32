#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pwschatten/kernels.hpp"
#include "pwschatten/lattice.hpp"
#include "pwschatten/spectrum.hpp"

namespace pws {

struct Atom {
    cplx lambda;
    cplx c;
};

/// φ_st = Σ c_λ ρ_{2a,λ}/‖ρ_{a,λ}‖², a symbol for Toeplitz operators on PW_a.
struct AtomicSymbol {
    double a = 1.0;
    std::vector<Atom> atoms;

    double coefficient_p_sum(double p) const;
};

/// f ↦ Σ c_i (f, v_i) u_i.
struct FiniteRankOperator {
    std::vector<KernelSpec> left;
    std::vector<KernelSpec> right;
    std::vector<cplx> coeffs;

    std::size_t rank_bound() const { return coeffs.size(); }
    /// this + s·other (concatenated terms).
    FiniteRankOperator plus(const FiniteRankOperator& other, cplx s = 1.0) const;
};

/// T_{φ_st} on PW_a: atom λ contributes (c/‖ρ_{a,λ}‖²)·ρ_{a,λ} ⊗ ρ_{a,λ̄}.
FiniteRankOperator toeplitz_from_atoms(const AtomicSymbol& sym);

SingularSpectrum singular_values(const FiniteRankOperator& op, double rank_cutoff = kDefaultRankCutoff);

cplx standard_symbol_eval(const AtomicSymbol& sym, cplx z);

/// f(k) = (−1)^k φ_st(πk/(2a)) on Z_{4a}, with the exact sampler attached
/// and a 1/|k| decay declaration.
LatticeFunction sample_symbol_sequence(const AtomicSymbol& sym);

enum class BasisKind {
    /// √(π/a)·ρ_{a, πk/a}
    Sinc,
    /// e^{i·modulation·x} times the sinc basis of the given bandwidth
    ModulatedSinc,
    /// normalized point masses of a lattice measure
    WeightedDelta,
};

struct BasisDescriptor {
    BasisKind kind = BasisKind::Sinc;
    double a = 1.0;
    double shift = 0.0;
    double modulation = 0.0;
    index_t k_min = 0;
    index_t k_max = -1;

    index_t size() const { return k_max - k_min + 1; }
};

struct DenseOperator {
    Eigen::MatrixXcd matrix;
    BasisDescriptor row_basis;
    BasisDescriptor col_basis;
    std::string truncation_note;
    /// Bound on the omitted |x| > L part of each quadrature entry.
    double tail_bound = 0.0;
};

struct DenseQuadrature {
    /// Integration over [−half_length, half_length].
    double half_length = 0.0;
    int order = 16;
    /// Raise Error if the entrywise tail bound exceeds this.
    std::optional<double> tail_tolerance;
};

using RealLineFunction = std::function<cplx(double)>;

/// A[j][k] = ∫ φ s_k conj(s_j) over the sinc basis of PW_a, |j|,|k| <= N.
DenseOperator dense_toeplitz_sinc(const RealLineFunction& symbol, double a, index_t N, const DenseQuadrature& q);

/// f ↦ P_{[−a,0]}(Ψ f) from PW_{[0,a]} to PW_{[−a,0]} in the bases
/// e^{±iax/2}·(sinc basis of PW_{a/2}), |j|,|k| <= N.
DenseOperator dense_truncated_hankel(const RealLineFunction& psi, double a, index_t N, const DenseQuadrature& q);

/// Matrix of a finite-rank operator on PW_a compressed to the sinc basis
/// |j|,|k| <= N (exact, no quadrature).
DenseOperator compress_to_sinc(const FiniteRankOperator& op, double a, index_t N);

}  // namespace pws
