#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pwschatten/lattice.hpp"

namespace pws {

inline constexpr double kDefaultRankCutoff = 1e-12;

struct SingularSpectrum {
    /// Descending, nonnegative.
    std::vector<double> sigmas;
    /// Singular values below rank_cutoff·σ_max are ignored by the quasinorms.
    double rank_cutoff = kDefaultRankCutoff;

    double max() const { return sigmas.empty() ? 0.0 : sigmas.front(); }
};

SingularSpectrum make_spectrum(std::vector<double> sigmas, double rank_cutoff = kDefaultRankCutoff);

/// Σ σ_i^p over the retained singular values.
double schatten_p_sum(const SingularSpectrum& s, double p);

/// (Σ σ_i^p)^{1/p}.
double schatten_quasinorm(const SingularSpectrum& s, double p);

/// Singular values of a dense matrix.
SingularSpectrum dense_singular_values(const Eigen::MatrixXcd& m, double rank_cutoff = kDefaultRankCutoff);

/// Square root of a Hermitian PSD matrix. Eigenvalues in [−1e-10·trace, 0)
/// are clipped; more negative ones raise Error.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& gram);

/// Nonzero singular values of Σ_i c_i u_i ⊗ v_i (f ↦ Σ c_i (f, v_i) u_i)
/// given G_left[i][j] = ⟨u_j, u_i⟩ and G_right[i][j] = ⟨v_j, v_i⟩.
SingularSpectrum finite_rank_singular_values(const Eigen::MatrixXcd& gram_left, const Eigen::VectorXcd& coeffs,
                                             const Eigen::MatrixXcd& gram_right,
                                             double rank_cutoff = kDefaultRankCutoff);

}  // namespace pws
