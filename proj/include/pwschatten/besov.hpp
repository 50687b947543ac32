#pragma once

#include <vector>

#include "pwschatten/lattice.hpp"

namespace pws {

/// osc(f, I, μ_a, n): the least mean deviation of f from polynomials of
/// degree <= n over the 2^j + 1 lattice points of I.
double oscillation(const LatticeFunction& f, const DyadicInterval& I, int n,
                   ComplexOsc mode = ComplexOsc::Modulus);

struct BesovNorm {
    double norm = 0.0;
    /// Σ osc^p over the enumerated intervals.
    double sum_p = 0.0;
    /// Bound (or, when uncertified, estimate) of the omitted part of the
    /// p-th power sum.
    double tail_bound = 0.0;
    bool certified = true;
    /// Highest dyadic level visited.
    int levels = 0;
    /// Half-width of the index window that was examined.
    index_t window = 0;
};

/// The discrete oscillation Besov quasinorm (Σ_{I} osc(f,I,[1/p])^p)^{1/p}.
///
/// Zero-tailed input: levels are added until the remaining levels are
/// provably below tolerance·sum (bound from P = 0 on every interval).
/// Decay-tailed input with a sampler: the window is doubled until the
/// geometrically extrapolated sum is stable; the result is flagged as
/// uncertified and the norm includes the extrapolated remainder.
/// Decay-tailed input without a sampler: the window part is computed
/// exactly and the tail is bounded from the decay constants.
BesovNorm besov_norm(const LatticeFunction& f, const BesovParams& params);

struct BmoNorm {
    double value = 0.0;
    /// Upper bound on the oscillation of every interval not visited.
    double unvisited_bound = 0.0;
    int levels = 0;
};

/// sup over dyadic intervals of osc(f, I, 0).
BmoNorm bmo_norm(const LatticeFunction& f, int max_level = 48);

/// Continuous piecewise polynomial on the lattice blocks of [1/p] + 1 points.
class PiecewisePolynomial {
public:
    PiecewisePolynomial(Lattice lattice, int degree, index_t first_block, std::vector<std::vector<cplx>> newton);

    const Lattice& lattice() const { return lattice_; }
    int degree() const { return degree_; }
    index_t first_block() const { return first_block_; }
    index_t block_count() const { return static_cast<index_t>(newton_.size()); }
    /// Block b spans lattice indices [b·degree, (b+1)·degree].
    index_t block_first_index(index_t b) const { return b * degree_; }

    /// F(x); zero outside the covered blocks.
    cplx operator()(double x) const;

private:
    Lattice lattice_;
    int degree_;
    index_t first_block_;
    // divided differences per block in index coordinates
    std::vector<std::vector<cplx>> newton_;
};

/// Block-wise interpolating extension F of f with F = f on the lattice.
/// Requires p <= 1; the block length is [1/p] spacings.
PiecewisePolynomial extend_l7(const LatticeFunction& f, double p);

}  // namespace pws
