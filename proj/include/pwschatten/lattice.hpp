#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace pws {

using cplx = std::complex<double>;
using index_t = std::int64_t;

inline constexpr double pi = std::numbers::pi;

/// Raised for violated preconditions and non-convergent computations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The lattice shift + (2π/a)·ℤ carrying the atomic measure (2π/a)·Σδ_x.
class Lattice {
public:
    explicit Lattice(double a, double shift = 0.0);

    double a() const { return a_; }
    double shift() const { return shift_; }
    double spacing() const { return 2.0 * pi / a_; }
    /// Mass of a single atom of the lattice measure.
    double weight() const { return spacing(); }
    double point(index_t k) const { return shift_ + spacing() * static_cast<double>(k); }

private:
    double a_;
    double shift_;
};

/// Closed interval [k·2^j, (k+1)·2^j] in lattice index units.
struct DyadicInterval {
    int level = 0;
    index_t position = 0;

    index_t first_index() const { return position * (index_t{1} << level); }
    index_t last_index() const { return (position + 1) * (index_t{1} << level); }
    index_t point_count() const { return (index_t{1} << level) + 1; }
    double left(const Lattice& lat) const { return lat.point(first_index()); }
    double right(const Lattice& lat) const { return lat.point(last_index()); }
};

/// Values outside the stored window are exactly zero.
struct ZeroTail {};

/// |f(k)| <= C / |k|^alpha outside the stored window.
struct DecayTail {
    double C = 0.0;
    double alpha = 1.0;
};

using Tail = std::variant<ZeroTail, DecayTail>;

/// Evaluates the sequence at an arbitrary lattice index.
using Sampler = std::function<cplx(index_t)>;

/// Finitely windowed complex sequence on a lattice.
///
/// A decay-tailed function may carry a sampler giving its exact values
/// everywhere; the Besov engine then grows the window adaptively instead
/// of relying on the decay bound.
class LatticeFunction {
public:
    LatticeFunction(Lattice lattice, index_t k_min, std::vector<cplx> values, Tail tail = ZeroTail{});

    /// Samples `sampler` on [k_min, k_max] and keeps it for extension.
    static LatticeFunction from_sampler(Lattice lattice, index_t k_min, index_t k_max, Sampler sampler,
                                        DecayTail tail);

    static LatticeFunction spike(Lattice lattice, index_t k, cplx height = 1.0);

    const Lattice& lattice() const { return lattice_; }
    index_t k_min() const { return k_min_; }
    index_t k_max() const { return k_min_ + static_cast<index_t>(values_.size()) - 1; }
    std::span<const cplx> values() const { return values_; }
    const Tail& tail() const { return tail_; }
    bool has_zero_tail() const { return std::holds_alternative<ZeroTail>(tail_); }
    const Sampler& sampler() const { return sampler_; }
    bool has_sampler() const { return static_cast<bool>(sampler_); }

    /// Value at index k. Outside the window this is the sampler's value if
    /// present, and zero otherwise.
    cplx operator()(index_t k) const;

    bool is_real(double tol = 0.0) const;

    LatticeFunction scaled(cplx c) const;
    LatticeFunction shifted(index_t by) const;
    /// Same value sequence on a different lattice.
    LatticeFunction with_lattice(Lattice lattice) const;

private:
    Lattice lattice_;
    index_t k_min_;
    std::vector<cplx> values_;
    Tail tail_;
    Sampler sampler_;
};

/// How the oscillation treats complex data.
enum class ComplexOsc {
    /// inf over complex polynomials of the mean complex modulus of the residual
    Modulus,
    /// osc(Re f) + osc(Im f), each an exact real L1 fit
    SplitParts,
};

struct BesovParams {
    double p = 1.0;
    /// Relative stopping tolerance on the p-th power sum.
    double tolerance = 1e-3;
    ComplexOsc complex_mode = ComplexOsc::Modulus;
    int max_level = 48;
    /// Largest half-window (index units) the adaptive engine may reach.
    index_t max_window = index_t{1} << 20;

    explicit BesovParams(double p_ = 1.0, double tol = 1e-3);
    /// Polynomial degree [1/p].
    int degree() const;
};

/// Polynomial degree [1/p] used by the oscillation of B_p.
int besov_degree(double p);

}  // namespace pws
