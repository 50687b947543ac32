#include "pwschatten/lattice.hpp"

#include <cmath>
#include <string>

namespace pws {

Lattice::Lattice(double a, double shift) : a_(a), shift_(shift) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error("lattice bandwidth must be positive and finite");
    if (!std::isfinite(shift)) throw Error("lattice shift must be finite");
}

LatticeFunction::LatticeFunction(Lattice lattice, index_t k_min, std::vector<cplx> values, Tail tail)
    : lattice_(lattice), k_min_(k_min), values_(std::move(values)), tail_(tail) {
    if (values_.empty()) throw Error("lattice function needs a nonempty window");
    if (const auto* d = std::get_if<DecayTail>(&tail_)) {
        if (!(d->C >= 0.0) || !(d->alpha > 0.0)) throw Error("decay tail needs C >= 0 and alpha > 0");
    }
}

LatticeFunction LatticeFunction::from_sampler(Lattice lattice, index_t k_min, index_t k_max, Sampler sampler,
                                              DecayTail tail) {
    if (k_max < k_min) throw Error("empty sampling window");
    std::vector<cplx> values;
    values.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (index_t k = k_min; k <= k_max; ++k) values.push_back(sampler(k));
    LatticeFunction f(lattice, k_min, std::move(values), tail);
    f.sampler_ = std::move(sampler);
    return f;
}

LatticeFunction LatticeFunction::spike(Lattice lattice, index_t k, cplx height) {
    return LatticeFunction(lattice, k, {height});
}

cplx LatticeFunction::operator()(index_t k) const {
    if (k >= k_min_ && k <= k_max()) return values_[static_cast<std::size_t>(k - k_min_)];
    if (sampler_) return sampler_(k);
    return {0.0, 0.0};
}

bool LatticeFunction::is_real(double tol) const {
    for (const auto& v : values_)
        if (std::abs(v.imag()) > tol) return false;
    return true;
}

LatticeFunction LatticeFunction::scaled(cplx c) const {
    LatticeFunction out = *this;
    for (auto& v : out.values_) v *= c;
    if (auto* d = std::get_if<DecayTail>(&out.tail_)) d->C *= std::abs(c);
    if (sampler_) {
        out.sampler_ = [s = sampler_, c](index_t k) { return c * s(k); };
    }
    return out;
}

LatticeFunction LatticeFunction::shifted(index_t by) const {
    LatticeFunction out = *this;
    out.k_min_ += by;
    if (sampler_) {
        out.sampler_ = [s = sampler_, by](index_t k) { return s(k - by); };
    }
    return out;
}

LatticeFunction LatticeFunction::with_lattice(Lattice lattice) const {
    LatticeFunction out = *this;
    out.lattice_ = lattice;
    return out;
}

BesovParams::BesovParams(double p_, double tol) : p(p_), tolerance(tol) {
    if (!(p > 0.0)) throw Error("Besov exponent p must be positive");
    if (!(tolerance > 0.0)) throw Error("Besov tolerance must be positive");
}

int BesovParams::degree() const { return besov_degree(p); }

int besov_degree(double p) {
    if (!(p > 0.0)) throw Error("p must be positive");
    // nudge so that p = 1/2 gives exactly 2 despite rounding in 1/p
    return static_cast<int>(std::floor(1.0 / p + 1e-12));
}

}  // namespace pws
