#include "pwschatten/commutators.hpp"

#include <algorithm>
#include <cmath>

#include "pwschatten/kernels.hpp"
#include "pwschatten/quadrature.hpp"

namespace pws {
namespace {

double hilbert_entry(index_t d) { return d == 0 ? 0.0 : 1.0 / (pi * static_cast<double>(d)); }

// (H*H)[c][c'] for the square lattice Hilbert matrix
double hilbert_gram(index_t d) {
    if (d == 0) return 1.0 / 3.0;
    const double dd = static_cast<double>(d);
    return 2.0 / (pi * pi * dd * dd);
}

BasisDescriptor delta_basis(double a, double shift, index_t k_min, index_t k_max) {
    BasisDescriptor b;
    b.kind = BasisKind::WeightedDelta;
    b.a = a;
    b.shift = shift;
    b.k_min = k_min;
    b.k_max = k_max;
    return b;
}

// Σ_{k in [lo,hi]} terms(k), accumulated with Kahan compensation
template <class F>
double kahan_sum(index_t lo, index_t hi, F&& term) {
    double s = 0.0, comp = 0.0;
    for (index_t k = lo; k <= hi; ++k) {
        const double y = term(k) - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

template <class F>
cplx kahan_sum_c(index_t lo, index_t hi, F&& term) {
    cplx s = 0.0, comp = 0.0;
    for (index_t k = lo; k <= hi; ++k) {
        const cplx y = term(k) - comp;
        const cplx t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

// ∫_U^∞ (u² + Y²)^{−q} du for U > 0, 2q > 1, via u = U·e^v
double power_tail_integral(double U, double Y, double q) {
    const double rate = 2.0 * q - 1.0;
    const double V = std::min(40.0 / rate, 5000.0);
    const auto rule = composite_gauss_legendre(0.0, V, std::max(0.5, V / 400.0), 16);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = U * std::exp(rule.nodes[i]);
        s += rule.weights[i] * u * std::pow(u * u + Y * Y, -q);
    }
    // remainder beyond V, bounded by the pure power law
    s += std::pow(U, 1.0 - 2.0 * q) * std::exp(-rate * V) / rate;
    return s;
}

}  // namespace

DenseOperator hilbert_matrix(double a, index_t k_min, index_t k_max) {
    if (k_max < k_min) throw Error("empty Hilbert matrix window");
    const index_t n = k_max - k_min + 1;
    DenseOperator op;
    op.matrix.resize(n, n);
    for (index_t j = 0; j < n; ++j)
        for (index_t k = 0; k < n; ++k) op.matrix(j, k) = hilbert_entry(j - k);
    op.row_basis = delta_basis(a, 0.0, k_min, k_max);
    op.col_basis = op.row_basis;
    op.truncation_note = "lattice Hilbert matrix restricted to the index window";
    return op;
}

DenseOperator commutator_matrix(const CommutatorSpec& spec) {
    if (spec.k_max < spec.k_min) throw Error("empty commutator window");
    const auto& psi = spec.psi;
    const double a = psi.lattice().a();
    DenseOperator op;
    if (spec.variant == CommutatorVariant::Square) {
        const index_t n = spec.k_max - spec.k_min + 1;
        op.matrix.resize(n, n);
        std::vector<cplx> v(static_cast<std::size_t>(n));
        for (index_t j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = psi(spec.k_min + j);
        for (index_t j = 0; j < n; ++j)
            for (index_t k = 0; k < n; ++k)
                op.matrix(j, k) = (v[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(k)]) * hilbert_entry(j - k);
        op.row_basis = delta_basis(a, psi.lattice().shift(), spec.k_min, spec.k_max);
        op.col_basis = op.row_basis;
        op.truncation_note = "square commutator on the index window";
        return op;
    }
    // rows: odd indices 2i+1, columns: even indices 2k, both inside the window
    const auto ceil_half = [](index_t x) { return x >= 0 ? (x + 1) / 2 : -((-x) / 2); };
    const auto floor_half = [](index_t x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); };
    const index_t c_lo = ceil_half(spec.k_min), c_hi = floor_half(spec.k_max);
    const index_t r_lo = ceil_half(spec.k_min - 1), r_hi = floor_half(spec.k_max - 1);
    if (c_hi < c_lo || r_hi < r_lo) throw Error("rectangular commutator window holds no even or no odd index");
    op.matrix.resize(r_hi - r_lo + 1, c_hi - c_lo + 1);
    for (index_t i = r_lo; i <= r_hi; ++i) {
        const cplx row_val = psi(2 * i + 1);
        for (index_t k = c_lo; k <= c_hi; ++k) {
            const double d = static_cast<double>(2 * i + 1 - 2 * k);
            op.matrix(i - r_lo, k - c_lo) = 2.0 * (row_val - psi(2 * k)) / (pi * d);
        }
    }
    const double sp = psi.lattice().spacing();
    op.row_basis = delta_basis(a / 2.0, psi.lattice().shift() + sp, r_lo, r_hi);
    op.col_basis = delta_basis(a / 2.0, psi.lattice().shift(), c_lo, c_hi);
    op.truncation_note = "rectangular commutator: odd rows, even columns of the index window";
    return op;
}

SingularSpectrum commutator_singular_values(const LatticeFunction& psi, CommutatorVariant variant,
                                            double rank_cutoff) {
    if (!psi.has_zero_tail()) throw Error("exact commutator spectrum needs a finitely supported symbol");
    std::vector<index_t> rows, cols;
    for (index_t k = psi.k_min(); k <= psi.k_max(); ++k) {
        if (psi(k) == cplx(0.0)) continue;
        if (variant == CommutatorVariant::Square) {
            rows.push_back(k);
            cols.push_back(k);
        } else if ((k % 2 + 2) % 2 == 1) {
            rows.push_back(k);
        } else {
            cols.push_back(k);
        }
    }
    if (rows.empty() && cols.empty()) return make_spectrum({}, rank_cutoff);

    // C = Σ_r ψ_r e_r ⊗ (H*e_r) − Σ_c ψ_c (He_c) ⊗ e_c
    const bool square = variant == CommutatorVariant::Square;
    const auto H = [&](index_t r, index_t c) {
        return square ? hilbert_entry(r - c) : 2.0 / (pi * static_cast<double>(r - c));
    };
    const auto HtH = [&](index_t c1, index_t c2) {
        if (square) return hilbert_gram(c1 - c2);
        return c1 == c2 ? 1.0 : 0.0;
    };
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc = static_cast<Eigen::Index>(cols.size());
    const Eigen::Index n = nr + nc;
    Eigen::MatrixXcd GL = Eigen::MatrixXcd::Zero(n, n), GR = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd coeffs(n);
    for (Eigen::Index i = 0; i < nr; ++i) {
        coeffs(i) = psi(rows[static_cast<std::size_t>(i)]);
        GL(i, i) = 1.0;
    }
    for (Eigen::Index j = 0; j < nc; ++j) {
        coeffs(nr + j) = -psi(cols[static_cast<std::size_t>(j)]);
        GR(nr + j, nr + j) = 1.0;
    }
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index i2 = 0; i2 < nr; ++i2) GR(i, i2) = HtH(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(i2)]);
    for (Eigen::Index j = 0; j < nc; ++j)
        for (Eigen::Index j2 = 0; j2 < nc; ++j2)
            GL(nr + j, nr + j2) = HtH(cols[static_cast<std::size_t>(j)], cols[static_cast<std::size_t>(j2)]);
    for (Eigen::Index i = 0; i < nr; ++i) {
        for (Eigen::Index j = 0; j < nc; ++j) {
            const double h = H(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
            GL(i, nr + j) = h;
            GL(nr + j, i) = h;
            GR(i, nr + j) = h;
            GR(nr + j, i) = h;
        }
    }
    return finite_rank_singular_values(GL, coeffs, GR, rank_cutoff);
}

LatticeFunction counterexample_symbol(SymbolOrder order, cplx lambda, double a) {
    const Lattice lat(a);
    const double s = lat.spacing();
    const double X = lambda.real(), Y = lambda.imag();
    if (Y == 0.0) {
        const double r = X / s;
        if (std::abs(r - std::round(r)) < 1e-12) throw Error("counterexample symbol is singular for real λ on the lattice");
    }
    const cplx lb = std::conj(lambda);
    Sampler sampler;
    DecayTail tail;
    if (order == SymbolOrder::First) {
        sampler = [lat, lb, Y](index_t k) { return cplx(Y) / (lat.point(k) - lb); };
        tail = {2.0 * std::abs(Y) / s, 1.0};
    } else {
        sampler = [lat, lb, Y](index_t k) {
            const cplx d = lat.point(k) - lb;
            return cplx(Y * Y) / (d * d);
        };
        tail = {4.0 * Y * Y / (s * s), 2.0};
    }
    // beyond the window |x_k − λ̄| >= s|k|/2, which is what the tail constants use
    const index_t centre = static_cast<index_t>(std::llround(X / s));
    const index_t half = static_cast<index_t>(std::ceil(2.0 * std::abs(X) / s)) + std::abs(centre) +
                         std::max<index_t>(16, static_cast<index_t>(std::ceil(4.0 * std::abs(Y) / s)));
    return LatticeFunction::from_sampler(lat, -half, half, std::move(sampler), tail);
}

double lattice_cauchy_energy(cplx lambda, double a) {
    const double Y = std::abs(lambda.imag());
    if (Y == 0.0) throw Error("Cauchy energy needs Im λ != 0");
    const double u = a * Y, v = a * lambda.real();
    const double e = std::exp(-u);
    // (π/Y)·sinh(u)/(cosh(u) − cos(v)), rewritten to avoid overflow
    return (pi / Y) * (-std::expm1(-2.0 * u)) / (1.0 + e * e - 2.0 * std::cos(v) * e);
}

LatticeSeries multiplication_schatten(MultiplierKind kind, cplx lambda, double a, double p) {
    if (!(p > 0.0)) throw Error("Schatten exponent must be positive");
    const double Y = std::abs(lambda.imag());
    if (Y == 0.0) throw Error("multiplier needs Im λ != 0");
    const double q = kind == MultiplierKind::First ? p : 1.5 * p;
    if (2.0 * q <= 1.0)
        throw Error(kind == MultiplierKind::First ? "multiplication series diverges for p <= 1/2"
                                                  : "multiplication series diverges for p <= 1/3");
    const double A = kind == MultiplierKind::First ? std::pow(Y, p) : std::pow(2.0 * Y * Y, p);
    const double s = 2.0 * pi / a, X = lambda.real();
    const auto term = [&](double k) {
        const double d = s * k - X;
        return A * std::pow(d * d + Y * Y, -q);
    };
    const index_t c = static_cast<index_t>(std::llround(X / s));
    const index_t K = std::max<index_t>(2000, static_cast<index_t>(std::ceil(50.0 * Y / s)));
    const index_t lo = c - K, hi = c + K;
    const double body = kahan_sum(lo, hi, [&](index_t k) { return term(static_cast<double>(k)); });
    // monotone tails: ∫_{hi+1}^∞ <= Σ_{k>hi} <= ∫_{hi}^∞, likewise below lo
    const auto side = [&](double U_inner, double U_outer) {
        return std::pair{(A / s) * power_tail_integral(U_outer, Y, q), (A / s) * power_tail_integral(U_inner, Y, q)};
    };
    const auto [up_lo, up_hi] = side(s * static_cast<double>(hi) - X, s * static_cast<double>(hi + 1) - X);
    const auto [dn_lo, dn_hi] = side(X - s * static_cast<double>(lo), X - s * static_cast<double>(lo - 1));
    LatticeSeries out;
    out.p_sum = body + 0.5 * (up_lo + up_hi + dn_lo + dn_hi);
    out.uncertainty = 0.5 * ((up_hi - up_lo) + (dn_hi - dn_lo));
    out.quasinorm = std::pow(out.p_sum, 1.0 / p);
    return out;
}

double rank_one_K(cplx lambda, double a) {
    return std::abs(lambda.imag()) / pi * lattice_cauchy_energy(lambda, a);
}

std::array<double, 2> rank_two_K(cplx lambda, double a) {
    const double Y = std::abs(lambda.imag());
    if (Y == 0.0) throw Error("rank-two K needs Im λ != 0");
    const Lattice lat(a);
    const double s = lat.spacing(), w = lat.weight();
    const cplx lb = std::conj(lambda);
    const index_t c = static_cast<index_t>(std::llround(lambda.real() / s));
    const index_t K = static_cast<index_t>(std::ceil(1000.0 * (1.0 + Y / s)));
    // E[i][j] = Σ w u_j conj(u_i) with u1 = 1/(x − λ̄), u2 = u1²
    const double e11 = lattice_cauchy_energy(lambda, a);
    const double e22 = kahan_sum(c - K, c + K, [&](index_t k) {
        const double m = std::norm(lat.point(k) - lb);
        return w / (m * m);
    });
    const cplx e12 = kahan_sum_c(c - K, c + K, [&](index_t k) {
        const cplx d = lat.point(k) - lb;
        return w / (d * std::norm(d));
    });
    Eigen::MatrixXcd GL(2, 2), GR(2, 2);
    // left family (u2, u1), right family (ū1, ū2)
    GL << e22, std::conj(e12), e12, e11;
    GR << e11, std::conj(e12), e12, e22;
    Eigen::VectorXcd coeffs(2);
    coeffs << -Y * Y / pi, -Y * Y / pi;
    const auto spec = finite_rank_singular_values(GL, coeffs, GR, 0.0);
    std::array<double, 2> out{0.0, 0.0};
    for (std::size_t i = 0; i < std::min<std::size_t>(2, spec.sigmas.size()); ++i) out[i] = spec.sigmas[i];
    return out;
}

TruncatedCommutator truncated_commutator_schatten(cplx lambda, double a, double p, index_t window,
                                                  index_t dense_limit) {
    if (window < 0) throw Error("negative truncation window");
    if (!(p > 0.0)) throw Error("Schatten exponent must be positive");
    const double Y = lambda.imag();
    const Lattice lat(a);
    const double w = lat.weight();
    const cplx lb = std::conj(lambda);
    const index_t c = static_cast<index_t>(std::llround(lambda.real() / lat.spacing()));
    TruncatedCommutator out;
    out.window = window;
    if (2 * window + 1 <= dense_limit) {
        const auto psi = counterexample_symbol(SymbolOrder::First, lambda, a);
        CommutatorSpec spec{psi, CommutatorVariant::Square, c - window, c + window};
        const auto sv = dense_singular_values(commutator_matrix(spec).matrix);
        out.lower_p_sum = out.upper_p_sum = schatten_p_sum(sv, p);
        out.dense = true;
        return out;
    }
    // C = K − D with K rank one and D diagonal, restricted to the window
    double sum_dp = 0.0, max_d = 0.0, k_norm = 0.0;
    for (index_t k = c - window; k <= c + window; ++k) {
        const double m = std::norm(lat.point(k) - lb);
        const double d = w * std::abs(Y) / (pi * m);
        sum_dp += std::pow(d, p);
        max_d = std::max(max_d, d);
        k_norm += d;
    }
    out.lower_p_sum = std::max(0.0, sum_dp - std::pow(max_d, p));
    out.upper_p_sum = sum_dp + std::pow(k_norm + max_d, p);
    return out;
}

HankelCommutatorCheck hankel_commutator_identity(const std::vector<HankelAtom>& atoms, double a, index_t N,
                                                 double half_length) {
    if (N < 0) throw Error("negative window");
    if (atoms.empty()) throw Error("Hankel symbol needs at least one atom");
    const double b = a / 2.0;
    const double sp = 2.0 * pi / a;
    double reach = (2.0 * static_cast<double>(N) + 1.0) * sp;
    double c_psi = 0.0;
    for (const auto& at : atoms) {
        reach = std::max(reach, 2.0 * std::abs(at.mu));
        c_psi += std::abs(at.c) * (1.0 + std::exp(a * std::abs(at.mu.imag())));
    }
    if (!(half_length > reach + sp)) throw Error("quadrature half-length must exceed the sampled window");

    const auto Psi = [&](cplx z) {
        cplx v = 0.0;
        for (const auto& at : atoms) v += at.c * kernel_eval({KernelFamily::NegativeHalfBand, a, at.mu}, z);
        return v;
    };
    const double norm_fac = std::sqrt(2.0 * pi / b);
    const index_t n = 2 * N + 1;
    const auto rule = trapezoid(-half_length, half_length, pi / a);
    const std::size_t m = rule.nodes.size();

    Eigen::MatrixXcd cols(static_cast<Eigen::Index>(m), n), rows(static_cast<Eigen::Index>(m), n);
    for (std::size_t q = 0; q < m; ++q) {
        const double x = rule.nodes[q];
        const cplx wpsi = rule.weights[q] * Psi(x);
        for (index_t k = -N; k <= N; ++k) {
            const double t = sp * static_cast<double>(2 * k);
            const double xr = sp * static_cast<double>(2 * k + 1);
            cols(static_cast<Eigen::Index>(q), k + N) =
                wpsi * norm_fac * kernel_eval({KernelFamily::HalfBand, b, t}, x);
            rows(static_cast<Eigen::Index>(q), k + N) =
                norm_fac * kernel_eval({KernelFamily::NegativeHalfBand, b, xr}, x);
        }
    }
    HankelCommutatorCheck out;
    out.hankel = rows.adjoint() * cols;

    std::vector<cplx> even(static_cast<std::size_t>(n)), odd(static_cast<std::size_t>(n));
    for (index_t k = -N; k <= N; ++k) {
        even[static_cast<std::size_t>(k + N)] = Psi(sp * static_cast<double>(2 * k));
        odd[static_cast<std::size_t>(k + N)] = Psi(sp * static_cast<double>(2 * k + 1));
    }
    out.commutator.resize(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t k = 0; k < n; ++k) {
            const double d = static_cast<double>(2 * (i - k) + 1);
            out.commutator(i, k) =
                2.0 * (odd[static_cast<std::size_t>(i)] - even[static_cast<std::size_t>(k)]) / (pi * d);
        }
    out.diff_minus_i = (out.hankel - cplx(0.0, -1.0) * out.commutator).cwiseAbs().maxCoeff();
    out.diff_half_i = (out.hankel - cplx(0.0, 0.5) * out.commutator).cwiseAbs().maxCoeff();
    const double T = (2.0 * static_cast<double>(N) + 1.0) * sp;
    out.tail_bound = 8.0 * c_psi / (a * pi * pi * half_length * (half_length - T));
    return out;
}

}  // namespace pws
