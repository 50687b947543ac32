#include "pwschatten/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwschatten/quadrature.hpp"

namespace pws {
namespace {

// c·sin(2aλ̄)/‖ρ_{a,λ}‖², stable for large |Im λ|.
cplx sin_over_norm(double a, cplx lambda) {
    const double X = lambda.real(), Y = lambda.imag();
    const double u = 2.0 * a * Y;
    // Y·coth(2aY)
    const double ycoth = std::abs(u) < 1e-6 ? (1.0 + u * u / 3.0) / (2.0 * a) : Y / std::tanh(u);
    return 2.0 * pi * cplx(std::sin(2.0 * a * X) * ycoth, -Y * std::cos(2.0 * a * X));
}

// Orthonormal sinc basis function of PW_a centred at πk/a.
double sinc_basis(double a, index_t k, double x) {
    const double xk = pi * static_cast<double>(k) / a;
    const double d = x - xk;
    const double scale = std::sqrt(pi / a);
    if (std::abs(a * d) < 1e-4) {
        const double u2 = a * d * a * d;
        return scale * (a / pi) * (1.0 - u2 / 6.0 + u2 * u2 / 120.0);
    }
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    return scale * sgn * std::sin(a * x) / (pi * d);
}

DenseOperator assemble(const RealLineFunction& weight_fn, double a, index_t N, const DenseQuadrature& q) {
    if (N < 0) throw Error("dense truncation needs N >= 0");
    const double L = q.half_length;
    const double X = pi * static_cast<double>(N) / a;
    if (!(L > 0.0)) throw Error("quadrature half-length must be positive");
    const auto rule = composite_gauss_legendre(-L, L, pi / a, q.order);
    const auto nn = static_cast<Eigen::Index>(rule.nodes.size());
    const auto nb = static_cast<Eigen::Index>(2 * N + 1);
    Eigen::MatrixXd S(nn, nb);
    Eigen::VectorXd wr(nn), wi(nn);
    double sup = 0.0;
    for (Eigen::Index i = 0; i < nn; ++i) {
        const double x = rule.nodes[static_cast<std::size_t>(i)];
        const cplx v = weight_fn(x);
        sup = std::max(sup, std::abs(v));
        wr(i) = rule.weights[static_cast<std::size_t>(i)] * v.real();
        wi(i) = rule.weights[static_cast<std::size_t>(i)] * v.imag();
        for (Eigen::Index k = 0; k < nb; ++k) S(i, k) = sinc_basis(a, k - N, x);
    }
    DenseOperator out;
    const Eigen::MatrixXd re = S.transpose() * (wr.asDiagonal() * S);
    const Eigen::MatrixXd im = S.transpose() * (wi.asDiagonal() * S);
    out.matrix = re.cast<cplx>() + cplx(0.0, 1.0) * im.cast<cplx>();
    // ∫_{|x|>L} |s_j s_k| <= 2/(πa(L − X)) when every centre lies inside.
    out.tail_bound = L > X ? sup * 2.0 / (pi * a * (L - X)) : INFINITY;
    std::ostringstream note;
    note << "gauss-legendre order " << q.order << " on panels of length pi/a over [-" << L << ", " << L
         << "]; entrywise tail bound " << out.tail_bound << " (sup of weight on nodes " << sup << ")";
    out.truncation_note = note.str();
    if (q.tail_tolerance && !(out.tail_bound <= *q.tail_tolerance)) {
        std::ostringstream err;
        err << "quadrature tail bound " << out.tail_bound << " exceeds requested tolerance " << *q.tail_tolerance;
        throw Error(err.str());
    }
    return out;
}

}  // namespace

double AtomicSymbol::coefficient_p_sum(double p) const {
    double s = 0.0;
    for (const auto& at : atoms) s += std::pow(std::abs(at.c), p);
    return s;
}

FiniteRankOperator FiniteRankOperator::plus(const FiniteRankOperator& other, cplx s) const {
    FiniteRankOperator out = *this;
    out.left.insert(out.left.end(), other.left.begin(), other.left.end());
    out.right.insert(out.right.end(), other.right.begin(), other.right.end());
    for (const auto& c : other.coeffs) out.coeffs.push_back(s * c);
    return out;
}

FiniteRankOperator toeplitz_from_atoms(const AtomicSymbol& sym) {
    FiniteRankOperator op;
    for (const auto& at : sym.atoms) {
        const KernelSpec u{KernelFamily::FullBand, sym.a, at.lambda};
        const KernelSpec v{KernelFamily::FullBand, sym.a, std::conj(at.lambda)};
        op.left.push_back(u);
        op.right.push_back(v);
        op.coeffs.push_back(at.c / kernel_norm_sq(u));
    }
    return op;
}

SingularSpectrum singular_values(const FiniteRankOperator& op, double rank_cutoff) {
    const auto r = static_cast<Eigen::Index>(op.coeffs.size());
    if (op.left.size() != op.coeffs.size() || op.right.size() != op.coeffs.size())
        throw Error("finite-rank operator: inconsistent term counts");
    if (r == 0) return {{}, rank_cutoff};
    Eigen::VectorXcd c(r);
    for (Eigen::Index i = 0; i < r; ++i) c(i) = op.coeffs[static_cast<std::size_t>(i)];
    return finite_rank_singular_values(gram_matrix(op.left), c, gram_matrix(op.right), rank_cutoff);
}

cplx standard_symbol_eval(const AtomicSymbol& sym, cplx z) {
    cplx v{};
    for (const auto& at : sym.atoms) {
        const KernelSpec wide{KernelFamily::FullBand, 2.0 * sym.a, at.lambda};
        const KernelSpec base{KernelFamily::FullBand, sym.a, at.lambda};
        v += at.c * kernel_eval(wide, z) / kernel_norm_sq(base);
    }
    return v;
}

LatticeFunction sample_symbol_sequence(const AtomicSymbol& sym) {
    const double a = sym.a;
    const Lattice lat(4.0 * a);
    struct Term {
        cplx lambda;
        cplx c;
        cplx ratio;
        double norm;
    };
    std::vector<Term> terms;
    double C = 0.0, reach = 0.0;
    for (const auto& at : sym.atoms) {
        const KernelSpec base{KernelFamily::FullBand, a, at.lambda};
        terms.push_back({at.lambda, at.c, sin_over_norm(a, at.lambda), kernel_norm_sq(base)});
        C += std::abs(at.c * terms.back().ratio) / pi * (2.0 * a / pi) * 2.0;
        reach = std::max(reach, std::abs(at.lambda) * 2.0 * a / pi);
    }
    Sampler sampler = [terms, a](index_t k) {
        const double x = pi * static_cast<double>(k) / (2.0 * a);
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        cplx v{};
        for (const auto& t : terms) {
            const cplx w = x - std::conj(t.lambda);
            if (std::abs(2.0 * a * w) < 1e-3) {
                const KernelSpec wide{KernelFamily::FullBand, 2.0 * a, t.lambda};
                v += sgn * t.c * kernel_eval(wide, x) / t.norm;
            } else {
                // (−1)^k sin(2a(x_k − λ̄)) = −sin(2aλ̄)
                v -= t.c * t.ratio / (pi * w);
            }
        }
        return v;
    };
    const auto W = static_cast<index_t>(std::ceil(reach)) + 16;
    return LatticeFunction::from_sampler(lat, -W, W, std::move(sampler), DecayTail{C, 1.0});
}

DenseOperator dense_toeplitz_sinc(const RealLineFunction& symbol, double a, index_t N, const DenseQuadrature& q) {
    auto out = assemble(symbol, a, N, q);
    out.row_basis = out.col_basis = BasisDescriptor{BasisKind::Sinc, a, 0.0, 0.0, -N, N};
    return out;
}

DenseOperator dense_truncated_hankel(const RealLineFunction& psi, double a, index_t N, const DenseQuadrature& q) {
    // conj(e^{−iax/2} s_j)·e^{iax/2} s_k = e^{iax} s_j s_k
    auto weight = [&psi, a](double x) { return psi(x) * std::polar(1.0, a * x); };
    auto out = assemble(weight, a / 2.0, N, q);
    out.col_basis = BasisDescriptor{BasisKind::ModulatedSinc, a / 2.0, 0.0, a / 2.0, -N, N};
    out.row_basis = BasisDescriptor{BasisKind::ModulatedSinc, a / 2.0, 0.0, -a / 2.0, -N, N};
    return out;
}

DenseOperator compress_to_sinc(const FiniteRankOperator& op, double a, index_t N) {
    const auto nb = static_cast<Eigen::Index>(2 * N + 1);
    const auto r = static_cast<Eigen::Index>(op.coeffs.size());
    Eigen::MatrixXcd U(nb, r), V(nb, r);
    for (Eigen::Index j = 0; j < nb; ++j) {
        const double x = pi * static_cast<double>(j - N) / a;
        for (Eigen::Index i = 0; i < r; ++i) {
            U(j, i) = kernel_eval(op.left[static_cast<std::size_t>(i)], x);
            V(j, i) = kernel_eval(op.right[static_cast<std::size_t>(i)], x);
        }
    }
    Eigen::VectorXcd c(r);
    for (Eigen::Index i = 0; i < r; ++i) c(i) = op.coeffs[static_cast<std::size_t>(i)];
    DenseOperator out;
    out.matrix = (pi / a) * U * c.asDiagonal() * V.adjoint();
    out.row_basis = out.col_basis = BasisDescriptor{BasisKind::Sinc, a, 0.0, 0.0, -N, N};
    out.truncation_note = "exact compression to the sinc basis";
    return out;
}

}  // namespace pws
