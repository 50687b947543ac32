#include "pwschatten/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "pwschatten/kernels.hpp"

namespace pws {
namespace {

bool before(cplx l, cplx r) {
    if (l.imag() != r.imag()) return l.imag() < r.imag();
    return l.real() < r.real();
}

struct ByImRe {
    bool operator()(cplx l, cplx r) const { return before(l, r); }
};

void require_eta(double eta) {
    if (!(eta >= 1.0) || std::exp2(std::round(std::log2(eta))) != eta) throw Error("eta must be a power of 2");
}

cplx p4_atom_value(const LatticeAtom& at, double a, double x) {
    const double n2 = kernel_norm_sq({KernelFamily::HalfBand, a / 2.0, at.lambda});
    return at.c * kernel_eval({KernelFamily::HalfBand, a, at.lambda}, x) / n2;
}

}  // namespace

RankTwoDiff rank_two_diff_schatten(cplx lambda, cplx zeta, double a, double p) {
    if (!(p > 0.0)) throw Error("Schatten exponent must be positive");
    RankTwoDiff out;
    if (lambda == zeta) return out;
    const AtomicSymbol one{a, {{lambda, 1.0}}};
    const AtomicSymbol two{a, {{zeta, 1.0}}};
    const auto op = toeplitz_from_atoms(one).plus(toeplitz_from_atoms(two), -1.0);
    out.exact = schatten_quasinorm(singular_values(op), p);
    const KernelSpec rl{KernelFamily::FullBand, a, lambda}, rz{KernelFamily::FullBand, a, zeta};
    const double cosine = kernel_eval(rz, lambda).real() / std::sqrt(kernel_norm_sq(rz) * kernel_norm_sq(rl));
    out.bound = std::pow(2.0, 1.0 / p + 0.5) * std::sqrt(std::max(0.0, 1.0 - cosine));
    return out;
}

cplx nearest_structured_point(cplx z, double eps, double eta, double a) {
    if (!(eps > 0.0) || !(a > 0.0)) throw Error("structured point set needs eps > 0 and a > 0");
    require_eta(eta);
    cplx best;
    double best_d = std::numeric_limits<double>::infinity();
    const auto offer = [&](cplx c) {
        const double d = std::abs(c - z);
        if (d < best_d || (d == best_d && before(c, best))) {
            best = c;
            best_d = d;
        }
    };
    const double spacing = 2.0 * pi / (eta * a);
    const double k0 = std::floor(z.real() / spacing);
    offer(cplx(spacing * k0, 0.0));
    offer(cplx(spacing * (k0 + 1.0), 0.0));

    const double cut = eps / (eta * a);
    const double base = 1.0 + eps;
    int m = static_cast<int>(std::floor(std::log(cut) / std::log(base))) - 1;
    while (std::pow(base, m) <= cut) ++m;
    // heights above |Im z| + best_d cannot win
    for (;; ++m) {
        const double h = std::pow(base, m);
        if (h - std::abs(z.imag()) > best_d) break;
        const double step = eps * h;
        const double x0 = std::floor(z.real() / step);
        for (double x : {x0, x0 + 1.0})
            for (double s : {-1.0, 1.0}) offer(cplx(step * x, s * h));
    }
    return best;
}

std::vector<cplx> eta_sample_grid(double eps, double eta, double a, const EtaGrid& grid) {
    require_eta(eta);
    std::vector<cplx> pts;
    const double cut = eps / (eta * a);
    const double base = 1.0 + eps;
    const double period = 2.0 * pi / (eta * a);
    int m_top = static_cast<int>(std::floor(std::log(cut) / std::log(base))) + 1;
    while (std::pow(base, m_top) > cut) --m_top;
    for (int m = m_top; m > m_top - grid.cells; --m) {
        const double h = std::pow(base, m);
        const double step = eps * h;
        const auto nx = static_cast<index_t>(std::ceil(period / step));
        const index_t stride = std::max<index_t>(1, nx / std::max(1, grid.re_samples - 1));
        for (index_t x = 0; x <= nx; x += stride) {
            pts.emplace_back(step * static_cast<double>(x), h);
            pts.emplace_back(step * static_cast<double>(x), -h);
        }
    }
    // Z_{2a} points inside one period of Z_{ηa} (only a lattice point itself when η >= 2)
    const double half = pi / a;
    for (index_t k = 0; static_cast<double>(k) * half <= period; ++k) pts.emplace_back(half * static_cast<double>(k), 0.0);
    return pts;
}

EtaChoice choose_eta(double p, double eps, double a, const EtaGrid& grid) {
    if (!(p > 0.0 && p <= 1.0)) throw Error("choose_eta needs p in (0, 1]");
    EtaChoice out;
    for (int k = 1; k <= grid.max_log2; ++k) {
        const double eta = std::exp2(k);
        double sup = 0.0;
        for (const cplx lam : eta_sample_grid(eps, eta, a, grid)) {
            const cplx zeta = nearest_structured_point(lam, eps, eta, a);
            sup = std::max(sup, std::pow(rank_two_diff_schatten(lam, zeta, a, p).exact, p));
        }
        out.trace.emplace_back(eta, sup);
        if (sup <= 0.5) {
            out.eta = eta;
            out.sup_p = sup;
            return out;
        }
    }
    throw Error("no eta <= 2^max_log2 brings the snapping defect below 1/2");
}

SnapResult snap_atoms(const AtomicSymbol& sym, double eta, double eps, double p) {
    SnapResult out;
    out.snapped.a = sym.a;
    std::map<cplx, cplx, ByImRe> merged;
    for (const auto& at : sym.atoms) {
        const cplx zeta = nearest_structured_point(at.lambda, eps, eta, sym.a);
        out.mapping.emplace_back(at.lambda, zeta);
        merged[zeta] += at.c;
        if (zeta != at.lambda)
            out.residual_bound_p += std::pow(std::abs(at.c), p) *
                                    std::pow(rank_two_diff_schatten(at.lambda, zeta, sym.a, p).exact, p);
    }
    for (const auto& [zeta, c] : merged) out.snapped.atoms.push_back({zeta, c});
    return out;
}

double toeplitz_difference_p_sum(const AtomicSymbol& phi, const AtomicSymbol& psi, double p) {
    if (phi.a != psi.a) throw Error("Toeplitz symbols over different bandwidths");
    const auto op = toeplitz_from_atoms(phi).plus(toeplitz_from_atoms(psi), -1.0);
    if (op.coeffs.empty()) return 0.0;
    return schatten_p_sum(singular_values(op), p);
}

LatticeFunction synthesize_P4(const std::vector<LatticeAtom>& atoms, double a) {
    const Lattice lat(a);
    const double s = lat.spacing();
    if (atoms.empty()) return LatticeFunction(lat, 0, {0.0});
    double C = 0.0, reach = 0.0;
    for (const auto& at : atoms) {
        const double n2 = kernel_norm_sq({KernelFamily::HalfBand, a / 2.0, at.lambda});
        // |k_{a,λ}(x)| <= (1 + e^{−a Im λ})/(2π|x − λ̄|) and |x_k − λ̄| >= s|k|/2 beyond the window
        C += std::abs(at.c) / n2 * (1.0 + std::exp(-a * at.lambda.imag())) / (pi * s);
        reach = std::max(reach, std::abs(at.lambda));
    }
    const index_t half = static_cast<index_t>(std::ceil(2.0 * reach / s)) + 16;
    Sampler sampler = [atoms, a, lat](index_t k) {
        cplx v = 0.0;
        for (const auto& at : atoms) v += p4_atom_value(at, a, lat.point(k));
        return v;
    };
    return LatticeFunction::from_sampler(lat, -half, half, std::move(sampler), DecayTail{C, 1.0});
}

P4Ratio p4_ratio(const std::vector<LatticeAtom>& atoms, double a, const BesovParams& params) {
    P4Ratio out;
    for (const auto& at : atoms) out.coefficient_p_sum += std::pow(std::abs(at.c), params.p);
    out.besov = besov_norm(synthesize_P4(atoms, a), params);
    out.ratio = out.coefficient_p_sum > 0.0 ? std::pow(out.besov.norm, params.p) / out.coefficient_p_sum : 0.0;
    return out;
}

BesovNorm kernel_atom_besov(cplx lambda, double a, const BesovParams& params) {
    return besov_norm(synthesize_P4({{lambda, 1.0}}, a), params);
}

PursuitResult matching_pursuit_fit(const LatticeFunction& f, const std::vector<cplx>& dictionary, int max_atoms,
                                   double tolerance) {
    const double a = f.lattice().a();
    const auto n = static_cast<Eigen::Index>(f.values().size());
    Eigen::VectorXcd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = f.values()[static_cast<std::size_t>(i)];
    const double w = std::sqrt(f.lattice().weight());
    y *= w;
    const double fnorm = y.norm();

    PursuitResult out;
    out.residual = fnorm;
    if (fnorm == 0.0 || dictionary.empty()) return out;

    Eigen::MatrixXcd D(n, static_cast<Eigen::Index>(dictionary.size()));
    for (std::size_t j = 0; j < dictionary.size(); ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            D(i, static_cast<Eigen::Index>(j)) =
                w * p4_atom_value({dictionary[j], 1.0}, a, f.lattice().point(f.k_min() + i));
    const Eigen::VectorXd col_norms = D.colwise().norm().transpose();

    std::vector<Eigen::Index> chosen;
    Eigen::VectorXcd r = y, coef;
    while (out.residual > tolerance * fnorm) {
        if (static_cast<int>(chosen.size()) >= max_atoms) {
            out.exhausted = true;
            break;
        }
        const Eigen::VectorXcd corr = D.adjoint() * r;
        Eigen::Index best = -1;
        double best_v = 0.0;
        for (Eigen::Index j = 0; j < corr.size(); ++j) {
            if (col_norms(j) == 0.0 || std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
            const double v = std::abs(corr(j)) / col_norms(j);
            if (v > best_v) {
                best_v = v;
                best = j;
            }
        }
        if (best < 0) {
            out.exhausted = true;
            break;
        }
        chosen.push_back(best);
        Eigen::MatrixXcd S(n, static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t j = 0; j < chosen.size(); ++j) S.col(static_cast<Eigen::Index>(j)) = D.col(chosen[j]);
        coef = S.colPivHouseholderQr().solve(y);
        r = y - S * coef;
        out.residual = r.norm();
    }
    for (std::size_t j = 0; j < chosen.size(); ++j)
        out.atoms.push_back({dictionary[static_cast<std::size_t>(chosen[j])], coef(static_cast<Eigen::Index>(j))});
    return out;
}

}  // namespace pws
