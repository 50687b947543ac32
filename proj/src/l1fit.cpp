#include "pwschatten/l1fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include <Eigen/Dense>

namespace pws {
namespace {

// Deterministic value in [-1, 1] for index i (splitmix64).
double jitter(std::size_t i) {
    std::uint64_t z = static_cast<std::uint64_t>(i) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

struct LadSolution {
    std::vector<std::size_t> basis;
    double sum_abs = 0.0;
    int iterations = 0;
};

// Lagrange basis polynomials over the nodes t[basis] evaluated at every t_i.
// values[b*m + i] = L_b(t_i).
void lagrange_values(std::span<const double> t, const std::vector<std::size_t>& basis, std::vector<double>& values) {
    const std::size_t m = t.size();
    const std::size_t q = basis.size();
    values.assign(q * m, 1.0);
    for (std::size_t b = 0; b < q; ++b) {
        double denom = 1.0;
        for (std::size_t c = 0; c < q; ++c)
            if (c != b) denom *= t[basis[b]] - t[basis[c]];
        double* row = values.data() + b * m;
        for (std::size_t i = 0; i < m; ++i) {
            double num = 1.0;
            for (std::size_t c = 0; c < q; ++c)
                if (c != b) num *= t[i] - t[basis[c]];
            row[i] = num / denom;
        }
        for (std::size_t c = 0; c < q; ++c) row[basis[c]] = (c == b) ? 1.0 : 0.0;
    }
}

void residuals(std::span<const double> y, const std::vector<std::size_t>& basis, const std::vector<double>& lag,
               std::vector<double>& r) {
    const std::size_t m = y.size();
    r.assign(y.begin(), y.end());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        const double yb = y[basis[b]];
        const double* row = lag.data() + b * m;
        for (std::size_t i = 0; i < m; ++i) r[i] -= yb * row[i];
    }
    for (auto bi : basis) r[bi] = 0.0;
}

// Abscissae t must be strictly increasing and scaled to about [-1, 1].
LadSolution lad_core(std::span<const double> t, std::span<const double> y_in, int n) {
    const std::size_t m = t.size();
    const std::size_t q = static_cast<std::size_t>(n) + 1;
    LadSolution sol;
    if (m <= q) {
        sol.basis.resize(m);
        std::iota(sol.basis.begin(), sol.basis.end(), std::size_t{0});
        return sol;
    }

    double scale = 0.0;
    for (double v : y_in) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
        sol.basis.resize(q);
        for (std::size_t b = 0; b < q; ++b) sol.basis[b] = b;
        return sol;
    }
    // Symbolic-style perturbation removes degenerate vertices (many points on
    // one polynomial, e.g. long runs of zeros); it moves the optimum by at
    // most 2e-13·max|y|.
    std::vector<double> y(y_in.begin(), y_in.end());
    for (std::size_t i = 0; i < m; ++i) y[i] += 1e-13 * scale * jitter(i);

    // Start at the discrete analogue of the continuous L1 nodes cos(kπ/(n+2)).
    std::vector<std::size_t> basis;
    std::vector<char> used(m, 0);
    for (std::size_t k = q; k >= 1; --k) {
        const double target = std::cos(static_cast<double>(k) * pi / static_cast<double>(n + 2));
        auto it = std::lower_bound(t.begin(), t.end(), target);
        std::size_t idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - t.begin(), static_cast<std::ptrdiff_t>(m - 1)));
        if (idx > 0 && std::abs(t[idx - 1] - target) < std::abs(t[idx] - target)) --idx;
        std::size_t lo = idx, hi = idx;
        while (used[idx]) {
            if (hi + 1 < m && !used[hi + 1]) { idx = ++hi; break; }
            if (lo > 0 && !used[lo - 1]) { idx = --lo; break; }
            if (hi + 1 < m) ++hi;
            if (lo > 0) --lo;
        }
        used[idx] = 1;
        basis.push_back(idx);
    }

    std::vector<double> lag, r;
    std::vector<std::pair<double, double>> breaks;
    // In exact arithmetic the objective never increases, so a repeated basis
    // means roundoff is steering the walk; stop at the best basis seen.
    std::set<std::vector<std::size_t>> visited;
    std::vector<std::size_t> best_basis = basis;
    double best_obj = INFINITY;
    const int max_iter = 50 * static_cast<int>(std::min<std::size_t>(m, 100000)) + 100;
    for (int iter = 0;; ++iter) {
        if (iter > max_iter) throw Error("L1 fit simplex failed to terminate");
        lagrange_values(t, basis, lag);
        residuals(y, basis, lag, r);
        {
            double obj = 0.0;
            for (double v : r) obj += std::abs(v);
            if (obj < best_obj) {
                best_obj = obj;
                best_basis = basis;
            }
            auto key = basis;
            std::sort(key.begin(), key.end());
            if (!visited.insert(std::move(key)).second) break;
        }

        std::size_t best = q;
        double best_excess = 0.0, best_sign = 0.0;
        for (std::size_t b = 0; b < q; ++b) {
            const double* row = lag.data() + b * m;
            double s = 0.0, zero_mass = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (r[i] > 0.0) s += row[i];
                else if (r[i] < 0.0) s -= row[i];
                else if (row[i] != 1.0) zero_mass += std::abs(row[i]);
            }
            const double excess = std::abs(s) - 1.0 - zero_mass;
            if (excess > 1e-10 * (1.0 + zero_mass) && excess > best_excess) {
                best_excess = excess;
                best = b;
                best_sign = s > 0.0 ? 1.0 : -1.0;
            }
        }
        sol.iterations = iter;
        if (best == q) break;

        // exact line search along sign·L_best: weighted median of r_i/δ_i
        const double* row = lag.data() + best * m;
        breaks.clear();
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = best_sign * row[i];
            if (d == 0.0) continue;
            breaks.emplace_back(r[i] / d, std::abs(d));
            total += std::abs(d);
        }
        std::sort(breaks.begin(), breaks.end());
        double cum = 0.0;
        double step = 0.0;
        for (const auto& [z, w] : breaks) {
            cum += w;
            if (cum >= 0.5 * total) { step = z; break; }
        }
        std::size_t enter = m;
        double closest = INFINITY;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = best_sign * row[i];
            if (d == 0.0 || i == basis[best]) continue;
            const double dz = std::abs(r[i] / d - step);
            if (dz < closest) { closest = dz; enter = i; }
        }
        if (enter == m || std::find(basis.begin(), basis.end(), enter) != basis.end()) break;
        basis[best] = enter;
    }

    // objective on the unperturbed data at the optimal basis
    basis = best_basis;
    std::sort(basis.begin(), basis.end());
    lagrange_values(t, basis, lag);
    residuals(y_in, basis, lag, r);
    double sum = 0.0;
    for (double v : r) sum += std::abs(v);
    sol.basis = std::move(basis);
    sol.sum_abs = sum;
    return sol;
}

std::vector<double> uniform_nodes(std::size_t m) {
    std::vector<double> t(m);
    if (m == 1) { t[0] = 0.0; return t; }
    const double N = static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) t[i] = (2.0 * static_cast<double>(i) - N) / N;
    return t;
}

// Monomial coefficients (in x) of the interpolant through the given points.
std::vector<double> interpolant_coeffs(std::span<const double> xs, std::span<const double> ys, int n) {
    const std::size_t q = xs.size();
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
    if (q == 0) return coeffs;
    // Newton divided differences, then expand the Newton form.
    std::vector<double> dd(ys.begin(), ys.end());
    for (std::size_t lvl = 1; lvl < q; ++lvl)
        for (std::size_t i = q - 1; i >= lvl; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - lvl]);
    std::vector<double> poly{dd[q - 1]};
    for (std::size_t k = q - 1; k-- > 0;) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d + 1] += poly[d];
            next[d] -= xs[k] * poly[d];
        }
        next[0] += dd[k];
        poly.swap(next);
    }
    for (std::size_t d = 0; d < poly.size() && d < coeffs.size(); ++d) coeffs[d] = poly[d];
    return coeffs;
}

void validate(std::span<const double> xs, std::size_t ny, int n) {
    if (xs.empty()) throw Error("L1 fit: empty input");
    if (xs.size() != ny) throw Error("L1 fit: xs and ys differ in length");
    if (n < 0) throw Error("L1 fit: negative degree");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw Error("L1 fit: xs must be strictly increasing");
}

std::vector<double> scaled_abscissae(std::span<const double> xs) {
    const double lo = xs.front(), hi = xs.back();
    std::vector<double> t(xs.size());
    if (xs.size() == 1) { t[0] = 0.0; return t; }
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < xs.size(); ++i) t[i] = (xs[i] - mid) / half;
    return t;
}

// Reweighted least squares for min Σ|y_i − P(t_i)| over complex P.
double modulus_fit(std::span<const double> t, std::span<const cplx> y, int n, Eigen::VectorXcd& coef) {
    const Eigen::Index m = static_cast<Eigen::Index>(t.size());
    const Eigen::Index q = n + 1;
    Eigen::MatrixXd A(m, q);
    for (Eigen::Index i = 0; i < m; ++i) {
        double v = 1.0;
        for (Eigen::Index k = 0; k < q; ++k) { A(i, k) = v; v *= t[static_cast<std::size_t>(i)]; }
    }
    Eigen::VectorXcd Y(m);
    for (Eigen::Index i = 0; i < m; ++i) Y(i) = y[static_cast<std::size_t>(i)];
    auto objective = [&](const Eigen::VectorXcd& c) { return (Y - A.cast<cplx>() * c).cwiseAbs().sum(); };

    double best = objective(coef);
    Eigen::VectorXcd best_coef = coef;
    double scale = Y.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    double delta = std::max(1e-3 * best / static_cast<double>(m), 1e-15 * scale);
    Eigen::VectorXcd c = coef;
    for (int it = 0; it < 400; ++it) {
        Eigen::VectorXd w = (Y - A.cast<cplx>() * c).cwiseAbs().cwiseMax(delta).cwiseInverse();
        Eigen::MatrixXd N = A.transpose() * w.asDiagonal() * A;
        Eigen::VectorXcd rhs = A.transpose().cast<cplx>() * (w.cast<cplx>().asDiagonal() * Y);
        Eigen::VectorXcd next = N.cast<cplx>().ldlt().solve(rhs);
        const double obj = objective(next);
        const double improvement = best - obj;
        if (obj < best) { best = obj; best_coef = next; }
        c = next;
        if (improvement < 1e-15 * scale * static_cast<double>(m)) {
            delta *= 0.1;
            if (delta < 1e-15 * scale) break;
        }
    }
    coef = best_coef;
    return best;
}

}  // namespace

L1Fit l1_poly_fit(std::span<const double> xs, std::span<const double> ys, int n) {
    validate(xs, ys.size(), n);
    const auto t = scaled_abscissae(xs);
    const auto sol = lad_core(t, ys, n);
    std::vector<double> bx, by;
    for (auto b : sol.basis) { bx.push_back(xs[b]); by.push_back(ys[b]); }
    L1Fit fit;
    fit.coeffs = interpolant_coeffs(bx, by, n);
    fit.mean_abs_residual = sol.sum_abs / static_cast<double>(xs.size());
    fit.iterations = sol.iterations;
    return fit;
}

ComplexL1Fit l1_poly_fit_complex(std::span<const double> xs, std::span<const cplx> ys, int n, ComplexOsc mode) {
    validate(xs, ys.size(), n);
    std::vector<double> re(ys.size()), im(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) { re[i] = ys[i].real(); im[i] = ys[i].imag(); }
    const auto fr = l1_poly_fit(xs, re, n);
    const auto fi = l1_poly_fit(xs, im, n);
    ComplexL1Fit out;
    out.coeffs.resize(static_cast<std::size_t>(n) + 1);
    for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] = {fr.coeffs[k], fi.coeffs[k]};
    if (mode == ComplexOsc::SplitParts) {
        out.mean_abs_residual = fr.mean_abs_residual + fi.mean_abs_residual;
        return out;
    }
    // refine in scaled coordinates, then map back
    const auto t = scaled_abscissae(xs);
    const double mid = 0.5 * (xs.front() + xs.back());
    const double half = xs.size() > 1 ? 0.5 * (xs.back() - xs.front()) : 1.0;
    const int q = n + 1;
    // seed: the split interpolants re-expressed in t
    Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(q);
    {
        // P(x) = Σ c_k x^k with x = mid + half·t
        for (int k = 0; k < q; ++k) {
            // binomial expansion of (mid + half t)^k
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                seed(j) += out.coeffs[static_cast<std::size_t>(k)] * binom * std::pow(mid, k - j) * std::pow(half, j);
                binom = binom * (k - j) / (j + 1);
            }
        }
    }
    const double sum = modulus_fit(t, ys, n, seed);
    // back to x: t = (x − mid)/half
    std::vector<cplx> cx(static_cast<std::size_t>(q), cplx{});
    for (int k = 0; k < q; ++k) {
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            cx[static_cast<std::size_t>(j)] += seed(k) * binom * std::pow(-mid, k - j) / std::pow(half, k);
            binom = binom * (k - j) / (j + 1);
        }
    }
    out.coeffs = std::move(cx);
    out.mean_abs_residual = sum / static_cast<double>(xs.size());
    return out;
}

namespace detail {

double lad_uniform(std::span<const double> ys, int n) {
    const auto t = uniform_nodes(ys.size());
    return lad_core(t, ys, n).sum_abs / static_cast<double>(ys.size());
}

double lad_uniform_modulus(std::span<const cplx> ys, int n) {
    const std::size_t m = ys.size();
    if (m <= static_cast<std::size_t>(n) + 1) return 0.0;
    const auto t = uniform_nodes(m);
    std::vector<double> re(m), im(m);
    for (std::size_t i = 0; i < m; ++i) { re[i] = ys[i].real(); im[i] = ys[i].imag(); }
    const auto sr = lad_core(t, re, n);
    const auto si = lad_core(t, im, n);
    // seed coefficients in the monomial t-basis from the two interpolants
    std::vector<double> bx, by;
    for (auto b : sr.basis) { bx.push_back(t[b]); by.push_back(re[b]); }
    auto cr = interpolant_coeffs(bx, by, n);
    bx.clear(); by.clear();
    for (auto b : si.basis) { bx.push_back(t[b]); by.push_back(im[b]); }
    auto ci = interpolant_coeffs(bx, by, n);
    Eigen::VectorXcd seed(n + 1);
    for (int k = 0; k <= n; ++k) seed(k) = {cr[static_cast<std::size_t>(k)], ci[static_cast<std::size_t>(k)]};
    return modulus_fit(t, ys, n, seed) / static_cast<double>(m);
}

}  // namespace detail

}  // namespace pws
