#include "pwschatten/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pws {
namespace {

// (e^s − 1)/s without cancellation near 0.
cplx expm1_ratio(cplx s) {
    if (std::abs(s) < 1e-4) return 1.0 + s / 2.0 + s * s / 6.0 + s * s * s / 24.0;
    const double x = s.real(), y = s.imag();
    const double sh = std::sin(0.5 * y);
    const cplx em1(std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y));
    return em1 / s;
}

cplx sinc(cplx u) {
    if (std::abs(u) < 1e-4) {
        const cplx u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
    }
    return std::sin(u) / u;
}

double real_expm1_ratio(double u) {
    if (std::abs(u) < 1e-6) return 1.0 + u / 2.0 + u * u / 6.0;
    return std::expm1(u) / u;
}

double sinhc(double u) {
    if (std::abs(u) < 1e-6) return 1.0 + u * u / 6.0;
    return std::sinh(u) / u;
}

const char* family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::FullBand: return "full-band";
        case KernelFamily::HalfBand: return "half-band";
        case KernelFamily::NegativeHalfBand: return "negative half-band";
    }
    return "?";
}

}  // namespace

cplx kernel_eval(const KernelSpec& spec, cplx z) {
    const double a = spec.a;
    const cplx w = z - std::conj(spec.lambda);
    const cplx i(0.0, 1.0);
    switch (spec.family) {
        case KernelFamily::FullBand: return (a / pi) * sinc(a * w);
        case KernelFamily::HalfBand: return (a / (2.0 * pi)) * expm1_ratio(i * a * w);
        case KernelFamily::NegativeHalfBand: return (a / (2.0 * pi)) * expm1_ratio(-i * a * w);
    }
    return {};
}

double kernel_norm_sq(const KernelSpec& spec) {
    const double a = spec.a;
    const double u = 2.0 * a * spec.lambda.imag();
    switch (spec.family) {
        case KernelFamily::FullBand: return (a / pi) * sinhc(u);
        case KernelFamily::HalfBand: return (a / (2.0 * pi)) * real_expm1_ratio(-u);
        case KernelFamily::NegativeHalfBand: return (a / (2.0 * pi)) * real_expm1_ratio(u);
    }
    return 0.0;
}

Eigen::MatrixXcd gram_matrix(std::span<const KernelSpec> specs) {
    const auto n = static_cast<Eigen::Index>(specs.size());
    Eigen::MatrixXcd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& si = specs[static_cast<std::size_t>(i)];
        if (si.family != specs[0].family || si.a != specs[0].a)
            throw Error(std::string("Gram matrix needs a single kernel family and bandwidth, got ") +
                        family_name(si.family) + " with " + family_name(specs[0].family));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        G(i, i) = kernel_norm_sq(specs[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < i; ++j) {
            G(i, j) = kernel_eval(specs[static_cast<std::size_t>(j)], specs[static_cast<std::size_t>(i)].lambda);
            G(j, i) = std::conj(G(i, j));
        }
    }
    return G;
}

std::vector<StructuredPoint> generate_lambda_set(double eps, double eta, double a, const PointWindow& window) {
    if (!(eps > 0.0) || !(a > 0.0)) throw Error("structured point set needs eps > 0 and a > 0");
    if (!(eta >= 1.0) || std::exp2(std::round(std::log2(eta))) != eta) throw Error("eta must be a power of 2");
    std::vector<StructuredPoint> pts;
    const double im_cut = eps / (eta * a);
    const double base = 1.0 + eps;
    if (window.max_abs_im > im_cut) {
        const int m_lo = static_cast<int>(std::floor(std::log(im_cut) / std::log(base))) - 1;
        const int m_hi = static_cast<int>(std::ceil(std::log(window.max_abs_im) / std::log(base))) + 1;
        for (int m = m_lo; m <= m_hi; ++m) {
            const double h = std::pow(base, m);
            if (!(h > im_cut) || h > window.max_abs_im) continue;
            const double step = eps * h;
            const auto xmax = static_cast<index_t>(std::floor(window.max_abs_re / step));
            for (index_t x = -xmax; x <= xmax; ++x) {
                const double re = step * static_cast<double>(x);
                if (std::abs(re) > window.max_abs_re) continue;
                pts.push_back({cplx(re, h), PointKind::UPlus});
                pts.push_back({cplx(re, -h), PointKind::UMinus});
            }
        }
    }
    const double spacing = 2.0 * pi / (eta * a);
    const auto kmax = static_cast<index_t>(std::floor(window.max_abs_re / spacing));
    for (index_t k = -kmax; k <= kmax; ++k) pts.push_back({cplx(spacing * static_cast<double>(k), 0.0), PointKind::LatticePoint});
    std::sort(pts.begin(), pts.end(), [](const StructuredPoint& l, const StructuredPoint& r) {
        if (l.z.imag() != r.z.imag()) return l.z.imag() < r.z.imag();
        return l.z.real() < r.z.real();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const StructuredPoint& l, const StructuredPoint& r) { return l.z == r.z; }),
              pts.end());
    return pts;
}

EmbeddingCheck sampling_embedding_check(double a, std::span<const KernelSpec> specs, index_t radius) {
    EmbeddingCheck out;
    if (specs.empty()) return out;
    const KernelFamily fam = specs[0].family;
    for (const auto& s : specs)
        if (s.family != fam || s.a != a) throw Error("embedding check needs kernels of one family with bandwidth a");
    const double spacing = fam == KernelFamily::FullBand ? pi / a : 2.0 * pi / a;
    const auto n = specs.size();
    const Eigen::MatrixXcd G = gram_matrix(specs);
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<cplx> vals(n);
    for (index_t k = -radius; k <= radius; ++k) {
        const double x = spacing * static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i) vals[i] = kernel_eval(specs[i], x);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                S(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += spacing * vals[i] * std::conj(vals[j]);
    }
    // |κ_λ(x)| <= C_λ/|x − λ̄| and |x − λ̄| >= |x|/2 once |x| >= 2|λ|.
    double cmax = 0.0, rmax = 0.0;
    for (const auto& s : specs) {
        const double y = s.lambda.imag();
        double c;
        switch (fam) {
            case KernelFamily::FullBand: c = std::cosh(a * y) / pi; break;
            case KernelFamily::HalfBand: c = (1.0 + std::exp(-a * y)) / (2.0 * pi); break;
            default: c = (1.0 + std::exp(a * y)) / (2.0 * pi); break;
        }
        cmax = std::max(cmax, c);
        rmax = std::max(rmax, std::abs(s.lambda));
    }
    // Σ_{|k|>r} spacing·4C²/x_k² = (8C²/spacing)·Σ_{k>r} 1/k² <= (8C²/spacing)·min(2, 1/r)
    const auto r = static_cast<double>(std::max<index_t>(radius, 0));
    const double first_gap = spacing * (r + 1.0);
    out.tail_bound = first_gap >= 2.0 * rmax ? 8.0 * cmax * cmax / spacing * (r >= 1.0 ? 1.0 / r : 2.0) : INFINITY;
    out.defect = (G - S).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace pws
