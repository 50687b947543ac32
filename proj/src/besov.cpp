#include "pwschatten/besov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "pwschatten/l1fit.hpp"

namespace pws {
namespace {

constexpr index_t kMaterializeDirect = index_t{1} << 12;
constexpr index_t kMaterializeMax = index_t{1} << 24;

index_t floor_div(index_t x, index_t d) {
    index_t q = x / d;
    if ((x % d != 0) && ((x < 0) != (d < 0))) --q;
    return q;
}

index_t ceil_div(index_t x, index_t d) { return -floor_div(-x, d); }

bool all_real(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(), [](const cplx& z) { return z.imag() == 0.0; });
}

double real_osc(std::span<const cplx> v, int n, bool imag_part) {
    std::vector<double> y(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) y[i] = imag_part ? v[i].imag() : v[i].real();
    return detail::lad_uniform(y, n);
}

// Oscillation of an explicit block of consecutive values.
double osc_values(std::span<const cplx> v, int n, ComplexOsc mode) {
    if (v.size() <= static_cast<std::size_t>(n) + 1) return 0.0;
    if (all_real(v)) return real_osc(v, n, false);
    if (mode == ComplexOsc::SplitParts) return real_osc(v, n, false) + real_osc(v, n, true);
    return detail::lad_uniform_modulus(v, n);
}

// Σ_{i=0}^{m-1} t_i^k for t_i = (2i − N)/N, N = m − 1, k <= 4.
double grid_moment(index_t m, int k) {
    if (k % 2 == 1) return 0.0;
    const double N = static_cast<double>(m - 1);
    switch (k) {
        case 0: return static_cast<double>(m);
        case 2: return (N + 1.0) * (N + 2.0) / (3.0 * N);
        case 4: return (N + 1.0) * (N + 2.0) * (3.0 * N * N + 6.0 * N - 4.0) / (15.0 * N * N * N);
        default: throw Error("grid moment order out of range");
    }
}

// Dual certificate that P = 0 is an optimal fit for data vanishing off the
// listed offsets. Returns the optimal mean residual when certified.
struct Sparse {
    index_t offset;
    cplx value;
};

std::optional<double> zero_fit_certificate(index_t m, const std::vector<Sparse>& nz, int n, bool complex_sign) {
    if (n > 2) return std::nullopt;
    const int q = n + 1;
    if (static_cast<index_t>(nz.size()) + q > m) return std::nullopt;
    const double N = static_cast<double>(m - 1);
    Eigen::MatrixXd G(q, q);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(q);
    for (int k = 0; k < q; ++k)
        for (int l = 0; l < q; ++l) G(k, l) = grid_moment(m, k + l);
    double total = 0.0;
    for (const auto& s : nz) {
        const double t = (2.0 * static_cast<double>(s.offset) - N) / N;
        const cplx sgn = complex_sign ? s.value / std::abs(s.value) : cplx(s.value.real() > 0.0 ? 1.0 : -1.0);
        total += complex_sign ? std::abs(s.value) : std::abs(s.value.real());
        double tk = 1.0;
        std::array<double, 5> pw{};
        for (int k = 0; k < 2 * q - 1; ++k) { pw[static_cast<std::size_t>(k)] = tk; tk *= t; }
        for (int k = 0; k < q; ++k) {
            b(k) -= sgn * pw[static_cast<std::size_t>(k)];
            for (int l = 0; l < q; ++l) G(k, l) -= pw[static_cast<std::size_t>(k + l)];
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return std::nullopt;
    const Eigen::VectorXcd c = ldlt.solve(b);
    double sup = 0.0;
    if (!complex_sign) {
        auto qv = [&](double t) {
            double v = 0.0, tk = 1.0;
            for (int k = 0; k < q; ++k) { v += c(k).real() * tk; tk *= t; }
            return std::abs(v);
        };
        sup = std::max(qv(-1.0), qv(1.0));
        if (q == 3 && c(2).real() != 0.0) {
            const double v = -c(1).real() / (2.0 * c(2).real());
            if (std::abs(v) < 1.0) sup = std::max(sup, qv(v));
        }
    } else {
        for (int k = 0; k < q; ++k) sup += std::abs(c(k));
    }
    if (!(sup <= 1.0)) return std::nullopt;
    return total / static_cast<double>(m);
}

// Value source for a contiguous index range.
class ValueSource {
public:
    virtual ~ValueSource() = default;
    virtual void fill(index_t first, index_t last, std::vector<cplx>& out) = 0;
    // Nonzero entries within [first, last]; nullopt if not enumerable cheaply.
    virtual std::optional<std::vector<Sparse>> sparse(index_t first, index_t last) = 0;
};

class WindowSource : public ValueSource {
public:
    explicit WindowSource(const LatticeFunction& f) : f_(f) {}
    void fill(index_t first, index_t last, std::vector<cplx>& out) override {
        out.assign(static_cast<std::size_t>(last - first + 1), cplx{});
        const index_t lo = std::max(first, f_.k_min()), hi = std::min(last, f_.k_max());
        for (index_t k = lo; k <= hi; ++k)
            out[static_cast<std::size_t>(k - first)] = f_.values()[static_cast<std::size_t>(k - f_.k_min())];
    }
    std::optional<std::vector<Sparse>> sparse(index_t first, index_t last) override {
        std::vector<Sparse> nz;
        const index_t lo = std::max(first, f_.k_min()), hi = std::min(last, f_.k_max());
        for (index_t k = lo; k <= hi; ++k) {
            const cplx v = f_.values()[static_cast<std::size_t>(k - f_.k_min())];
            if (v != cplx{}) nz.push_back({k - first, v});
        }
        return nz;
    }

private:
    const LatticeFunction& f_;
};

class SampledSource : public ValueSource {
public:
    explicit SampledSource(const LatticeFunction& f) : f_(f), lo_(f.k_min()), cache_(f.values().begin(), f.values().end()) {}
    void fill(index_t first, index_t last, std::vector<cplx>& out) override {
        ensure(first, last);
        out.assign(cache_.begin() + (first - lo_), cache_.begin() + (last - lo_ + 1));
    }
    std::optional<std::vector<Sparse>> sparse(index_t, index_t) override { return std::nullopt; }

private:
    void ensure(index_t first, index_t last) {
        const index_t hi = lo_ + static_cast<index_t>(cache_.size()) - 1;
        if (first < lo_) {
            const index_t new_lo = std::min(first, lo_ - static_cast<index_t>(cache_.size()));
            std::vector<cplx> front;
            front.reserve(static_cast<std::size_t>(lo_ - new_lo));
            for (index_t k = new_lo; k < lo_; ++k) front.push_back(f_.sampler()(k));
            cache_.insert(cache_.begin(), front.begin(), front.end());
            lo_ = new_lo;
        }
        if (last > hi) {
            const index_t new_hi = std::max(last, hi + static_cast<index_t>(cache_.size()));
            for (index_t k = hi + 1; k <= new_hi; ++k) cache_.push_back(f_.sampler()(k));
        }
    }

    const LatticeFunction& f_;
    index_t lo_;
    std::vector<cplx> cache_;
};

double osc_range(ValueSource& src, index_t first, index_t last, int n, ComplexOsc mode, bool real,
                 std::vector<cplx>& buf) {
    const index_t m = last - first + 1;
    if (m <= n + 1) return 0.0;
    if (m > kMaterializeDirect) {
        if (auto nz = src.sparse(first, last)) {
            if (nz->empty()) return 0.0;
            if (real || mode == ComplexOsc::Modulus) {
                if (auto v = zero_fit_certificate(m, *nz, n, !real)) return *v;
            } else {
                std::vector<Sparse> re, im;
                for (const auto& s : *nz) {
                    if (s.value.real() != 0.0) re.push_back({s.offset, s.value.real()});
                    if (s.value.imag() != 0.0) im.push_back({s.offset, s.value.imag()});
                }
                auto vr = re.empty() ? std::optional<double>(0.0) : zero_fit_certificate(m, re, n, false);
                auto vi = im.empty() ? std::optional<double>(0.0) : zero_fit_certificate(m, im, n, false);
                if (vr && vi) return *vr + *vi;
            }
        }
        if (m > kMaterializeMax) throw Error("oscillation interval too large to evaluate");
    }
    src.fill(first, last, buf);
    return osc_values(buf, n, mode);
}

double abs_mass(std::span<const cplx> v, ComplexOsc mode) {
    double s = 0.0;
    for (const auto& z : v) s += (mode == ComplexOsc::SplitParts) ? std::abs(z.real()) + std::abs(z.imag()) : std::abs(z);
    return s;
}

// Σ_{j>J} (D/2^j + 2)·(S/2^j)^p: every level-j interval meeting the support
// has osc <= S/(2^j + 1), and at most D/2^j + 2 of them meet it.
double compact_tail(double S, double D, double p, int J) {
    const double Sp = std::pow(S, p);
    const double a = std::pow(2.0, -(J + 1) * (1.0 + p)) / (1.0 - std::pow(2.0, -(1.0 + p)));
    const double b = std::pow(2.0, -(J + 1) * p) / (1.0 - std::pow(2.0, -p));
    return Sp * (D * a + 2.0 * b);
}

struct CompactSum {
    double sum = 0.0;
    double tail = 0.0;
    int levels = 0;
};

CompactSum compact_besov(const LatticeFunction& f, const BesovParams& params) {
    CompactSum out;
    const auto vals = f.values();
    index_t lo = -1, hi = -2;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == cplx{}) continue;
        const index_t k = f.k_min() + static_cast<index_t>(i);
        if (hi < lo) lo = k;
        hi = k;
    }
    if (hi < lo) return out;
    const int n = params.degree();
    const double p = params.p;
    const bool real = f.is_real();
    const double S = abs_mass(vals, params.complex_mode);
    const double D = static_cast<double>(hi - lo);
    WindowSource src(f);
    std::vector<cplx> buf;
    for (int j = 0; j <= params.max_level; ++j) {
        const index_t len = index_t{1} << j;
        for (index_t pos = ceil_div(lo, len) - 1; pos <= floor_div(hi, len); ++pos) {
            const index_t first = pos * len, last = first + len;
            if (last < lo || first > hi) continue;
            const double o = osc_range(src, first, last, n, params.complex_mode, real, buf);
            if (o > 0.0) out.sum += std::pow(o, p);
        }
        out.levels = j;
        out.tail = compact_tail(S, D, p, j);
        if (out.tail <= params.tolerance * out.sum) return out;
    }
    throw Error("Besov tail not certified within the level cap (level " + std::to_string(params.max_level) + ")");
}

// Bound on Σ_I osc(h, I)^p for h supported on k >= K (one side) with
// |h(k)| <= C k^{-alpha}, using P = 0 on every interval.
double decay_side_bound(double C, double alpha, double p, double K) {
    if (C == 0.0) return 0.0;
    double total = 2.0 * std::pow(C, p) * std::pow(K, 1.0 - alpha * p) / (alpha * p - 1.0);
    for (int j = 0; j < 400; ++j) {
        const double len = std::ldexp(1.0, j);
        double integral;
        if (std::abs(alpha - 1.0) < 1e-12) integral = std::log1p(len / K);
        else integral = (std::pow(K + len, 1.0 - alpha) - std::pow(K, 1.0 - alpha)) / (1.0 - alpha);
        const double H = std::pow(K, -alpha) + integral;
        const double term = std::pow(C * H / (len + 1.0), p);
        total += term;
        if (term < 1e-18 * total) break;
    }
    return total;
}

BesovNorm finish(double sum, double tail, double p, bool certified, int levels, index_t window) {
    BesovNorm r;
    r.sum_p = sum;
    r.tail_bound = tail;
    r.certified = certified;
    r.levels = levels;
    r.window = window;
    r.norm = std::pow(sum, 1.0 / p);
    return r;
}

BesovNorm adaptive_besov(const LatticeFunction& f, const BesovParams& params) {
    const int n = params.degree();
    const double p = params.p;
    const ComplexOsc mode = params.complex_mode;
    SampledSource src(f);
    std::vector<cplx> buf;
    struct Key {
        int level;
        index_t pos;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<index_t>()(k.pos * 64 + k.level);
        }
    };
    std::unordered_map<Key, double, KeyHash> done;
    double sum = 0.0;
    index_t W = 16;
    while (W < std::max(std::abs(f.k_min()), std::abs(f.k_max()))) W *= 2;
    const double r = std::pow(2.0, -p);
    std::vector<double> sums, extrap;
    int top = 0;
    for (;;) {
        if (W > params.max_window) throw Error("adaptive Besov window exceeded max_window without stabilizing");
        top = 1;
        while ((index_t{1} << (top - 1)) < W) ++top;
        for (int j = 0; j <= top; ++j) {
            const index_t len = index_t{1} << j;
            for (index_t pos = ceil_div(-W, len) - 1; pos <= floor_div(W, len); ++pos) {
                const Key key{j, pos};
                if (done.count(key)) continue;
                const index_t first = pos * len, last = first + len;
                // a sampled value sequence is never certified real in advance
                std::vector<cplx>& v = buf;
                src.fill(first, last, v);
                const double o = osc_values(v, n, mode);
                const double c = o > 0.0 ? std::pow(o, p) : 0.0;
                done.emplace(key, c);
                sum += c;
            }
        }
        sums.push_back(sum);
        if (sums.size() >= 2) {
            const double inc = sums[sums.size() - 1] - sums[sums.size() - 2];
            extrap.push_back(sum + std::max(inc, 0.0) * r / (1.0 - r));
        }
        if (extrap.size() >= 2) {
            const double e1 = extrap[extrap.size() - 1], e0 = extrap[extrap.size() - 2];
            if (std::abs(e1 - e0) <= params.tolerance * e1) break;
        }
        if (sum == 0.0 && sums.size() >= 3) break;
        W *= 2;
    }
    const double est = extrap.empty() ? sum : extrap.back();
    BesovNorm out = finish(sum, est - sum, p, false, top, W);
    out.norm = std::pow(est, 1.0 / p);
    return out;
}

}  // namespace

double oscillation(const LatticeFunction& f, const DyadicInterval& I, int n, ComplexOsc mode) {
    if (n < 0) throw Error("oscillation degree must be nonnegative");
    if (I.level < 0 || I.level > 62) throw Error("dyadic level out of range");
    std::vector<cplx> buf;
    const index_t first = I.first_index(), last = I.last_index();
    if (f.has_sampler()) {
        SampledSource src(f);
        return osc_range(src, first, last, n, mode, false, buf);
    }
    WindowSource src(f);
    return osc_range(src, first, last, n, mode, f.is_real(), buf);
}

BesovNorm besov_norm(const LatticeFunction& f, const BesovParams& params) {
    const double p = params.p;
    if (const auto* d = std::get_if<DecayTail>(&f.tail())) {
        if (f.has_sampler()) return adaptive_besov(f, params);
        if (!(d->alpha * p > 1.0))
            throw Error("Besov tail diverges at level 0: decay exponent alpha*p must exceed 1");
        if (!(f.k_min() < 0 && f.k_max() > 0)) throw Error("decay-tailed window must contain index 0");
        const auto g = compact_besov(f, params);
        const double th = decay_side_bound(d->C, d->alpha, p, static_cast<double>(f.k_max() + 1)) +
                          decay_side_bound(d->C, d->alpha, p, static_cast<double>(1 - f.k_min()));
        double tail;
        if (p <= 1.0) tail = g.tail + th;
        else tail = std::pow(std::pow(g.sum + g.tail, 1.0 / p) + std::pow(th, 1.0 / p), p) - g.sum;
        const index_t w = std::max(-f.k_min(), f.k_max());
        return finish(g.sum, tail, p, tail <= params.tolerance * g.sum, g.levels, w);
    }
    const auto g = compact_besov(f, params);
    return finish(g.sum, g.tail, p, true, g.levels, std::max(std::abs(f.k_min()), std::abs(f.k_max())));
}

BmoNorm bmo_norm(const LatticeFunction& f, int max_level) {
    BmoNorm out;
    const auto vals = f.values();
    index_t lo = -1, hi = -2;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == cplx{}) continue;
        const index_t k = f.k_min() + static_cast<index_t>(i);
        if (hi < lo) lo = k;
        hi = k;
    }
    if (hi < lo) return out;
    const double S = abs_mass(vals, ComplexOsc::Modulus);
    const bool real = f.is_real();
    WindowSource src(f);
    std::vector<cplx> buf;
    for (int j = 0; j <= max_level; ++j) {
        const index_t len = index_t{1} << j;
        for (index_t pos = ceil_div(lo, len) - 1; pos <= floor_div(hi, len); ++pos) {
            const index_t first = pos * len, last = first + len;
            if (last < lo || first > hi) continue;
            out.value = std::max(out.value, osc_range(src, first, last, 0, ComplexOsc::Modulus, real, buf));
        }
        out.levels = j;
        out.unvisited_bound = S / static_cast<double>((index_t{1} << (j + 1)) + 1);
        if (out.unvisited_bound <= out.value) break;
    }
    return out;
}

PiecewisePolynomial::PiecewisePolynomial(Lattice lattice, int degree, index_t first_block,
                                         std::vector<std::vector<cplx>> newton)
    : lattice_(lattice), degree_(degree), first_block_(first_block), newton_(std::move(newton)) {}

cplx PiecewisePolynomial::operator()(double x) const {
    const double u = (x - lattice_.shift()) / lattice_.spacing();
    const double d = static_cast<double>(degree_);
    auto b = static_cast<index_t>(std::floor(u / d));
    if (b == first_block_ + block_count() && u == static_cast<double>(b) * d) --b;
    if (b < first_block_ || b >= first_block_ + block_count()) return {};
    const auto& dd = newton_[static_cast<std::size_t>(b - first_block_)];
    const double s = u - static_cast<double>(b) * d;
    cplx v = dd.back();
    for (int k = degree_ - 1; k >= 0; --k) v = v * (s - k) + dd[static_cast<std::size_t>(k)];
    return v;
}

PiecewisePolynomial extend_l7(const LatticeFunction& f, double p) {
    if (!(p > 0.0) || p > 1.0) throw Error("extension needs 0 < p <= 1");
    const int d = besov_degree(p);
    const index_t b0 = floor_div(f.k_min(), d), b1 = floor_div(f.k_max(), d);
    std::vector<std::vector<cplx>> newton;
    newton.reserve(static_cast<std::size_t>(b1 - b0 + 1));
    for (index_t b = b0; b <= b1; ++b) {
        std::vector<cplx> dd(static_cast<std::size_t>(d) + 1);
        for (int i = 0; i <= d; ++i) dd[static_cast<std::size_t>(i)] = f(b * d + i);
        // unit-spaced nodes 0..d
        for (int lvl = 1; lvl <= d; ++lvl)
            for (int i = d; i >= lvl; --i)
                dd[static_cast<std::size_t>(i)] = (dd[static_cast<std::size_t>(i)] - dd[static_cast<std::size_t>(i - 1)]) /
                                                  static_cast<double>(lvl);
        newton.push_back(std::move(dd));
    }
    return PiecewisePolynomial(f.lattice(), d, b0, std::move(newton));
}

}  // namespace pws
