#include "pwschatten/littlewood_paley.hpp"

#include <cmath>

#include <fftw3.h>

namespace pws {
namespace {

double bump_exp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Σ_{j=-j_max}^{-1} ν_j(x) telescopes to S(2x) − S(x·2^{1+j_max}).
double left_piece(int j, double x) {
    if (x <= 0.0) return 0.0;
    return smooth_step(x / std::ldexp(1.0, j)) - smooth_step(x / std::ldexp(1.0, j - 1));
}

class FftPlan {
public:
    explicit FftPlan(int n) : n_(n) {
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)));
        plan_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPlan() {
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    fftw_complex* data() { return buf_; }
    void run() { fftw_execute(plan_); }
    int size() const { return n_; }

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

}  // namespace

double smooth_step(double x) {
    // t runs from 0 at x = 1/2 to 1 at x = 1
    const double t = 2.0 * x - 1.0;
    const double up = bump_exp(t), down = bump_exp(1.0 - t);
    if (up + down == 0.0) return x < 0.75 ? 1.0 : 0.0;
    return down / (up + down);
}

double partition_piece(int j, double x, int j_max) {
    if (x < 0.0 || x > 1.0) return 0.0;
    if (j < 0) return left_piece(j, x);
    if (j > 0) return x >= 0.5 ? left_piece(-j, 1.0 - x) : 0.0;
    double s = 0.0;
    for (int k = 1; k <= j_max; ++k) s += left_piece(-k, x) + (x >= 0.5 ? left_piece(-k, 1.0 - x) : 0.0);
    return 1.0 - s;
}

RochbergPellerValue rochberg_peller_functional(std::span<const cplx> phi_hat, double a, double p,
                                               const RochbergPellerGrid& grid) {
    if (!(a > 0.0) || !(p > 0.0)) throw Error("Rochberg-Peller functional needs a > 0 and p > 0");
    if (phi_hat.size() < 2) throw Error("need at least two spectral samples");
    const auto M = static_cast<int>(phi_hat.size());
    const double dxi = 4.0 * a / (M - 1);
    // narrowest piece, j = ±j_max, is supported on a (3/4)·2^{-j_max} fraction of [−2a, 2a]
    const double narrow = 0.75 * std::ldexp(4.0 * a, -grid.j_max);
    if (narrow < 16.0 * dxi) throw Error("spectral grid too coarse for the requested j_max");
    int n = 1;
    while (n < grid.pad_factor * M) n *= 2;
    const double dx = 2.0 * pi / (n * dxi);
    FftPlan plan(n);
    RochbergPellerValue out;
    double edge_mass = 0.0, total_mass = 0.0;
    for (int j = -grid.j_max; j <= grid.j_max; ++j) {
        auto* buf = plan.data();
        for (int i = 0; i < n; ++i) buf[i][0] = buf[i][1] = 0.0;
        for (int i = 0; i < M; ++i) {
            const double u = static_cast<double>(i) / (M - 1);
            const cplx g = partition_piece(j, u, grid.j_max) * phi_hat[static_cast<std::size_t>(i)] * dxi / (2.0 * pi);
            buf[i][0] = g.real();
            buf[i][1] = g.imag();
        }
        plan.run();
        double s = 0.0;
        for (int m = 0; m < n; ++m) {
            const double v = std::pow(std::hypot(buf[m][0], buf[m][1]), p) * dx;
            s += v;
            // indices near n/2 are the far ends of the periodic window
            if (std::abs(m - n / 2) < n / 20) edge_mass += v;
        }
        total_mass += s;
        out.terms.push_back(s);
        out.value += a * std::ldexp(1.0, -std::abs(j)) * s;
    }
    out.aliasing_estimate = total_mass > 0.0 ? edge_mass / total_mass : 0.0;
    return out;
}

}  // namespace pws
