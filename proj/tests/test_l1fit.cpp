#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pwschatten/l1fit.hpp"

using namespace pws;

TEST_CASE("l1 fit small examples") {
    std::vector<double> xs{0, 1, 2};
    CHECK(l1_poly_fit(xs, std::vector<double>{5, 5, 5}, 0).mean_abs_residual == doctest::Approx(0.0));
    CHECK(l1_poly_fit(xs, std::vector<double>{0, 1, 10}, 0).mean_abs_residual == doctest::Approx(10.0 / 3));
    auto fit = l1_poly_fit(xs, std::vector<double>{1, 0, 0}, 1);
    CHECK(fit.mean_abs_residual == doctest::Approx(1.0 / 6));
    CHECK(fit.coeffs[0] == doctest::Approx(1.0));
    CHECK(fit.coeffs[1] == doctest::Approx(-0.5));
}

TEST_CASE("l1 fit rejects bad input") {
    std::vector<double> empty;
    CHECK_THROWS_AS(l1_poly_fit(empty, empty, 1), Error);
    std::vector<double> xs{0, 2, 1}, ys{1, 2, 3};
    CHECK_THROWS_AS(l1_poly_fit(xs, ys, 1), Error);
}

TEST_CASE("l1 fit matches subset enumeration") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 9);
        const int n = static_cast<int>(rng() % 3);
        std::vector<double> xs(m), ys(m);
        double x = u(rng);
        for (int i = 0; i < m; ++i) { x += 0.1 + std::abs(u(rng)); xs[i] = x; ys[i] = trial % 3 == 0 ? std::round(3 * u(rng)) : u(rng); }
        const double got = l1_poly_fit(xs, ys, n).mean_abs_residual;
        CHECK(std::abs(got - oracle::brute_force_lad(xs, ys, n)) < 1e-10);
    }
}

TEST_CASE("l1 fit on long noisy data beats its own perturbations") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    const int m = 400;
    std::vector<double> xs(m), ys(m);
    for (int i = 0; i < m; ++i) { xs[i] = i; ys[i] = 0.01 * i * i - 2.0 * i + 5.0 * g(rng); }
    for (int n = 0; n <= 3; ++n) {
        auto fit = l1_poly_fit(xs, ys, n);
        auto obj = [&](const std::vector<double>& c) {
            double s = 0;
            for (int i = 0; i < m; ++i) {
                double v = 0, p = 1;
                for (double ck : c) { v += ck * p; p *= xs[i]; }
                s += std::abs(ys[i] - v);
            }
            return s / m;
        };
        CHECK(obj(fit.coeffs) == doctest::Approx(fit.mean_abs_residual).epsilon(1e-9));
        for (int k = 0; k <= n; ++k)
            for (double h : {1e-4, -1e-4}) {
                auto c = fit.coeffs;
                c[k] += h / std::pow(static_cast<double>(m), k);
                CHECK(obj(c) >= fit.mean_abs_residual - 1e-12);
            }
    }
}

TEST_CASE("complex modulus fit is between the split bound and its half") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> xs(30);
    std::vector<cplx> ys(30);
    for (int i = 0; i < 30; ++i) { xs[i] = i; ys[i] = {g(rng), g(rng)}; }
    for (int n = 0; n <= 2; ++n) {
        auto split = l1_poly_fit_complex(xs, ys, n, ComplexOsc::SplitParts);
        auto mod = l1_poly_fit_complex(xs, ys, n, ComplexOsc::Modulus);
        CHECK(mod.mean_abs_residual <= split.mean_abs_residual + 1e-12);
        CHECK(mod.mean_abs_residual >= split.mean_abs_residual / std::sqrt(2.0) - 1e-12);
    }
}
