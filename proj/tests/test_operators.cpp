#include <doctest.h>

#include <random>

#include "pwschatten/operators.hpp"

using namespace pws;

TEST_CASE("schatten quasinorms") {
    auto s = make_spectrum({4.0, 3.0});
    CHECK(schatten_quasinorm(s, 1.0) == doctest::Approx(7.0));
    CHECK(schatten_quasinorm(s, 2.0) == doctest::Approx(5.0));
    CHECK(schatten_quasinorm(make_spectrum({1.0}), 0.37) == doctest::Approx(1.0));
    // cutoff drops tiny values before the p-th powers
    CHECK(schatten_p_sum(make_spectrum({1.0, 1e-13}), 0.5) == 1.0);
    CHECK(schatten_p_sum(make_spectrum({1.0, 1e-11}), 0.5) > 1.0);
    auto t = make_spectrum({2.0, 1.0, 0.5, 0.1});
    double prev = 1e300;
    for (double p : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double v = schatten_quasinorm(t, p);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("finite rank singular values") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int t = 0; t < 20; ++t) {
        const double a = 0.5 + std::abs(u(rng));
        AtomicSymbol sym{a, {{cplx(u(rng), u(rng)) / a, 1.0}}};
        auto s = singular_values(toeplitz_from_atoms(sym));
        REQUIRE(s.sigmas.size() == 1);
        CHECK(std::abs(s.sigmas[0] - 1.0) < 1e-9);
    }
    FiniteRankOperator one{{{KernelFamily::FullBand, 1.0, cplx(0.3, 0.1)}}, {{KernelFamily::FullBand, 1.0, 2.0}}, {cplx(2.0, 1.0)}};
    CHECK(singular_values(one).sigmas[0] ==
          doctest::Approx(std::sqrt(5.0) * std::sqrt(kernel_norm_sq(one.left[0]) * kernel_norm_sq(one.right[0]))));
    // orthonormal families
    FiniteRankOperator orth;
    for (int k = 0; k < 3; ++k) {
        orth.left.push_back({KernelFamily::FullBand, pi, double(2 * k)});
        orth.right.push_back({KernelFamily::FullBand, pi, double(2 * k + 1)});
        orth.coeffs.push_back(double(k + 1));
    }
    auto so = singular_values(orth);
    CHECK(so.sigmas[0] == doctest::Approx(3.0));
    CHECK(so.sigmas[2] == doctest::Approx(1.0));
    AtomicSymbol far{pi, {{0.0, 1.0}, {200.0, 1.0}}};
    auto sf = singular_values(toeplitz_from_atoms(far));
    CHECK(sf.sigmas[0] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(sf.sigmas[1] == doctest::Approx(1.0).epsilon(1e-2));
    AtomicSymbol zero{pi, {{cplx(0.1, 0.2), 0.0}}};
    CHECK(schatten_quasinorm(singular_values(toeplitz_from_atoms(zero)), 1.0) == 0.0);
}

TEST_CASE("p-triangle inequality for atomic operators") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int t = 0; t < 20; ++t) {
        AtomicSymbol A{1.0, {}}, B{1.0, {}};
        for (int i = 0; i < 3; ++i) A.atoms.push_back({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        for (int i = 0; i < 3; ++i) B.atoms.push_back({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        AtomicSymbol AB = A;
        AB.atoms.insert(AB.atoms.end(), B.atoms.begin(), B.atoms.end());
        for (double p : {0.5, 1.0}) {
            const double lhs = schatten_p_sum(singular_values(toeplitz_from_atoms(AB)), p);
            const double rhs = schatten_p_sum(singular_values(toeplitz_from_atoms(A)), p) +
                               schatten_p_sum(singular_values(toeplitz_from_atoms(B)), p);
            CHECK(lhs <= rhs * (1 + 1e-10));
        }
    }
}

TEST_CASE("standard symbol evaluation") {
    const double a = 1.3;
    const double lam = 2 * pi / a * 3;
    AtomicSymbol s{a, {{lam, 1.0}}};
    CHECK(std::abs(standard_symbol_eval(s, lam) - 2.0) < 1e-14);
    CHECK(standard_symbol_eval(AtomicSymbol{a, {}}, 0.3) == cplx{});
    AtomicSymbol c{a, {{cplx(0.4, 0.9), cplx(1.0, -2.0)}}};
    AtomicSymbol cc{a, {{cplx(0.4, -0.9), cplx(1.0, 2.0)}}};
    const cplx z(0.2, 0.5);
    CHECK(std::abs(standard_symbol_eval(cc, z) - std::conj(standard_symbol_eval(c, std::conj(z)))) < 1e-14);
}

TEST_CASE("symbol sequence sampling") {
    const double a = pi;
    AtomicSymbol sym{a, {{cplx(0.37, 0.8), cplx(1.0, 0.5)}, {cplx(-1.5, 0.0), 2.0}, {cplx(0.5, -2.0), 0.3}}};
    auto f = sample_symbol_sequence(sym);
    CHECK(f.lattice().a() == doctest::Approx(4 * a));
    for (index_t k = -30; k <= 30; ++k) {
        const double x = pi * double(k) / (2 * a);
        const cplx direct = ((k % 2 == 0) ? 1.0 : -1.0) * standard_symbol_eval(sym, x);
        CHECK(std::abs(f(k) - direct) < 1e-12 * (1.0 + std::abs(direct)));
    }
    CHECK(std::abs(sample_symbol_sequence(AtomicSymbol{a, {}})(5)) == 0.0);
    // a real atom on Z_{4a} is a spike plus a vanishing Cauchy part
    AtomicSymbol on{a, {{pi * 3 / (2 * a), 1.0}}};
    auto g = sample_symbol_sequence(on);
    CHECK(std::abs(g(3) - cplx(-2.0)) < 1e-14);
    CHECK(std::abs(g(7)) < 1e-14);
}

TEST_CASE("dense sinc truncations") {
    const double a = pi;
    DenseQuadrature q{24.0 * pi / a};
    auto I = dense_toeplitz_sinc([](double) { return cplx(1.0); }, a, 4, q);
    CHECK((I.matrix - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 0.05);
    auto H = dense_toeplitz_sinc([](double x) { return cplx(1.0 / (1.0 + x * x)); }, a, 6, q);
    CHECK((H.matrix - H.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const cplx phase = std::polar(1.0, 0.7);
    auto H2 = dense_toeplitz_sinc([phase](double x) { return phase / (1.0 + x * x); }, a, 6, q);
    auto s1 = dense_singular_values(H.matrix), s2 = dense_singular_values(H2.matrix);
    for (std::size_t i = 0; i < s1.sigmas.size(); ++i) CHECK(std::abs(s1.sigmas[i] - s2.sigmas[i]) < 1e-12);
    auto Z = dense_truncated_hankel([](double) { return cplx(1.0); }, a, 4, DenseQuadrature{48 * pi / a});
    CHECK(Z.matrix.cwiseAbs().maxCoeff() < 0.05);
    auto U = dense_truncated_hankel([a](double x) { return std::polar(1.0, -a * x); }, a, 4, DenseQuadrature{48 * pi / a});
    CHECK((U.matrix - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 0.05);
    CHECK_THROWS_AS(dense_toeplitz_sinc([](double) { return cplx(1.0); }, a, 4, DenseQuadrature{3.0, 16, 1e-6}), Error);
}

TEST_CASE("atomic operators: dense quadrature matches the exact compression") {
    const double a = 1.0;
    AtomicSymbol sym{a, {{0.3, 1.0}, {-2.0, cplx(0.5, 0.5)}}};
    auto exact = compress_to_sinc(toeplitz_from_atoms(sym), a, 8);
    auto dense = dense_toeplitz_sinc([&](double x) { return standard_symbol_eval(sym, x); }, a, 8,
                                     DenseQuadrature{400 * pi / a});
    CHECK((exact.matrix - dense.matrix).cwiseAbs().maxCoeff() < 5e-3);
}
