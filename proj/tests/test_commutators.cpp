#include <doctest.h>

#include <random>

#include "pwschatten/commutators.hpp"

using namespace pws;

namespace {

LatticeFunction random_compact(std::mt19937_64& rng, double a, index_t k_min, int n, bool real) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = real ? cplx(g(rng)) : cplx(g(rng), g(rng));
    return LatticeFunction(Lattice(a), k_min, v);
}

// Σ_{k≠0} 1/k² minus the excluded in-support differences gives the exact
// Hilbert–Schmidt norm of the square commutator.
double square_hs_oracle(const LatticeFunction& psi) {
    double s = 0.0;
    for (index_t j = psi.k_min(); j <= psi.k_max(); ++j) {
        double outside = 1.0 / 3.0;
        for (index_t k = psi.k_min(); k <= psi.k_max(); ++k) {
            if (k == j) continue;
            const double d = static_cast<double>(j - k);
            s += std::norm(psi(j) - psi(k)) / (pi * pi * d * d);
            outside -= 1.0 / (pi * pi * d * d);
        }
        s += 2.0 * std::norm(psi(j)) * outside;
    }
    return s;
}

// odd rows r, even columns c; Σ_{c even} 4/(π²(r−c)²) = 1 for odd r
double rect_hs_oracle(const LatticeFunction& psi) {
    double s = 0.0;
    const auto odd = [](index_t k) { return (k % 2 + 2) % 2 == 1; };
    for (index_t j = psi.k_min(); j <= psi.k_max(); ++j) {
        double outside = 1.0;
        for (index_t k = psi.k_min(); k <= psi.k_max(); ++k) {
            if (odd(k) == odd(j)) continue;
            const double d = static_cast<double>(j - k);
            const double h2 = 4.0 / (pi * pi * d * d);
            if (odd(j)) s += std::norm(psi(j) - psi(k)) * h2;
            outside -= h2;
        }
        s += std::norm(psi(j)) * outside;
    }
    return s;
}

}  // namespace

TEST_CASE("commutator matrix is M H - H M") {
    std::mt19937_64 rng(31);
    const auto psi = random_compact(rng, 1.3, -4, 9, false);
    const auto H = hilbert_matrix(1.3, -10, 10).matrix;
    Eigen::VectorXcd m(21);
    for (index_t k = -10; k <= 10; ++k) m(k + 10) = psi(k);
    const Eigen::MatrixXcd direct = m.asDiagonal() * H - H * m.asDiagonal();
    const auto C = commutator_matrix({psi, CommutatorVariant::Square, -10, 10}).matrix;
    CHECK((C - direct).cwiseAbs().maxCoeff() < 1e-14);

    const auto R = commutator_matrix({psi, CommutatorVariant::Rectangular, -10, 10});
    CHECK(R.matrix.rows() == 10);
    CHECK(R.matrix.cols() == 11);
    CHECK(R.row_basis.k_min == -5);
    CHECK(R.col_basis.k_min == -5);
    // row i ↔ index 2i+1, column k ↔ index 2k
    CHECK(std::abs(R.matrix(0, 0) - 2.0 * (psi(-9) - psi(-10)) / pi) < 1e-14);
    CHECK(std::abs(R.matrix(2, 5) - 2.0 * (psi(-5) - psi(0)) / (pi * -5.0)) < 1e-14);
}

TEST_CASE("lattice Hilbert matrix norm") {
    const auto H = hilbert_matrix(pi, -150, 150).matrix;
    const double s = dense_singular_values(H).max();
    CHECK(s > 0.97);
    CHECK(s <= 1.0 + 1e-8);
    // the rectangular Hilbert matrix has orthonormal rows in the limit
    double row = 0.0;
    for (index_t k = -200000; k <= 200000; ++k) {
        const double d = static_cast<double>(1 - 2 * k);
        row += 4.0 / (pi * pi * d * d);
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("exact commutator spectrum against Hilbert-Schmidt oracle") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 12; ++t) {
        const bool real = t % 2 == 0;
        const auto psi = random_compact(rng, 0.7 + 0.2 * t, -3 + t, 2 + t % 6, real);
        const auto sq = commutator_singular_values(psi, CommutatorVariant::Square);
        CHECK(schatten_p_sum(sq, 2.0) == doctest::Approx(square_hs_oracle(psi)).epsilon(1e-10));
        const auto re = commutator_singular_values(psi, CommutatorVariant::Rectangular);
        CHECK(schatten_p_sum(re, 2.0) == doctest::Approx(rect_hs_oracle(psi)).epsilon(1e-10));
        // truncations are compressions: singular values can only shrink
        const auto dense = dense_singular_values(
            commutator_matrix({psi, CommutatorVariant::Square, psi.k_min() - 200, psi.k_max() + 200}).matrix);
        CHECK(dense.max() <= sq.max() * (1 + 1e-10));
        CHECK(dense.max() >= 0.97 * sq.max());
    }
    CHECK(commutator_singular_values(LatticeFunction(Lattice(1.0), 0, {0.0, 0.0}), CommutatorVariant::Square)
              .sigmas.empty());
    CHECK_THROWS_AS(commutator_singular_values(counterexample_symbol(SymbolOrder::First, cplx(0, 1), 1.0),
                                               CommutatorVariant::Square),
                    Error);
}

TEST_CASE("constant symbol commutes") {
    const LatticeFunction c(Lattice(2.0), -5, std::vector<cplx>(11, cplx(3.0, 1.0)));
    const auto C = commutator_matrix({c, CommutatorVariant::Square, -5, 5}).matrix;
    CHECK(C.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lattice Cauchy energy and multiplication operators") {
    for (auto [lam, a] : {std::pair{cplx(0.3, 0.7), 1.0}, {cplx(-2.0, 5.0), 0.4}, {cplx(10.0, -0.2), 3.0}}) {
        const Lattice lat(a);
        double s = 0.0;
        const index_t K = 2000000;
        for (index_t k = -K; k <= K; ++k) s += lat.weight() / std::norm(lat.point(k) - std::conj(lam));
        s += 2.0 / (lat.spacing() * static_cast<double>(K));
        CHECK(lattice_cauchy_energy(lam, a) == doctest::Approx(s).epsilon(1e-6));
    }
    // Σ 1/(n² + 1) = π coth π
    const auto m = multiplication_schatten(MultiplierKind::First, cplx(0, 1), 2.0 * pi, 1.0);
    CHECK(m.p_sum == doctest::Approx(pi / std::tanh(pi)).epsilon(1e-10));
    CHECK(m.uncertainty < 1e-6);
    const auto m3 = multiplication_schatten(MultiplierKind::Third, cplx(0.25, 2.0), 1.0, 0.5);
    double brute = 0.0;
    for (index_t k = -3000000; k <= 3000000; ++k) {
        const double x = 2 * pi * static_cast<double>(k);
        brute += std::pow(8.0, 0.5) / std::pow(std::hypot(x - 0.25, 2.0), 1.5);
    }
    // Σ_{|k|>K} ≈ 2·√8·(2π)^{-3/2}·2/√K
    brute += 4.0 * std::sqrt(8.0) * std::pow(2.0 * pi, -1.5) / std::sqrt(3e6);
    CHECK(m3.p_sum == doctest::Approx(brute).epsilon(1e-5));
    CHECK_THROWS_AS(multiplication_schatten(MultiplierKind::First, cplx(0, 1), 1.0, 0.5), Error);
    CHECK_THROWS_AS(multiplication_schatten(MultiplierKind::Third, cplx(0, 1), 1.0, 1.0 / 3.0), Error);
    CHECK_NOTHROW(multiplication_schatten(MultiplierKind::First, cplx(0, 1), 1.0, 0.75));
}

TEST_CASE("K = C + diagonal is rank one for the order-one symbol") {
    const double a = 1.5;
    const cplx lam(0.8, 3.0);
    const auto psi = counterexample_symbol(SymbolOrder::First, lam, a);
    const Lattice lat(a);
    const index_t N = 400;
    auto C = commutator_matrix({psi, CommutatorVariant::Square, -N, N}).matrix;
    Eigen::VectorXcd u(2 * N + 1);
    for (index_t k = -N; k <= N; ++k) {
        const cplx d = lat.point(k) - std::conj(lam);
        u(k + N) = std::sqrt(lat.weight()) / d;
        // (w/π)·ψ'(x)
        C(k + N, k + N) += lat.weight() / pi * (-lam.imag() / (d * d));
    }
    const Eigen::MatrixXcd K = -(lam.imag() / pi) * u * u.transpose();
    CHECK((C - K).cwiseAbs().maxCoeff() < 1e-13);
    const auto sv = dense_singular_values(K);
    CHECK(sv.sigmas[1] < 1e-12 * sv.sigmas[0]);
    CHECK(sv.max() == doctest::Approx(rank_one_K(lam, a)).epsilon(2e-3));
    CHECK(sv.max() <= rank_one_K(lam, a));
}

TEST_CASE("rank-two K for the order-two symbol") {
    const double a = 1.0;
    const cplx lam(-1.1, 2.5);
    const auto psi = counterexample_symbol(SymbolOrder::Second, lam, a);
    const Lattice lat(a);
    const index_t N = 500;
    auto C = commutator_matrix({psi, CommutatorVariant::Square, -N, N}).matrix;
    const double Y = lam.imag();
    for (index_t k = -N; k <= N; ++k) {
        const cplx d = lat.point(k) - std::conj(lam);
        C(k + N, k + N) += lat.weight() / pi * (-2.0 * Y * Y / (d * d * d));
    }
    const auto sv = dense_singular_values(C);
    CHECK(sv.sigmas[2] < 1e-12 * sv.sigmas[0]);
    const auto exact = rank_two_K(lam, a);
    CHECK(sv.sigmas[0] == doctest::Approx(exact[0]).epsilon(1e-3));
    CHECK(sv.sigmas[1] == doctest::Approx(exact[1]).epsilon(1e-3));
}

TEST_CASE("truncated commutator bracket") {
    const double a = 2.0;
    const cplx lam(0.5, 7.0);
    for (double p : {0.5, 1.0}) {
        const auto dense = truncated_commutator_schatten(lam, a, p, 200, 1000);
        CHECK(dense.dense);
        const auto br = truncated_commutator_schatten(lam, a, p, 200, 10);
        CHECK(!br.dense);
        CHECK(br.lower_p_sum <= dense.lower_p_sum);
        CHECK(br.upper_p_sum >= dense.lower_p_sum);
    }
    // growth with Im λ at p = 1/2 when the window scales with it
    const auto lo = truncated_commutator_schatten(cplx(0, 10.0), 1.0, 0.5, 40, 0);
    const auto hi = truncated_commutator_schatten(cplx(0, 1000.0), 1.0, 0.5, 4000, 0);
    CHECK(hi.lower_p_sum > 5.0 * lo.upper_p_sum);
}

TEST_CASE("counterexample symbol") {
    const auto f = counterexample_symbol(SymbolOrder::First, cplx(1.0, 2.0), 1.0);
    CHECK(std::abs(f(3) - 2.0 / (2.0 * pi * 3.0 - cplx(1.0, -2.0))) < 1e-15);
    CHECK(std::abs(f(100000) - 2.0 / (2.0 * pi * 100000.0 - cplx(1.0, -2.0))) < 1e-15);
    const auto& tail = std::get<DecayTail>(f.tail());
    for (index_t k = f.k_max() + 1; k < f.k_max() + 1000; ++k)
        CHECK(std::abs(f(k)) <= tail.C / std::pow(static_cast<double>(k), tail.alpha));
    CHECK_THROWS_AS(counterexample_symbol(SymbolOrder::First, cplx(2.0 * pi, 0.0), 1.0), Error);
}

TEST_CASE("Hankel operator matches the rectangular commutator") {
    const double a = 2.0;
    std::vector<HankelAtom> atoms{{cplx(0.7, 0.4), cplx(1.0, -0.5)}, {cplx(-3.0, -0.8), cplx(0.3, 0.2)}};
    const auto r = hankel_commutator_identity(atoms, a, 8, 4000.0);
    CHECK(r.tail_bound < 1e-4);
    CHECK(r.diff_half_i < 1e-4);
    CHECK(r.diff_minus_i > 0.1 * r.commutator.cwiseAbs().maxCoeff());
}
