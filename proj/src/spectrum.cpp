#include "pwschatten/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pws {

SingularSpectrum make_spectrum(std::vector<double> sigmas, double rank_cutoff) {
    for (double& s : sigmas) s = std::max(s, 0.0);
    std::sort(sigmas.begin(), sigmas.end(), std::greater<>());
    return {std::move(sigmas), rank_cutoff};
}

double schatten_p_sum(const SingularSpectrum& s, double p) {
    if (!(p > 0.0)) throw Error("Schatten exponent must be positive");
    const double floor = s.rank_cutoff * s.max();
    double sum = 0.0;
    for (double v : s.sigmas)
        if (v > 0.0 && v >= floor) sum += std::pow(v, p);
    return sum;
}

double schatten_quasinorm(const SingularSpectrum& s, double p) { return std::pow(schatten_p_sum(s, p), 1.0 / p); }

SingularSpectrum dense_singular_values(const Eigen::MatrixXcd& m, double rank_cutoff) {
    if (m.size() == 0) return {{}, rank_cutoff};
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    return make_spectrum(std::vector<double>(sv.data(), sv.data() + sv.size()), rank_cutoff);
}

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& gram) {
    const Eigen::MatrixXcd h = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw Error("Gram eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    const double trace = std::max(h.trace().real(), 0.0);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -1e-10 * trace) throw Error("Gram matrix is not positive semidefinite");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

SingularSpectrum finite_rank_singular_values(const Eigen::MatrixXcd& gram_left, const Eigen::VectorXcd& coeffs,
                                             const Eigen::MatrixXcd& gram_right, double rank_cutoff) {
    const auto r = coeffs.size();
    if (gram_left.rows() != r || gram_left.cols() != r || gram_right.rows() != r || gram_right.cols() != r)
        throw Error("finite-rank operator: Gram and coefficient sizes differ");
    if (r == 0) return {{}, rank_cutoff};
    const Eigen::MatrixXcd core = psd_sqrt(gram_left) * coeffs.asDiagonal() * psd_sqrt(gram_right);
    return dense_singular_values(core, rank_cutoff);
}

}  // namespace pws
