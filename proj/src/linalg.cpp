#include "sensornet/linalg.hpp"
#include "sensornet/random.hpp"

#include <algorithm>
#include <cmath>

namespace sensornet {

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_spd(const Matrix& m, double sym_tol) {
    if (m.size() == 0 || !is_symmetric(m, sym_tol)) return false;
    if (!m.allFinite()) return false;
    Eigen::LLT<Matrix> llt(symmetrized(m));
    return llt.info() == Eigen::Success;
}

bool is_psd(const Matrix& m, double tol) {
    if (m.size() == 0 || !is_symmetric(m, tol) || !m.allFinite()) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return ev.minCoeff() >= -tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
}

std::optional<Matrix> spd_inverse(const Matrix& m) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
    return symmetrized(inv);
}

SpdSolve spd_solve(const Matrix& a, const Vector& b) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) return {llt.solve(b), false};
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
    return {cod.solve(b), true};
}

double spectral_radius(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::Index numerical_rank(const Matrix& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = rel_tol * sv(0);
    return static_cast<Eigen::Index>((sv.array() > cutoff).count());
}

Vector standard_normal(Eigen::Index dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = normal(rng);
    return v;
}

Matrix covariance_factor(const Matrix& cov) {
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    // Singular PSD: symmetric square root from the eigen-decomposition.
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(cov));
    Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

Vector sample_gaussian(const Matrix& cov, Rng& rng) {
    if (cov.size() == 0) return Vector{};
    if (cov.isZero(0.0)) return Vector::Zero(cov.rows());
    return covariance_factor(cov) * standard_normal(cov.rows(), rng);
}

double uniform(double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

}  // namespace sensornet
