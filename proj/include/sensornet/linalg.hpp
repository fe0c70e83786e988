#pragma once

#include <Eigen/Dense>

#include <optional>

namespace sensornet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// (M + Mᵀ)/2. Applied after every linear combination of information matrices.
[[nodiscard]] inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

[[nodiscard]] bool is_symmetric(const Matrix& m, double tol = 1e-10);

/// Symmetric and Cholesky-factorizable.
[[nodiscard]] bool is_spd(const Matrix& m, double sym_tol = 1e-10);

/// Symmetric with smallest eigenvalue >= -tol * max(1, |largest|).
[[nodiscard]] bool is_psd(const Matrix& m, double tol = 1e-10);

/// Inverse of an SPD matrix through Cholesky; nullopt when factorization fails.
[[nodiscard]] std::optional<Matrix> spd_inverse(const Matrix& m);

struct SpdSolve {
    Vector x;
    bool degraded = false;  ///< true when Cholesky failed and a pseudo-inverse was used
};

/// Solves A x = b for symmetric A. Cholesky first, complete orthogonal
/// decomposition (minimum-norm least squares) as fallback.
[[nodiscard]] SpdSolve spd_solve(const Matrix& a, const Vector& b);

/// Spectral radius of a general square matrix.
[[nodiscard]] double spectral_radius(const Matrix& m);

/// Numerical rank with relative tolerance rel_tol * sigma_max.
[[nodiscard]] Eigen::Index numerical_rank(const Matrix& m, double rel_tol = 1e-10);

}  // namespace sensornet
