#pragma once

#include <complex>

#include <Eigen/Dense>

// Thin wrappers over LAPACK drivers. Every call runs single-threaded; the
// BLAS thread pool is pinned to one thread on first use.
namespace zakharov::dense {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

/// dsyevd. Throws Error(eigensolver) on failure; `vectors` is left empty
/// when not requested.
SymmetricEigen symmetric_eig(const Eigen::MatrixXd& a, bool want_vectors = true);

struct GeneralEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // unit-norm right eigenvectors; empty if not requested
};

/// dgeev. Throws Error(eigensolver) on failure.
GeneralEigen general_eig(const Eigen::MatrixXd& a, bool want_vectors);

struct Svd {
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd u;
  Eigen::MatrixXd vt;
};

/// dgesdd with full U and V^T when vectors are requested.
Svd svd(const Eigen::MatrixXd& a, bool want_vectors);

struct LuSolve {
  Eigen::VectorXd x;
  double rcond = 0.0;  // 1-norm reciprocal condition estimate; 0 if a pivot vanished
};

/// dgetrf + dgecon + dgetrs. x is empty when rcond is 0.
LuSolve lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& a);

}  // namespace zakharov::dense
