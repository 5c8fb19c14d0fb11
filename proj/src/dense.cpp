#include "zakharov/dense.hpp"

#include <mutex>
#include <string>
#include <vector>

#include <lapacke.h>

#include "zakharov/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace zakharov::dense {
namespace {

void pin_blas_threads() {
  static std::once_flag flag;
  std::call_once(flag, [] { openblas_set_num_threads(1); });
}

void check(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error(ErrorCode::eigensolver,
                std::string(routine) + " failed, info = " + std::to_string(info));
  }
}

}  // namespace

SymmetricEigen symmetric_eig(const Eigen::MatrixXd& a, bool want_vectors) {
  pin_blas_threads();
  const lapack_int n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out{Eigen::VectorXd(n), a};
  check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'U', n,
                       out.vectors.data(), n, out.values.data()),
        "dsyevd");
  if (!want_vectors) out.vectors.resize(0, 0);
  return out;
}

GeneralEigen general_eig(const Eigen::MatrixXd& a, bool want_vectors) {
  pin_blas_threads();
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  Eigen::VectorXd wr(n), wi(n);
  Eigen::MatrixXd vr(want_vectors ? n : 1, want_vectors ? n : 1);
  double dummy = 0.0;
  check(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
                      work.data(), n, wr.data(), wi.data(), &dummy, 1, vr.data(),
                      want_vectors ? n : 1),
        "dgeev");

  GeneralEigen out;
  out.values.resize(n);
  for (lapack_int i = 0; i < n; ++i) out.values[i] = {wr[i], wi[i]};
  if (!want_vectors) return out;

  // Conjugate pairs share two columns: re in column j, im in column j+1.
  out.vectors.resize(n, n);
  for (lapack_int j = 0; j < n; ++j) {
    if (wi[j] == 0.0) {
      out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
    } else {
      const std::complex<double> i1(0.0, 1.0);
      out.vectors.col(j) = vr.col(j).cast<std::complex<double>>() +
                           i1 * vr.col(j + 1).cast<std::complex<double>>();
      out.vectors.col(j + 1) = out.vectors.col(j).conjugate();
      ++j;
    }
  }
  return out;
}

Svd svd(const Eigen::MatrixXd& a, bool want_vectors) {
  pin_blas_threads();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  Eigen::MatrixXd work = a;
  Svd out;
  out.singular_values.resize(std::min(m, n));
  if (want_vectors) {
    out.u.resize(m, m);
    out.vt.resize(n, n);
  } else {
    out.u.resize(1, 1);
    out.vt.resize(1, 1);
  }
  check(LAPACKE_dgesdd(LAPACK_COL_MAJOR, want_vectors ? 'A' : 'N', m, n,
                       work.data(), m, out.singular_values.data(), out.u.data(),
                       want_vectors ? m : 1, out.vt.data(), want_vectors ? n : 1),
        "dgesdd");
  if (!want_vectors) {
    out.u.resize(0, 0);
    out.vt.resize(0, 0);
  }
  return out;
}

LuSolve lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  pin_blas_threads();
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd lu = a;
  std::vector<lapack_int> ipiv(n);
  const double anorm = a.cwiseAbs().colwise().sum().maxCoeff();
  LuSolve out;
  const lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu.data(), n, ipiv.data());
  if (info > 0) return out;
  check(info, "dgetrf");
  check(LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', n, lu.data(), n, anorm, &out.rcond),
        "dgecon");
  out.x = b;
  check(LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu.data(), n, ipiv.data(),
                       out.x.data(), n),
        "dgetrs");
  return out;
}

double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return svd(a, false).singular_values[0];
}

}  // namespace zakharov::dense
