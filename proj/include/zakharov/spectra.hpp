#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "zakharov/operators.hpp"

namespace zakharov {

/// Cosine between an analytic candidate and the numerical kernel span.
struct KernelCorrelation {
  std::string candidate;
  double value = 0.0;
};

/// Spectrum of a symmetric operator.
///
/// morse_index counts eigenvalues below -tol_zero, kernel_dim those with
/// |lambda| <= tol_zero; the three counts add up to the dimension.
struct SpectrumReport {
  OperatorKind kind = OperatorKind::H;
  std::vector<double> eigenvalues;  // ascending
  int morse_index = 0;
  int kernel_dim = 0;
  int positive_count = 0;
  double tol_zero = 0.0;
  /// Smallest |lambda| outside the kernel divided by tol_zero.
  double separation_margin = 0.0;
  std::vector<KernelCorrelation> kernel_correlations;
  /// Largest principal angle (rad) between the numerical kernel and the
  /// span of the analytic candidates; NaN when no candidates apply.
  double kernel_angle = 0.0;
  Eigen::MatrixXd kernel_basis;  // orthonormal columns, operator coordinates
};

struct IndexCounts {
  int k_r = 0;
  int k_c = 0;
  int k_i_minus = 0;
  int n_H = 0;
  int n0_D = 0;

  int k_ham() const noexcept { return k_r + 2 * k_c + 2 * k_i_minus; }
};

/// Default zero threshold: 1e-11 ||A||_inf for symmetric kinds, 1e-8 ||A||_inf
/// for J and JH. The nonsymmetric default is looser because a Jordan block
/// of size 2 splits into a pair of size ~ sqrt(eps ||A||).
double zero_threshold(const LinearOperator& op, std::optional<double> user_tol = {});

/// Dense symmetric eigensolve. When `wave` is given the kernel is correlated
/// with phi (L-), phi' (L+) or {Psi1, Psi2} (H).
/// Throws Error(contract) for J and JH.
SpectrumReport symmetric_spectrum(const LinearOperator& op,
                                  const DnoidalWave* wave = nullptr,
                                  std::optional<double> user_tol = {});

struct JHSpectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (imag, real)
  Eigen::MatrixXcd eigenvectors;                  // same order
  double tol_zero = 0.0;
  double tol_re = 0.0;           // 1e-6 * spectral radius
  double spectral_radius = 0.0;  // max |lambda|
  double max_re = 0.0;
  int zero_cluster = 0;  // |lambda| <= tol_zero
  int k_r = 0;           // Re > tol_re, |Im| <= tol_zero
  int k_c = 0;           // Re > tol_re, Im > tol_zero (one per quadruplet)
  /// max over lambda of the distance to the nearest -lambda and conj(lambda),
  /// relative to the spectral radius.
  double pairing_residual = 0.0;
};

/// Eigenvalues (and eigenvectors when requested) of JH. `context` is appended
/// to eigensolver errors to identify the parameter point.
JHSpectrum full_spectrum_JH(const LinearOperator& H, const LinearOperator& J,
                            bool want_vectors = true,
                            std::optional<double> user_tol = {},
                            std::string_view context = {});

struct KreinEntry {
  std::complex<double> lambda;
  double form = 0.0;  // <H a, a> + <H b, b> for z = a + i b, |z| = 1
  int sign = 0;       // +1, -1, or 0 when indeterminate
};

struct KreinReport {
  std::vector<KreinEntry> entries;  // one per pair, Im lambda > 0
  int k_i_minus = 0;
  int indeterminate = 0;
};

/// Krein signatures of the purely imaginary pairs of JH, evaluated on the
/// real invariant plane span{Re z, Im z}.
KreinReport krein_signatures(const LinearOperator& H, const JHSpectrum& spectrum);

struct GKerAudit {
  int dim_ker_H = 0;
  int dim_ker_JH = 0;
  int dim_ker_JH2 = 0;
  int dim_ker_JH3 = 0;
  double rank_threshold = 0.0;
  /// Smallest ratio max(s/threshold, threshold/s) over all singular values
  /// used; below 10 the rank is ambiguous.
  double rank_margin = 0.0;
  double angle_ker_H = 0.0;    // vs span{Psi1, Psi2}
  double angle_ker_JH = 0.0;   // vs span{Psi1, Psi2, eta~1}
  double angle_ker_JH2 = 0.0;  // vs span{Psi1, Psi2, eta~1, eta~3, partner}
  double jh_eta_tilde1 = 0.0;          // |JH eta~1| relative
  double jh_eta_tilde3_plus_psi1 = 0.0;
  double jh_partner_minus_psi2 = 0.0;
};

/// Dimensions of ker H and ker (JH)^k, k = 1..3, by deflated SVD ranks.
/// Throws Error(inconclusive_rank) when a singular value lies within a
/// factor 10 of the threshold.
GKerAudit generalized_kernel_audit(const LinearOperator& H,
                                   const LinearOperator& J,
                                   const KernelVectors& kv);

struct IndexCheck {
  bool balanced = false;
  int residual = 0;  // k_r + 2 k_c + 2 k_i^- - (n_H - n0_D)
};

IndexCheck verify_index_formula(const IndexCounts& counts) noexcept;

struct LameRow {
  std::string name;  // nu0..nu3, eps0..eps2
  double computed = 0.0;
  double analytic = 0.0;
};

/// Lowest four eigenvalues of Lame1 and lowest three of Lame2 on [0, 4K]
/// against the classical closed forms.
std::vector<LameRow> lame_check(double kappa, int n);

/// Largest principal angle (rad) between span(W) and span(V); both may have
/// arbitrary (full column rank) columns.
double principal_angle(const Eigen::MatrixXd& V, const Eigen::MatrixXd& W);

/// |A x|_inf / (|A|_inf |x|_inf).
double relative_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& expected);

}  // namespace zakharov
