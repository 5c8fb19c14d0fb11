#include "zakharov/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "zakharov/dense.hpp"
#include "zakharov/errors.hpp"

namespace zakharov {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inf_norm(const MatrixXd& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

MatrixXd orthonormal_columns(const MatrixXd& a) {
  Eigen::HouseholderQR<MatrixXd> qr(a);
  return qr.householderQ() * MatrixXd::Identity(a.rows(), a.cols());
}

struct Nullspace {
  MatrixXd basis;
  double sigma_max = 0.0;
  double margin = std::numeric_limits<double>::infinity();
};

// Right singular vectors with singular value <= thr. `thr` <= 0 means
// 1e-8 * sigma_max.
Nullspace nullspace(const MatrixXd& a, double thr) {
  const dense::Svd s = dense::svd(a, true);
  Nullspace out;
  out.sigma_max = s.singular_values[0];
  if (thr <= 0.0) thr = 1e-8 * out.sigma_max;
  const Eigen::Index cols = a.cols();
  // Columns beyond min(m, n) have singular value zero.
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) {
    const double v = s.singular_values[i];
    if (v > thr) {
      ++rank;
      out.margin = std::min(out.margin, v / thr);
    } else if (v > 0.0) {
      out.margin = std::min(out.margin, thr / v);
    }
  }
  out.basis = s.vt.bottomRows(cols - rank).transpose();
  return out;
}

VectorXd reduce_for(const LinearOperator& op, const VectorXd& full) {
  return BlockLayout(op.grid.size(), op.constrained).reduce(full);
}

}  // namespace

double zero_threshold(const LinearOperator& op, std::optional<double> user_tol) {
  if (user_tol) return *user_tol;
  const double scale = inf_norm(op.matrix);
  return (is_symmetric_kind(op.kind) ? 1e-11 : 1e-8) * scale;
}

double principal_angle(const MatrixXd& V, const MatrixXd& W) {
  if (V.cols() == 0 || W.cols() == 0) return 0.5 * std::numbers::pi;
  const MatrixXd qv = orthonormal_columns(V);
  const MatrixXd qw = orthonormal_columns(W);
  const MatrixXd residual = qw - qv * (qv.transpose() * qw);
  const double s = Eigen::JacobiSVD<MatrixXd>(residual).singularValues()[0];
  return std::asin(std::min(1.0, s));
}

double relative_residual(const MatrixXd& A, const VectorXd& x,
                         const VectorXd& expected) {
  const double scale = inf_norm(A) * x.cwiseAbs().maxCoeff();
  return (A * x - expected).cwiseAbs().maxCoeff() / scale;
}

SpectrumReport symmetric_spectrum(const LinearOperator& op, const DnoidalWave* wave,
                                  std::optional<double> user_tol) {
  if (!is_symmetric_kind(op.kind)) {
    throw Error(ErrorCode::contract, "symmetric_spectrum: operator " +
                                         std::string(to_string(op.kind)) +
                                         " is not symmetric");
  }
  SpectrumReport r;
  r.kind = op.kind;
  r.tol_zero = zero_threshold(op, user_tol);
  const dense::SymmetricEigen eig = dense::symmetric_eig(op.matrix, true);
  const Eigen::Index n = eig.values.size();
  r.eigenvalues.assign(eig.values.data(), eig.values.data() + n);

  std::vector<Eigen::Index> kernel;
  double smallest_nonzero = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = eig.values[i];
    if (v < -r.tol_zero) {
      ++r.morse_index;
    } else if (v > r.tol_zero) {
      ++r.positive_count;
    } else {
      kernel.push_back(i);
      continue;
    }
    smallest_nonzero = std::min(smallest_nonzero, std::abs(v));
  }
  r.kernel_dim = static_cast<int>(kernel.size());
  r.separation_margin = smallest_nonzero / r.tol_zero;
  r.kernel_basis.resize(op.matrix.rows(), r.kernel_dim);
  for (int k = 0; k < r.kernel_dim; ++k) r.kernel_basis.col(k) = eig.vectors.col(kernel[k]);

  r.kernel_angle = std::numeric_limits<double>::quiet_NaN();
  if (wave == nullptr) return r;

  std::vector<std::pair<std::string, VectorXd>> candidates;
  switch (op.kind) {
    case OperatorKind::Lminus:
      candidates.emplace_back("phi", wave->phi);
      break;
    case OperatorKind::Lplus:
      candidates.emplace_back("dphi", wave->dphi);
      break;
    case OperatorKind::H: {
      const KernelVectors kv = assemble_kernel_vectors(*wave, op);
      candidates.emplace_back("Psi1", reduce_for(op, kv.psi1));
      candidates.emplace_back("Psi2", reduce_for(op, kv.psi2));
      break;
    }
    default:
      return r;
  }
  MatrixXd span(op.matrix.rows(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const VectorXd unit = candidates[k].second.normalized();
    span.col(static_cast<Eigen::Index>(k)) = unit;
    const double cosine =
        r.kernel_dim == 0 ? 0.0 : (r.kernel_basis.transpose() * unit).norm();
    r.kernel_correlations.push_back({candidates[k].first, cosine});
  }
  r.kernel_angle = principal_angle(r.kernel_basis, span);
  return r;
}

JHSpectrum full_spectrum_JH(const LinearOperator& H, const LinearOperator& J,
                            bool want_vectors, std::optional<double> user_tol,
                            std::string_view context) {
  const LinearOperator jh = compose_JH(J, H);
  JHSpectrum s;
  s.tol_zero = zero_threshold(jh, user_tol);

  dense::GeneralEigen eig;
  try {
    eig = dense::general_eig(jh.matrix, want_vectors);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " at " + std::string(context));
  }

  const Eigen::Index n = eig.values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto& x = eig.values[a];
    const auto& y = eig.values[b];
    return x.imag() != y.imag() ? x.imag() < y.imag() : x.real() < y.real();
  });
  s.eigenvalues.reserve(n);
  if (want_vectors) s.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.eigenvalues.push_back(eig.values[order[k]]);
    if (want_vectors) s.eigenvectors.col(k) = eig.vectors.col(order[k]);
  }

  s.max_re = -std::numeric_limits<double>::infinity();
  for (const auto& l : s.eigenvalues) {
    s.spectral_radius = std::max(s.spectral_radius, std::abs(l));
    s.max_re = std::max(s.max_re, l.real());
  }
  s.tol_re = 1e-6 * s.spectral_radius;
  for (const auto& l : s.eigenvalues) {
    if (std::abs(l) <= s.tol_zero) ++s.zero_cluster;
    if (l.real() > s.tol_re) {
      if (std::abs(l.imag()) <= s.tol_zero) {
        ++s.k_r;
      } else if (l.imag() > s.tol_zero) {
        ++s.k_c;
      }
    }
  }

  double worst = 0.0;
  for (const auto& l : s.eigenvalues) {
    double to_neg = std::numeric_limits<double>::infinity();
    double to_conj = std::numeric_limits<double>::infinity();
    for (const auto& m : s.eigenvalues) {
      to_neg = std::min(to_neg, std::abs(m + l));
      to_conj = std::min(to_conj, std::abs(m - std::conj(l)));
    }
    worst = std::max({worst, to_neg, to_conj});
  }
  s.pairing_residual = s.spectral_radius > 0.0 ? worst / s.spectral_radius : worst;
  return s;
}

KreinReport krein_signatures(const LinearOperator& H, const JHSpectrum& spectrum) {
  if (spectrum.eigenvectors.cols() == 0) {
    throw Error(ErrorCode::contract, "krein_signatures: eigenvectors required");
  }
  const double h_norm = inf_norm(H.matrix);
  std::vector<Eigen::Index> picked;
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    const auto& l = spectrum.eigenvalues[k];
    if (std::abs(l.real()) <= spectrum.tol_re && l.imag() > spectrum.tol_zero) {
      picked.push_back(static_cast<Eigen::Index>(k));
    }
  }
  const Eigen::Index rows = spectrum.eigenvectors.rows();
  MatrixXd re(rows, static_cast<Eigen::Index>(picked.size()));
  MatrixXd im(rows, static_cast<Eigen::Index>(picked.size()));
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const Eigen::VectorXcd z = spectrum.eigenvectors.col(picked[k]).normalized();
    re.col(static_cast<Eigen::Index>(k)) = z.real();
    im.col(static_cast<Eigen::Index>(k)) = z.imag();
  }
  const MatrixXd h_re = H.matrix * re;
  const MatrixXd h_im = H.matrix * im;

  KreinReport out;
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    KreinEntry e;
    e.lambda = spectrum.eigenvalues[picked[k]];
    e.form = re.col(c).dot(h_re.col(c)) + im.col(c).dot(h_im.col(c));
    if (std::abs(e.form) < 1e-10 * h_norm) {
      ++out.indeterminate;
    } else {
      e.sign = e.form > 0.0 ? 1 : -1;
      if (e.sign < 0) ++out.k_i_minus;
    }
    out.entries.push_back(e);
  }
  return out;
}

GKerAudit generalized_kernel_audit(const LinearOperator& H, const LinearOperator& J,
                                   const KernelVectors& kv) {
  const LinearOperator jh = compose_JH(J, H);
  const BlockLayout layout(H.grid.size(), H.constrained);
  const MatrixXd& a = jh.matrix;
  const Eigen::Index dim = a.rows();

  GKerAudit out;
  const Nullspace ker_h = nullspace(H.matrix, zero_threshold(H));
  const Nullspace v1 = nullspace(a, 0.0);
  out.rank_threshold = 1e-8 * v1.sigma_max;
  const MatrixXd p1 = MatrixXd::Identity(dim, dim) - v1.basis * v1.basis.transpose();
  const Nullspace v2 = nullspace(p1 * a, out.rank_threshold);
  const MatrixXd p2 = MatrixXd::Identity(dim, dim) - v2.basis * v2.basis.transpose();
  const Nullspace v3 = nullspace(p2 * a, out.rank_threshold);

  out.dim_ker_H = static_cast<int>(ker_h.basis.cols());
  out.dim_ker_JH = static_cast<int>(v1.basis.cols());
  out.dim_ker_JH2 = static_cast<int>(v2.basis.cols());
  out.dim_ker_JH3 = static_cast<int>(v3.basis.cols());
  out.rank_margin = std::min({ker_h.margin, v1.margin, v2.margin, v3.margin});

  const VectorXd psi1 = layout.reduce(kv.psi1);
  const VectorXd psi2 = layout.reduce(kv.psi2);
  const VectorXd et1 = layout.reduce(kv.eta_tilde1);
  const VectorXd et3 = layout.reduce(kv.eta_tilde3);
  const VectorXd partner = layout.reduce(kv.translation_partner);

  MatrixXd w(dim, 5);
  w << psi1, psi2, et1, et3, partner;
  out.angle_ker_H = principal_angle(ker_h.basis, w.leftCols(2));
  out.angle_ker_JH = principal_angle(v1.basis, w.leftCols(3));
  out.angle_ker_JH2 = principal_angle(v2.basis, w);

  out.jh_eta_tilde1 = relative_residual(a, et1, VectorXd::Zero(dim));
  out.jh_eta_tilde3_plus_psi1 = relative_residual(a, et3, -psi1);
  out.jh_partner_minus_psi2 = relative_residual(a, partner, psi2);

  if (out.rank_margin < 10.0) {
    throw Error(ErrorCode::inconclusive_rank,
                "generalized kernel ranks (" + std::to_string(out.dim_ker_H) + ", " +
                    std::to_string(out.dim_ker_JH) + ", " +
                    std::to_string(out.dim_ker_JH2) + ", " +
                    std::to_string(out.dim_ker_JH3) +
                    ") are ambiguous: margin " + std::to_string(out.rank_margin));
  }
  return out;
}

std::vector<LameRow> lame_check(double kappa, int n) {
  const double k2 = kappa * kappa;
  const double root = std::sqrt(1.0 - k2 + k2 * k2);
  const auto lowest = [&](OperatorKind kind) {
    const LinearOperator op = assemble_lame(kind, kappa, LameDomain::four_K, n);
    return dense::symmetric_eig(op.matrix, false).values;
  };
  const VectorXd nu = lowest(OperatorKind::Lame1);
  const VectorXd eps = lowest(OperatorKind::Lame2);
  return {{"nu0", nu[0], 2.0 + 2.0 * k2 - 2.0 * root},
          {"nu1", nu[1], 1.0 + k2},
          {"nu2", nu[2], 1.0 + 4.0 * k2},
          {"nu3", nu[3], 4.0 + k2},
          {"eps0", eps[0], k2},
          {"eps1", eps[1], 1.0},
          {"eps2", eps[2], 1.0 + k2}};
}

IndexCheck verify_index_formula(const IndexCounts& counts) noexcept {
  const int residual = counts.k_ham() - (counts.n_H - counts.n0_D);
  return {residual == 0, residual};
}

}  // namespace zakharov
