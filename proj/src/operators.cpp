#include "zakharov/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "zakharov/dense.hpp"
#include "zakharov/elliptic.hpp"
#include "zakharov/errors.hpp"

namespace zakharov {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// First rows of the circulant D1, D2 on the 2*pi-periodic grid, indexed by
// (i - j) mod n. Filled for m <= n/2 and reflected, so D1 is exactly
// antisymmetric and D2 exactly symmetric.
struct CirculantSymbols {
  std::vector<double> d1;
  std::vector<double> d2;
};

CirculantSymbols circulant_symbols(int n, double half_period) {
  CirculantSymbols s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const double scale = std::numbers::pi / half_period;
  const double nn = static_cast<double>(n);
  s.d2[0] = -(nn * nn / 12.0 + 1.0 / 6.0) * scale * scale;
  for (int m = 1; m <= n / 2; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double angle = m * std::numbers::pi / nn;
    const double d1 = (m == n / 2) ? 0.0 : 0.5 * sign / std::tan(angle) * scale;
    const double sine = std::sin(angle);
    const double d2 = -0.5 * sign / (sine * sine) * scale * scale;
    s.d1[m] = d1;
    s.d2[m] = d2;
    if (m != n - m) {
      s.d1[n - m] = -d1;
      s.d2[n - m] = d2;
    }
  }
  return s;
}

void fill_row(const CirculantSymbols& s, int n, int i, DerivativeMatrices& out) {
  for (int j = 0; j < n; ++j) {
    const int m = ((i - j) % n + n) % n;
    out.d1(i, j) = s.d1[m];
    out.d2(i, j) = s.d2[m];
  }
}

MatrixXd schrodinger(const MatrixXd& d2, const VectorXd& potential) {
  MatrixXd a = -d2;
  a.diagonal() += potential;
  return a;
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b,
                       const char* what) {
  if (a.size() != b.size() || a.half_period() != b.half_period()) {
    throw Error(ErrorCode::contract, std::string(what) + ": grid mismatch");
  }
}

}  // namespace

std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::Lminus: return "Lminus";
    case OperatorKind::Lplus: return "Lplus";
    case OperatorKind::Lame1: return "Lame1";
    case OperatorKind::Lame2: return "Lame2";
    case OperatorKind::H: return "H";
    case OperatorKind::J: return "J";
    case OperatorKind::JH: return "JH";
  }
  return "unknown";
}

std::optional<OperatorKind> parse_operator_kind(std::string_view name) noexcept {
  for (auto k : {OperatorKind::Lminus, OperatorKind::Lplus, OperatorKind::Lame1,
                 OperatorKind::Lame2, OperatorKind::H, OperatorKind::J,
                 OperatorKind::JH}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool is_symmetric_kind(OperatorKind kind) noexcept {
  return kind != OperatorKind::J && kind != OperatorKind::JH;
}

DerivativeMatrices fourier_derivative_matrices(const PeriodicGrid& grid) {
  const int n = grid.size();
  const CirculantSymbols s = circulant_symbols(n, grid.half_period());
  DerivativeMatrices out{MatrixXd(n, n), MatrixXd(n, n)};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) fill_row(s, n, i, out);
  return out;
}

DerivativeMatrices fourier_derivative_matrices_serial(const PeriodicGrid& grid) {
  const int n = grid.size();
  const CirculantSymbols s = circulant_symbols(n, grid.half_period());
  DerivativeMatrices out{MatrixXd(n, n), MatrixXd(n, n)};
  for (int i = 0; i < n; ++i) fill_row(s, n, i, out);
  return out;
}

MatrixXd resolved_mode_basis(int n, bool include_constant) {
  const int modes = n / 2 - 1;
  const int offset = include_constant ? 1 : 0;
  MatrixXd basis(n, 2 * modes + offset);
  if (include_constant) basis.col(0).setConstant(1.0 / std::sqrt(double(n)));
  const double norm = std::sqrt(2.0 / n);
  for (int k = 1; k <= modes; ++k) {
    for (int j = 0; j < n; ++j) {
      // Reduce k*j mod n first so the angle stays in [0, 2*pi).
      const double angle = 2.0 * std::numbers::pi * ((k * j) % n) / n;
      basis(j, offset + 2 * (k - 1)) = norm * std::cos(angle);
      basis(j, offset + 2 * (k - 1) + 1) = norm * std::sin(angle);
    }
  }
  return basis;
}

BlockLayout::BlockLayout(int n, bool constrained)
    : n_(n), constrained_(constrained) {
  if (constrained) {
    q_basis_ = resolved_mode_basis(n, true);
    h_basis_ = q_basis_.rightCols(n - 2);
  } else {
    q_basis_ = MatrixXd::Identity(n, n);
    h_basis_ = MatrixXd::Identity(n, n);
  }
}

VectorXd BlockLayout::reduce(const VectorXd& full) const {
  if (full.size() != 4 * n_) {
    throw Error(ErrorCode::contract, "BlockLayout::reduce: expected 4n entries");
  }
  VectorXd r(dim());
  r.segment(p2_offset(), n_) = full.segment(0, n_);
  r.segment(p1_offset(), n_) = full.segment(n_, n_);
  r.segment(q_offset(), q_dim()) = q_basis_.transpose() * full.segment(2 * n_, n_);
  r.segment(h_offset(), h_dim()) = h_basis_.transpose() * full.segment(3 * n_, n_);
  return r;
}

VectorXd BlockLayout::expand(const VectorXd& reduced) const {
  if (reduced.size() != dim()) {
    throw Error(ErrorCode::contract, "BlockLayout::expand: dimension mismatch");
  }
  VectorXd f(4 * n_);
  f.segment(0, n_) = reduced.segment(p2_offset(), n_);
  f.segment(n_, n_) = reduced.segment(p1_offset(), n_);
  f.segment(2 * n_, n_) = q_basis_ * reduced.segment(q_offset(), q_dim());
  f.segment(3 * n_, n_) = h_basis_ * reduced.segment(h_offset(), h_dim());
  return f;
}

VectorXd stack_blocks(const VectorXd& p2, const VectorXd& p1, const VectorXd& q,
                      const VectorXd& h) {
  const Eigen::Index n = p2.size();
  VectorXd v(4 * n);
  v << p2, p1, q, h;
  return v;
}

LinearOperator assemble_scalar(OperatorKind kind, const DnoidalWave& wave) {
  const auto& p = wave.params;
  const DerivativeMatrices d = fourier_derivative_matrices(wave.grid);
  const VectorXd phi2 = wave.phi.array().square();
  const double g2 = 2.0 * p.one_minus_c2();
  switch (kind) {
    case OperatorKind::Lminus:
      return {kind, schrodinger(d.d2, (p.sigma - phi2.array() / g2).matrix()),
              wave.grid, false};
    case OperatorKind::Lplus:
      return {kind,
              schrodinger(d.d2, (p.sigma - 3.0 * phi2.array() / g2).matrix()),
              wave.grid, false};
    default:
      throw Error(ErrorCode::contract,
                  "assemble_scalar: kind must be Lminus or Lplus");
  }
}

LinearOperator assemble_lame(OperatorKind kind, double kappa, LameDomain domain,
                             int n) {
  double weight = 0.0;
  if (kind == OperatorKind::Lame1) {
    weight = 6.0;
  } else if (kind == OperatorKind::Lame2) {
    weight = 2.0;
  } else {
    throw Error(ErrorCode::contract, "assemble_lame: kind must be Lame1 or Lame2");
  }
  const auto m = elliptic::EllipticModulus::from_kappa(kappa);
  const double K = elliptic::complete_K(m);
  const PeriodicGrid grid(n, domain == LameDomain::two_K ? K : 2.0 * K);
  VectorXd potential(n);
  for (int j = 0; j < n; ++j) {
    const double sn = elliptic::jacobi_sn_cn_dn(grid.node(j), m).sn;
    potential[j] = weight * kappa * kappa * sn * sn;
  }
  const DerivativeMatrices d = fourier_derivative_matrices(grid);
  return {kind, schrodinger(d.d2, potential), grid, false};
}

LinearOperator assemble_H(const DnoidalWave& wave, bool constrained) {
  const int n = wave.grid.size();
  const BlockLayout layout(n, constrained);
  const MatrixXd lminus = assemble_scalar(OperatorKind::Lminus, wave).matrix;
  const double c = wave.params.c;
  const int nq = layout.q_dim();
  const int nh = layout.h_dim();
  const int q0 = layout.q_offset();
  const int h0 = layout.h_offset();

  MatrixXd h = MatrixXd::Zero(layout.dim(), layout.dim());
  h.block(0, 0, n, n) = lminus;
  h.block(n, n, n, n) = lminus;
  const MatrixXd coupling = wave.phi.asDiagonal() * layout.q_basis();
  h.block(n, q0, n, nq) = coupling;
  h.block(q0, n, nq, n) = coupling.transpose();
  h.block(q0, q0, nq, nq).setIdentity();
  const MatrixXd qh = -c * (layout.q_basis().transpose() * layout.h_basis());
  h.block(q0, h0, nq, nh) = qh;
  h.block(h0, q0, nh, nq) = qh.transpose();
  h.block(h0, h0, nh, nh).setIdentity();
  return {OperatorKind::H, std::move(h), wave.grid, constrained};
}

LinearOperator assemble_J(const PeriodicGrid& grid, bool constrained) {
  const int n = grid.size();
  const BlockLayout layout(n, constrained);
  const MatrixXd d1 = fourier_derivative_matrices(grid).d1;
  const int nq = layout.q_dim();
  const int nh = layout.h_dim();
  const int q0 = layout.q_offset();
  const int h0 = layout.h_offset();

  MatrixXd j = MatrixXd::Zero(layout.dim(), layout.dim());
  j.block(0, n, n, n) = -MatrixXd::Identity(n, n);
  j.block(n, 0, n, n) = MatrixXd::Identity(n, n);
  const MatrixXd qh = -(layout.q_basis().transpose() * d1 * layout.h_basis());
  j.block(q0, h0, nq, nh) = qh;
  j.block(h0, q0, nh, nq) = -qh.transpose();
  return {OperatorKind::J, std::move(j), grid, constrained};
}

LinearOperator compose_JH(const LinearOperator& J, const LinearOperator& H) {
  if (J.kind != OperatorKind::J || H.kind != OperatorKind::H) {
    throw Error(ErrorCode::contract, "compose_JH: expected J and H");
  }
  require_same_grid(J.grid, H.grid, "compose_JH");
  if (J.constrained != H.constrained) {
    throw Error(ErrorCode::contract, "compose_JH: layout mismatch");
  }
  return {OperatorKind::JH, J.matrix * H.matrix, H.grid, H.constrained};
}

VectorXd solve_on_complement(const MatrixXd& A, const VectorXd& kernel,
                             const VectorXd& rhs) {
  const Eigen::Index n = A.rows();
  const double scale = A.cwiseAbs().maxCoeff();
  const VectorXd k = kernel.normalized() * scale;
  MatrixXd bordered = MatrixXd::Zero(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = A;
  bordered.block(0, n, n, 1) = k;
  bordered.block(n, 0, 1, n) = k.transpose();
  VectorXd b = VectorXd::Zero(n + 1);
  b.head(n) = rhs;

  const dense::LuSolve lu = dense::lu_solve(bordered, b);
  const double rcond = lu.rcond;
  if (!(rcond > 1e-13)) {
    throw Error(ErrorCode::kernel_degeneracy,
                "operator is singular on the orthogonal complement of its "
                "expected kernel (rcond = " + std::to_string(rcond) + ")");
  }
  return lu.x.head(n);
}

KernelVectors assemble_kernel_vectors(const DnoidalWave& wave,
                                      const LinearOperator& H) {
  if (H.kind != OperatorKind::H) {
    throw Error(ErrorCode::contract, "assemble_kernel_vectors: expected H");
  }
  require_same_grid(H.grid, wave.grid, "assemble_kernel_vectors");

  const int n = wave.grid.size();
  const double c = wave.params.c;
  const double g = wave.params.one_minus_c2();
  const double two_T = n * wave.grid.spacing();
  const VectorXd zero = VectorXd::Zero(n);
  const VectorXd one = VectorXd::Ones(n);
  const VectorXd& phi = wave.phi;
  const VectorXd& dphi = wave.dphi;

  KernelVectors kv;
  const MatrixXd lplus = assemble_scalar(OperatorKind::Lplus, wave).matrix;
  kv.lplus_inv_phi = solve_on_complement(lplus, dphi, phi);
  kv.inner_I = wave.grid.inner(kv.lplus_inv_phi, phi);
  const VectorXd& y = kv.lplus_inv_phi;
  const VectorXd phi_y = phi.cwiseProduct(y);
  const VectorXd phi_dphi = phi.cwiseProduct(dphi);

  kv.psi1 = stack_blocks(phi, zero, zero, zero);
  kv.psi2 = stack_blocks(zero, dphi, phi_dphi / (c * c - 1.0),
                         c * phi_dphi / (c * c - 1.0));
  kv.eta1 = stack_blocks(zero, -y / g, one / g + phi_y / (g * g),
                         c * one / g + c * phi_y / (g * g));
  kv.eta2 = stack_blocks(zero, -c * y / g, c * one / g + c * phi_y / (g * g),
                         one / g + c * c * phi_y / (g * g));

  const double I = kv.inner_I;
  const double a = two_T + c * c * I / g;
  const double b = c * (two_T + I / g);
  kv.eta_tilde1 = -a * kv.eta1 + b * kv.eta2;
  kv.eta_tilde3 = stack_blocks(zero, zero, one, zero);

  const MatrixXd lminus = assemble_scalar(OperatorKind::Lminus, wave).matrix;
  const VectorXd lminus_inv_dphi = solve_on_complement(lminus, phi, dphi);
  const VectorXd partner = stack_blocks(lminus_inv_dphi, c * phi / g, zero,
                                        phi.array().square().matrix() / (2.0 * g));
  const double m1 = kv.eta1.tail(n).sum();
  const double m2 = kv.eta2.tail(n).sum();
  const double m4 = partner.tail(n).sum();
  const double denom = m1 * m1 + m2 * m2;
  kv.translation_partner = partner - (m4 * m1 / denom) * kv.eta1 -
                           (m4 * m2 / denom) * kv.eta2;
  return kv;
}

}  // namespace zakharov
