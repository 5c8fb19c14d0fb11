#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "zakharov/waves.hpp"

namespace zakharov {

enum class OperatorKind { Lminus, Lplus, Lame1, Lame2, H, J, JH };

std::string_view to_string(OperatorKind kind) noexcept;
std::optional<OperatorKind> parse_operator_kind(std::string_view name) noexcept;
bool is_symmetric_kind(OperatorKind kind) noexcept;

/// Dense discretization of one operator on a periodic grid.
///
/// `constrained` is set when the (q, h) blocks are expressed in the reduced
/// bases of BlockLayout rather than nodally.
struct LinearOperator {
  OperatorKind kind;
  Eigen::MatrixXd matrix;
  PeriodicGrid grid;
  bool constrained = false;
};

struct DerivativeMatrices {
  Eigen::MatrixXd d1;  // antisymmetric, exact on trig polynomials of degree < n/2
  Eigen::MatrixXd d2;  // symmetric, built from the symbol -(pi k / T)^2
};

/// Fourier collocation matrices for d/dx and d^2/dx^2 on [-T, T).
/// Rows are filled in parallel; the upper triangle is mirrored so the
/// (anti)symmetry is exact.
DerivativeMatrices fourier_derivative_matrices(const PeriodicGrid& grid);

/// Serial reference; bitwise identical to fourier_derivative_matrices.
DerivativeMatrices fourier_derivative_matrices_serial(const PeriodicGrid& grid);

/// Orthonormal real Fourier basis of the resolved modes 1 <= k < n/2
/// (columns cos_1, sin_1, cos_2, ...), optionally preceded by the constant.
Eigen::MatrixXd resolved_mode_basis(int n, bool include_constant);

/// Coordinates of the perturbation U = (p2, p1, q, h).
///
/// Unconstrained: four nodal blocks of length n. Constrained: p2, p1 nodal;
/// q in the resolved modes including the constant (n-1 columns); h in the
/// resolved modes without the constant (n-2 columns), i.e. mean-zero. The
/// Nyquist mode is dropped from q and h because the antisymmetric D1
/// annihilates it, which would plant spurious kernel vectors in J.
class BlockLayout {
 public:
  BlockLayout(int n, bool constrained);

  int n() const noexcept { return n_; }
  bool constrained() const noexcept { return constrained_; }
  int q_dim() const noexcept { return constrained_ ? n_ - 1 : n_; }
  int h_dim() const noexcept { return constrained_ ? n_ - 2 : n_; }
  int dim() const noexcept { return 2 * n_ + q_dim() + h_dim(); }
  int p2_offset() const noexcept { return 0; }
  int p1_offset() const noexcept { return n_; }
  int q_offset() const noexcept { return 2 * n_; }
  int h_offset() const noexcept { return 2 * n_ + q_dim(); }

  /// n x q_dim and n x h_dim bases (identity when unconstrained).
  const Eigen::MatrixXd& q_basis() const noexcept { return q_basis_; }
  const Eigen::MatrixXd& h_basis() const noexcept { return h_basis_; }

  /// Full nodal 4n-vector -> layout coordinates (orthogonal projection).
  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const;
  /// Layout coordinates -> full nodal 4n-vector.
  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;

 private:
  int n_;
  bool constrained_;
  Eigen::MatrixXd q_basis_;
  Eigen::MatrixXd h_basis_;
};

/// Stack four nodal blocks into a 4n-vector (p2, p1, q, h).
Eigen::VectorXd stack_blocks(const Eigen::VectorXd& p2, const Eigen::VectorXd& p1,
                             const Eigen::VectorXd& q, const Eigen::VectorXd& h);

/// L- = -d^2 + sigma + psi, L+ = -d^2 + sigma - 3 phi^2 / (2(1-c^2)).
LinearOperator assemble_scalar(OperatorKind kind, const DnoidalWave& wave);

enum class LameDomain { two_K, four_K };

/// Lame operators -d^2/dy^2 + 6 k^2 sn^2 (Lame1) and -d^2/dy^2 + 2 k^2 sn^2
/// (Lame2) with periodic conditions on an interval of length 2K or 4K.
LinearOperator assemble_lame(OperatorKind kind, double kappa, LameDomain domain,
                             int n);

///     [ L-  0   0    0  ]
/// H = [ 0   L-  phi  0  ]
///     [ 0   phi 1   -c  ]
///     [ 0   0  -c    1  ]
LinearOperator assemble_H(const DnoidalWave& wave, bool constrained = true);

///     [ 0  -1   0    0   ]
/// J = [ 1   0   0    0   ]
///     [ 0   0   0  -d/dx ]
///     [ 0   0 -d/dx  0   ]
LinearOperator assemble_J(const PeriodicGrid& grid, bool constrained = true);

/// Product J H; both factors must share grid and layout.
LinearOperator compose_JH(const LinearOperator& J, const LinearOperator& H);

/// Explicit kernel and generalized-kernel vectors, all as full nodal
/// 4n-vectors (p2, p1, q, h).
struct KernelVectors {
  Eigen::VectorXd psi1;        // (phi, 0, 0, 0)
  Eigen::VectorXd psi2;        // (0, phi', phi phi'/(c^2-1), c phi phi'/(c^2-1))
  Eigen::VectorXd eta1;        // H eta1 = (0,0,1,0), unconstrained
  Eigen::VectorXd eta2;        // H eta2 = (0,0,0,1), unconstrained
  Eigen::VectorXd eta_tilde1;  // mean-zero combination of eta1, eta2
  Eigen::VectorXd eta_tilde3;  // (0, 0, 1, 0); JH eta_tilde3 = -psi1
  /// Mean-zero solution of JH v = psi2 built from
  /// (L-^{-1} phi', c phi/(1-c^2), 0, phi^2/(2(1-c^2))) + a eta1 + b eta2.
  Eigen::VectorXd translation_partner;
  Eigen::VectorXd lplus_inv_phi;  // y = L+^{-1} phi with y orthogonal to phi'
  double inner_I = 0.0;           // <y, phi> by the trapezoid rule
};

/// Throws Error(kernel_degeneracy) when L+ restricted to {phi'}^perp (or L-
/// restricted to {phi}^perp) is numerically singular.
KernelVectors assemble_kernel_vectors(const DnoidalWave& wave,
                                      const LinearOperator& H);

/// Solve A x = rhs subject to <kernel, x> = 0 through the bordered system
/// [[A, k], [k^T, 0]]. Throws Error(kernel_degeneracy) if it is singular.
Eigen::VectorXd solve_on_complement(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& kernel,
                                    const Eigen::VectorXd& rhs);

}  // namespace zakharov
