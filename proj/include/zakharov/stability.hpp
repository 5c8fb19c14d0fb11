#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "zakharov/operators.hpp"
#include "zakharov/spectra.hpp"
#include "zakharov/waves.hpp"

namespace zakharov {

/// Closed form of I = <L+^{-1} phi, phi>:
///   I = -(2(1-c^2)/alpha) [E^2 - (1-k^2) K^2] / [(2-k^2) E - 2(1-k^2) K].
/// Both brackets are O(k^4); for k < 0.5 they are summed from the series of K
/// and E so the leading terms cancel exactly.
/// Throws Error(degenerate_modulus) below the modulus window,
/// Error(cancellation) when the denominator is below 1e-14 in magnitude and
/// Error(analytic_claim) if the value is not negative.
double inner_product_closed_form(const WaveParameters& params);

struct SecondFactor {
  double value = 0.0;          // 2T + c^2 I / (1-c^2)
  double value_ek_form = 0.0;  // (2K/alpha) (1 - c^2 / bracket_ratio)
  double bracket_ratio = 0.0;  // [(2-k^2) E K - 2(1-k^2) K^2] / [E^2 - (1-k^2) K^2]
};

/// Throws Error(analytic_claim) unless value > 0, the two forms agree to
/// 1e-10 relative and bracket_ratio > 1 > c^2.
SecondFactor second_factor(const WaveParameters& params);

struct DMatrixReport {
  double inner_I = 0.0;
  double inner_I_numeric = 0.0;  // NaN until filled by the numeric route
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
  double det_closed = 0.0;
  double det_numeric = 0.0;  // NaN until filled
  int n_D = 0;
  int n0_D = 0;
  Eigen::Matrix2d numeric = Eigen::Matrix2d::Constant(0.0);
};

/// Closed-form D in the basis {eta~1, eta~3}:
///   D11 = 2T A (2T + I/(1-c^2)), D12 = -2T A, D22 = 2T,
///   A = 2T + c^2 I/(1-c^2),  det D = 4 T^2 I A.
/// `inner_I` replaces the closed-form I when given.
DMatrixReport d_matrix(const WaveParameters& params,
                       std::optional<double> inner_I = {});

/// h <H eta~i, eta~j> for i, j in {1, 3}, evaluated in layout coordinates.
Eigen::Matrix2d d_matrix_numeric(const LinearOperator& H, const KernelVectors& kv);

/// Gram matrix of H over {eta~1, eta~3, translation partner}.
Eigen::Matrix3d d_matrix_extended(const LinearOperator& H, const KernelVectors& kv);

/// Number of eigenvalues <= 0 and < 0 of a small symmetric matrix.
int count_nonpositive(const Eigen::MatrixXd& d);
int count_negative(const Eigen::MatrixXd& d);

enum class RouteMode { closed_form, numeric, both };
enum class Verdict { stable, unstable, inconclusive };

std::string_view to_string(RouteMode mode) noexcept;
std::optional<RouteMode> parse_route_mode(std::string_view name) noexcept;
std::string_view to_string(Verdict verdict) noexcept;

struct StabilityOptions {
  int n = 256;
  RouteMode mode = RouteMode::both;
  std::optional<double> tol_zero;  // JH zero threshold override
  double corrupt_I = 1.0;          // multiplies the closed-form I (testing hook)
};

struct StabilityReport {
  WaveParameters params;
  DMatrixReport d;
  IndexCounts counts;
  bool spectral_counts = false;  // k_r, k_c, k_i_minus measured from sigma(JH)
  double max_re_lambda = 0.0;    // NaN in closed-form mode
  double spectral_radius = 0.0;
  double tol_re = 0.0;
  int zero_cluster = 0;
  int indeterminate_krein = 0;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, double> residuals;
  std::vector<std::string> diagnostics;
};

/// Full pipeline at one parameter point. Never throws for numerical failures:
/// any sub-stage error yields verdict inconclusive with the cause recorded in
/// diagnostics.
StabilityReport stability_verdict(const WaveParameters& params,
                                  const StabilityOptions& options = {});

}  // namespace zakharov
