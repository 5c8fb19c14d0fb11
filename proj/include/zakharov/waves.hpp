#pragma once

#include <optional>

#include <Eigen/Dense>

namespace zakharov {

/// Admissible modulus window for wave construction. Below it the wave is
/// numerically constant and the closed forms are 0/0; above it the period
/// diverges.
inline constexpr double kKappaMin = 1e-3;
inline constexpr double kKappaMax = 1.0 - 1e-6;

/// Parameters of the dnoidal wave phi(x) = phi0 dn(alpha x, kappa) with
/// psi = -phi^2 / (2(1-c^2)) and a0 = b0 = 0.
///
/// Relations that hold on every value returned by resolve_parameters:
///   alpha^2 = sigma / (2 - kappa^2),  phi0^2 = 4 (1-c^2) alpha^2,
///   phi1 = phi0 kappa',  T = K(kappa) / alpha,  omega = -sigma - c^2/4,
///   a1 = -phi0^2 phi1^2,  and c T = 2 pi l when the winding l is present.
struct WaveParameters {
  double kappa = 0.0;
  double c = 0.0;
  std::optional<long> l;  // winding number; empty in free-sigma mode
  double sigma = 0.0;
  double alpha = 0.0;
  double phi0 = 0.0;
  double phi1 = 0.0;
  double T = 0.0;  // half period
  double omega = 0.0;
  double a1 = 0.0;

  double one_minus_c2() const { return 1.0 - c * c; }
};

/// Resolve a consistent parameter tuple.
///
/// Winding mode (l given, c != 0): T = 2 pi l / c, alpha = K/T,
/// sigma = alpha^2 (2 - kappa^2). c and l must share a sign; the reflection
/// c -> -c, x -> -x maps one sign to the other.
///
/// Free-sigma mode (sigma given): alpha = sqrt(sigma / (2 - kappa^2)),
/// T = K/alpha, no periodicity constraint on the carrier. Required when c = 0.
///
/// Throws Error(domain) for kappa outside the admissible window, bad mode
/// combinations or sigma <= 0, and Error(degenerate_speed) for |c| >= 1.
WaveParameters resolve_parameters(double kappa, double c,
                                  std::optional<long> l,
                                  std::optional<double> sigma);

/// Uniform periodic grid on [-T, T): x_j = (j - n/2) h, h = 2T/n.
///
/// Nodes are generated symmetric about zero so that x_{n-j} = -x_j holds
/// bit-for-bit.
class PeriodicGrid {
 public:
  /// Throws Error(contract) unless n is even, n >= 16 and T > 0.
  PeriodicGrid(int n, double half_period);

  int size() const noexcept { return n_; }
  double half_period() const noexcept { return half_period_; }
  double spacing() const noexcept { return 2.0 * half_period_ / n_; }
  double node(int j) const noexcept { return (j - n_ / 2) * spacing(); }
  Eigen::VectorXd nodes() const;

  /// Trapezoid rule on the periodic grid: h * sum_j f_j g_j.
  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;

 private:
  int n_;
  double half_period_;
};

struct DnoidalWave {
  WaveParameters params;
  PeriodicGrid grid;
  Eigen::VectorXd phi;
  Eigen::VectorXd dphi;
  Eigen::VectorXd ddphi;
  Eigen::VectorXd psi;
};

/// Sample phi, phi', phi'' (analytic derivatives of dn) and psi on an n-point
/// grid. The per-node loop runs under OpenMP.
DnoidalWave sample_wave(const WaveParameters& params, int n);

/// Serial reference for sample_wave; bitwise identical output.
DnoidalWave sample_wave_serial(const WaveParameters& params, int n);

/// max_j | -phi'' + sigma phi - phi^3 / (2(1-c^2)) |.
double ode_residual(const DnoidalWave& wave);

/// Natural size of the terms in the profile ODE: sigma phi0 + phi0^3/(2(1-c^2)).
double ode_residual_scale(const WaveParameters& params);

/// max_j | phi'^2 - [-phi^4 + 4 sigma (1-c^2) phi^2 + a1] / (4(1-c^2)) |,
/// divided by phi0^4 / (4(1-c^2)).
double first_integral_residual(const DnoidalWave& wave);

}  // namespace zakharov
