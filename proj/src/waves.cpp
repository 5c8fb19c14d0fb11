#include "zakharov/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zakharov/elliptic.hpp"
#include "zakharov/errors.hpp"

namespace zakharov {
namespace {

using elliptic::EllipticModulus;

void fill_params(WaveParameters& p, const EllipticModulus& m) {
  const double g = p.one_minus_c2();
  p.phi0 = 2.0 * std::sqrt(g) * p.alpha;
  p.phi1 = p.phi0 * m.kappa_prime();
  p.omega = -p.sigma - 0.25 * p.c * p.c;
  p.a1 = -(p.phi0 * p.phi0) * (p.phi1 * p.phi1);
}

// Analytic profile at one node.
struct ProfileSample {
  double phi, dphi, ddphi, psi;
};

ProfileSample profile_at(const WaveParameters& p, const EllipticModulus& m,
                         double x) {
  const auto [sn, cn, dn] = elliptic::jacobi_sn_cn_dn(p.alpha * x, m);
  const double k2 = p.kappa * p.kappa;
  const double phi = p.phi0 * dn;
  return {phi,
          -p.phi0 * p.alpha * k2 * sn * cn,
          -p.phi0 * p.alpha * p.alpha * k2 * dn * (cn * cn - sn * sn),
          -phi * phi / (2.0 * p.one_minus_c2())};
}

DnoidalWave allocate_wave(const WaveParameters& params, int n) {
  DnoidalWave w{params, PeriodicGrid(n, params.T), Eigen::VectorXd(n),
                Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  return w;
}

}  // namespace

WaveParameters resolve_parameters(double kappa, double c,
                                  std::optional<long> l,
                                  std::optional<double> sigma) {
  if (!std::isfinite(kappa) || kappa <= 0.0 || kappa >= 1.0) {
    throw Error(ErrorCode::domain,
                "modulus out of (0,1): kappa = " + std::to_string(kappa));
  }
  if (kappa < kKappaMin || kappa > kKappaMax) {
    throw Error(ErrorCode::domain,
                "modulus outside admissible window [1e-3, 1-1e-6]: kappa = " +
                    std::to_string(kappa));
  }
  if (!std::isfinite(c) || std::abs(c) >= 1.0) {
    throw Error(ErrorCode::degenerate_speed,
                "speed must satisfy 1 - c^2 > 0: c = " + std::to_string(c));
  }
  if (c == 0.0 && l.has_value()) {
    throw Error(ErrorCode::domain,
                "c = 0 leaves the period free: use sigma instead of l");
  }
  if (l.has_value() && sigma.has_value()) {
    throw Error(ErrorCode::domain, "supply exactly one of l and sigma");
  }
  if (!l.has_value() && !sigma.has_value()) {
    throw Error(ErrorCode::domain, "one of l and sigma is required");
  }

  const auto m = EllipticModulus::from_kappa(kappa);
  const double K = elliptic::complete_K(m);
  const double k2 = kappa * kappa;

  WaveParameters p;
  p.kappa = kappa;
  p.c = c;
  if (l.has_value()) {
    if (*l == 0) {
      throw Error(ErrorCode::domain,
                  "l = 0 does not fix the period: use sigma instead");
    }
    if ((*l > 0) != (c > 0.0)) {
      throw Error(ErrorCode::domain, "c and l must have the same sign");
    }
    p.l = l;
    p.T = 2.0 * std::numbers::pi * static_cast<double>(*l) / c;
    p.alpha = K / p.T;
    p.sigma = p.alpha * p.alpha * (2.0 - k2);
  } else {
    if (!std::isfinite(*sigma) || *sigma <= 0.0) {
      throw Error(ErrorCode::domain,
                  "sigma must be positive: sigma = " + std::to_string(*sigma));
    }
    p.sigma = *sigma;
    p.alpha = std::sqrt(p.sigma / (2.0 - k2));
    p.T = K / p.alpha;
  }
  fill_params(p, m);
  return p;
}

PeriodicGrid::PeriodicGrid(int n, double half_period)
    : n_(n), half_period_(half_period) {
  if (n < 16 || n % 2 != 0) {
    throw Error(ErrorCode::contract,
                "grid size must be even and >= 16: n = " + std::to_string(n));
  }
  if (!(half_period > 0.0) || !std::isfinite(half_period)) {
    throw Error(ErrorCode::contract, "grid half period must be positive");
  }
}

Eigen::VectorXd PeriodicGrid::nodes() const {
  Eigen::VectorXd x(n_);
  for (int j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

double PeriodicGrid::inner(const Eigen::VectorXd& f,
                           const Eigen::VectorXd& g) const {
  return spacing() * f.dot(g);
}

DnoidalWave sample_wave(const WaveParameters& params, int n) {
  DnoidalWave w = allocate_wave(params, n);
  const auto m = EllipticModulus::from_kappa(params.kappa);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const ProfileSample s = profile_at(params, m, w.grid.node(j));
    w.phi[j] = s.phi;
    w.dphi[j] = s.dphi;
    w.ddphi[j] = s.ddphi;
    w.psi[j] = s.psi;
  }
  return w;
}

DnoidalWave sample_wave_serial(const WaveParameters& params, int n) {
  DnoidalWave w = allocate_wave(params, n);
  const auto m = EllipticModulus::from_kappa(params.kappa);
  for (int j = 0; j < n; ++j) {
    const ProfileSample s = profile_at(params, m, w.grid.node(j));
    w.phi[j] = s.phi;
    w.dphi[j] = s.dphi;
    w.ddphi[j] = s.ddphi;
    w.psi[j] = s.psi;
  }
  return w;
}

double ode_residual(const DnoidalWave& wave) {
  const auto& p = wave.params;
  const double g2 = 2.0 * p.one_minus_c2();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < wave.phi.size(); ++j) {
    const double f = wave.phi[j];
    const double r = -wave.ddphi[j] + p.sigma * f - f * f * f / g2;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double ode_residual_scale(const WaveParameters& p) {
  return p.sigma * p.phi0 + p.phi0 * p.phi0 * p.phi0 / (2.0 * p.one_minus_c2());
}

double first_integral_residual(const DnoidalWave& wave) {
  const auto& p = wave.params;
  const double g4 = 4.0 * p.one_minus_c2();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < wave.phi.size(); ++j) {
    const double f2 = wave.phi[j] * wave.phi[j];
    const double rhs = (-f2 * f2 + p.sigma * g4 * f2 + p.a1) / g4;
    worst = std::max(worst, std::abs(wave.dphi[j] * wave.dphi[j] - rhs));
  }
  const double p2 = p.phi0 * p.phi0;
  return worst / (p2 * p2 / g4);
}

}  // namespace zakharov
