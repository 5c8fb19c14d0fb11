#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zakharov/errors.hpp"
#include "zakharov/waves.hpp"

using namespace zakharov;

namespace {

// K by the midpoint rule on [0, pi]; the integrand is smooth and periodic,
// so the rule converges geometrically.
double quadrature_K(double k) {
  const int m = 400;
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double t = (i + 0.5) * std::numbers::pi / m;
    const double s = std::sin(t);
    sum += 1.0 / std::sqrt(1.0 - k * k * s * s);
  }
  return 0.5 * sum * std::numbers::pi / m;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::contract;
}

}  // namespace

TEST_CASE("free-sigma mode at kappa = 0.5, c = 0, sigma = 1") {
  const WaveParameters p = resolve_parameters(0.5, 0.0, std::nullopt, 1.0);
  CHECK(p.alpha == doctest::Approx(std::sqrt(1.0 / 1.75)).epsilon(1e-14));
  CHECK(std::abs(p.T - quadrature_K(0.5) * std::sqrt(1.75)) < 1e-12);
  CHECK(p.phi0 * p.phi0 == doctest::Approx(4.0 / 1.75).epsilon(1e-14));
  CHECK(!p.l.has_value());
}

TEST_CASE("winding mode at kappa = 0.5, c = 0.5, l = 1") {
  const WaveParameters p = resolve_parameters(0.5, 0.5, 1L, std::nullopt);
  CHECK(p.T == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(std::abs(p.alpha - quadrature_K(0.5) / (4.0 * std::numbers::pi)) < 1e-13);
  CHECK(p.sigma == doctest::Approx(p.alpha * p.alpha * 1.75).epsilon(1e-15));
  CHECK(std::abs(p.c * p.T - 2.0 * std::numbers::pi) < 1e-10);
}

TEST_CASE("parameter invariants across modes") {
  for (double k : {0.1, 0.5, 0.9, 0.999}) {
    for (double c : {0.0, 0.3, -0.6}) {
      const WaveParameters p = resolve_parameters(k, c, std::nullopt, 0.7);
      const double g = 1.0 - c * c;
      CHECK(std::abs(p.alpha * p.alpha - p.sigma / (2.0 - k * k)) <
            1e-12 * p.alpha * p.alpha);
      CHECK(std::abs(p.phi0 * p.phi0 - 4.0 * g * p.alpha * p.alpha) <
            1e-12 * p.phi0 * p.phi0);
      const double k2 = (p.phi0 * p.phi0 - p.phi1 * p.phi1) / (p.phi0 * p.phi0);
      CHECK(std::abs(k2 - k * k) < 1e-12 * k * k);
      CHECK(p.a1 == -(p.phi0 * p.phi0) * (p.phi1 * p.phi1));
      CHECK(p.omega == -p.sigma - 0.25 * c * c);
      CHECK(std::abs(p.T - quadrature_K(k) / p.alpha) < 1e-9 * p.T);
      // phi0^2 and phi1^2 are the roots of r^2 - 4 sigma (1-c^2) r - a1 = 0.
      for (double r : {p.phi0 * p.phi0, p.phi1 * p.phi1}) {
        CHECK(std::abs(r * r - 4.0 * p.sigma * g * r - p.a1) < 1e-12 * p.phi0 * p.phi0 * p.phi0 * p.phi0);
      }
    }
  }
  for (long l : {1L, 2L, 7L}) {
    for (double c : {0.2, 0.8}) {
      const WaveParameters p = resolve_parameters(0.4, c, l, std::nullopt);
      const double back = p.c * p.T / (2.0 * std::numbers::pi);
      CHECK(std::lround(back) == l);
      CHECK(std::abs(back - l) < 1e-10);
    }
  }
  const WaveParameters neg = resolve_parameters(0.4, -0.5, -1L, std::nullopt);
  CHECK(neg.T > 0.0);
}

TEST_CASE("resolve_parameters errors") {
  CHECK(code_of([] { resolve_parameters(0.5, 1.0, std::nullopt, 1.0); }) ==
        ErrorCode::degenerate_speed);
  CHECK(code_of([] { resolve_parameters(0.5, -1.2, std::nullopt, 1.0); }) ==
        ErrorCode::degenerate_speed);
  CHECK(code_of([] { resolve_parameters(0.5, 0.0, std::nullopt, -1.0); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(0.5, 0.0, std::nullopt, 0.0); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(0.5, 0.5, 0L, std::nullopt); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(0.5, 0.0, 1L, std::nullopt); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(0.5, 0.5, 1L, 1.0); }) == ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(0.5, 0.5, std::nullopt, std::nullopt); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(0.5, 0.5, -1L, std::nullopt); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(1.5, 0.0, std::nullopt, 1.0); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(5e-4, 0.0, std::nullopt, 1.0); }) ==
        ErrorCode::domain);
  CHECK(code_of([] { resolve_parameters(1.0 - 1e-7, 0.0, std::nullopt, 1.0); }) ==
        ErrorCode::domain);
}

TEST_CASE("periodic grid") {
  const PeriodicGrid g(32, 3.0);
  CHECK(g.node(0) == -3.0);
  CHECK(std::abs(g.node(31) - (3.0 - 6.0 / 32)) < 1e-15);
  CHECK(g.node(16) == 0.0);
  for (int j = 1; j < 32; ++j) CHECK(g.node(32 - j) == -g.node(j));
  CHECK(code_of([] { PeriodicGrid(15, 1.0); }) == ErrorCode::contract);
  CHECK(code_of([] { PeriodicGrid(14, 1.0); }) == ErrorCode::contract);
  CHECK(code_of([] { PeriodicGrid(16, 0.0); }) == ErrorCode::contract);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(32);
  CHECK(g.inner(one, one) == doctest::Approx(6.0));
}

TEST_CASE("sampled profile") {
  const WaveParameters p = resolve_parameters(0.5, 0.3, std::nullopt, 1.0);
  const int n = 128;
  const DnoidalWave w = sample_wave(p, n);
  CHECK(w.phi[n / 2] == p.phi0);
  CHECK(w.dphi[n / 2] == 0.0);
  CHECK(std::abs(w.phi[0] - p.phi1) < 1e-14 * p.phi0);
  CHECK(w.phi.maxCoeff() == p.phi0);
  CHECK(std::abs(w.phi.minCoeff() - p.phi1) < 1e-14 * p.phi0);
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(w.psi[j] + w.phi[j] * w.phi[j] / (2.0 * (1.0 - 0.09))) < 1e-15);
    CHECK(w.phi[j] == w.phi[(n - j) % n]);
    if (j != 0) CHECK(w.dphi[j] == -w.dphi[n - j]);
  }
  for (int j = n / 2; j < n - 1; ++j) CHECK(w.phi[j + 1] < w.phi[j]);
}

TEST_CASE("profile ODE and first integral") {
  for (double k : {1e-3, 0.5, 0.9}) {
    const WaveParameters p = resolve_parameters(k, 0.0, std::nullopt, 1.0);
    const DnoidalWave w = sample_wave(p, 128);
    CHECK(ode_residual(w) < 1e-10 * ode_residual_scale(p));
    CHECK(first_integral_residual(w) < 1e-10);
  }
  const WaveParameters p = resolve_parameters(0.7, 0.6, 2L, std::nullopt);
  const DnoidalWave w = sample_wave(p, 256);
  CHECK(ode_residual(w) < 1e-10 * ode_residual_scale(p));
  CHECK(first_integral_residual(w) < 1e-10);
}

TEST_CASE("parallel sampling matches the serial reference bitwise") {
  const WaveParameters p = resolve_parameters(0.8, 0.4, std::nullopt, 2.0);
  const DnoidalWave a = sample_wave(p, 1024);
  const DnoidalWave b = sample_wave_serial(p, 1024);
  CHECK(a.phi == b.phi);
  CHECK(a.dphi == b.dphi);
  CHECK(a.ddphi == b.ddphi);
  CHECK(a.psi == b.psi);
}
