#include "zakharov/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zakharov/errors.hpp"

namespace zakharov::elliptic {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAgmSteps = 64;

}  // namespace

EllipticModulus EllipticModulus::from_kappa(double kappa) {
  if (!std::isfinite(kappa) || kappa < 0.0 || kappa > 1.0) {
    throw Error(ErrorCode::domain,
                "modulus out of (0,1): kappa = " + std::to_string(kappa));
  }
  return {kappa, std::sqrt((1.0 - kappa) * (1.0 + kappa))};
}

double agm(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw Error(ErrorCode::domain, "agm: arguments must be nonnegative");
  }
  for (int i = 0; i < kMaxAgmSteps && std::abs(a - b) > kEps * a; ++i) {
    const double next_a = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next_a;
  }
  return 0.5 * (a + b);
}

double complete_K(EllipticModulus m) {
  if (m.kappa() >= 1.0) {
    throw Error(ErrorCode::domain, "complete_K: kappa must be < 1");
  }
  return std::numbers::pi / (2.0 * agm(1.0, m.kappa_prime()));
}

double complete_E(EllipticModulus m) {
  if (m.kappa() == 1.0) return 1.0;
  if (m.kappa() == 0.0) return 0.5 * std::numbers::pi;

  // E = K * (1 - sum_n 2^(n-1) c_n^2) along the AGM of (1, kappa').
  double a = 1.0;
  double b = m.kappa_prime();
  double c = m.kappa();
  double weight = 0.5;
  double sum = weight * c * c;
  for (int i = 0; i < kMaxAgmSteps && std::abs(c) > kEps * a; ++i) {
    c = 0.5 * (a - b);
    const double next_a = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next_a;
    weight *= 2.0;
    sum += weight * c * c;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return K * (1.0 - sum);
}

JacobiTriple jacobi_sn_cn_dn(double u, EllipticModulus m) {
  if (!std::isfinite(u)) {
    throw Error(ErrorCode::domain, "jacobi_sn_cn_dn: argument must be finite");
  }
  if (m.kappa() >= 1.0) {
    throw Error(ErrorCode::domain, "jacobi_sn_cn_dn: kappa must be < 1");
  }
  const double sign = std::signbit(u) ? -1.0 : 1.0;
  const double x = std::abs(u);
  if (m.kappa() == 0.0) {
    return {sign * std::sin(x), std::cos(x), 1.0};
  }

  std::array<double, kMaxAgmSteps + 1> a{};
  std::array<double, kMaxAgmSteps + 1> c{};
  a[0] = 1.0;
  c[0] = m.kappa();
  double b = m.kappa_prime();
  int steps = 0;
  while (steps < kMaxAgmSteps && std::abs(c[steps]) > kEps * a[steps]) {
    a[steps + 1] = 0.5 * (a[steps] + b);
    c[steps + 1] = 0.5 * (a[steps] - b);
    b = std::sqrt(a[steps] * b);
    ++steps;
  }

  double phase = std::ldexp(a[steps] * x, steps);
  for (int i = steps; i > 0; --i) {
    phase = 0.5 * (phase + std::asin(c[i] / a[i] * std::sin(phase)));
  }
  const double sn = std::sin(phase);
  const double cn = std::cos(phase);
  // dn^2 = cn^2 + kappa'^2 sn^2 is a sum of nonnegative terms, so it stays
  // accurate near u = K where cn -> 0.
  const double kp = m.kappa_prime();
  const double dn = std::sqrt(cn * cn + kp * kp * sn * sn);
  return {sign * sn, cn, dn};
}

}  // namespace zakharov::elliptic
