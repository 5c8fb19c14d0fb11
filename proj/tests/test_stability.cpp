#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "zakharov/elliptic.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/operators.hpp"
#include "zakharov/stability.hpp"
#include "zakharov/waves.hpp"

using namespace zakharov;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// <L+^{-1} phi, phi> from the eigen-expansion of L+ with its kernel removed.
double pseudo_inverse_inner(const DnoidalWave& w) {
  const LinearOperator lp = assemble_scalar(OperatorKind::Lplus, w);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(lp.matrix);
  const double cut = 1e-8 * es.eigenvalues().cwiseAbs().maxCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (std::abs(lam) < cut) continue;
    const double proj = es.eigenvectors().col(i).dot(w.phi);
    sum += proj * proj / lam;
  }
  return w.grid.spacing() * sum;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// K and E by the AGM in long double; the brackets of I then keep about
// 19 - log10(1/k^4) digits.
long double closed_form_I_long(double kappa, double c, double alpha) {
  const long double k = kappa;
  const long double kp2 = (1.0L - k) * (1.0L + k);
  long double a = 1.0L;
  long double b = std::sqrt(kp2);
  long double sum = 0.5L * k * k;
  long double pow2 = 0.5L;
  for (int i = 0; i < 40; ++i) {
    const long double cn = 0.5L * (a - b);
    const long double an = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0L;
    sum += pow2 * cn * cn;
  }
  const long double K = std::numbers::pi_v<long double> / (2.0L * a);
  const long double E = K * (1.0L - sum);
  const long double num = E * E - kp2 * K * K;
  const long double den = (2.0L - k * k) * E - 2.0L * kp2 * K;
  return -(2.0L * (1.0L - c * c) / alpha) * num / den;
}

}  // namespace

TEST_CASE("closed-form I matches the spectral pseudo-inverse") {
  for (double k : {0.2, 0.5, 0.8}) {
    for (double c : {0.0, 0.4}) {
      const WaveParameters p = resolve_parameters(k, c, std::nullopt, 1.0);
      const DnoidalWave w = sample_wave(p, 256);
      CAPTURE(k);
      CAPTURE(c);
      CHECK(rel(pseudo_inverse_inner(w), inner_product_closed_form(p)) < 1e-6);
    }
  }
  const WaveParameters p = resolve_parameters(0.5, 0.5, 1L, std::nullopt);
  CHECK(rel(pseudo_inverse_inner(sample_wave(p, 256)), inner_product_closed_form(p)) <
        1e-6);
}

TEST_CASE("closed-form I keeps its accuracy for small kappa") {
  for (double k : {0.2, 0.1, 0.05, 0.03, 0.49, 0.5, 0.51, 0.8}) {
    CAPTURE(k);
    const WaveParameters p = resolve_parameters(k, 0.3, std::nullopt, 1.0);
    const double oracle = static_cast<double>(closed_form_I_long(k, p.c, p.alpha));
    CHECK(rel(inner_product_closed_form(p), oracle) < 1e-12);
  }
  // Limit -(2(1-c^2)/alpha) pi/6 as kappa -> 0.
  const WaveParameters p = resolve_parameters(1e-3, 0.0, std::nullopt, 1.0);
  CHECK(rel(inner_product_closed_form(p), -(2.0 / p.alpha) * std::numbers::pi / 6) <
        1e-5);
  CHECK(second_factor(p).value > 0.0);
}

TEST_CASE("I is negative and scales with (1 - c^2)/alpha") {
  for (int i = 1; i <= 9; ++i) {
    const double k = 0.1 * i;
    CAPTURE(k);
    const WaveParameters a = resolve_parameters(k, 0.0, std::nullopt, 1.0);
    const WaveParameters b = resolve_parameters(k, 0.6, std::nullopt, 4.0);
    const double ia = inner_product_closed_form(a);
    const double ib = inner_product_closed_form(b);
    CHECK(ia < 0.0);
    CHECK(ib < 0.0);
    // b has alpha doubled and 1 - c^2 = 0.64.
    CHECK(ib / ia == doctest::Approx(0.64 / 2.0).epsilon(1e-13));
  }
}

TEST_CASE("I rejects a degenerate modulus") {
  WaveParameters p = resolve_parameters(0.5, 0.0, std::nullopt, 1.0);
  p.kappa = 1e-4;
  try {
    inner_product_closed_form(p);
    FAIL("expected degenerate_modulus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_modulus);
  }
}

TEST_CASE("second factor") {
  for (double k : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double c : {0.0, 0.3, 0.6, 0.9}) {
      CAPTURE(k);
      CAPTURE(c);
      const WaveParameters p = resolve_parameters(k, c, std::nullopt, 1.0);
      const SecondFactor f = second_factor(p);
      CHECK(f.value > 0.0);
      CHECK(f.bracket_ratio > 1.0);
      CHECK(rel(f.value, f.value_ek_form) < 1e-10);
      if (c == 0.0) CHECK(f.value == 2.0 * p.T);
    }
  }
}

TEST_CASE("closed-form D") {
  const WaveParameters p = resolve_parameters(0.5, 0.3, std::nullopt, 1.0);
  const DMatrixReport d = d_matrix(p);
  const double two_T = 2.0 * p.T;
  const double g = p.one_minus_c2();
  const double a = two_T + p.c * p.c * d.inner_I / g;
  CHECK(d.d22 == two_T);
  CHECK(d.d12 == doctest::Approx(-two_T * a).epsilon(1e-14));
  CHECK(d.d11 == doctest::Approx(two_T * a * (two_T + d.inner_I / g)).epsilon(1e-14));
  CHECK(d.det_closed ==
        doctest::Approx(d.d11 * d.d22 - d.d12 * d.d12).epsilon(1e-10));
  CHECK(d.det_closed < 0.0);
  CHECK(d.n_D == 1);
  CHECK(d.n0_D == 1);

  const DMatrixReport flipped = d_matrix(p, -d.inner_I);
  CHECK(flipped.det_closed > 0.0);
  CHECK(flipped.n_D == 0);
  CHECK(flipped.n0_D == 0);
}

TEST_CASE("numeric D against closed form") {
  for (double k : {0.3, 0.5, 0.8}) {
    for (double c : {0.0, 0.3, 0.6}) {
      CAPTURE(k);
      CAPTURE(c);
      const WaveParameters p = resolve_parameters(k, c, std::nullopt, 1.0);
      const DnoidalWave w = sample_wave(p, 128);
      const LinearOperator H = assemble_H(w);
      const KernelVectors kv = assemble_kernel_vectors(w, H);
      const Eigen::Matrix2d dn = d_matrix_numeric(H, kv);
      const DMatrixReport d = d_matrix(p);
      CHECK(rel(dn(1, 1), 2.0 * p.T) < 1e-12);
      CHECK(std::abs(dn(0, 1) - dn(1, 0)) < 1e-10 * std::abs(dn(0, 1)));
      CHECK(rel(dn(0, 0), d.d11) < 1e-6);
      CHECK(rel(dn(0, 1), d.d12) < 1e-6);
      CHECK(rel(dn.determinant(), d.det_closed) < 1e-6);
      CHECK(count_nonpositive(d_matrix_extended(H, kv)) == 1);
    }
  }
}

TEST_CASE("small-matrix counts") {
  Eigen::Matrix2d m;
  m << 1.0, 0.0, 0.0, 0.0;
  CHECK(count_nonpositive(m) == 1);
  CHECK(count_negative(m) == 0);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK(count_nonpositive(m) == 1);
  CHECK(count_negative(m) == 1);
}

TEST_CASE("numeric I converges spectrally") {
  const WaveParameters p = resolve_parameters(0.5, 0.3, std::nullopt, 1.0);
  const double exact = inner_product_closed_form(p);
  for (int n : {32, 64, 128, 256, 512}) {
    CAPTURE(n);
    const DnoidalWave w = sample_wave(p, n);
    const KernelVectors kv = assemble_kernel_vectors(w, assemble_H(w));
    CHECK(rel(kv.inner_I, exact) < 1e-9);
  }
}

TEST_CASE("verdicts") {
  SUBCASE("winding mode point is stable") {
    StabilityOptions o;
    o.n = 128;
    const StabilityReport r =
        stability_verdict(resolve_parameters(0.5, 0.5, 1L, std::nullopt), o);
    CHECK(r.verdict == Verdict::stable);
    CHECK(r.counts.n_H == 1);
    CHECK(r.counts.n0_D == 1);
    CHECK(r.counts.k_r == 0);
    CHECK(r.counts.k_c == 0);
    CHECK(r.counts.k_i_minus == 0);
    CHECK(r.spectral_counts);
    CHECK(r.max_re_lambda < r.tol_re);
    CHECK(r.residuals.at("d_rel_err") < 1e-6);
    CHECK(r.residuals.at("H_symmetry") == 0.0);
    CHECK(r.residuals.at("J_antisymmetry") == 0.0);
    CHECK(r.residuals.at("index_balance") == 0.0);
  }
  SUBCASE("standing wave is stable") {
    StabilityOptions o;
    o.n = 128;
    const StabilityReport r =
        stability_verdict(resolve_parameters(0.8, 0.0, std::nullopt, 1.0), o);
    CHECK(r.verdict == Verdict::stable);
    CHECK(r.counts.k_i_minus == 0);
  }
  SUBCASE("corrupted I is caught by the route comparison") {
    StabilityOptions o;
    o.n = 128;
    o.corrupt_I = 1.1;
    const StabilityReport r =
        stability_verdict(resolve_parameters(0.5, 0.5, 1L, std::nullopt), o);
    CHECK(r.verdict == Verdict::inconclusive);
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics.front().find("route_disagreement") != std::string::npos);
  }
  SUBCASE("closed-form mode skips the spectrum") {
    StabilityOptions o;
    o.n = 64;
    o.mode = RouteMode::closed_form;
    const StabilityReport r =
        stability_verdict(resolve_parameters(0.5, 0.3, std::nullopt, 1.0), o);
    CHECK(r.verdict == Verdict::stable);
    CHECK(!r.spectral_counts);
    CHECK(std::isnan(r.max_re_lambda));
    CHECK(std::isnan(r.d.det_numeric));
  }
  SUBCASE("numeric mode fills D from the matrices") {
    StabilityOptions o;
    o.n = 64;
    o.mode = RouteMode::numeric;
    const WaveParameters p = resolve_parameters(0.5, 0.3, std::nullopt, 1.0);
    const StabilityReport r = stability_verdict(p, o);
    CHECK(r.verdict == Verdict::stable);
    CHECK(rel(r.d.d22, 2.0 * p.T) < 1e-12);
    CHECK(r.d.n0_D == 1);
  }
  SUBCASE("stage failures become inconclusive") {
    WaveParameters p = resolve_parameters(0.5, 0.3, std::nullopt, 1.0);
    p.kappa = 1e-4;
    StabilityOptions o;
    o.n = 64;
    const StabilityReport r = stability_verdict(p, o);
    CHECK(r.verdict == Verdict::inconclusive);
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics.front().find("degenerate_modulus") != std::string::npos);
  }
}

TEST_CASE("mode and verdict names") {
  for (RouteMode m : {RouteMode::closed_form, RouteMode::numeric, RouteMode::both}) {
    CHECK(parse_route_mode(to_string(m)) == m);
  }
  CHECK(!parse_route_mode("fast"));
  CHECK(to_string(Verdict::stable) == "stable");
  CHECK(to_string(Verdict::unstable) == "unstable");
  CHECK(to_string(Verdict::inconclusive) == "inconclusive");
}
