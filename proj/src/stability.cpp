#include "zakharov/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "zakharov/dense.hpp"
#include "zakharov/elliptic.hpp"
#include "zakharov/errors.hpp"

namespace zakharov {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRouteTolerance = 1e-4;

struct EllipticPair {
  double K;
  double E;
};

EllipticPair elliptic_pair(const WaveParameters& p) {
  if (p.kappa < kKappaMin) {
    throw Error(ErrorCode::degenerate_modulus,
                "closed form is 0/0 as kappa -> 0: kappa = " + std::to_string(p.kappa));
  }
  const auto m = elliptic::EllipticModulus::from_kappa(p.kappa);
  return {elliptic::complete_K(m), elliptic::complete_E(m)};
}

double max_abs(const MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string point_label(const WaveParameters& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "kappa=%.17g c=%.17g sigma=%.17g", p.kappa, p.c,
                p.sigma);
  return buf;
}

// E^2 - (1-k^2) K^2 and (2-k^2) E - 2(1-k^2) K are both O(k^4). Below
// kSeriesKappa they are summed from the hypergeometric series of K and E with
// the vanishing m^0, m^1 coefficients dropped.
constexpr double kSeriesKappa = 0.5;

struct CancellingPair {
  double num;
  double den;
};

CancellingPair cancelling_pair(double kappa, double K, double E) {
  const double m = kappa * kappa;
  const double mp = (1.0 - kappa) * (1.0 + kappa);
  if (kappa >= kSeriesKappa) {
    return {E * E - mp * K * K, (2.0 - m) * E - 2.0 * mp * K};
  }
  constexpr int kTerms = 96;
  std::array<double, kTerms> k{};
  std::array<double, kTerms> e{};
  k[0] = 1.0;
  e[0] = 1.0;
  for (int n = 1; n < kTerms; ++n) {
    const double r = (2.0 * n - 1.0) / (2.0 * n);
    k[n] = k[n - 1] * r * r;
    e[n] = k[n] / (1.0 - 2.0 * n);
  }
  auto conv = [](const std::array<double, kTerms>& a, int n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += a[i] * a[n - i];
    return s;
  };
  double num = 0.0;
  double den = 0.0;
  double mn = m * m;
  for (int n = 2; n < kTerms; ++n, mn *= m) {
    num += mn * (conv(e, n) - conv(k, n) + conv(k, n - 1));
    den += mn * (2.0 * e[n] - e[n - 1] - 2.0 * k[n] + 2.0 * k[n - 1]);
  }
  const double h = std::numbers::pi / 2;
  return {h * h * num, h * den};
}

}  // namespace

double inner_product_closed_form(const WaveParameters& p) {
  const auto [K, E] = elliptic_pair(p);
  const auto [num, den] = cancelling_pair(p.kappa, K, E);
  if (std::abs(den) < 1e-14) {
    throw Error(ErrorCode::cancellation,
                "closed-form denominator (2-k^2)E - 2(1-k^2)K = " +
                    std::to_string(den) + " lost significance");
  }
  const double value = -(2.0 * p.one_minus_c2() / p.alpha) * num / den;
  if (!(value < 0.0)) {
    throw Error(ErrorCode::analytic_claim,
                "<L+^{-1} phi, phi> is not negative: " + std::to_string(value));
  }
  return value;
}

SecondFactor second_factor(const WaveParameters& p) {
  const auto [K, E] = elliptic_pair(p);
  const double I = inner_product_closed_form(p);
  const auto [num, den] = cancelling_pair(p.kappa, K, E);
  const double c2 = p.c * p.c;

  SecondFactor f;
  f.value = 2.0 * p.T + c2 * I / p.one_minus_c2();
  f.bracket_ratio = K * den / num;
  f.value_ek_form = (2.0 * K / p.alpha) * (1.0 - c2 / f.bracket_ratio);

  if (!(f.bracket_ratio > 1.0) || !(1.0 > c2)) {
    throw Error(ErrorCode::analytic_claim,
                "bracket ratio " + std::to_string(f.bracket_ratio) +
                    " does not exceed 1 > c^2");
  }
  if (!(rel(f.value, f.value_ek_form) < 1e-10)) {
    throw Error(ErrorCode::analytic_claim,
                "second factor forms disagree: " + std::to_string(f.value) + " vs " +
                    std::to_string(f.value_ek_form));
  }
  if (!(f.value > 0.0)) {
    throw Error(ErrorCode::analytic_claim,
                "second factor is not positive: " + std::to_string(f.value));
  }
  return f;
}

int count_nonpositive(const MatrixXd& d) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(d, Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() <= 0.0).count());
}

int count_negative(const MatrixXd& d) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(d, Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() < 0.0).count());
}

DMatrixReport d_matrix(const WaveParameters& p, std::optional<double> inner_I) {
  DMatrixReport r;
  r.inner_I = inner_I ? *inner_I : inner_product_closed_form(p);
  r.inner_I_numeric = kNaN;
  r.det_numeric = kNaN;
  r.numeric.setConstant(kNaN);

  const double g = p.one_minus_c2();
  const double two_T = 2.0 * p.T;
  const double I = r.inner_I;
  const double a = two_T + p.c * p.c * I / g;
  r.d11 = two_T * a * (two_T + I / g);
  r.d12 = -two_T * a;
  r.d22 = two_T;
  r.det_closed = two_T * two_T * I * a;

  Eigen::Matrix2d d;
  d << r.d11, r.d12, r.d12, r.d22;
  r.n_D = count_negative(d);
  r.n0_D = count_nonpositive(d);
  return r;
}

Eigen::Matrix2d d_matrix_numeric(const LinearOperator& H, const KernelVectors& kv) {
  const BlockLayout layout(H.grid.size(), H.constrained);
  MatrixXd basis(layout.dim(), 2);
  basis << layout.reduce(kv.eta_tilde1), layout.reduce(kv.eta_tilde3);
  return H.grid.spacing() * (basis.transpose() * (H.matrix * basis));
}

Eigen::Matrix3d d_matrix_extended(const LinearOperator& H, const KernelVectors& kv) {
  const BlockLayout layout(H.grid.size(), H.constrained);
  MatrixXd basis(layout.dim(), 3);
  basis << layout.reduce(kv.eta_tilde1), layout.reduce(kv.eta_tilde3),
      layout.reduce(kv.translation_partner);
  return H.grid.spacing() * (basis.transpose() * (H.matrix * basis));
}

std::string_view to_string(RouteMode mode) noexcept {
  switch (mode) {
    case RouteMode::closed_form: return "closed-form";
    case RouteMode::numeric: return "numeric";
    case RouteMode::both: return "both";
  }
  return "unknown";
}

std::optional<RouteMode> parse_route_mode(std::string_view name) noexcept {
  for (auto m : {RouteMode::closed_form, RouteMode::numeric, RouteMode::both}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

StabilityReport stability_verdict(const WaveParameters& params,
                                  const StabilityOptions& options) {
  StabilityReport rep;
  rep.params = params;
  rep.max_re_lambda = kNaN;
  rep.spectral_radius = kNaN;
  rep.tol_re = kNaN;
  rep.d.inner_I = kNaN;
  rep.d.inner_I_numeric = kNaN;
  rep.d.det_closed = kNaN;
  rep.d.det_numeric = kNaN;
  rep.d.numeric.setConstant(kNaN);
  auto& res = rep.residuals;
  auto& diag = rep.diagnostics;
  const bool closed = options.mode != RouteMode::numeric;
  const bool numeric = options.mode != RouteMode::closed_form;
  bool failed = false;

  const std::string stage_names[] = {"wave", "operators", "closed-form", "numeric",
                                     "spectrum"};
  const std::string* stage = &stage_names[0];
  try {
    const DnoidalWave wave = sample_wave(params, options.n);
    const double scale = ode_residual_scale(params);
    res["ode_residual"] = ode_residual(wave) / scale;
    res["first_integral"] = first_integral_residual(wave);

    stage = &stage_names[1];
    const LinearOperator H = assemble_H(wave);
    const LinearOperator J = assemble_J(wave.grid);
    res["H_symmetry"] = max_abs(H.matrix - H.matrix.transpose()) / max_abs(H.matrix);
    res["J_antisymmetry"] = max_abs(J.matrix + J.matrix.transpose()) / max_abs(J.matrix);
    const dense::SymmetricEigen h_eig = dense::symmetric_eig(H.matrix, false);
    const double h_tol = zero_threshold(H);
    rep.counts.n_H = static_cast<int>((h_eig.values.array() < -h_tol).count());

    const double two_T = 2.0 * params.T;
    if (closed) {
      stage = &stage_names[2];
      const SecondFactor f = second_factor(params);
      res["second_factor"] = f.value;
      res["second_factor_forms"] = rel(f.value, f.value_ek_form);
      res["bracket_ratio"] = f.bracket_ratio;
      const double I = inner_product_closed_form(params) * options.corrupt_I;
      rep.d = d_matrix(params, I);
      res["det_algebraic"] =
          rel(rep.d.d11 * rep.d.d22 - rep.d.d12 * rep.d.d12, rep.d.det_closed);
      res["det_margin"] = std::abs(rep.d.det_closed) / (two_T * two_T * two_T);
    }

    if (numeric) {
      stage = &stage_names[3];
      const KernelVectors kv = assemble_kernel_vectors(wave, H);
      const BlockLayout layout(options.n, H.constrained);
      res["H_psi1"] = relative_residual(H.matrix, layout.reduce(kv.psi1),
                                        VectorXd::Zero(layout.dim()));
      res["H_psi2"] = relative_residual(H.matrix, layout.reduce(kv.psi2),
                                        VectorXd::Zero(layout.dim()));
      res["eta_tilde1_mean"] =
          std::abs(kv.eta_tilde1.tail(options.n).sum()) /
          kv.eta_tilde1.tail(options.n).cwiseAbs().sum();
      const Eigen::Matrix2d dn = d_matrix_numeric(H, kv);
      rep.d.numeric = dn;
      rep.d.inner_I_numeric = kv.inner_I;
      rep.d.det_numeric = dn.determinant();
      res["d_symmetry"] = std::abs(dn(0, 1) - dn(1, 0)) / std::abs(dn(0, 1));
      res["n0_D_extended"] = count_nonpositive(d_matrix_extended(H, kv));
      if (!(std::abs(kv.inner_I) > 1e-8 * two_T)) {
        diag.push_back("hypothesis <L+^{-1} phi, phi> != 0 failed numerically");
        failed = true;
      }
      const Eigen::Matrix2d dsym = 0.5 * (dn + dn.transpose());
      if (closed) {
        res["inner_I_rel_err"] = rel(kv.inner_I, rep.d.inner_I);
        const double e11 = rel(dn(0, 0), rep.d.d11);
        const double e12 = rel(dsym(0, 1), rep.d.d12);
        const double e22 = rel(dn(1, 1), rep.d.d22);
        res["d_rel_err"] = std::max({e11, e12, e22});
        res["det_rel_err"] = rel(rep.d.det_numeric, rep.d.det_closed);
        if (res["d_rel_err"] > kRouteTolerance ||
            res["inner_I_rel_err"] > kRouteTolerance) {
          diag.push_back(std::string(to_string(ErrorCode::route_disagreement)) +
                         ": closed-form and numeric D differ (max rel err " +
                         std::to_string(res["d_rel_err"]) + ")");
          failed = true;
        }
        if (count_nonpositive(dsym) != rep.d.n0_D) {
          diag.push_back(std::string(to_string(ErrorCode::route_disagreement)) +
                         ": n0(D) differs between routes");
          failed = true;
        }
      } else {
        rep.d.d11 = dn(0, 0);
        rep.d.d12 = dsym(0, 1);
        rep.d.d22 = dn(1, 1);
        rep.d.n_D = count_negative(dsym);
        rep.d.n0_D = count_nonpositive(dsym);
      }
      res["jh_eta_tilde1"] = relative_residual(
          compose_JH(J, H).matrix, layout.reduce(kv.eta_tilde1),
          VectorXd::Zero(layout.dim()));

      stage = &stage_names[4];
      const JHSpectrum s = full_spectrum_JH(H, J, true, options.tol_zero,
                                            point_label(params));
      rep.max_re_lambda = s.max_re;
      rep.spectral_radius = s.spectral_radius;
      rep.tol_re = s.tol_re;
      rep.zero_cluster = s.zero_cluster;
      res["jh_pairing"] = s.pairing_residual;
      const KreinReport kr = krein_signatures(H, s);
      rep.counts.k_r = s.k_r;
      rep.counts.k_c = s.k_c;
      rep.counts.k_i_minus = kr.k_i_minus;
      rep.indeterminate_krein = kr.indeterminate;
      rep.spectral_counts = true;
      if (kr.indeterminate > 0) {
        diag.push_back(std::to_string(kr.indeterminate) +
                       " imaginary pair(s) with indeterminate Krein signature");
      }
    }
    rep.counts.n0_D = rep.d.n0_D;
  } catch (const Error& e) {
    diag.push_back(*stage + ": " + std::string(to_string(e.code())) + ": " + e.what());
    rep.verdict = Verdict::inconclusive;
    return rep;
  }

  const int analytic = rep.counts.n_H - rep.counts.n0_D;
  if (rep.spectral_counts) {
    const IndexCheck balance = verify_index_formula(rep.counts);
    res["index_balance"] = balance.residual;
    if (!balance.balanced) {
      diag.push_back("index formula unbalanced: residual " +
                     std::to_string(balance.residual));
      failed = true;
    }
  }
  if (failed) {
    rep.verdict = Verdict::inconclusive;
    return rep;
  }

  if (!numeric) {
    rep.verdict = analytic == 0 ? Verdict::stable : Verdict::unstable;
    return rep;
  }
  const bool spectrally_stable = rep.max_re_lambda < rep.tol_re;
  if (analytic == 0 && spectrally_stable) {
    rep.verdict = Verdict::stable;
  } else if (analytic > 0 && !spectrally_stable) {
    rep.verdict = Verdict::unstable;
  } else {
    diag.push_back("index count and spectrum disagree");
    rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace zakharov
