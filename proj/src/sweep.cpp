#include "zakharov/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zakharov/errors.hpp"

namespace zakharov {
namespace {

SweepRow evaluate(const SweepSpec& spec, const SweepPoint& point) {
  SweepRow row{point, std::nullopt, {}};
  WaveParameters params;
  try {
    params = resolve_parameters(point.kappa, point.c, spec.l, spec.sigma);
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code())) + ": " + e.what();
    return row;
  }
  StabilityOptions options;
  options.n = spec.n;
  options.mode = spec.mode;
  options.tol_zero = spec.tol_zero;
  row.report = stability_verdict(params, options);
  return row;
}

}  // namespace

SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  s.points = static_cast<int>(rows.size());
  s.min_abs_det = std::numeric_limits<double>::quiet_NaN();
  s.max_abs_re = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : rows) {
    if (!row.report) {
      ++s.inconclusive;
      continue;
    }
    const StabilityReport& r = *row.report;
    switch (r.verdict) {
      case Verdict::stable: ++s.stable; break;
      case Verdict::unstable: ++s.unstable; break;
      case Verdict::inconclusive: ++s.inconclusive; break;
    }
    const double det = r.d.det_closed;
    if (std::isfinite(det)) {
      s.min_abs_det = std::isnan(s.min_abs_det) ? std::abs(det)
                                                : std::min(s.min_abs_det, std::abs(det));
    }
    if (std::isfinite(r.max_re_lambda)) {
      const double re = std::abs(r.max_re_lambda);
      s.max_abs_re = std::isnan(s.max_abs_re) ? re : std::max(s.max_abs_re, re);
    }
  }
  return s;
}

std::vector<SweepPoint> sweep_points(const SweepSpec& spec) {
  if (spec.kappa_count < 1) {
    throw Error(ErrorCode::contract, "sweep needs at least one kappa value");
  }
  if (spec.speeds.empty()) {
    throw Error(ErrorCode::contract, "sweep needs at least one speed");
  }
  std::vector<SweepPoint> points;
  for (int i = 0; i < spec.kappa_count; ++i) {
    const double kappa =
        spec.kappa_count == 1
            ? spec.kappa_lo
            : spec.kappa_lo + i * (spec.kappa_hi - spec.kappa_lo) / (spec.kappa_count - 1);
    for (double c : spec.speeds) {
      points.push_back({static_cast<int>(points.size()), kappa, c});
    }
  }
  return points;
}

SweepResult run_sweep(const SweepSpec& spec) {
  const std::vector<SweepPoint> points = sweep_points(spec);
  const int count = static_cast<int>(points.size());
  std::vector<SweepRow> rows(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, spec.workers))
  for (int i = 0; i < count; ++i) rows[i] = evaluate(spec, points[i]);
  SweepResult out{std::move(rows), {}};
  out.summary = summarize(out.rows);
  return out;
}

SweepResult run_sweep_serial(const SweepSpec& spec) {
  const std::vector<SweepPoint> points = sweep_points(spec);
  SweepResult out;
  for (const auto& p : points) out.rows.push_back(evaluate(spec, p));
  out.summary = summarize(out.rows);
  return out;
}

}  // namespace zakharov
