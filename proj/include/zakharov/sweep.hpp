#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zakharov/stability.hpp"

namespace zakharov {

struct SweepSpec {
  double kappa_lo = 0.1;
  double kappa_hi = 0.9;
  int kappa_count = 9;
  std::vector<double> speeds{0.0};
  std::optional<long> l;  // winding mode when set
  std::optional<double> sigma;
  int n = 256;
  RouteMode mode = RouteMode::both;
  std::optional<double> tol_zero;
  int workers = 1;
};

struct SweepPoint {
  int index = 0;
  double kappa = 0.0;
  double c = 0.0;
};

struct SweepRow {
  SweepPoint point;
  std::optional<StabilityReport> report;  // empty when the parameters were rejected
  std::string error;
};

struct SweepSummary {
  int points = 0;
  int stable = 0;
  int unstable = 0;
  int inconclusive = 0;
  double min_abs_det = 0.0;     // over rows with a closed-form D
  double max_abs_re = 0.0;      // over rows with a computed spectrum; NaN if none
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by point index
  SweepSummary summary;
};

SweepSummary summarize(const std::vector<SweepRow>& rows);

/// Kappa values lo + i (hi - lo)/(count - 1); a single point when count = 1.
/// Throws Error(contract) for count < 1.
std::vector<SweepPoint> sweep_points(const SweepSpec& spec);

/// Points are distributed over `spec.workers` OpenMP threads; rows come back
/// in index order and are identical for every worker count.
SweepResult run_sweep(const SweepSpec& spec);

/// Serial reference for run_sweep.
SweepResult run_sweep_serial(const SweepSpec& spec);

}  // namespace zakharov
