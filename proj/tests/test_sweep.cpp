#include <doctest.h>

#include <sstream>

#include "zakharov/errors.hpp"
#include "zakharov/report_io.hpp"
#include "zakharov/sweep.hpp"

using namespace zakharov;

namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.kappa_lo = 0.3;
  s.kappa_hi = 0.7;
  s.kappa_count = 3;
  s.speeds = {0.0, 0.4};
  s.sigma = 1.0;
  s.n = 48;
  return s;
}

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  io::write_sweep_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("sweep points are kappa-major") {
  const auto pts = sweep_points(small_spec());
  REQUIRE(pts.size() == 6);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].index == static_cast<int>(i));
  }
  CHECK(pts[0].kappa == 0.3);
  CHECK(pts[1].kappa == 0.3);
  CHECK(pts[1].c == 0.4);
  CHECK(pts[2].kappa == doctest::Approx(0.5));
  CHECK(pts[5].kappa == 0.7);

  SweepSpec one = small_spec();
  one.kappa_count = 1;
  CHECK(sweep_points(one).size() == 2);

  SweepSpec none = small_spec();
  none.kappa_count = 0;
  CHECK_THROWS_AS(sweep_points(none), Error);
}

TEST_CASE("sweep output does not depend on the worker count") {
  SweepSpec s = small_spec();
  const std::string serial = csv(run_sweep_serial(s));
  s.workers = 1;
  const std::string w1 = csv(run_sweep(s));
  s.workers = 4;
  const std::string w4 = csv(run_sweep(s));
  CHECK(w1 == serial);
  CHECK(w4 == serial);
}

TEST_CASE("sweep rows and summary") {
  SweepSpec s = small_spec();
  s.workers = 2;
  s.speeds = {0.0, 0.4, 1.2};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.rows.size() == 9);
  CHECK(r.summary.points == 9);
  CHECK(r.summary.stable == 6);
  CHECK(r.summary.inconclusive == 3);
  for (const auto& row : r.rows) {
    if (row.point.c == 1.2) {
      CHECK(!row.report);
      CHECK(row.error.find("degenerate_speed") != std::string::npos);
    } else {
      REQUIRE(row.report);
      CHECK(row.report->verdict == Verdict::stable);
    }
  }
  CHECK(r.summary.min_abs_det > 0.0);
  CHECK(r.summary.max_abs_re >= 0.0);
}
