#include "zakharov/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace zakharov::io {
namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const WaveParameters& p) {
  Json j;
  j["kappa"] = p.kappa;
  j["c"] = p.c;
  j["l"] = p.l ? Json(*p.l) : Json(nullptr);
  j["sigma"] = p.sigma;
  j["alpha"] = p.alpha;
  j["phi0"] = p.phi0;
  j["phi1"] = p.phi1;
  j["T"] = p.T;
  j["omega"] = p.omega;
  j["a1"] = p.a1;
  if (p.l) j["cT_over_2pi"] = p.c * p.T / (2.0 * std::numbers::pi);
  return j;
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["params"] = to_json(r.params);
  j["inner_I"] = num(r.d.inner_I);
  Json d;
  d["d11"] = num(r.d.d11);
  d["d12"] = num(r.d.d12);
  d["d22"] = num(r.d.d22);
  d["numeric"] = Json::array({Json::array({num(r.d.numeric(0, 0)), num(r.d.numeric(0, 1))}),
                              Json::array({num(r.d.numeric(1, 0)), num(r.d.numeric(1, 1))})});
  d["inner_I_numeric"] = num(r.d.inner_I_numeric);
  d["n_D"] = r.d.n_D;
  j["d_matrix"] = d;
  j["det_closed"] = num(r.d.det_closed);
  j["det_numeric"] = num(r.d.det_numeric);
  j["n_H"] = r.counts.n_H;
  j["n0_D"] = r.counts.n0_D;
  j["k_r"] = r.spectral_counts ? Json(r.counts.k_r) : Json(nullptr);
  j["k_c"] = r.spectral_counts ? Json(r.counts.k_c) : Json(nullptr);
  j["k_i_minus"] = r.spectral_counts ? Json(r.counts.k_i_minus) : Json(nullptr);
  j["max_re_lambda"] = num(r.max_re_lambda);
  j["verdict"] = std::string(to_string(r.verdict));
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = num(v);
  j["residuals"] = res;
  Json spec;
  spec["spectral_radius"] = num(r.spectral_radius);
  spec["tol_re"] = num(r.tol_re);
  spec["zero_cluster"] = r.zero_cluster;
  spec["indeterminate_krein"] = r.indeterminate_krein;
  j["spectrum"] = spec;
  j["diagnostics"] = r.diagnostics;
  return j;
}

Json to_json(const SpectrumReport& r) {
  Json j;
  j["kind"] = std::string(to_string(r.kind));
  j["dimension"] = r.eigenvalues.size();
  j["morse_index"] = r.morse_index;
  j["kernel_dim"] = r.kernel_dim;
  j["positive_count"] = r.positive_count;
  j["tol_zero"] = r.tol_zero;
  j["separation_margin"] = num(r.separation_margin);
  Json corr = Json::object();
  for (const auto& c : r.kernel_correlations) corr[c.candidate] = c.value;
  j["kernel_correlations"] = corr;
  j["kernel_angle"] = num(r.kernel_angle);
  Json ev = Json::array();
  for (double v : r.eigenvalues) ev.push_back(v);
  j["eigenvalues"] = ev;
  return j;
}

Json to_json(const JHSpectrum& s) {
  Json j;
  j["kind"] = "JH";
  j["dimension"] = s.eigenvalues.size();
  j["tol_zero"] = s.tol_zero;
  j["tol_re"] = s.tol_re;
  j["spectral_radius"] = s.spectral_radius;
  j["max_re_lambda"] = s.max_re;
  j["zero_cluster"] = s.zero_cluster;
  j["k_r"] = s.k_r;
  j["k_c"] = s.k_c;
  j["pairing_residual"] = s.pairing_residual;
  Json ev = Json::array();
  for (const auto& v : s.eigenvalues) ev.push_back(Json::array({v.real(), v.imag()}));
  j["eigenvalues"] = ev;
  return j;
}

Json to_json(const SweepResult& s) {
  Json rows = Json::array();
  for (const auto& row : s.rows) {
    Json r;
    r["index"] = row.point.index;
    r["kappa"] = row.point.kappa;
    r["c"] = row.point.c;
    if (row.report) {
      r["report"] = to_json(*row.report);
    } else {
      r["report"] = nullptr;
      r["error"] = row.error;
    }
    rows.push_back(r);
  }
  Json sum;
  sum["points"] = s.summary.points;
  sum["stable"] = s.summary.stable;
  sum["unstable"] = s.summary.unstable;
  sum["inconclusive"] = s.summary.inconclusive;
  sum["min_abs_det"] = num(s.summary.min_abs_det);
  sum["max_abs_re_lambda"] = num(s.summary.max_abs_re);
  Json j;
  j["rows"] = rows;
  j["summary"] = sum;
  return j;
}

void write_wave_csv(std::ostream& os, const DnoidalWave& wave) {
  os << "# " << to_json(wave.params).dump() << '\n';
  os << "x,phi,dphi,psi\n";
  for (int j = 0; j < wave.grid.size(); ++j) {
    os << format_double(wave.grid.node(j)) << ',' << format_double(wave.phi[j]) << ','
       << format_double(wave.dphi[j]) << ',' << format_double(wave.psi[j]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  os << "index,kappa,c,l,sigma,T,inner_I,inner_I_numeric,det_closed,det_numeric,"
        "n_H,n0_D,k_r,k_c,k_i_minus,max_re_lambda,zero_cluster,verdict,error\n";
  for (const auto& row : s.rows) {
    os << row.point.index << ',' << format_double(row.point.kappa) << ','
       << format_double(row.point.c) << ',';
    if (!row.report) {
      os << ",,,,,,,,,,,,,,inconclusive," << csv_quote(row.error) << '\n';
      continue;
    }
    const StabilityReport& r = *row.report;
    const auto count = [&](int v) {
      return r.spectral_counts ? std::to_string(v) : std::string();
    };
    std::string error;
    for (const auto& d : r.diagnostics) error += (error.empty() ? "" : "; ") + d;
    os << (r.params.l ? std::to_string(*r.params.l) : std::string()) << ','
       << format_double(r.params.sigma) << ',' << format_double(r.params.T) << ','
       << format_double(r.d.inner_I) << ',' << format_double(r.d.inner_I_numeric) << ','
       << format_double(r.d.det_closed) << ',' << format_double(r.d.det_numeric) << ','
       << r.counts.n_H << ',' << r.counts.n0_D << ',' << count(r.counts.k_r) << ','
       << count(r.counts.k_c) << ',' << count(r.counts.k_i_minus) << ','
       << format_double(r.max_re_lambda) << ',' << r.zero_cluster << ','
       << to_string(r.verdict) << ',' << csv_quote(error) << '\n';
  }
  os << "# summary points=" << s.summary.points << " stable=" << s.summary.stable
     << " unstable=" << s.summary.unstable << " inconclusive=" << s.summary.inconclusive
     << " min_abs_det=" << format_double(s.summary.min_abs_det)
     << " max_abs_re_lambda=" << format_double(s.summary.max_abs_re) << '\n';
}

void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

}  // namespace zakharov::io
