#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zakharov/dense.hpp"
#include "zakharov/elliptic.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/operators.hpp"
#include "zakharov/report_io.hpp"
#include "zakharov/spectra.hpp"
#include "zakharov/stability.hpp"
#include "zakharov/sweep.hpp"
#include "zakharov/waves.hpp"

namespace zakharov::cli {
namespace {

struct PointArgs {
  double kappa = 0.0;
  double c = 0.0;
  std::optional<long> l;
  std::optional<double> sigma;
  int n = 256;
};

struct Common {
  std::string format;
  std::string out_path;
};

void add_point_options(CLI::App* sub, PointArgs& p) {
  sub->add_option("--kappa", p.kappa, "elliptic modulus in (0,1)")->required();
  sub->add_option("--c", p.c, "wave speed, |c| < 1")->capture_default_str();
  sub->add_option("--l", p.l, "winding number (c T = 2 pi l)");
  sub->add_option("--sigma", p.sigma, "sigma > 0 (free-period mode)");
  sub->add_option("--n", p.n, "grid points (even, >= 16)")->capture_default_str();
}

void add_output_options(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", c.out_path, "write the report to this file");
}

// Writes through `emit` to --out or to `out`.
template <typename F>
void emit_to(const Common& c, std::ostream& out, F&& emit) {
  if (c.out_path.empty()) {
    emit(out);
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw CLI::ValidationError("--out", "cannot open " + c.out_path);
  emit(file);
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::stable: return kStable;
    case Verdict::unstable: return kUnstable;
    case Verdict::inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

struct KappaRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
};

double parse_real(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

// "lo:hi:count" or a single value.
KappaRange parse_kappa_range(const std::string& text) {
  KappaRange r;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  try {
    if (parts.size() == 1) {
      r.lo = r.hi = parse_real(parts[0]);
      return r;
    }
    if (parts.size() == 3) {
      r.lo = parse_real(parts[0]);
      r.hi = parse_real(parts[1]);
      const auto& cnt = parts[2];
      const auto res = std::from_chars(cnt.data(), cnt.data() + cnt.size(), r.count);
      if (res.ec != std::errc() || res.ptr != cnt.data() + cnt.size()) {
        throw std::invalid_argument(cnt);
      }
      return r;
    }
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--kappa", "expected lo:hi:count or a value, got " + text);
}

void write_lame(std::ostream& os, const std::vector<LameRow>& rows, bool json) {
  if (json) {
    io::Json j = io::Json::array();
    for (const auto& r : rows) {
      io::Json e;
      e["name"] = r.name;
      e["computed"] = r.computed;
      e["analytic"] = r.analytic;
      e["abs_error"] = std::abs(r.computed - r.analytic);
      j.push_back(e);
    }
    io::write_json(os, j);
    return;
  }
  os << "name,computed,analytic,abs_error\n";
  for (const auto& r : rows) {
    os << r.name << ',' << io::format_double(r.computed) << ','
       << io::format_double(r.analytic) << ','
       << io::format_double(std::abs(r.computed - r.analytic)) << '\n';
  }
}

void write_complex_spectrum(std::ostream& os, const JHSpectrum& s, bool json) {
  if (json) {
    io::write_json(os, io::to_json(s));
    return;
  }
  os << "re,im\n";
  for (const auto& l : s.eigenvalues) {
    os << io::format_double(l.real()) << ',' << io::format_double(l.imag()) << '\n';
  }
}

// Spectrum of J alone, reported in the JH layout with zero thresholds from J.
JHSpectrum spectrum_of_J(const LinearOperator& J, std::optional<double> tol) {
  const dense::GeneralEigen eig = dense::general_eig(J.matrix, false);
  JHSpectrum s;
  s.tol_zero = zero_threshold(J, tol);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    s.eigenvalues.push_back(eig.values[i]);
    s.spectral_radius = std::max(s.spectral_radius, std::abs(eig.values[i]));
  }
  std::stable_sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](auto a, auto b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  s.tol_re = 1e-6 * s.spectral_radius;
  s.max_re = -s.spectral_radius;
  for (const auto& l : s.eigenvalues) {
    s.max_re = std::max(s.max_re, l.real());
    if (std::abs(l) <= s.tol_zero) ++s.zero_cluster;
  }
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dnoidal waves of the Zakharov system: profiles, spectra, stability"};
  app.require_subcommand(1);

  PointArgs wave_args;
  Common wave_out;
  auto* wave = app.add_subcommand("wave", "sample the wave profile");
  add_point_options(wave, wave_args);
  add_output_options(wave, wave_out, "csv");

  double lame_kappa = 0.0;
  int lame_n = 256;
  Common lame_out;
  auto* lame = app.add_subcommand("lame-check", "Lame spectra against closed forms");
  lame->add_option("--kappa", lame_kappa, "elliptic modulus in (0,1)")->required();
  lame->add_option("--n", lame_n, "grid points")->capture_default_str();
  add_output_options(lame, lame_out, "csv");

  PointArgs spec_args;
  Common spec_out;
  std::string op_name = "H";
  std::string domain = "4K";
  std::optional<double> spec_tol;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of one operator");
  add_point_options(spectrum, spec_args);
  spectrum->add_option("--op", op_name, "Lminus, Lplus, Lame1, Lame2, H, J or JH")
      ->capture_default_str();
  spectrum->add_option("--domain", domain, "Lame period: 2K or 4K")
      ->check(CLI::IsMember({"2K", "4K"}))
      ->capture_default_str();
  spectrum->add_option("--tol-zero", spec_tol, "zero threshold override");
  add_output_options(spectrum, spec_out, "json");

  PointArgs stab_args;
  Common stab_out;
  std::string stab_mode = "both";
  std::optional<double> stab_tol;
  double corrupt = 1.0;
  auto* stab = app.add_subcommand("stability", "stability verdict at one point");
  add_point_options(stab, stab_args);
  stab->add_option("--mode", stab_mode, "closed-form, numeric or both")
      ->check(CLI::IsMember({"closed-form", "numeric", "both"}))
      ->capture_default_str();
  stab->add_option("--tol-zero", stab_tol, "JH zero threshold override");
  stab->add_option("--corrupt-I", corrupt, "scale the closed-form I (debug)")
      ->capture_default_str();
  add_output_options(stab, stab_out, "json");

  std::string sweep_kappa = "0.1:0.9:9";
  std::vector<double> sweep_c{0.0};
  SweepSpec spec;
  std::string sweep_mode = "both";
  Common sweep_out;
  auto* sweep = app.add_subcommand("sweep", "stability verdicts over a parameter grid");
  sweep->add_option("--kappa", sweep_kappa, "lo:hi:count")->capture_default_str();
  sweep->add_option("--c", sweep_c, "comma-separated speeds")->delimiter(',');
  sweep->add_option("--l", spec.l, "winding number");
  sweep->add_option("--sigma", spec.sigma, "sigma > 0");
  sweep->add_option("--n", spec.n, "grid points")->capture_default_str();
  sweep->add_option("--mode", sweep_mode, "closed-form, numeric or both")
      ->check(CLI::IsMember({"closed-form", "numeric", "both"}))
      ->capture_default_str();
  sweep->add_option("--tol-zero", spec.tol_zero, "JH zero threshold override");
  sweep->add_option("--workers", spec.workers, "parallel workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_options(sweep, sweep_out, "csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*wave) {
      const auto& a = wave_args;
      const WaveParameters p = resolve_parameters(a.kappa, a.c, a.l, a.sigma);
      const DnoidalWave w = sample_wave(p, a.n);
      emit_to(wave_out, out, [&](std::ostream& os) {
        if (wave_out.format == "csv") {
          io::write_wave_csv(os, w);
          return;
        }
        io::Json j;
        j["params"] = io::to_json(p);
        const Eigen::VectorXd x = w.grid.nodes();
        j["x"] = std::vector<double>(x.begin(), x.end());
        j["phi"] = std::vector<double>(w.phi.begin(), w.phi.end());
        j["dphi"] = std::vector<double>(w.dphi.begin(), w.dphi.end());
        j["psi"] = std::vector<double>(w.psi.begin(), w.psi.end());
        io::write_json(os, j);
      });
      return 0;
    }

    if (*lame) {
      (void)elliptic::EllipticModulus::from_kappa(lame_kappa);
      if (!(lame_kappa > 0.0 && lame_kappa < 1.0)) {
        throw Error(ErrorCode::domain, "modulus out of (0,1)");
      }
      const std::vector<LameRow> rows = lame_check(lame_kappa, lame_n);
      emit_to(lame_out, out,
              [&](std::ostream& os) { write_lame(os, rows, lame_out.format == "json"); });
      const bool ok = std::all_of(rows.begin(), rows.end(), [](const LameRow& r) {
        return std::abs(r.computed - r.analytic) < 1e-8;
      });
      return ok ? 0 : 1;
    }

    if (*spectrum) {
      const auto kind = parse_operator_kind(op_name);
      if (!kind) {
        err << "--op: unknown operator " << op_name << '\n';
        return kUsage;
      }
      const bool json = spec_out.format == "json";
      const auto& a = spec_args;
      if (*kind == OperatorKind::Lame1 || *kind == OperatorKind::Lame2) {
        if (!(a.kappa > 0.0 && a.kappa < 1.0)) {
          throw Error(ErrorCode::domain, "modulus out of (0,1)");
        }
        const LinearOperator op = assemble_lame(
            *kind, a.kappa, domain == "2K" ? LameDomain::two_K : LameDomain::four_K, a.n);
        const SpectrumReport r = symmetric_spectrum(op, nullptr, spec_tol);
        emit_to(spec_out, out, [&](std::ostream& os) {
          if (json) {
            io::write_json(os, io::to_json(r));
          } else {
            os << "eigenvalue\n";
            for (double v : r.eigenvalues) os << io::format_double(v) << '\n';
          }
        });
        return 0;
      }
      const WaveParameters p = resolve_parameters(a.kappa, a.c, a.l, a.sigma);
      const DnoidalWave w = sample_wave(p, a.n);
      if (*kind == OperatorKind::J || *kind == OperatorKind::JH) {
        const LinearOperator J = assemble_J(w.grid);
        const JHSpectrum s = *kind == OperatorKind::J
                                 ? spectrum_of_J(J, spec_tol)
                                 : full_spectrum_JH(assemble_H(w), J, false, spec_tol);
        emit_to(spec_out, out, [&](std::ostream& os) { write_complex_spectrum(os, s, json); });
        return 0;
      }
      const LinearOperator op =
          *kind == OperatorKind::H ? assemble_H(w) : assemble_scalar(*kind, w);
      const SpectrumReport r = symmetric_spectrum(op, &w, spec_tol);
      emit_to(spec_out, out, [&](std::ostream& os) {
        if (json) {
          io::write_json(os, io::to_json(r));
        } else {
          os << "eigenvalue\n";
          for (double v : r.eigenvalues) os << io::format_double(v) << '\n';
        }
      });
      return 0;
    }

    if (*stab) {
      const auto& a = stab_args;
      const WaveParameters p = resolve_parameters(a.kappa, a.c, a.l, a.sigma);
      StabilityOptions opt;
      opt.n = a.n;
      opt.mode = *parse_route_mode(stab_mode);
      opt.tol_zero = stab_tol;
      opt.corrupt_I = corrupt;
      if (a.n < 16 || a.n % 2 != 0) {
        throw Error(ErrorCode::contract, "grid size must be even and >= 16");
      }
      const StabilityReport r = stability_verdict(p, opt);
      emit_to(stab_out, out, [&](std::ostream& os) {
        if (stab_out.format == "json") {
          io::write_json(os, io::to_json(r));
          return;
        }
        SweepResult single;
        single.rows.push_back({{0, p.kappa, p.c}, r, {}});
        single.summary = summarize(single.rows);
        io::write_sweep_csv(os, single);
      });
      for (const auto& d : r.diagnostics) err << "diagnostic: " << d << '\n';
      return exit_for(r.verdict);
    }

    if (*sweep) {
      const KappaRange range = parse_kappa_range(sweep_kappa);
      spec.kappa_lo = range.lo;
      spec.kappa_hi = range.hi;
      spec.kappa_count = range.count;
      spec.speeds = sweep_c;
      spec.mode = *parse_route_mode(sweep_mode);
      if (spec.n < 16 || spec.n % 2 != 0) {
        throw Error(ErrorCode::contract, "grid size must be even and >= 16");
      }
      if (spec.kappa_count < 1) {
        throw Error(ErrorCode::contract, "kappa range count must be >= 1");
      }
      const SweepResult result = run_sweep(spec);
      emit_to(sweep_out, out, [&](std::ostream& os) {
        if (sweep_out.format == "json") {
          io::write_json(os, io::to_json(result));
        } else {
          io::write_sweep_csv(os, result);
        }
      });
      if (result.summary.inconclusive > 0) return kInconclusive;
      if (result.summary.unstable > 0) return kUnstable;
      return kStable;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    switch (e.code()) {
      case ErrorCode::domain:
      case ErrorCode::degenerate_speed:
      case ErrorCode::degenerate_modulus:
      case ErrorCode::contract:
        return kUsage;
      default:
        return kInconclusive;
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace zakharov::cli
