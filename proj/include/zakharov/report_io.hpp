#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "zakharov/spectra.hpp"
#include "zakharov/stability.hpp"
#include "zakharov/sweep.hpp"
#include "zakharov/waves.hpp"

// Serialization of reports. Field names and order are fixed; non-finite
// doubles become JSON null (empty cells in CSV).
namespace zakharov::io {

using Json = nlohmann::ordered_json;

/// printf("%.17g"); empty for NaN and infinities.
std::string format_double(double v);

Json to_json(const WaveParameters& p);
Json to_json(const StabilityReport& r);
Json to_json(const SpectrumReport& r);
Json to_json(const JHSpectrum& s);
Json to_json(const SweepResult& s);

/// "# {header json}" line, then columns x, phi, dphi, psi.
void write_wave_csv(std::ostream& os, const DnoidalWave& wave);

/// Header row, one row per sweep point, then a "# summary ..." line.
void write_sweep_csv(std::ostream& os, const SweepResult& s);

/// Two-space indented dump followed by a newline.
void write_json(std::ostream& os, const Json& j);

}  // namespace zakharov::io
