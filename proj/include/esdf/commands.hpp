// commands.hpp: batch commands behind the esdf executable
//
// Exit status: 0 success, 1 domain error (bad input, singular density, no
// calibration root, memory budget), 2 convergence failure (quadrature,
// extrapolation, invariant breach, oracle or sweep above threshold), 3 I/O.
// On failure one line is written to the diagnostic stream:
//   esdf-error code=<n> type=<domain|convergence|io> message="<text>"

#pragma once

#include <exception>
#include <iosfwd>
#include <string>

#include "esdf/presets.hpp"
#include "esdf/run_config.hpp"

namespace esdf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitConvergence = 2;
inline constexpr int kExitIo = 3;

// Text products of each command (CSV with 17 significant digits or
// "key = value" reports). `ok` receives false when an oracle or the sweep
// misses its threshold.
std::string sdf_csv(const presets::Scenario& s);
std::string dynamics_csv(const presets::Scenario& s, std::string* summary = nullptr);
std::string calibrate_text(const presets::Scenario& s);
std::string oracle_text(const presets::Scenario& s, bool* ok);
std::string sweep_text(const presets::Scenario& s, bool* ok);
std::string presets_text();

// Writes through a temporary file in the target directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

// Exit code for an exception and the one-line error record.
int exit_code_for(const std::exception& e);
std::string error_record(int code, const std::string& message);

// Executes the command; products go to the output path (or `out`), the
// error record to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace esdf::cli
