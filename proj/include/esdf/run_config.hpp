// run_config.hpp: one CLI invocation as data, with a flat text form
//
//   [run]
//   command = dynamics
//   preset = fig2-a
//   output = run.csv
//   deterministic = true
//   [overrides]
//   model.omega_c = 4.5
//
// Blank lines and lines starting with '#' are ignored. Unknown sections and
// keys are rejected.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esdf/presets.hpp"

namespace esdf::cli {

enum class Command { Sdf, Dynamics, Calibrate, Oracle, Sweep, Presets };

std::string command_name(Command c);
Command parse_command(std::string_view s);

struct RunConfig {
    Command command = Command::Dynamics;
    std::optional<std::string> preset;
    std::vector<std::pair<std::string, std::string>> overrides; // applied in order
    std::string output_path;  // empty: standard output
    bool deterministic = false;

    // Preset (or the default scenario) with every override applied.
    presets::Scenario scenario() const;

    std::string serialize() const;
    static RunConfig parse(std::string_view text);

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Splits "key=value" (surrounding spaces trimmed).
std::pair<std::string, std::string> split_assignment(std::string_view text);

} // namespace esdf::cli
