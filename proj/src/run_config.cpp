#include "esdf/run_config.hpp"

#include <sstream>

#include "esdf/errors.hpp"

namespace esdf::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

std::string command_name(Command c) {
    switch (c) {
    case Command::Sdf: return "sdf";
    case Command::Dynamics: return "dynamics";
    case Command::Calibrate: return "calibrate";
    case Command::Oracle: return "oracle";
    case Command::Sweep: return "sweep";
    case Command::Presets: return "presets";
    }
    return "?";
}

Command parse_command(std::string_view s) {
    for (Command c : {Command::Sdf, Command::Dynamics, Command::Calibrate, Command::Oracle,
                      Command::Sweep, Command::Presets})
        if (command_name(c) == s) return c;
    throw DomainError("unknown command '" + std::string(s) + "'");
}

std::pair<std::string, std::string> split_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw DomainError("expected key=value, got '" + std::string(text) + "'");
    const auto key = trim(text.substr(0, eq));
    if (key.empty()) throw DomainError("empty key in '" + std::string(text) + "'");
    return {std::string(key), std::string(trim(text.substr(eq + 1)))};
}

presets::Scenario RunConfig::scenario() const {
    presets::Scenario s = preset ? presets::find(*preset) : presets::Scenario{};
    for (const auto& [k, v] : overrides) presets::apply_override(s, k, v);
    s.validate();
    return s;
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    os << "[run]\n";
    os << "command = " << command_name(command) << '\n';
    if (preset) os << "preset = " << *preset << '\n';
    if (!output_path.empty()) os << "output = " << output_path << '\n';
    os << "deterministic = " << (deterministic ? "true" : "false") << '\n';
    os << "[overrides]\n";
    for (const auto& [k, v] : overrides) os << k << " = " << v << '\n';
    return os.str();
}

RunConfig RunConfig::parse(std::string_view text) {
    RunConfig rc;
    std::string section;
    bool have_command = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto raw = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw DomainError("line " + std::to_string(line_no) + ": bad section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "run" && section != "overrides")
                throw DomainError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        auto [key, value] = split_assignment(line);
        if (section == "run") {
            if (key == "command") {
                rc.command = parse_command(value);
                have_command = true;
            } else if (key == "preset") {
                rc.preset = value;
            } else if (key == "output") {
                rc.output_path = value;
            } else if (key == "deterministic") {
                if (value != "true" && value != "false")
                    throw DomainError("deterministic must be true or false");
                rc.deterministic = value == "true";
            } else {
                throw DomainError("line " + std::to_string(line_no) + ": unknown key '" + key + "' in [run]");
            }
        } else if (section == "overrides") {
            bool known = false;
            for (const auto& k : presets::override_keys()) known = known || k == key;
            if (!known)
                throw DomainError("line " + std::to_string(line_no) + ": unknown parameter key '" + key + "'");
            rc.overrides.emplace_back(key, value);
        } else {
            throw DomainError("line " + std::to_string(line_no) + ": key outside a section");
        }
    }
    if (!have_command) throw DomainError("configuration lacks a command");
    return rc;
}

} // namespace esdf::cli
