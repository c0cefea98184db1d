// esdf: command-line front end
//
//   esdf <sdf|dynamics|calibrate|oracle|sweep|presets> [options]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "esdf/commands.hpp"
#include "esdf/errors.hpp"

int main(int argc, char** argv) {
    using namespace esdf::cli;

    CLI::App app{"Effective spectral densities and qubit dynamics"};
    std::string command, preset, out, config_file;
    std::vector<std::string> sets;
    bool deterministic = false;
    std::optional<double> delta_t, omega0, eta_prime;
    std::optional<int> memory, steps;
    std::optional<std::string> model, variant;

    app.add_option("command", command, "sdf, dynamics, calibrate, oracle, sweep or presets");
    app.add_option("--config", config_file, "run configuration file ([run] and [overrides])");
    app.add_option("--preset", preset, "named parameter bundle (see `esdf presets`)");
    app.add_option("--out", out, "output file (written atomically); default standard output");
    app.add_option("--set", sets, "parameter override key=value (repeatable)");
    app.add_flag("--deterministic", deterministic, "single-threaded, bit-reproducible output");
    app.add_option("--delta-t", delta_t, "time step in units of 1/scale");
    app.add_option("--memory", memory, "memory length in time steps");
    app.add_option("--steps", steps, "number of time steps");
    app.add_option("--model", model, "model A, B, C or D (calibrate)");
    app.add_option("--variant", variant, "variant I or F (calibrate)");
    app.add_option("--omega0", omega0, "calibration frequency in units of scale");
    app.add_option("--eta-prime", eta_prime, "target effective coupling J(omega0)/omega0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_record(kExitDomain, e.what()) << '\n';
        return kExitDomain;
    }

    RunConfig rc;
    try {
        if (!config_file.empty()) {
            std::ifstream f(config_file);
            if (!f) throw esdf::IoError("cannot read configuration '" + config_file + "'");
            std::stringstream buf;
            buf << f.rdbuf();
            rc = RunConfig::parse(buf.str());
        } else if (command.empty()) {
            throw esdf::DomainError("no command given (try `esdf --help`)");
        }
        if (!command.empty()) rc.command = parse_command(command);
        if (!preset.empty()) rc.preset = preset;
        if (!out.empty()) rc.output_path = out;
        if (deterministic) rc.deterministic = true;
        for (const auto& s : sets) rc.overrides.push_back(split_assignment(s));
        auto num = [](double v) {
            std::ostringstream os;
            os.precision(17);
            os << v;
            return os.str();
        };
        if (delta_t) rc.overrides.emplace_back("run.delta_t", num(*delta_t));
        if (memory) rc.overrides.emplace_back("run.memory", std::to_string(*memory));
        if (steps) rc.overrides.emplace_back("run.steps", std::to_string(*steps));
        if (omega0) rc.overrides.emplace_back("model.calibration_omega", num(*omega0));
        if (eta_prime) rc.overrides.emplace_back("model.eta_prime", num(*eta_prime));
        if (model || variant)
            rc.overrides.emplace_back("densities", model.value_or("A") + "_" + variant.value_or("I"));
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        std::cerr << error_record(code, e.what()) << '\n';
        return code;
    }
    return run(rc, std::cout, std::cerr);
}
