#include "esdf/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "esdf/analysis.hpp"
#include "esdf/errors.hpp"
#include "esdf/specfun.hpp"
#if ESDF_WITH_ORACLES
#include "esdf/oracle.hpp"
#endif

namespace esdf::cli {
namespace {

using presets::Scenario;
using spectral::SpectralDensityId;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string label(SpectralDensityId id) { return spectral::to_string(id); }

std::string fmt_cutoff(double c) {
    std::ostringstream os;
    os << c;
    return os.str();
}

struct Run {
    SpectralDensityId id;
    double eta = 0.0;
    std::optional<quapi::TrajectoryResult> pop, coh;
};

std::vector<Run> run_dynamics(const Scenario& s) {
    std::vector<Run> runs;
    bath::BuildOptions build;
    build.threads = s.threads;
    for (const auto& id : s.densities) {
        Run r;
        r.id = id;
        const auto b = presets::make_bath(s, id);
        r.eta = b.params.eta;
        const auto cfg = presets::propagation(s);
        const auto coeffs = bath::build_coefficients(b, cfg.delta_t, cfg.memory_length, build);
        if (s.run_populations) r.pop = quapi::propagate(presets::population_system(s), coeffs, cfg);
        if (s.run_coherences) r.coh = quapi::propagate(presets::coherence_system(s), coeffs, cfg);
        runs.push_back(std::move(r));
    }
    return runs;
}

} // namespace

std::string sdf_csv(const Scenario& s) {
    s.validate();
    const auto g = presets::grid(s);
    std::ostringstream os;
    if (s.kind == presets::Kind::WFunction) {
        os << "omega_over_scale";
        for (double c : s.w_cutoffs) {
            const auto t = fmt_cutoff(c);
            os << ",re_W_wc" << t << ",im_W_wc" << t << ",theta_wc" << t;
        }
        os << '\n';
        for (double w : g.points()) {
            os << num(w);
            for (double c : s.w_cutoffs) {
                const Complex v = specfun::w_function(w, c);
                os << ',' << num(v.real()) << ',' << num(v.imag()) << ','
                   << num(specfun::theta(w, c));
            }
            os << '\n';
        }
        return os.str();
    }
    std::vector<std::vector<std::pair<double, double>>> cols;
    os << "omega_over_scale";
    for (const auto& id : s.densities) {
        os << ",J_" << label(id);
        cols.push_back(spectral::sample(id, presets::resolve(s, id), g));
    }
    os << '\n';
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << num(g.points()[i]);
        for (const auto& c : cols) os << ',' << num(c[i].second);
        os << '\n';
    }
    return os.str();
}

std::string dynamics_csv(const Scenario& s, std::string* summary) {
    s.validate();
    const auto runs = run_dynamics(s);
    std::ostringstream os;
    os << "t_over_scale";
    for (const auto& r : runs)
        if (r.pop) os << ",rho11_" << label(r.id);
    for (const auto& r : runs)
        if (r.coh) os << ",abs_rho12_" << label(r.id);
    os << '\n';
    const std::size_t n = static_cast<std::size_t>(s.steps) + 1;
    const double dt = s.delta_t;
    for (std::size_t i = 0; i < n; ++i) {
        os << num(static_cast<double>(i) * dt);
        for (const auto& r : runs)
            if (r.pop) os << ',' << num(r.pop->rho[i](0, 0).real());
        for (const auto& r : runs)
            if (r.coh) os << ',' << num(std::abs(r.coh->rho[i](0, 1)));
        os << '\n';
    }
    if (summary) {
        std::ostringstream sm;
        for (const auto& r : runs) {
            sm << label(r.id) << ": eta = " << num(r.eta);
            for (const auto* t : {&r.pop, &r.coh}) {
                if (!*t) continue;
                const auto& d = (*t)->diagnostics;
                if (t == &r.pop) sm << ", settling_time = " << num(analysis::settling_time(**t));
                else sm << ", decoherence_time = " << num(analysis::decoherence_time(**t));
                sm << ", trace_drift = " << num(d.max_trace_drift)
                   << ", hermiticity_defect = " << num(d.max_hermiticity_defect)
                   << ", min_eigenvalue = " << num(d.min_eigenvalue);
            }
            sm << '\n';
        }
        *summary = sm.str();
    }
    return os.str();
}

std::string calibrate_text(const Scenario& s) {
    s.validate();
    if (!(s.eta_prime > 0.0)) throw DomainError("calibrate needs eta' > 0");
    std::ostringstream os;
    for (const auto& id : s.densities) {
        const auto p = presets::resolve(s, id);
        os << label(id) << ": eta = " << num(p.eta) << " (omega0 = " << num(s.calibration_omega)
           << ", eta' = " << num(s.eta_prime) << ", mass = " << num(p.mass) << ")\n";
    }
    return os.str();
}

std::string oracle_text(const Scenario& s, bool* ok) {
#if ESDF_WITH_ORACLES
    s.validate();
    std::ostringstream os;
    bool all = true;
    auto emit = [&](const oracle::OracleReport& r) {
        r.write(os);
        os << '\n';
        all = all && r.passed;
    };

    {
        std::vector<double> ref, got;
        for (int i = 0; i < 200; ++i) {
            const double m = 0.01 + (5.0 - 0.01) * i / 199.0;
            ref.push_back(oracle::re_w_quadrature(m));
            got.push_back(specfun::w_function(m, 1.0).real());
        }
        emit(oracle::compare("re_w_vs_sine_quadrature", ref, got, "m in [0.01, 5], 200 points",
                             1e-8));
    }
    {
        std::vector<double> ref, got;
        for (double c : s.w_cutoffs) {
            const double w = s.calibration_omega;
            ref.push_back(oracle::pv_quadrature_R(w, c));
            // The principal value equals (pi/omega) Re W, the negative of Re R.
            got.push_back(-specfun::r_function(w, c).real());
        }
        emit(oracle::compare("principal_value_vs_minus_re_R", ref, got,
                             "omega = calibration frequency, omega_c in wfunction.cutoffs", 1e-9));
    }
    if (s.kind == presets::Kind::Dynamics) {
        for (const auto& id : s.densities) {
            const auto b = presets::make_bath(s, id);
            const auto coeffs = bath::build_coefficients(b, s.delta_t, s.memory);
            const oracle::CorrelationTable alpha(b, 1000);
            std::vector<double> ref, got;
            const double h = s.delta_t, hh = 0.5 * h;
            auto add = [&](Complex main, const bath::CellPair& cells) {
                const Complex o = oracle::coefficient_quadrature(alpha, cells, 2);
                ref.push_back(o.real());
                ref.push_back(o.imag());
                got.push_back(main.real());
                got.push_back(main.imag());
            };
            add(coeffs.full[0], {0.0, h, 0.0, h, true});
            add(coeffs.half_self, {0.0, hh, 0.0, hh, true});
            for (int d = 1; d <= s.memory; ++d) {
                const double t = d * h;
                add(coeffs.full[d], {t - hh, t + hh, -hh, hh, false});
                add(coeffs.from_origin[d], {t - hh, t + hh, 0.0, hh, false});
                add(coeffs.end_full[d], {t - hh, t, -hh, hh, false});
                add(coeffs.end_origin[d], {t - hh, t, 0.0, hh, false});
            }
            emit(oracle::compare("influence_coefficients_" + label(id), ref, got,
                                 "all coefficient kinds, lags 0.." + std::to_string(s.memory),
                                 1e-8));
            if (s.run_coherences && s.coh_delta == 0.0) {
                const auto traj = quapi::propagate(presets::coherence_system(s), coeffs,
                                                   presets::propagation(s));
                const auto exact = oracle::exact_dephasing(b, 0.5, traj.times);
                emit(oracle::compare("pure_dephasing_" + label(id), exact, traj.abs_rho12(),
                                     "t = k dt, k = 0.." + std::to_string(s.steps), 0.02 * 0.5));
            }
        }
    }
    if (ok) *ok = all;
    return os.str();
#else
    (void)s;
    (void)ok;
    throw DomainError("this build does not include the oracle module");
#endif
}

std::string sweep_text(const Scenario& s, bool* ok) {
    s.validate();
    std::ostringstream os;
    bool all = true;
    bath::BuildOptions build;
    build.threads = s.threads;
    for (const auto& id : s.densities) {
        const auto b = presets::make_bath(s, id);
        const auto cfg = presets::propagation(s);
        auto one = [&](const char* what, const quapi::SystemSpec& sys) {
            const auto rep = quapi::convergence_sweep(sys, b, cfg, 0.02, build);
            os << label(id) << ' ' << what << ": half_step_rho11 = " << num(rep.dev_half_step_rho11)
               << ", half_step_abs_rho12 = " << num(rep.dev_half_step_rho12)
               << ", memory_plus_one_rho11 = " << num(rep.dev_memory_rho11)
               << ", memory_plus_one_abs_rho12 = " << num(rep.dev_memory_rho12)
               << ", threshold = " << num(rep.threshold)
               << ", converged = " << (rep.converged() ? "true" : "false") << '\n';
            all = all && rep.converged();
        };
        if (s.run_populations) one("populations", presets::population_system(s));
        if (s.run_coherences) one("coherences", presets::coherence_system(s));
    }
    if (ok) *ok = all;
    return os.str();
}

std::string presets_text() {
    std::ostringstream os;
    for (const auto& p : presets::catalog())
        os << p.name << " (v" << p.version << ", " << presets::kind_name(p.kind)
           << "): " << p.provenance << '\n';
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
        f << content;
        f.flush();
        if (!f) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path + "'");
    }
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const QuadratureError*>(&e) || dynamic_cast<const ConvergenceError*>(&e) ||
        dynamic_cast<const InvariantError*>(&e))
        return kExitConvergence;
    return kExitDomain;
}

std::string error_record(int code, const std::string& message) {
    const char* type = code == kExitIo ? "io" : code == kExitConvergence ? "convergence" : "domain";
    std::string escaped;
    for (char c : message) {
        if (c == '"' || c == '\\') escaped += '\\';
        if (c == '\n') {
            escaped += "\\n";
            continue;
        }
        escaped += c;
    }
    return "esdf-error code=" + std::to_string(code) + " type=" + type + " message=\"" + escaped +
           "\"";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        presets::Scenario s = config.command == Command::Presets ? presets::Scenario{}
                                                                 : config.scenario();
        if (config.deterministic) s.threads = 1;
        std::string product, summary;
        bool ok = true;
        std::string failure;
        switch (config.command) {
        case Command::Sdf: product = sdf_csv(s); break;
        case Command::Dynamics: product = dynamics_csv(s, &summary); break;
        case Command::Calibrate: product = calibrate_text(s); break;
        case Command::Oracle:
            product = oracle_text(s, &ok);
            failure = "one or more oracle comparisons exceeded their tolerance";
            break;
        case Command::Sweep:
            product = sweep_text(s, &ok);
            failure = "convergence sweep exceeded its threshold";
            break;
        case Command::Presets: product = presets_text(); break;
        }
        if (config.output_path.empty()) {
            out << product;
        } else {
            write_atomic(config.output_path, product);
            out << summary;
        }
        if (!ok) {
            err << error_record(kExitConvergence, failure) << '\n';
            return kExitConvergence;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        err << error_record(code, e.what()) << '\n';
        return code;
    }
}

} // namespace esdf::cli
