#include "esdf/presets.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "esdf/errors.hpp"

namespace esdf::presets {
namespace {

using spectral::Model;
using spectral::SpectralDensityId;
using spectral::Variant;

std::string fmt(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v))
        throw DomainError("value of '" + std::string(key) + "' is not a number: '" +
                          std::string(text) + "'");
    return v;
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end)
        throw DomainError("value of '" + std::string(key) + "' is not an integer: '" +
                          std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw DomainError("value of '" + std::string(key) + "' is not a boolean: '" +
                      std::string(text) + "'");
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto pos = text.find(',');
        auto item = text.substr(0, pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.push_back(item);
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return out;
}

SpectralDensityId parse_density(std::string_view text) {
    if (text.size() != 3 || text[1] != '_')
        throw DomainError("density must look like A_I or D_F, got '" + std::string(text) + "'");
    return {spectral::parse_model(text.substr(0, 1)), spectral::parse_variant(text.substr(2, 1))};
}

Kind parse_kind(std::string_view text) {
    if (text == "wfunction") return Kind::WFunction;
    if (text == "sdf") return Kind::SpectralDensity;
    if (text == "dynamics") return Kind::Dynamics;
    throw DomainError("kind must be wfunction, sdf or dynamics");
}

struct Field {
    std::string key;
    std::function<void(Scenario&, std::string_view)> set;
    std::function<std::string(const Scenario&)> get;
};

Field real(std::string key, double Scenario::*member) {
    return {key, [key, member](Scenario& s, std::string_view v) { s.*member = parse_double(key, v); },
            [member](const Scenario& s) { return fmt(s.*member); }};
}

Field param(std::string key, double spectral::ModelParams::*member) {
    return {key,
            [key, member](Scenario& s, std::string_view v) { s.params.*member = parse_double(key, v); },
            [member](const Scenario& s) { return fmt(s.params.*member); }};
}

Field integer(std::string key, int Scenario::*member) {
    return {key, [key, member](Scenario& s, std::string_view v) { s.*member = parse_int(key, v); },
            [member](const Scenario& s) { return std::to_string(s.*member); }};
}

Field boolean(std::string key, bool Scenario::*member) {
    return {key, [key, member](Scenario& s, std::string_view v) { s.*member = parse_bool(key, v); },
            [member](const Scenario& s) { return std::string(s.*member ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back({"kind", [](Scenario& s, std::string_view v) { s.kind = parse_kind(v); },
                     [](const Scenario& s) { return kind_name(s.kind); }});
        f.push_back({"densities",
                     [](Scenario& s, std::string_view v) {
                         std::vector<SpectralDensityId> ids;
                         for (auto item : split_list(v)) ids.push_back(parse_density(item));
                         if (ids.empty()) throw DomainError("densities must not be empty");
                         s.densities = ids;
                     },
                     [](const Scenario& s) {
                         std::string out;
                         for (const auto& id : s.densities)
                             out += (out.empty() ? "" : ",") + spectral::to_string(id);
                         return out;
                     }});
        f.push_back(param("model.eta", &spectral::ModelParams::eta));
        f.push_back(real("model.eta_prime", &Scenario::eta_prime));
        f.push_back(real("model.calibration_omega", &Scenario::calibration_omega));
        f.push_back(param("model.omega_c", &spectral::ModelParams::omega_c));
        f.push_back(param("model.lambda", &spectral::ModelParams::lambda));
        f.push_back(param("model.kappa1", &spectral::ModelParams::kappa1));
        f.push_back(param("model.kappa2", &spectral::ModelParams::kappa2));
        f.push_back(param("model.mass", &spectral::ModelParams::mass));
        f.push_back(param("model.Omega0", &spectral::ModelParams::omega0));
        f.push_back({"model.Gamma",
                     [](Scenario& s, std::string_view v) {
                         if (v.empty() || v == "none") s.hold_gamma.reset();
                         else s.hold_gamma = parse_double("model.Gamma", v);
                     },
                     [](const Scenario& s) {
                         return s.hold_gamma ? fmt(*s.hold_gamma) : std::string("none");
                     }});
        f.push_back(boolean("populations.run", &Scenario::run_populations));
        f.push_back(real("populations.epsilon", &Scenario::pop_epsilon));
        f.push_back(real("populations.delta", &Scenario::pop_delta));
        f.push_back(boolean("coherences.run", &Scenario::run_coherences));
        f.push_back(real("coherences.epsilon", &Scenario::coh_epsilon));
        f.push_back(real("coherences.delta", &Scenario::coh_delta));
        f.push_back(real("run.delta_t", &Scenario::delta_t));
        f.push_back(integer("run.memory", &Scenario::memory));
        f.push_back(integer("run.steps", &Scenario::steps));
        f.push_back(integer("run.threads", &Scenario::threads));
        f.push_back(real("bath.temperature", &Scenario::temperature));
        f.push_back(real("bath.scale_hz", &Scenario::scale_hz));
        f.push_back(real("bath.angular_per_hz", &Scenario::angular_per_hz));
        f.push_back(real("grid.omega_min", &Scenario::grid_min));
        f.push_back(real("grid.omega_max", &Scenario::grid_max));
        f.push_back(integer("grid.points", &Scenario::grid_points));
        f.push_back({"wfunction.cutoffs",
                     [](Scenario& s, std::string_view v) {
                         std::vector<double> c;
                         for (auto item : split_list(v)) c.push_back(parse_double("wfunction.cutoffs", item));
                         if (c.empty()) throw DomainError("wfunction.cutoffs must not be empty");
                         s.w_cutoffs = c;
                     },
                     [](const Scenario& s) {
                         std::string out;
                         for (double c : s.w_cutoffs) out += (out.empty() ? "" : ",") + fmt(c);
                         return out;
                     }});
        return f;
    }();
    return table;
}

const Field& field(std::string_view key) {
    for (const auto& f : fields())
        if (f.key == key) return f;
    throw DomainError("unknown parameter key '" + std::string(key) + "'");
}

Scenario model_a(std::string name, double omega_c) {
    Scenario s;
    s.name = std::move(name);
    s.params.omega_c = omega_c;
    s.eta_prime = 0.004;
    std::ostringstream os;
    os << "model A, I vs F, omega_c = " << omega_c << ", eta' = 0.004, T = 300 K, dt = 0.1, "
       << "memory 3";
    s.provenance = os.str();
    return s;
}

Scenario model_b(std::string name, double omega_c, bool caption_reading) {
    Scenario s;
    s.name = std::move(name);
    s.params.omega_c = omega_c;
    s.params.lambda = 1.0;
    s.params.kappa1 = 1.0;
    s.params.kappa2 = 1.0;
    s.eta_prime = 0.0035;
    s.densities = {{Model::B, Variant::Infinite}, {Model::B, Variant::Finite}};
    std::ostringstream os;
    os << "model B, I vs F, omega_c = " << omega_c << ", eta' = 0.0035, lambda = kappa1 = 1, ";
    if (caption_reading) {
        s.params.omega0 = 10.0;
        s.hold_gamma = 52.0;
        os << "Gamma = 52 held, Omega0 = 10";
    } else {
        s.params.omega0 = 52.0;
        os << "Omega0 = 52, M = 1";
    }
    s.provenance = os.str();
    return s;
}

} // namespace

std::string kind_name(Kind k) {
    switch (k) {
    case Kind::WFunction: return "wfunction";
    case Kind::SpectralDensity: return "sdf";
    case Kind::Dynamics: return "dynamics";
    }
    return "?";
}

void Scenario::validate() const {
    params.validate();
    if (densities.empty()) throw DomainError("scenario needs at least one density");
    if (eta_prime < 0.0) throw DomainError("eta' must be non-negative");
    if (!(calibration_omega > 0.0)) throw DomainError("calibration frequency must be positive");
    if (hold_gamma && !(*hold_gamma > 0.0)) throw DomainError("Gamma must be positive");
    if (!(delta_t > 0.0)) throw DomainError("delta_t must be positive");
    if (memory < 0) throw DomainError("memory must be non-negative");
    if (steps < memory) throw DomainError("steps must be at least the memory length");
    if (threads < 1) throw DomainError("threads must be positive");
    if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
    if (!(scale_hz > 0.0) || !(angular_per_hz > 0.0)) throw DomainError("scale must be positive");
    if (!(grid_min > 0.0) || !(grid_max >= grid_min) || grid_points < 1)
        throw DomainError("invalid frequency grid");
    for (double c : w_cutoffs)
        if (!(c > 0.0)) throw DomainError("W cutoffs must be positive");
}

const std::vector<std::string>& override_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

void apply_override(Scenario& s, std::string_view key, std::string_view value) {
    field(key).set(s, value);
}

std::string get_value(const Scenario& s, std::string_view key) { return field(key).get(s); }

const std::vector<Scenario>& catalog() {
    static const std::vector<Scenario> all = [] {
        std::vector<Scenario> c;

        Scenario f1;
        f1.name = "fig1";
        f1.kind = Kind::WFunction;
        f1.provenance = "W(omega) and Theta(omega) for omega_c = 4, 5, 10, 25, 100";
        f1.grid_min = 0.05;
        f1.grid_max = 10.0;
        f1.grid_points = 200;
        c.push_back(f1);

        const char* tags[] = {"a", "b", "c", "d"};
        const double fig2_cut[] = {4.0, 4.1, 4.3, 10.0};
        for (int i = 0; i < 4; ++i)
            c.push_back(model_a(std::string("fig2-") + tags[i], fig2_cut[i]));

        const double fig3_cut[] = {3.0, 5.0, 10.0, 25.0};
        for (int i = 0; i < 4; ++i)
            c.push_back(model_b(std::string("fig3-text-") + tags[i], fig3_cut[i], false));
        for (int i = 0; i < 4; ++i)
            c.push_back(model_b(std::string("fig3-caption-") + tags[i], fig3_cut[i], true));

        Scenario f4;
        f4.name = "fig4";
        f4.kind = Kind::SpectralDensity;
        f4.provenance = "all eight densities, eta = 0.02, lambda = kappa1 = kappa2 = 1, "
                        "Gamma = 52, Omega0 = 10, omega_c = 11, omega in (0, 20]";
        f4.params.eta = 0.02;
        f4.params.lambda = f4.params.kappa1 = f4.params.kappa2 = 1.0;
        f4.params.omega0 = 10.0;
        f4.params.omega_c = 11.0;
        f4.hold_gamma = 52.0;
        f4.eta_prime = 0.0;
        f4.calibration_omega = 10.0;
        f4.densities = spectral::all_densities();
        f4.grid_min = 0.05;
        f4.grid_max = 20.0;
        f4.grid_points = 400;
        c.push_back(f4);

        Scenario f5;
        f5.name = "fig5";
        f5.provenance = "models C vs D, I and F, kappa1 = kappa2 = lambda = 1, Omega0 = 10, "
                        "omega_c = 7, eta' = 0.0035, M = 1";
        f5.params.lambda = f5.params.kappa1 = f5.params.kappa2 = 1.0;
        f5.params.omega0 = 10.0;
        f5.params.omega_c = 7.0;
        f5.eta_prime = 0.0035;
        f5.densities = {{Model::C, Variant::Infinite}, {Model::D, Variant::Infinite},
                        {Model::C, Variant::Finite}, {Model::D, Variant::Finite}};
        c.push_back(f5);

        Scenario deph = model_a("dephasing", 4.0);
        deph.provenance = "pure dephasing: Delta = 0, epsilon = 1, model A (I and F), "
                          "omega_c = 4, eta' = 0.004, T = 300 K";
        deph.run_populations = false;
        deph.coh_delta = 0.0;
        c.push_back(deph);
        return c;
    }();
    return all;
}

const Scenario& find(std::string_view name) {
    for (const auto& s : catalog())
        if (s.name == name) return s;
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

spectral::ModelParams resolve(const Scenario& s, spectral::SpectralDensityId id) {
    spectral::ModelParams p = s.params;
    if (s.eta_prime > 0.0) p.eta = spectral::calibrate_eta(id, p, s.calibration_omega, s.eta_prime,
                                                            s.hold_gamma);
    if (s.hold_gamma) spectral::apply_gamma(p, *s.hold_gamma);
    p.validate();
    return p;
}

bath::ThermalBath make_bath(const Scenario& s, spectral::SpectralDensityId id) {
    bath::ThermalBath b;
    b.id = id;
    b.params = resolve(s, id);
    b.temperature = s.temperature;
    b.scale_hz = s.scale_hz;
    b.angular_per_hz = s.angular_per_hz;
    b.validate();
    return b;
}

quapi::SystemSpec population_system(const Scenario& s) {
    quapi::SystemSpec sys;
    sys.epsilon = s.pop_epsilon;
    sys.delta = s.pop_delta;
    sys.rho0 = quapi::SystemSpec::ground_state();
    return sys;
}

quapi::SystemSpec coherence_system(const Scenario& s) {
    quapi::SystemSpec sys;
    sys.epsilon = s.coh_epsilon;
    sys.delta = s.coh_delta;
    sys.rho0 = quapi::SystemSpec::superposition();
    return sys;
}

quapi::PropagationConfig propagation(const Scenario& s) {
    quapi::PropagationConfig c;
    c.delta_t = s.delta_t;
    c.memory_length = s.memory;
    c.n_steps = s.steps;
    c.threads = s.threads;
    return c;
}

spectral::FrequencyGrid grid(const Scenario& s) {
    return spectral::FrequencyGrid::linear(s.grid_min, s.grid_max,
                                           static_cast<std::size_t>(s.grid_points));
}

} // namespace esdf::presets
