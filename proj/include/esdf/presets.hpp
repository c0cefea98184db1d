// presets.hpp: complete parameter bundles for runs, the shipped catalog, and
// flat-key overrides
//
// Every frequency is a multiple of the scale frequency (Delta for the
// population runs, epsilon for the coherence runs); times are in 1/scale.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esdf/bath.hpp"
#include "esdf/quapi.hpp"
#include "esdf/spectral.hpp"

namespace esdf::presets {

enum class Kind { WFunction, SpectralDensity, Dynamics };

struct Scenario {
    std::string name = "default";
    std::string provenance = "Ohmic bath, omega_c = 4, eta' = 0.004, T = 300 K";
    int version = 1;
    Kind kind = Kind::Dynamics;

    spectral::ModelParams params{.omega_c = 4.0};
    double eta_prime = 0.004;          // > 0: calibrate eta per density; 0: use params.eta
    double calibration_omega = 1.0;    // omega_0 of eta' = J(omega_0)/omega_0
    std::optional<double> hold_gamma;  // Gamma held fixed (M follows eta)
    std::vector<spectral::SpectralDensityId> densities{
        {spectral::Model::A, spectral::Variant::Infinite},
        {spectral::Model::A, spectral::Variant::Finite}};

    // Population run: rho(0) = |0><0|. Coherence run: rho(0) = |Psi0><Psi0|.
    bool run_populations = true;
    bool run_coherences = true;
    double pop_epsilon = 0.01, pop_delta = 1.0;
    double coh_epsilon = 1.0, coh_delta = 0.01;

    double delta_t = 0.1;
    int memory = 3;
    int steps = 200;
    int threads = 1;

    double temperature = 300.0;
    double scale_hz = 1e12;
    double angular_per_hz = 1.0;

    double grid_min = 0.05, grid_max = 20.0;
    int grid_points = 400;
    std::vector<double> w_cutoffs{4.0, 5.0, 10.0, 25.0, 100.0};

    void validate() const;
};

// Keys accepted by apply_override, in serialization order.
const std::vector<std::string>& override_keys();
// Sets one field from text; unknown keys and malformed values throw DomainError.
void apply_override(Scenario& s, std::string_view key, std::string_view value);
// Current value of a key as text (round-trips through apply_override).
std::string get_value(const Scenario& s, std::string_view key);

const std::vector<Scenario>& catalog();
const Scenario& find(std::string_view name);

// Model parameters for one density: eta calibrated to eta' (when eta' > 0)
// and the held Gamma applied to the mass.
spectral::ModelParams resolve(const Scenario& s, spectral::SpectralDensityId id);

bath::ThermalBath make_bath(const Scenario& s, spectral::SpectralDensityId id);
quapi::SystemSpec population_system(const Scenario& s);
quapi::SystemSpec coherence_system(const Scenario& s);
quapi::PropagationConfig propagation(const Scenario& s);
spectral::FrequencyGrid grid(const Scenario& s);

std::string kind_name(Kind k);

} // namespace esdf::presets
