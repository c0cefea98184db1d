// spectral.hpp: effective spectral densities J_x^{I/F}(omega), x in {A, B, C, D}
//
// Model A: qubit in an Ohmic bath.
// Model B: qubit coupled to an intermediate harmonic oscillator (IHO) that
//          alone sees the bath.
// Model C: qubit and IHO in independent baths.
// Model D: qubit and IHO in one common bath.
// Variant I drops W(omega) (infinite-cutoff reduction); variant F keeps it.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esdf/specfun.hpp"

namespace esdf::spectral {

enum class Model { A, B, C, D };
enum class Variant { Infinite, Finite };

struct SpectralDensityId {
    Model model = Model::A;
    Variant variant = Variant::Infinite;

    friend bool operator==(const SpectralDensityId&, const SpectralDensityId&) = default;
};

// "A_I", "D_F", ...
std::string to_string(SpectralDensityId id);
char model_letter(Model m);
char variant_letter(Variant v);
Model parse_model(std::string_view s);
Variant parse_variant(std::string_view s);
std::vector<SpectralDensityId> all_densities();

struct ModelParams {
    double eta = 0.0;        // Ohmic prefactor
    double omega_c = 1.0;    // bath cutoff
    double lambda = 0.0;     // qubit-IHO coupling
    double kappa1 = 0.0;     // IHO-bath control parameter
    double kappa2 = 1.0;     // qubit-bath control parameter
    double mass = 1.0;       // IHO mass
    double omega0 = 1.0;     // IHO frequency Omega_0

    // Gamma = kappa1 * eta / M
    double gamma() const { return kappa1 * eta / mass; }

    // Throws DomainError unless eta >= 0, omega_c > 0, M > 0, Omega_0 > 0 and
    // every field is finite.
    void validate() const;
};

// Auxiliary quantities of the finite-cutoff forms.
double xi(const ModelParams& p, double omega);
Complex phi(const ModelParams& p, double omega);
Complex psi(const ModelParams& p, double omega);

// Closed-form J(omega) for the selected density. omega > 0.
// Throws SingularityError when a resonance denominator vanishes.
double evaluate(SpectralDensityId id, const ModelParams& p, double omega);

class FrequencyGrid {
public:
    explicit FrequencyGrid(std::vector<double> points);
    static FrequencyGrid linear(double lo, double hi, std::size_t n);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<double> points_;
};

// max over the grid of |J_from - J_to|. The parameters must sit on one of the
// documented limits (C->A, C->B, D->A, D->B, or from == to).
double reduction_check(SpectralDensityId from, SpectralDensityId to, const ModelParams& p,
                       const FrequencyGrid& grid);

// Returns eta such that evaluate(id, p with eta, omega0) / omega0 = eta_prime.
// If hold_gamma is set, Gamma is held at that value (M = kappa1 eta / Gamma)
// while eta varies; otherwise M stays fixed.
double calibrate_eta(SpectralDensityId id, ModelParams p, double omega0, double eta_prime,
                     std::optional<double> hold_gamma = std::nullopt);

// Applies a held Gamma to the mass of p (no-op when kappa1 * eta == 0).
void apply_gamma(ModelParams& p, double gamma);

std::vector<std::pair<double, double>> sample(SpectralDensityId id, const ModelParams& p,
                                              const FrequencyGrid& grid);

} // namespace esdf::spectral
