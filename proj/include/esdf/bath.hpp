// bath.hpp: thermal bath correlation and discretized influence coefficients
//
// Units: hbar = 1 and every frequency is a multiple of the scale frequency
// (Delta or epsilon of the qubit), so times are in units of 1/scale. The only
// dimensional inputs are the temperature in kelvin and the scale in Hz.
//
// Bath correlation:
//   alpha(t) = (1/pi) int_0^inf J(w) [coth(beta w / 2) cos(w t) - i sin(w t)] dw
// Influence coefficients are integrals of alpha(t' - t'') over pairs of time
// cells. With path points t_k = k dt and final time t_n, the cell of point k is
// [max(0, t_k - dt/2), min(t_n, t_k + dt/2)]; for k = k' the double integral
// is ordered (t' > t'').

#pragma once

#include <iosfwd>
#include <vector>

#include "esdf/spectral.hpp"

namespace esdf::bath {

inline constexpr double kHbar = 1.054571817e-34;   // J s
inline constexpr double kBoltzmann = 1.380649e-23; // J / K

// Explicit bath mode with unit mass: frequency w_i and coupling c_i.
// Its share of J is (pi/2) c_i^2 / w_i delta(w - w_i).
struct Mode {
    double omega = 1.0;
    double coupling = 0.0;
};

struct ThermalBath {
    spectral::SpectralDensityId id{};
    spectral::ModelParams params{};
    double temperature = 300.0;  // K
    double scale_hz = 1e12;      // frequency unit
    double angular_per_hz = 1.0; // rad/s per Hz of scale_hz (1 or 2 pi)
    double coupling_scale = 1.0; // overall multiplier of J
    bool discrete = false;       // use `modes` instead of the closed-form J
    std::vector<Mode> modes;

    // hbar * scale / (k_B T): inverse temperature in units of 1/scale.
    double beta() const;
    // J(omega) including coupling_scale (continuous baths only).
    double density(double omega) const;
    // Upper limit of the frequency integrals. Finite-cutoff densities grow
    // like cosh(omega/omega_c), so their integrals stop at omega_c; the other
    // densities stop at 50 times the largest intrinsic frequency.
    double omega_max() const;
    // Quadrature breakpoints: resonance neighbourhoods and a uniform comb.
    std::vector<double> breakpoints(double max_time) const;

    void validate() const;

    static ThermalBath discrete_modes(std::vector<Mode> modes, double temperature,
                                      double scale_hz = 1e12, double angular_per_hz = 1.0);
};

struct QuadratureReport {
    double worst_error = 0.0; // largest quadrature error estimate seen
    double tail_estimate = 0.0; // magnitude of the truncated tail (continuous baths)
};

// alpha(t), t >= 0 (negative t is evaluated through alpha(-t) = conj(alpha(t))).
Complex correlation(const ThermalBath& bath, double t, QuadratureReport* report = nullptr);

// Frequency kernel of one coefficient: the double time integral of
// exp(-i w (t' - t'')) over t' in A and t'' in B.
struct CellPair {
    double a_lo = 0.0, a_hi = 0.0; // later cell
    double b_lo = 0.0, b_hi = 0.0; // earlier cell
    bool same = false;             // A == B, ordered integral
};
Complex cell_kernel(const CellPair& cells, double omega);

// Generic cell-pair coefficient: (1/pi) int J [coth Re K + i Im K] dw.
Complex cell_coefficient(const ThermalBath& bath, const CellPair& cells,
                         QuadratureReport* report = nullptr);

class InfluenceCoefficients {
public:
    InfluenceCoefficients() = default;
    InfluenceCoefficients(double delta_t, int memory_length);

    double delta_t() const { return delta_t_; }
    int memory_length() const { return memory_length_; }

    // Coefficient coupling point k to point kp (0 <= kp <= k <= n) when the
    // path ends at point n. Zero beyond the memory length and for n = 0.
    Complex coefficient(int k, int kp, int n) const;

    // Lag-indexed tables, d = 0..memory_length (index 0 of the cross tables is 0).
    std::vector<Complex> full;        // both cells full (d = 0: ordered self term)
    std::vector<Complex> from_origin; // full cell k, half cell at t = 0
    std::vector<Complex> end_full;    // half cell at t_n, full cell
    std::vector<Complex> end_origin;  // half cell at t_n, half cell at t = 0
    Complex half_self{0.0, 0.0};      // ordered self term of a half cell

    QuadratureReport report;

    // Header line, then one row per lag with 17 significant digits.
    void write_table(std::ostream& os) const;

private:
    double delta_t_ = 0.0;
    int memory_length_ = 0;
};

struct BuildOptions {
    int threads = 1;           // independent coefficients computed concurrently
    bool deterministic = true; // results never depend on `threads`; kept for symmetry
};

InfluenceCoefficients build_coefficients(const ThermalBath& bath, double delta_t,
                                         int memory_length, const BuildOptions& opt = {});

} // namespace esdf::bath
