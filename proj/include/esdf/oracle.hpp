// oracle.hpp: slow, independent reference computations
//
// Each routine takes a different numerical route from the production code it
// checks: real-axis quadratures instead of series, direct time-domain double
// integrals instead of frequency kernels, and exact diagonalization instead
// of path integrals.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "esdf/bath.hpp"
#include "esdf/quapi.hpp"

namespace esdf::oracle {

struct OracleReport {
    std::string name;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    std::string grid;
    double tolerance = 0.0;
    bool passed = false;

    // name, errors, grid and verdict as "key = value" lines.
    void write(std::ostream& os) const;
};

// Builds a report from paired samples; passes when max_abs_error <= tolerance.
OracleReport compare(std::string name, const std::vector<double>& reference,
                     const std::vector<double>& candidate, std::string grid, double tolerance);

// S(m) = int_0^inf sin(m x)/(1 + x^2) dx: adaptive quadrature up to x = 50/m,
// then half-period pieces between zeros summed with Wynn acceleration.
double sine_transform(double m);

// Re W(m) = -S(m)/pi.
double re_w_quadrature(double m);

// Principal value of int_0^inf exp(-w'/omega_c)/(w'^2 - omega^2) dw' by
// symmetric excision of the pole and Richardson extrapolation in the gap.
double pv_quadrature_R(double omega, double omega_c);

// Direct quadratures of the defining integrals.
double shi_quadrature(double m);
double ci_quadrature(double m);                 // gamma + ln m + int_0^m (cos t - 1)/t dt
double cos_integral_remainder(double m);        // int_0^m (cos t - 1)/t dt

// alpha(tau) on a fixed composite Gauss-Legendre frequency grid.
class CorrelationTable {
public:
    explicit CorrelationTable(const bath::ThermalBath& bath, int panels = 4000);
    Complex operator()(double tau) const;

private:
    std::vector<double> nodes_, weight_re_, weight_im_;
};

// Influence coefficient as a tensor Gauss-Legendre double integral of
// alpha(t' - t'') over the two cells (ordered triangle for a self term).
Complex coefficient_quadrature(const CorrelationTable& alpha, const bath::CellPair& cells,
                               int subdivisions = 4);

// |rho12(t)| = |rho12(0)| exp(-Gamma(t)),
// Gamma(t) = (4/pi) int J(w)/w^2 coth(beta w/2)(1 - cos w t) dw
// (for discrete modes: sum 2 c^2/w^3 coth(beta w/2)(1 - cos w t)).
std::vector<double> exact_dephasing(const bath::ThermalBath& bath, double abs_rho12_0,
                                    const std::vector<double>& times);

struct SmallBathOptions {
    int fock_cut = 30;
    double thermal_truncation = 1e-10;
    double population_bound = 1e-8;
    std::size_t memory_budget = quapi::default_memory_budget();
};

// Dense exact evolution of qubit plus <= 4 explicit modes (unit mass,
// coupling sigma_z sum c_i x_i) from a factorized thermal state.
quapi::TrajectoryResult small_bath_exact(const quapi::SystemSpec& system,
                                         const std::vector<bath::Mode>& modes, double beta,
                                         const std::vector<double>& times,
                                         const SmallBathOptions& opt = {});

} // namespace esdf::oracle
