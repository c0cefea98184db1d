// quapi.hpp: finite-memory iterative tensor propagation of the qubit's
// reduced density matrix
//
// H = (1/2)(eps sigma_z + Delta sigma_x) + bath coupled through sigma_z.
// Basis index 0 is |0> (sigma_z = +1), index 1 is |1> (sigma_z = -1).
// A path point is one base-4 digit x = 2 i_plus + i_minus carrying the
// forward and backward spin of that time slice.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "esdf/bath.hpp"

namespace esdf::quapi {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

struct SystemSpec {
    double epsilon = 0.0; // bias, in scale units
    double delta = 1.0;   // tunnelling, in scale units
    Matrix2c rho0 = Matrix2c::Identity() * 0.5;

    // Hermitian, unit trace, eigenvalues >= -1e-12.
    void validate() const;

    static Matrix2c ground_state();      // |0><0|
    static Matrix2c superposition();     // |Psi0><Psi0|, Psi0 = (|0> + |1>)/sqrt(2)
};

// Default storage limit: environment variable ESDF_MEMORY_BUDGET (bytes) if
// set, otherwise 1 GiB.
std::size_t default_memory_budget();

struct PropagationConfig {
    double delta_t = 0.1;
    int memory_length = 3;
    int n_steps = 200;
    std::size_t memory_budget = default_memory_budget();
    int threads = 1;

    // Bytes used by the two augmented-tensor buffers.
    std::size_t tensor_bytes() const;
    // Throws DomainError on invalid fields and MemoryBudgetError when the
    // augmented tensor does not fit the budget.
    void validate() const;
};

struct Diagnostics {
    double max_trace_drift = 0.0;
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 1.0;
    int positivity_violations = 0; // steps with smallest eigenvalue below -1e-6
};

struct ConvergenceRecord {
    std::vector<std::pair<double, int>> runs; // (delta_t, memory_length)
    double max_deviation = 0.0;
};

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<Matrix2c> rho;
    Diagnostics diagnostics;
    std::optional<ConvergenceRecord> convergence;

    std::vector<double> rho11() const;
    std::vector<double> abs_rho12() const;
};

// exp(-i H_S dt) (.) exp(+i H_S dt) as a 4x4 matrix on path digits:
// K[x'][x] = U[i'+][i+] conj(U[i'-][i-]).
Matrix4c short_time_propagator(const SystemSpec& system, double delta_t);

// Unitary 2x2 step exp(-i H_S dt).
Matrix2c unitary_step(const SystemSpec& system, double delta_t);

TrajectoryResult propagate(const SystemSpec& system, const bath::InfluenceCoefficients& coeffs,
                           const PropagationConfig& config);

struct SweepReport {
    TrajectoryResult base;
    double dev_half_step_rho11 = 0.0;
    double dev_half_step_rho12 = 0.0;
    double dev_memory_rho11 = 0.0;
    double dev_memory_rho12 = 0.0;
    double threshold = 0.02;

    double max_deviation() const;
    bool converged() const { return max_deviation() <= threshold; }
};

// Runs (dt, L), (dt/2, L) and (dt, L + 1) over the same physical time and
// compares rho11 and |rho12| at the shared times.
SweepReport convergence_sweep(const SystemSpec& system, const bath::ThermalBath& bath,
                              const PropagationConfig& base, double threshold = 0.02,
                              const bath::BuildOptions& build = {});

} // namespace esdf::quapi
