#include "esdf/quapi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>

#include "esdf/errors.hpp"

namespace esdf::quapi {
namespace {

constexpr double kTraceAbort = 1e-8;
constexpr double kPositivityReport = -1e-6;

int spin(int i) { return i == 0 ? 1 : -1; }
int plus_of(int x) { return x >> 1; }
int minus_of(int x) { return x & 1; }

std::size_t pow4(int e) { return std::size_t{1} << (2 * e); }

// exp(-dS_k (eta s+_kp - conj(eta) s-_kp)) for all 16 digit pairs (x_k, x_kp).
std::array<Complex, 16> influence_table(Complex eta) {
    std::array<Complex, 16> t{};
    for (int xk = 0; xk < 4; ++xk) {
        const double ds = spin(plus_of(xk)) - spin(minus_of(xk));
        for (int xp = 0; xp < 4; ++xp) {
            const Complex e =
                -ds * (eta * double(spin(plus_of(xp))) - std::conj(eta) * double(spin(minus_of(xp))));
            t[xk * 4 + xp] = std::exp(e);
        }
    }
    return t;
}

// Runs body(lo, hi) over [0, n) split into contiguous chunks. Each index is
// processed by exactly one chunk, so results do not depend on the split.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
    if (threads <= 1 || n < (std::size_t{1} << 14)) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

double deviation(const std::vector<double>& a, const std::vector<double>& b, int stride_b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j = i * stride_b;
        if (j >= b.size()) break;
        worst = std::max(worst, std::abs(a[i] - b[j]));
    }
    return worst;
}

} // namespace

void SystemSpec::validate() const {
    if (!std::isfinite(epsilon) || !std::isfinite(delta))
        throw DomainError("system parameters must be finite");
    if (!rho0.allFinite()) throw DomainError("initial state must be finite");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("initial state must be Hermitian");
    if (std::abs(rho0.trace() - Complex(1.0, 0.0)) > 1e-12)
        throw DomainError("initial state must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(rho0);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw DomainError("initial state must be positive semidefinite");
}

Matrix2c SystemSpec::ground_state() {
    Matrix2c r = Matrix2c::Zero();
    r(0, 0) = 1.0;
    return r;
}

Matrix2c SystemSpec::superposition() { return Matrix2c::Constant(Complex(0.5, 0.0)); }

std::size_t default_memory_budget() {
    if (const char* env = std::getenv("ESDF_MEMORY_BUDGET")) {
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(env, &pos);
            if (pos == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw DomainError("ESDF_MEMORY_BUDGET must be a positive integer number of bytes");
    }
    return std::size_t{1} << 30;
}

std::size_t PropagationConfig::tensor_bytes() const {
    if (memory_length < 0 || memory_length > 28) return static_cast<std::size_t>(-1);
    return 2 * pow4(memory_length + 1) * sizeof(Complex);
}

void PropagationConfig::validate() const {
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw DomainError("delta_t must be positive");
    if (memory_length < 0) throw DomainError("memory length must be non-negative");
    if (n_steps < memory_length) throw DomainError("n_steps must be at least the memory length");
    const std::size_t need = tensor_bytes();
    if (need > memory_budget) {
        std::ostringstream os;
        os << "augmented tensor for memory length " << memory_length << " needs " << need
           << " bytes, budget is " << memory_budget;
        throw MemoryBudgetError(os.str());
    }
}

std::vector<double> TrajectoryResult::rho11() const {
    std::vector<double> v;
    v.reserve(rho.size());
    for (const auto& r : rho) v.push_back(r(0, 0).real());
    return v;
}

std::vector<double> TrajectoryResult::abs_rho12() const {
    std::vector<double> v;
    v.reserve(rho.size());
    for (const auto& r : rho) v.push_back(std::abs(r(0, 1)));
    return v;
}

Matrix2c unitary_step(const SystemSpec& s, double dt) {
    // exp(-i (dt/2)(eps sz + Delta sx)) = cos(th) I - i sin(th) (n . sigma)
    const double w = std::hypot(s.epsilon, s.delta);
    const double th = 0.5 * w * dt;
    Matrix2c u = Matrix2c::Identity() * std::cos(th);
    if (w > 0.0) {
        const double sn = std::sin(th) / w;
        const Complex i(0.0, 1.0);
        u(0, 0) += -i * sn * s.epsilon;
        u(1, 1) += i * sn * s.epsilon;
        u(0, 1) += -i * sn * s.delta;
        u(1, 0) += -i * sn * s.delta;
    }
    return u;
}

Matrix4c short_time_propagator(const SystemSpec& system, double delta_t) {
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw DomainError("delta_t must be positive");
    const Matrix2c u = unitary_step(system, delta_t);
    Matrix4c k;
    for (int xn = 0; xn < 4; ++xn)
        for (int x = 0; x < 4; ++x)
            k(xn, x) = u(plus_of(xn), plus_of(x)) * std::conj(u(minus_of(xn), minus_of(x)));
    return k;
}

TrajectoryResult propagate(const SystemSpec& system, const bath::InfluenceCoefficients& coeffs,
                           const PropagationConfig& config) {
    system.validate();
    config.validate();
    if (coeffs.delta_t() != config.delta_t)
        throw DomainError("coefficients were built for a different time step");
    if (coeffs.memory_length() != config.memory_length)
        throw DomainError("coefficients were built for a different memory length");

    const int L = config.memory_length;
    const Matrix4c K = short_time_propagator(system, config.delta_t);
    std::vector<Complex> cur(pow4(L + 1)), nxt(pow4(L + 1));
    for (int x = 0; x < 4; ++x) cur[x] = system.rho0(plus_of(x), minus_of(x));
    int width = 1; // points held: n - width + 1 .. n, oldest digit least significant

    TrajectoryResult res;
    res.times.reserve(config.n_steps + 1);
    res.rho.reserve(config.n_steps + 1);

    auto readout = [&](int n) {
        // Provisional terms of the end point n with its half cell.
        std::vector<std::array<Complex, 16>> tables;
        for (int j = 0; j < width; ++j)
            tables.push_back(influence_table(coeffs.coefficient(n, n - width + 1 + j, n)));
        const std::size_t size = pow4(width);
        Matrix2c rho = Matrix2c::Zero();
        for (std::size_t idx = 0; idx < size; ++idx) {
            const int xn = static_cast<int>((idx >> (2 * (width - 1))) & 3);
            Complex v = cur[idx];
            for (int j = 0; j < width; ++j) v *= tables[j][xn * 4 + ((idx >> (2 * j)) & 3)];
            rho(plus_of(xn), minus_of(xn)) += v;
        }
        const double t = n * config.delta_t;
        const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        auto& d = res.diagnostics;
        d.max_trace_drift = std::max(d.max_trace_drift, drift);
        d.max_hermiticity_defect = std::max(d.max_hermiticity_defect, herm);
        if (!rho.allFinite() || drift > kTraceAbort) {
            std::ostringstream os;
            os << "trace drift " << drift << " at step " << n << " (t = " << t << ")";
            throw InvariantError(os.str());
        }
        const Matrix2c hpart = 0.5 * (rho + rho.adjoint());
        const double lmin = Eigen::SelfAdjointEigenSolver<Matrix2c>(hpart).eigenvalues().minCoeff();
        d.min_eigenvalue = std::min(d.min_eigenvalue, lmin);
        if (lmin < kPositivityReport) ++d.positivity_violations;
        res.times.push_back(t);
        res.rho.push_back(rho);
    };

    readout(0);
    for (int n = 0; n < config.n_steps; ++n) {
        // Finalize the pairs (n, k') now that the cell of point n is complete.
        std::vector<std::array<Complex, 16>> tables;
        for (int j = 0; j < width; ++j)
            tables.push_back(influence_table(coeffs.coefficient(n, n - width + 1 + j, n + 1)));
        const std::size_t size = pow4(width);
        parallel_for(size, config.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t idx = lo; idx < hi; ++idx) {
                const int xn = static_cast<int>((idx >> (2 * (width - 1))) & 3);
                Complex v = cur[idx];
                for (int j = 0; j < width; ++j) v *= tables[j][xn * 4 + ((idx >> (2 * j)) & 3)];
                cur[idx] = v;
            }
        });

        // Append x_{n+1} through the bare propagator; drop the oldest point
        // once the window is full.
        if (width < L + 1) {
            const std::size_t shift = size;
            parallel_for(size, config.threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t idx = lo; idx < hi; ++idx) {
                    const int xn = static_cast<int>((idx >> (2 * (width - 1))) & 3);
                    for (int xq = 0; xq < 4; ++xq) nxt[idx + xq * shift] = cur[idx] * K(xq, xn);
                }
            });
            ++width;
        } else {
            // width == L + 1; output keeps points n+1-L .. n+1.
            const std::size_t rest = pow4(L);
            parallel_for(rest * 4, config.threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t o = lo; o < hi; ++o) {
                    const std::size_t r = o % rest;
                    const int xq = static_cast<int>(o / rest);
                    if (L == 0) {
                        Complex s = 0.0;
                        for (int x0 = 0; x0 < 4; ++x0) s += cur[x0] * K(xq, x0);
                        nxt[o] = s;
                    } else {
                        const int xn = static_cast<int>((r >> (2 * (L - 1))) & 3);
                        Complex s = 0.0;
                        for (int x0 = 0; x0 < 4; ++x0) s += cur[x0 + 4 * r];
                        nxt[o] = s * K(xq, xn);
                    }
                }
            });
        }
        std::swap(cur, nxt);
        readout(n + 1);
    }
    return res;
}

double SweepReport::max_deviation() const {
    return std::max({dev_half_step_rho11, dev_half_step_rho12, dev_memory_rho11,
                     dev_memory_rho12});
}

SweepReport convergence_sweep(const SystemSpec& system, const bath::ThermalBath& bath,
                              const PropagationConfig& base, double threshold,
                              const bath::BuildOptions& build) {
    base.validate();
    SweepReport rep;
    rep.threshold = threshold;

    auto run = [&](double dt, int L, int steps) {
        PropagationConfig c = base;
        c.delta_t = dt;
        c.memory_length = L;
        c.n_steps = steps;
        const auto coeffs = bath::build_coefficients(bath, dt, L, build);
        return propagate(system, coeffs, c);
    };

    rep.base = run(base.delta_t, base.memory_length, base.n_steps);
    const auto half = run(0.5 * base.delta_t, base.memory_length, 2 * base.n_steps);
    const auto longer = run(base.delta_t, base.memory_length + 1, base.n_steps);

    const auto r11 = rep.base.rho11(), r12 = rep.base.abs_rho12();
    rep.dev_half_step_rho11 = deviation(r11, half.rho11(), 2);
    rep.dev_half_step_rho12 = deviation(r12, half.abs_rho12(), 2);
    rep.dev_memory_rho11 = deviation(r11, longer.rho11(), 1);
    rep.dev_memory_rho12 = deviation(r12, longer.abs_rho12(), 1);

    ConvergenceRecord rec;
    rec.runs = {{base.delta_t, base.memory_length},
                {0.5 * base.delta_t, base.memory_length},
                {base.delta_t, base.memory_length + 1}};
    rec.max_deviation = rep.max_deviation();
    rep.base.convergence = rec;
    return rep;
}

} // namespace esdf::quapi
