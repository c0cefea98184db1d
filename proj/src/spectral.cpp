#include "esdf/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "esdf/errors.hpp"

namespace esdf::spectral {
namespace {

constexpr double kSingular = 1e-300;

void require_omega(double omega) {
    if (!std::isfinite(omega) || !(omega > 0.0))
        throw DomainError("spectral: omega must be positive and finite");
}

// num / den with an explicit singularity report; 0/0 (decoupled limit) is 0.
Complex safe_divide(Complex num, Complex den, double omega, const char* who) {
    if (std::abs(den) < kSingular) {
        if (num == Complex(0.0, 0.0)) return {0.0, 0.0};
        throw SingularityError(std::string(who) + ": vanishing denominator", omega);
    }
    return num / den;
}

double safe_divide(double num, double den, double omega, const char* who) {
    if (num == 0.0) return 0.0;
    if (std::abs(den) < kSingular)
        throw SingularityError(std::string(who) + ": vanishing denominator", omega);
    return num / den;
}

double ohmic_infinite(const ModelParams& p, double omega) {
    return p.eta * omega * std::exp(-omega / p.omega_c);
}

double ohmic_finite(const ModelParams& p, double omega) {
    return p.eta * omega * specfun::theta(omega, p.omega_c);
}

double iho_infinite(const ModelParams& p, double omega) {
    const double lk = p.lambda * p.kappa1;
    const double num = lk * lk * std::pow(p.omega0, 4) * omega * p.eta;
    const double m = omega / p.omega_c;
    const double detune = (omega - p.omega0) * (omega + p.omega0);
    const double g = p.gamma();
    const double den = detune * detune * std::exp(m) +
                       p.kappa1 * p.kappa1 * g * g * omega * omega * std::exp(-m);
    return safe_divide(num, den, omega, "J_B^I");
}

double iho_finite(const ModelParams& p, double omega) {
    const double lk = p.lambda * p.kappa1;
    const double th = specfun::theta(omega, p.omega_c);
    const double num = lk * lk * std::pow(p.omega0, 4) * omega * p.eta * th;
    const double x = xi(p, omega);
    const double damp = p.kappa1 * omega * p.gamma() * th;
    return safe_divide(num, x * x + damp * damp, omega, "J_B^F");
}

double common_infinite(const ModelParams& p, double omega) {
    const Complex f = phi(p, omega);
    const double e = std::exp(-omega / p.omega_c);
    return p.lambda * p.mass * p.omega0 * p.omega0 * f.imag() +
           omega * p.eta * (p.kappa1 * p.kappa2 * f.real() + p.kappa2 * p.kappa2) * e;
}

double common_finite(const ModelParams& p, double omega) {
    const Complex f = psi(p, omega);
    const Complex w = specfun::w_function(omega, p.omega_c);
    const double th = w.imag() + std::exp(-omega / p.omega_c);
    return p.lambda * p.mass * p.omega0 * p.omega0 * f.imag() +
           omega * p.eta * p.kappa1 * p.kappa2 * w.real() * f.imag() +
           omega * p.eta * (p.kappa1 * p.kappa2 * f.real() + p.kappa2 * p.kappa2) * th;
}

} // namespace

char model_letter(Model m) {
    switch (m) {
    case Model::A: return 'A';
    case Model::B: return 'B';
    case Model::C: return 'C';
    case Model::D: return 'D';
    }
    return '?';
}

char variant_letter(Variant v) { return v == Variant::Infinite ? 'I' : 'F'; }

std::string to_string(SpectralDensityId id) {
    return std::string{model_letter(id.model), '_', variant_letter(id.variant)};
}

Model parse_model(std::string_view s) {
    if (s == "A" || s == "a") return Model::A;
    if (s == "B" || s == "b") return Model::B;
    if (s == "C" || s == "c") return Model::C;
    if (s == "D" || s == "d") return Model::D;
    throw DomainError("unknown model '" + std::string(s) + "' (expected A, B, C or D)");
}

Variant parse_variant(std::string_view s) {
    if (s == "I" || s == "i") return Variant::Infinite;
    if (s == "F" || s == "f") return Variant::Finite;
    throw DomainError("unknown variant '" + std::string(s) + "' (expected I or F)");
}

std::vector<SpectralDensityId> all_densities() {
    std::vector<SpectralDensityId> out;
    for (Model m : {Model::A, Model::B, Model::C, Model::D})
        for (Variant v : {Variant::Infinite, Variant::Finite}) out.push_back({m, v});
    return out;
}

void ModelParams::validate() const {
    for (double v : {eta, omega_c, lambda, kappa1, kappa2, mass, omega0})
        if (!std::isfinite(v)) throw DomainError("model parameters must be finite");
    if (eta < 0.0) throw DomainError("eta must be non-negative");
    if (!(omega_c > 0.0)) throw DomainError("omega_c must be positive");
    if (!(mass > 0.0)) throw DomainError("IHO mass must be positive");
    if (!(omega0 > 0.0)) throw DomainError("Omega_0 must be positive");
}

double xi(const ModelParams& p, double omega) {
    require_omega(omega);
    const Complex w = specfun::w_function(omega, p.omega_c);
    return -(omega - p.omega0) * (omega + p.omega0) + p.kappa1 * omega * p.gamma() * w.real();
}

// The damping term of the denominator enters with a negative imaginary part,
// so that Im Phi > 0 and the kappa2 = 0 limit reproduces J_B^I.
Complex phi(const ModelParams& p, double omega) {
    require_omega(omega);
    const double e = std::exp(-omega / p.omega_c);
    const double g = p.gamma();
    const Complex num(p.omega0 * p.omega0 * p.lambda, g * p.kappa2 * omega * e);
    const Complex den((omega - p.omega0) * (omega + p.omega0), -p.kappa1 * omega * g * e);
    return safe_divide(num, den, omega, "Phi");
}

Complex psi(const ModelParams& p, double omega) {
    require_omega(omega);
    const Complex w = specfun::w_function(omega, p.omega_c);
    const double th = w.imag() + std::exp(-omega / p.omega_c);
    const double g = p.gamma();
    const double x = -(omega - p.omega0) * (omega + p.omega0) + p.kappa1 * omega * g * w.real();
    const Complex num(p.omega0 * p.omega0 * p.lambda + g * p.kappa2 * omega * w.real(),
                      g * p.kappa2 * omega * th);
    const Complex den(-x, -p.kappa1 * omega * g * th);
    return safe_divide(num, den, omega, "Psi");
}

double evaluate(SpectralDensityId id, const ModelParams& p, double omega) {
    require_omega(omega);
    p.validate();
    const bool inf = id.variant == Variant::Infinite;
    switch (id.model) {
    case Model::A: return inf ? ohmic_infinite(p, omega) : ohmic_finite(p, omega);
    case Model::B: return inf ? iho_infinite(p, omega) : iho_finite(p, omega);
    case Model::C: {
        const double k2 = p.kappa2 * p.kappa2;
        return inf ? k2 * ohmic_infinite(p, omega) + iho_infinite(p, omega)
                   : k2 * ohmic_finite(p, omega) + iho_finite(p, omega);
    }
    case Model::D: return inf ? common_infinite(p, omega) : common_finite(p, omega);
    }
    throw DomainError("unknown spectral density");
}

FrequencyGrid::FrequencyGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("frequency grid must not be empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]) || !(points_[i] > 0.0))
            throw DomainError("frequency grid points must be positive and finite");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw DomainError("frequency grid must be strictly increasing");
    }
}

FrequencyGrid FrequencyGrid::linear(double lo, double hi, std::size_t n) {
    if (n == 0) throw DomainError("frequency grid needs at least one point");
    std::vector<double> pts(n);
    if (n == 1) {
        pts[0] = lo;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        pts.back() = hi;
    }
    return FrequencyGrid(std::move(pts));
}

double reduction_check(SpectralDensityId from, SpectralDensityId to, const ModelParams& p,
                       const FrequencyGrid& grid) {
    if (from.variant != to.variant)
        throw DomainError("reduction_check: variants must match");
    bool ok = from == to;
    if (!ok && to.model == Model::A && (from.model == Model::C || from.model == Model::D))
        ok = p.lambda == 0.0 && p.kappa1 == 0.0 && p.kappa2 == 1.0;
    if (!ok && to.model == Model::B && (from.model == Model::C || from.model == Model::D))
        ok = p.kappa2 == 0.0;
    if (!ok)
        throw DomainError("reduction_check: parameters do not sit on a reduction limit from " +
                          to_string(from) + " to " + to_string(to));
    double worst = 0.0;
    for (double w : grid.points())
        worst = std::max(worst, std::abs(evaluate(from, p, w) - evaluate(to, p, w)));
    return worst;
}

void apply_gamma(ModelParams& p, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("Gamma must be positive");
    const double k = p.kappa1 * p.eta;
    if (k != 0.0) p.mass = k / gamma;
}

double calibrate_eta(SpectralDensityId id, ModelParams p, double omega0, double eta_prime,
                     std::optional<double> hold_gamma) {
    require_omega(omega0);
    if (!(eta_prime > 0.0) || !std::isfinite(eta_prime))
        throw DomainError("calibrate_eta: eta' must be positive");
    constexpr double lo = 1e-8, hi = 1e3;

    // Residual in log space; eta enters J as a prefactor and possibly through Gamma.
    auto residual = [&](double log_eta) {
        ModelParams q = p;
        q.eta = std::exp(log_eta);
        if (hold_gamma) apply_gamma(q, *hold_gamma);
        return evaluate(id, q, omega0) / omega0 / eta_prime - 1.0;
    };

    // Coarse scan for the first sign change, then a bracketed solve.
    constexpr int kScan = 240;
    const double a0 = std::log(lo), b0 = std::log(hi);
    double prev_x = a0, prev_f = residual(a0);
    if (prev_f == 0.0) return lo;
    for (int i = 1; i <= kScan; ++i) {
        const double x = a0 + (b0 - a0) * i / kScan;
        const double f = residual(x);
        if (f == 0.0) return std::exp(x);
        if ((f > 0.0) != (prev_f > 0.0)) {
            std::uintmax_t iters = 200;
            auto tol = [](double u, double v) {
                return std::abs(u - v) <= 1e-15 * std::max(std::abs(u), std::abs(v));
            };
            auto [l, r] = boost::math::tools::toms748_solve(residual, prev_x, x, prev_f, f, tol,
                                                            iters);
            const double fl = std::abs(residual(l)), fr = std::abs(residual(r));
            return std::exp(fl <= fr ? l : r);
        }
        prev_x = x;
        prev_f = f;
    }
    std::ostringstream os;
    os << "calibrate_eta: no eta in [" << lo << ", " << hi << "] gives eta' = " << eta_prime
       << " for " << to_string(id);
    throw NoRootError(os.str());
}

std::vector<std::pair<double, double>> sample(SpectralDensityId id, const ModelParams& p,
                                              const FrequencyGrid& grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double w : grid.points()) {
        try {
            out.emplace_back(w, evaluate(id, p, w));
        } catch (const SingularityError&) {
            throw;
        } catch (const DomainError& e) {
            std::ostringstream os;
            os.precision(17);
            os << e.what() << " at omega = " << w;
            throw DomainError(os.str());
        }
    }
    return out;
}

} // namespace esdf::spectral
