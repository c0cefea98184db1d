#include "esdf/bath.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "esdf/errors.hpp"
#include "esdf/quadrature.hpp"

namespace esdf::bath {
namespace {

using spectral::Model;
using spectral::Variant;

constexpr double kPi = std::numbers::pi;
constexpr double kCoefficientTolerance = 1e-10;
// Fallback when a resonance narrower than ~1e4 ulps of its centre frequency
// puts the absolute target below double-precision resolution.
constexpr double kResolutionLimitedTolerance = 1e-8;

double coth_half(double beta, double omega) { return 1.0 / std::tanh(0.5 * beta * omega); }

// 2 sin(w h / 2) / w, finite at w = 0.
double box_transform(double omega, double h) {
    const double x = 0.5 * omega * h;
    if (std::abs(x) < 1e-8) return h * (1.0 - x * x / 6.0);
    return h * std::sin(x) / x;
}

quad::Options integral_options() {
    quad::Options opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-13;
    opt.max_intervals = 40000;
    return opt;
}

// Accepts the result when the relative target, the absolute per-coefficient
// target or the resolution-limited relative target is met.
double checked_value(const quad::Result& r, const char* what, QuadratureReport* report) {
    const bool ok = r.converged || r.error <= kCoefficientTolerance ||
                    r.error <= kResolutionLimitedTolerance * std::abs(r.value);
    if (!ok) throw QuadratureError(what, r.worst_lo, r.worst_hi, r.worst_error);
    if (report) report->worst_error = std::max(report->worst_error, r.error);
    return r.value;
}

bool has_resonance(const ThermalBath& b) {
    return b.id.model != Model::A && b.params.lambda * b.params.kappa1 != 0.0;
}

// Generic frequency integral (1/pi) int_0^wmax J(w) g(w) dw for continuous
// baths and the matching mode sum for discrete baths.
double frequency_integral(const ThermalBath& bath, const std::function<double(double)>& g,
                          double max_time, const char* what, QuadratureReport* report) {
    if (bath.discrete) {
        double sum = 0.0;
        for (const auto& m : bath.modes)
            sum += bath.coupling_scale * m.coupling * m.coupling / (2.0 * m.omega) * g(m.omega);
        return sum;
    }
    if (bath.params.eta == 0.0 || bath.coupling_scale == 0.0) return 0.0;
    auto f = [&](double w) { return bath.density(w) * g(w) / kPi; };
    const double top = bath.omega_max();
    const auto cuts = bath.breakpoints(max_time);
    const double value = checked_value(quad::integrate(f, 0.0, top, cuts, integral_options()),
                                       what, report);
    if (report && !(bath.id.variant == Variant::Finite)) {
        auto tail = quad::integrate([&](double w) { return std::abs(f(w)); }, top, 2.0 * top);
        report->tail_estimate = std::max(report->tail_estimate, tail.value);
    }
    return value;
}

} // namespace

double ThermalBath::beta() const {
    return kHbar * scale_hz * angular_per_hz / (kBoltzmann * temperature);
}

double ThermalBath::density(double omega) const {
    return coupling_scale * spectral::evaluate(id, params, omega);
}

double ThermalBath::omega_max() const {
    if (id.variant == Variant::Finite) return params.omega_c;
    double top = std::max(params.omega_c, 1.0);
    if (has_resonance(*this)) top = std::max(top, params.omega0);
    return 50.0 * top;
}

std::vector<double> ThermalBath::breakpoints(double max_time) const {
    std::vector<double> cuts;
    const double top = omega_max();
    // Uniform comb: about one piece per half oscillation of the slowest kernel.
    const int pieces =
        std::clamp(static_cast<int>(std::ceil(top * std::max(max_time, 0.0) / kPi)), 8, 4000);
    for (int i = 1; i < pieces; ++i) cuts.push_back(top * i / pieces);
    for (double w = params.omega_c; w < top; w += params.omega_c) cuts.push_back(w);

    if (has_resonance(*this)) {
        const double o0 = params.omega0;
        std::vector<double> centres{o0};
        if (id.variant == Variant::Finite) {
            // Root of Xi near Omega_0.
            auto x = [&](double w) { return spectral::xi(params, w); };
            const double lo = 0.5 * o0, hi = std::min(1.5 * o0, top);
            if (lo < hi && (x(lo) > 0.0) != (x(hi) > 0.0)) {
                std::uintmax_t it = 200;
                auto r = boost::math::tools::toms748_solve(
                    x, lo, hi, boost::math::tools::eps_tolerance<double>(50), it);
                centres.push_back(0.5 * (r.first + r.second));
            }
        }
        const double gamma_eff =
            std::abs(params.kappa1 * params.gamma()) * std::exp(-o0 / params.omega_c);
        double width = std::max(0.5 * gamma_eff, 1e-15 * o0);
        for (double c : centres) {
            cuts.push_back(c);
            for (double d = width; d < 0.5 * c; d *= 4.0) {
                cuts.push_back(c - d);
                cuts.push_back(c + d);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](double w) { return !(w > 0.0 && w < top); }),
               cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

void ThermalBath::validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("temperature must be positive");
    if (!(scale_hz > 0.0) || !(angular_per_hz > 0.0))
        throw DomainError("frequency scale must be positive");
    if (!(coupling_scale >= 0.0)) throw DomainError("coupling scale must be non-negative");
    if (discrete) {
        for (const auto& m : modes)
            if (!(m.omega > 0.0) || !std::isfinite(m.coupling))
                throw DomainError("bath modes need positive frequency and finite coupling");
    } else {
        params.validate();
    }
}

ThermalBath ThermalBath::discrete_modes(std::vector<Mode> modes, double temperature,
                                        double scale_hz, double angular_per_hz) {
    ThermalBath b;
    b.discrete = true;
    b.modes = std::move(modes);
    b.temperature = temperature;
    b.scale_hz = scale_hz;
    b.angular_per_hz = angular_per_hz;
    b.validate();
    return b;
}

Complex correlation(const ThermalBath& bath, double t, QuadratureReport* report) {
    bath.validate();
    if (!std::isfinite(t)) throw DomainError("correlation: time must be finite");
    if (t < 0.0) return std::conj(correlation(bath, -t, report));
    const double beta = bath.beta();
    const double re = frequency_integral(
        bath, [&](double w) { return coth_half(beta, w) * std::cos(w * t); }, t,
        "correlation (real part)", report);
    const double im = frequency_integral(
        bath, [&](double w) { return -std::sin(w * t); }, t, "correlation (imaginary part)",
        report);
    return {re, im};
}

Complex cell_kernel(const CellPair& c, double omega) {
    if (c.same) {
        const double h = c.a_hi - c.a_lo;
        const double x = omega * h;
        if (std::abs(x) < 1e-3) {
            const double x2 = x * x;
            const double re = 0.5 * h * h * (1.0 - x2 / 12.0 + x2 * x2 / 360.0);
            const double im = -h * h * x / 6.0 * (1.0 - x2 / 20.0 + x2 * x2 / 840.0);
            return {re, im};
        }
        const double s = std::sin(0.5 * x);
        return {2.0 * s * s / (omega * omega), -(x - std::sin(x)) / (omega * omega)};
    }
    const double ca = 0.5 * (c.a_lo + c.a_hi), cb = 0.5 * (c.b_lo + c.b_hi);
    const double amp = box_transform(omega, c.a_hi - c.a_lo) * box_transform(omega, c.b_hi - c.b_lo);
    const double ph = omega * (ca - cb);
    return {amp * std::cos(ph), -amp * std::sin(ph)};
}

Complex cell_coefficient(const ThermalBath& bath, const CellPair& cells,
                         QuadratureReport* report) {
    const double beta = bath.beta();
    const double span = std::max(cells.a_hi, cells.b_hi) - std::min(cells.a_lo, cells.b_lo);
    const double re = frequency_integral(
        bath, [&](double w) { return coth_half(beta, w) * cell_kernel(cells, w).real(); }, span,
        "influence coefficient (real part)", report);
    const double im = frequency_integral(
        bath, [&](double w) { return cell_kernel(cells, w).imag(); }, span,
        "influence coefficient (imaginary part)", report);
    return {re, im};
}

InfluenceCoefficients::InfluenceCoefficients(double delta_t, int memory_length)
    : full(memory_length + 1), from_origin(memory_length + 1), end_full(memory_length + 1),
      end_origin(memory_length + 1), delta_t_(delta_t), memory_length_(memory_length) {
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw DomainError("delta_t must be positive");
    if (memory_length < 0) throw DomainError("memory length must be non-negative");
}

Complex InfluenceCoefficients::coefficient(int k, int kp, int n) const {
    if (kp < 0 || kp > k || k > n) throw DomainError("coefficient: need 0 <= kp <= k <= n");
    if (n == 0) return {0.0, 0.0};
    const int d = k - kp;
    if (d > memory_length_) return {0.0, 0.0};
    if (d == 0) return (k == 0 || k == n) ? half_self : full[0];
    if (k == n) return kp == 0 ? end_origin[d] : end_full[d];
    return kp == 0 ? from_origin[d] : full[d];
}

void InfluenceCoefficients::write_table(std::ostream& os) const {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "lag re_full im_full re_from_origin im_from_origin re_end im_end re_end_origin "
          "im_end_origin re_half_self im_half_self\n";
    os << std::setprecision(17);
    for (int d = 0; d <= memory_length_; ++d) {
        const Complex hs = d == 0 ? half_self : Complex{0.0, 0.0};
        os << d << ' ' << full[d].real() << ' ' << full[d].imag() << ' ' << from_origin[d].real()
           << ' ' << from_origin[d].imag() << ' ' << end_full[d].real() << ' '
           << end_full[d].imag() << ' ' << end_origin[d].real() << ' ' << end_origin[d].imag()
           << ' ' << hs.real() << ' ' << hs.imag() << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

InfluenceCoefficients build_coefficients(const ThermalBath& bath, double delta_t,
                                         int memory_length, const BuildOptions& opt) {
    bath.validate();
    InfluenceCoefficients out(delta_t, memory_length);
    const double h = delta_t, hh = 0.5 * delta_t;

    struct Job {
        Complex* slot;
        CellPair cells;
    };
    std::vector<Job> jobs;
    jobs.push_back({&out.full[0], {0.0, h, 0.0, h, true}});
    jobs.push_back({&out.half_self, {0.0, hh, 0.0, hh, true}});
    for (int d = 1; d <= memory_length; ++d) {
        const double t = d * h;
        jobs.push_back({&out.full[d], {t - hh, t + hh, -hh, hh, false}});
        jobs.push_back({&out.from_origin[d], {t - hh, t + hh, 0.0, hh, false}});
        jobs.push_back({&out.end_full[d], {t - hh, t, -hh, hh, false}});
        jobs.push_back({&out.end_origin[d], {t - hh, t, 0.0, hh, false}});
    }

    std::vector<QuadratureReport> reports(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                *jobs[i].slot = cell_coefficient(bath, jobs[i].cells, &reports[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = std::clamp(opt.threads, 1, static_cast<int>(jobs.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // Report the first failing job in job order so the diagnostic is reproducible.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const auto& r : reports) {
        out.report.worst_error = std::max(out.report.worst_error, r.worst_error);
        out.report.tail_estimate = std::max(out.report.tail_estimate, r.tail_estimate);
    }
    return out;
}

} // namespace esdf::bath
