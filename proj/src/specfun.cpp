#include "esdf/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/expint.hpp>

#include "esdf/errors.hpp"

namespace esdf::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 10000;
// Above this argument the Shi/Chi power series give way to exponential integrals.
constexpr double kSeriesLimit = 40.0;
// sinh/cosh overflow beyond this.
constexpr double kMaxRatio = 700.0;

void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) throw DomainError(std::string(who) + ": non-finite argument");
}

// exp(-x) Ei(x), 0 < x <= kMaxRatio.
double scaled_ei(double x) { return std::exp(-x) * boost::math::expint(x); }

// exp(x) E1(x), x > 0.
double scaled_e1(double x) { return std::exp(x) * boost::math::expint(1, x); }

} // namespace

double expint_ei(double x) {
    require_finite(x, "expint_ei");
    if (!(x > 0.0)) throw DomainError("expint_ei: argument must be positive");
    if (x > kMaxRatio) throw DomainError("expint_ei: argument too large");
    return boost::math::expint(x);
}

double expint_e1(double x) {
    require_finite(x, "expint_e1");
    if (!(x > 0.0)) throw DomainError("expint_e1: argument must be positive");
    return boost::math::expint(1, x);
}

double shi(double m) {
    require_finite(m, "shi");
    if (m < 0.0) throw DomainError("shi: argument must be non-negative");
    if (m == 0.0) return 0.0;
    if (m > kSeriesLimit) return 0.5 * (expint_ei(m) + expint_e1(m));
    const double m2 = m * m;
    double term = m, sum = m;
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= m2 / ((2.0 * k) * (2.0 * k + 1.0));
        const double add = term / (2.0 * k + 1.0);
        sum += add;
        if (add < kEps * sum) break;
    }
    return sum;
}

double chi(double m) {
    require_finite(m, "chi");
    if (!(m > 0.0)) throw DomainError("chi: argument must be positive");
    if (m > kSeriesLimit) return 0.5 * (expint_ei(m) - expint_e1(m));
    const double m2 = m * m;
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= m2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double add = term / (2.0 * k);
        sum += add;
        if (add < kEps * sum) break;
    }
    return kEulerGamma + std::log(m) + sum;
}

double chi_term(double m) {
    require_finite(m, "chi_term");
    if (!(m > 0.0)) throw DomainError("chi_term: argument must be positive");
    if (m <= 3.0) {
        const double m2 = m * m;
        double term = 1.0, sum = 0.0;
        for (int k = 1; k < kMaxTerms; ++k) {
            term *= -m2 / ((2.0 * k - 1.0) * (2.0 * k));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < 0.1 * kEps) break;
        }
        return kEulerGamma + std::log(m) + sum;
    }
    // Ci(m) = -Re E1(i m); E1(i m) = exp(-i m) * CF(i m).
    Complex b(1.0, m);
    Complex c(1.0 / kTiny, 0.0);
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 2; i < kMaxTerms; ++i) {
        const double a = -static_cast<double>(i - 1) * (i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const Complex del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) {
            h *= Complex(std::cos(m), -std::sin(m));
            return -h.real();
        }
    }
    throw ConvergenceError("chi_term: continued fraction did not converge");
}

Complex w_function(double omega, double omega_c) {
    require_finite(omega, "w_function");
    require_finite(omega_c, "w_function");
    if (!(omega > 0.0) || !(omega_c > 0.0))
        throw DomainError("w_function: omega and omega_c must be positive");
    const double m = omega / omega_c;
    if (m > kMaxRatio) throw DomainError("w_function: omega/omega_c too large");

    // Real part: -Shi cosh + Chi sinh. Both products grow like e^{2m}/(4m)
    // while their difference decays like 1/m, so for m >= 1 use the
    // equivalent cancellation-free form -(e^{-m} Ei(m) + e^{m} E1(m)) / 2.
    double re = 0.0;
    if (m < 1.0)
        re = -shi(m) * std::cosh(m) + chi(m) * std::sinh(m);
    else
        re = -0.5 * (scaled_ei(m) + scaled_e1(m));

    // Imaginary part: Im Ci(-i m) sinh(m) + (pi/2) sinh(m) on the chosen branch.
    const double im = kImWBranchSign * std::sinh(m);
    return {re / std::numbers::pi, im};
}

double theta(double omega, double omega_c) {
    return w_function(omega, omega_c).imag() + std::exp(-omega / omega_c);
}

Complex r_function(double omega, double omega_c) {
    const Complex w = w_function(omega, omega_c);
    const double pi = std::numbers::pi;
    const Complex i(0.0, 1.0);
    return -(pi * i / omega) * std::exp(-omega / omega_c) - (pi / omega) * w;
}

} // namespace esdf::specfun
