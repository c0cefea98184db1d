#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "esdf/bath.hpp"
#include "esdf/errors.hpp"
#include "esdf/presets.hpp"

using namespace esdf;
using namespace esdf::bath;

namespace {

// Ohmic bath of the omega_c = 4 dynamics preset at 300 K.
ThermalBath ohmic(spectral::Variant v) {
    const auto& s = presets::find("fig2-a");
    return presets::make_bath(s, {spectral::Model::A, v});
}

// Reference coefficients of that bath for dt = 0.1 from a time-domain tensor
// Gauss-Legendre double integral of alpha(t' - t'') (4000 frequency panels,
// 6 subdivisions per cell).
struct Frozen {
    Complex full0, half, full1, full3, end_origin2;
};
const Frozen kOhmicI{{0.0025078264561331459, -3.1869577008907291e-05},
                     {0.00063896550189723473, -4.2579261129528072e-06},
                     {0.0043843039717982825, -0.00014104336439243768},
                     {0.0021342896659915997, -0.00010655792428671372},
                     {0.00094446833500470416, -4.1839121422395098e-05}};
const Frozen kOhmicF{{0.0022685821328891653, -5.7573822787979792e-06},
                     {0.00056926840566558971, -7.2239081961737087e-07},
                     {0.0044029968092659383, -3.3855716513217932e-05},
                     {0.0034080637618272049, -8.8525972974565253e-05},
                     {0.0010633841342282766, -1.2508794473132401e-05}};

void check_close(Complex a, Complex b, double tol) {
    CHECK(std::abs(a.real() - b.real()) < tol);
    CHECK(std::abs(a.imag() - b.imag()) < tol);
}

} // namespace

TEST_CASE("inverse temperature") {
    ThermalBath b;
    b.temperature = 300.0;
    b.scale_hz = 1e12;
    CHECK(b.beta() == doctest::Approx(0.025460775258592155).epsilon(1e-14));
    b.angular_per_hz = 2.0 * M_PI;
    CHECK(b.beta() == doctest::Approx(2.0 * M_PI * 0.025460775258592155).epsilon(1e-14));
    b.temperature = 0.0;
    CHECK_THROWS_AS(b.validate(), DomainError);
}

TEST_CASE("correlation at zero lag and its symmetry") {
    const auto b = ohmic(spectral::Variant::Infinite);
    const Complex a0 = correlation(b, 0.0);
    // 25-digit quadrature of (1/pi) int J coth(beta w/2) dw.
    CHECK(a0.real() == doctest::Approx(0.5145773461772988865).epsilon(1e-12));
    CHECK(std::abs(a0.imag()) < 1e-12 * a0.real());
    const Complex a1 = correlation(b, 1.0);
    CHECK(a1.real() == doctest::Approx(0.030208631305035737).epsilon(1e-10));
    CHECK(a1.imag() == doctest::Approx(-0.00072409552917785579).epsilon(1e-10));
    const Complex am = correlation(b, -1.0);
    CHECK(am.real() == a1.real());
    CHECK(am.imag() == -a1.imag());
}

TEST_CASE("correlation decays at long times") {
    const auto b = ohmic(spectral::Variant::Infinite);
    CHECK(std::abs(correlation(b, 50.0)) < 1e-3 * std::abs(correlation(b, 0.0)));
}

TEST_CASE("thermal integrand is finite at very low frequency") {
    const auto b = ohmic(spectral::Variant::Infinite);
    const double w = 1e-12;
    const double v = b.density(w) / std::tanh(0.5 * b.beta() * w);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}

TEST_CASE("correlation strength grows with temperature") {
    auto b = ohmic(spectral::Variant::Infinite);
    double prev = 0.0;
    for (double t : {150.0, 300.0, 600.0}) {
        b.temperature = t;
        const double re = correlation(b, 0.0).real();
        CHECK(re > prev);
        prev = re;
    }
}

TEST_CASE("zero coupling gives zero coefficients") {
    auto b = ohmic(spectral::Variant::Infinite);
    b.params.eta = 0.0;
    const auto c = build_coefficients(b, 0.1, 3);
    CHECK(c.half_self == Complex(0.0, 0.0));
    for (int d = 0; d <= 3; ++d) {
        CHECK(c.full[d] == Complex(0.0, 0.0));
        CHECK(c.from_origin[d] == Complex(0.0, 0.0));
        CHECK(c.end_full[d] == Complex(0.0, 0.0));
        CHECK(c.end_origin[d] == Complex(0.0, 0.0));
    }
}

TEST_CASE("coefficients match the time-domain reference") {
    for (auto [v, ref] : {std::pair{spectral::Variant::Infinite, kOhmicI},
                          std::pair{spectral::Variant::Finite, kOhmicF}}) {
        const auto c = build_coefficients(ohmic(v), 0.1, 3);
        check_close(c.full[0], ref.full0, 1e-12);
        check_close(c.half_self, ref.half, 1e-12);
        check_close(c.full[1], ref.full1, 1e-12);
        check_close(c.full[3], ref.full3, 1e-12);
        check_close(c.end_origin[2], ref.end_origin2, 1e-12);
        CHECK(c.report.worst_error < 1e-10);
    }
}

TEST_CASE("self coefficients damp") {
    for (const auto& s : {"fig2-a", "fig2-d", "fig3-caption-a", "dephasing"}) {
        const auto& sc = presets::find(s);
        for (auto id : sc.densities) {
            const auto c = build_coefficients(presets::make_bath(sc, id), sc.delta_t, sc.memory);
            CHECK(c.full[0].real() >= 0.0);
            CHECK(c.half_self.real() >= 0.0);
        }
    }
}

TEST_CASE("coefficients depend only on the lag") {
    const auto b = ohmic(spectral::Variant::Infinite);
    const auto c = build_coefficients(b, 0.1, 3);
    const double h = 0.1, hh = 0.05;
    for (int shift : {2, 5, 11}) {
        const double s = shift * h;
        for (int d = 1; d <= 3; ++d) {
            const double t = d * h;
            const Complex moved = cell_coefficient(b, {s + t - hh, s + t + hh, s - hh, s + hh, false});
            CHECK(std::abs(moved - c.full[d]) < 1e-12);
        }
        const Complex self = cell_coefficient(b, {s - hh, s + hh, s - hh, s + hh, true});
        CHECK(std::abs(self - c.full[0]) < 1e-12);
    }
    for (int n = 6; n < 10; ++n) {
        CHECK(c.coefficient(n - 1, n - 3, n) == c.coefficient(n - 2, n - 4, n));
        CHECK(c.coefficient(4, 2, n) == c.full[2]);
    }
}

TEST_CASE("coefficient addressing") {
    const auto c = build_coefficients(ohmic(spectral::Variant::Infinite), 0.1, 3);
    CHECK(c.coefficient(0, 0, 0) == Complex(0.0, 0.0));
    CHECK(c.coefficient(1, 0, 1) == c.end_origin[1]);
    CHECK(c.coefficient(1, 1, 1) == c.half_self);
    CHECK(c.coefficient(2, 0, 5) == c.from_origin[2]);
    CHECK(c.coefficient(5, 3, 5) == c.end_full[2]);
    CHECK(c.coefficient(6, 1, 8) == Complex(0.0, 0.0));
    CHECK(c.coefficient(3, 3, 5) == c.full[0]);
}

TEST_CASE("coefficients are linear in the density") {
    auto b = ohmic(spectral::Variant::Finite);
    const auto base = build_coefficients(b, 0.1, 3);
    b.coupling_scale = 3.7;
    const auto scaled = build_coefficients(b, 0.1, 3);
    for (int d = 0; d <= 3; ++d) {
        CHECK(std::abs(scaled.full[d] - 3.7 * base.full[d]) <= 1e-12 * std::abs(scaled.full[d]));
        CHECK(std::abs(scaled.end_origin[d] - 3.7 * base.end_origin[d]) <=
              1e-12 * std::abs(scaled.end_origin[d]));
    }
}

TEST_CASE("memory depends on the cutoff") {
    const auto c4 = build_coefficients(ohmic(spectral::Variant::Infinite), 0.1, 3);
    const auto& s = presets::find("fig2-d");
    const auto c10 =
        build_coefficients(presets::make_bath(s, {spectral::Model::A, spectral::Variant::Infinite}),
                           0.1, 3);
    for (int d = 1; d <= 3; ++d) CHECK(std::abs(c4.full[d] - c10.full[d]) > 1e-6);
}

TEST_CASE("thread count does not change the coefficients") {
    const auto b = ohmic(spectral::Variant::Finite);
    const auto one = build_coefficients(b, 0.1, 4, {1, true});
    const auto many = build_coefficients(b, 0.1, 4, {4, true});
    CHECK(one.full == many.full);
    CHECK(one.end_origin == many.end_origin);
    CHECK(one.half_self == many.half_self);
}

TEST_CASE("single discrete mode has a closed-form correlation") {
    const double w = 2.0, g = 0.3;
    const auto b = ThermalBath::discrete_modes({{w, g}}, 300.0);
    const double pref = g * g / (2.0 * w);
    for (double t : {0.0, 0.7, 3.1}) {
        const Complex a = correlation(b, t);
        CHECK(a.real() == doctest::Approx(pref * std::cos(w * t) / std::tanh(0.5 * b.beta() * w)));
        CHECK(a.imag() == doctest::Approx(-pref * std::sin(w * t)));
    }
    CHECK_THROWS_AS(ThermalBath::discrete_modes({{-1.0, 0.1}}, 300.0), DomainError);
}

TEST_CASE("coefficient table export") {
    const auto c = build_coefficients(ohmic(spectral::Variant::Infinite), 0.1, 2);
    std::ostringstream os;
    c.write_table(os);
    std::istringstream is(os.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].find("lag") != std::string::npos);
    std::istringstream row(lines[2]);
    int lag = -1;
    double re = 0.0;
    row >> lag >> re;
    CHECK(lag == 1);
    CHECK(re == c.full[1].real());
}

TEST_CASE("invalid coefficient requests") {
    const auto b = ohmic(spectral::Variant::Infinite);
    CHECK_THROWS_AS(build_coefficients(b, 0.0, 3), DomainError);
    CHECK_THROWS_AS(build_coefficients(b, 0.1, -1), DomainError);
}
