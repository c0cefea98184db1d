// quadrature.hpp: globally adaptive Gauss-Kronrod integration with
// breakpoints and failure diagnostics.
//
// The 21-point Kronrod rule (with its embedded 10-point Gauss rule) comes
// from Boost.Math; the subdivision strategy is QUADPACK's QAG: always bisect
// the subinterval with the largest error estimate. Subdivision order is a
// pure function of the integrand values, so results are bit-reproducible.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "esdf/errors.hpp"

namespace esdf::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 20000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
    double worst_lo = 0.0;  // subinterval with the largest error estimate at exit
    double worst_hi = 0.0;
    double worst_error = 0.0;
};

namespace detail {

struct Piece {
    double a, b, value, error;
};

struct PieceOrder {
    bool operator()(const Piece& x, const Piece& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

template <class F>
Piece evaluate_piece(F& f, double a, double b) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
    double err = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
    // The single-rule error estimate refers to the reference interval [-1, 1]
    // and lacks the Jacobian (b - a)/2.
    return {a, b, v, std::abs(err) * 0.5 * (b - a)};
}

} // namespace detail

// Integrates f over [a, b]. `breakpoints` (any order, values outside (a, b)
// ignored) seed the initial partition; put them at kinks, resonances and
// near-singular points.
template <class F>
Result integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
                 const Options& opt = {}) {
    Result res;
    if (a == b) return res;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Piece, std::vector<detail::Piece>, detail::PieceOrder> queue;
    std::vector<detail::Piece> frozen;  // pieces too narrow to bisect further
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::evaluate_piece(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        queue.push(p);
    }
    int count = static_cast<int>(queue.size());

    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

    while (!queue.empty() && total_err > tolerance() && count < opt.max_intervals) {
        auto worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            continue;
        }
        auto left = detail::evaluate_piece(f, worst.a, mid);
        auto right = detail::evaluate_piece(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++count;
    }

    // Re-sum from the pieces so the reported value does not carry the
    // running-sum cancellation error.
    double sum = 0.0, err = 0.0;
    detail::Piece worst{a, b, 0.0, -1.0};
    std::vector<detail::Piece> all(frozen);
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    for (const auto& p : all) {
        sum += p.value;
        err += p.error;
        if (p.error > worst.error) worst = p;
    }
    res.value = sign * sum;
    res.error = err;
    res.intervals = count;
    res.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(sum));
    res.worst_lo = worst.a;
    res.worst_hi = worst.b;
    res.worst_error = worst.error;
    return res;
}

// Same as integrate() but throws QuadratureError when the tolerance is missed.
template <class F>
double integrate_checked(F&& f, double a, double b, std::span<const double> breakpoints,
                         const Options& opt, const std::string& what) {
    auto r = integrate(std::forward<F>(f), a, b, breakpoints, opt);
    if (!r.converged)
        throw QuadratureError(what + ": quadrature did not converge", r.worst_lo, r.worst_hi,
                              r.worst_error);
    return r.value;
}

// Integral over [a, inf) through the map x = a + t / (1 - t), t in [0, 1).
template <class F>
Result integrate_to_infinity(F&& f, double a, const Options& opt = {}) {
    auto g = [&](double t) {
        const double u = 1.0 - t;
        const double x = a + t / u;
        const double v = f(x) / (u * u);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, {}, opt);
}

// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
// accelerated limit estimate.
double wynn_epsilon(std::span<const double> partial_sums);

// Polynomial extrapolation to h -> 0 (Neville) of samples value(h_i) whose
// error expansion contains only the listed powers of h.
double richardson(std::span<const double> h, std::span<const double> values,
                  std::span<const int> powers);

} // namespace esdf::quad
