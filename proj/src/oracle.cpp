#include "esdf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "esdf/errors.hpp"
#include "esdf/quadrature.hpp"
#include "esdf/specfun.hpp"

namespace esdf::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

quad::Options tight() {
    quad::Options o;
    o.abs_tol = 1e-15;
    o.rel_tol = 1e-14;
    o.max_intervals = 50000;
    return o;
}

// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<double> x, w;
};

const Rule& legendre20() {
    static const Rule rule = [] {
        using G = boost::math::quadrature::gauss<double, 20>;
        Rule r;
        const auto& a = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            r.x.push_back(-a[i]);
            r.w.push_back(w[i]);
            if (a[i] != 0.0) {
                r.x.push_back(a[i]);
                r.w.push_back(w[i]);
            }
        }
        return r;
    }();
    return rule;
}

double coth_half(double beta, double w) { return 1.0 / std::tanh(0.5 * beta * w); }

} // namespace

void OracleReport::write(std::ostream& os) const {
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "name = " << name << '\n'
       << "max_abs_error = " << max_abs_error << '\n'
       << "max_rel_error = " << max_rel_error << '\n'
       << "tolerance = " << tolerance << '\n'
       << "grid = " << grid << '\n'
       << "result = " << (passed ? "pass" : "fail") << '\n';
    os.precision(prec);
}

OracleReport compare(std::string name, const std::vector<double>& reference,
                     const std::vector<double>& candidate, std::string grid, double tolerance) {
    OracleReport r;
    r.name = std::move(name);
    r.grid = std::move(grid);
    r.tolerance = tolerance;
    if (reference.size() != candidate.size()) {
        r.max_abs_error = std::numeric_limits<double>::infinity();
        r.max_rel_error = r.max_abs_error;
        return r;
    }
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double e = std::abs(reference[i] - candidate[i]);
        r.max_abs_error = std::max(r.max_abs_error, e);
        if (reference[i] != 0.0)
            r.max_rel_error = std::max(r.max_rel_error, e / std::abs(reference[i]));
        else if (e != 0.0)
            r.max_rel_error = std::numeric_limits<double>::infinity();
    }
    r.passed = std::isfinite(r.max_abs_error) && r.max_abs_error <= tolerance;
    return r;
}

double sine_transform(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("sine_transform: m must be positive");
    auto f = [m](double x) { return std::sin(m * x) / (1.0 + x * x); };
    const double period = kPi / m;
    const long first = static_cast<long>(std::ceil(50.0 / m / period));
    const double split = first * period;

    std::vector<double> zeros;
    for (long k = 1; k < first && zeros.size() < 100000; ++k) zeros.push_back(k * period);
    const auto head = quad::integrate(f, 0.0, split, zeros, tight());
    if (!head.converged && head.error > 1e-12)
        throw QuadratureError("sine_transform head", head.worst_lo, head.worst_hi, head.worst_error);

    std::vector<double> partial;
    double sum = 0.0;
    for (long k = first; k < first + 40; ++k) {
        const auto piece = quad::integrate(f, k * period, (k + 1) * period, {}, tight());
        sum += piece.value;
        partial.push_back(sum);
    }
    return head.value + quad::wynn_epsilon(partial);
}

double re_w_quadrature(double m) { return -sine_transform(m) / kPi; }

double pv_quadrature_R(double omega, double omega_c) {
    if (!(omega > 0.0) || !(omega_c > 0.0) || !std::isfinite(omega) || !std::isfinite(omega_c))
        throw DomainError("pv_quadrature_R: omega and omega_c must be positive");
    auto f = [&](double x) { return std::exp(-x / omega_c) / ((x - omega) * (x + omega)); };

    auto excised = [&](double gap) {
        const auto left = quad::integrate(f, 0.0, omega - gap, {}, tight());
        const auto mid = quad::integrate(f, omega + gap, 3.0 * omega, {}, tight());
        const auto tail = quad::integrate_to_infinity(f, 3.0 * omega, tight());
        return left.value + mid.value + tail.value;
    };

    std::vector<double> h, v;
    double gap = 0.25 * omega;
    for (int j = 0; j < 8; ++j, gap *= 0.5) {
        h.push_back(gap);
        v.push_back(excised(gap));
    }
    const std::vector<int> powers{1, 3, 5, 7, 9, 11, 13};
    const double fine = quad::richardson(h, v, powers);
    const double coarse = quad::richardson(std::span(h).first(7), std::span(v).first(7),
                                           std::span(powers).first(6));
    if (std::abs(fine - coarse) > 1e-9 * std::max(1.0, std::abs(fine) * omega)) {
        std::ostringstream os;
        os << "pv_quadrature_R: extrapolation did not settle (" << fine << " vs " << coarse << ")";
        throw ConvergenceError(os.str());
    }
    return fine;
}

double shi_quadrature(double m) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("shi_quadrature: m must be >= 0");
    if (m == 0.0) return 0.0;
    return quad::integrate([](double t) { return std::sinh(t) / t; }, 0.0, m, {}, tight()).value;
}

double cos_integral_remainder(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("ci_quadrature: m must be positive");
    auto f = [](double t) {
        const double s = std::sin(0.5 * t);
        return -2.0 * s * s / t;
    };
    std::vector<double> cuts;
    for (double z = 2.0 * kPi; z < m; z += 2.0 * kPi) cuts.push_back(z);
    return quad::integrate(f, 0.0, m, cuts, tight()).value;
}

double ci_quadrature(double m) {
    return specfun::kEulerGamma + std::log(m) + cos_integral_remainder(m);
}

CorrelationTable::CorrelationTable(const bath::ThermalBath& bath, int panels) {
    bath.validate();
    const double beta = bath.beta();
    if (bath.discrete) {
        for (const auto& md : bath.modes) {
            const double w = bath.coupling_scale * md.coupling * md.coupling / (2.0 * md.omega);
            nodes_.push_back(md.omega);
            weight_re_.push_back(w * coth_half(beta, md.omega));
            weight_im_.push_back(w);
        }
        return;
    }
    if (panels < 1) throw DomainError("CorrelationTable: need at least one panel");
    const Rule& rule = legendre20();
    const double top = bath.omega_max();
    const double h = top / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double w = c + 0.5 * h * rule.x[i];
            const double j = bath.density(w) * 0.5 * h * rule.w[i] / kPi;
            nodes_.push_back(w);
            weight_re_.push_back(j * coth_half(beta, w));
            weight_im_.push_back(j);
        }
    }
}

Complex CorrelationTable::operator()(double tau) const {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double ph = nodes_[i] * tau;
        re += weight_re_[i] * std::cos(ph);
        im -= weight_im_[i] * std::sin(ph);
    }
    return {re, im};
}

Complex coefficient_quadrature(const CorrelationTable& alpha, const bath::CellPair& cells,
                               int subdivisions) {
    if (subdivisions < 1) throw DomainError("coefficient_quadrature: need >= 1 subdivision");
    const Rule& rule = legendre20();
    // Composite Gauss-Legendre nodes on [lo, hi].
    auto nodes = [&](double lo, double hi, std::vector<double>& x, std::vector<double>& w) {
        x.clear();
        w.clear();
        const double h = (hi - lo) / subdivisions;
        for (int s = 0; s < subdivisions; ++s) {
            const double c = lo + (s + 0.5) * h;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                x.push_back(c + 0.5 * h * rule.x[i]);
                w.push_back(0.5 * h * rule.w[i]);
            }
        }
    };
    std::vector<double> xa, wa, xb, wb;
    nodes(cells.a_lo, cells.a_hi, xa, wa);
    Complex total = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        const double hi = cells.same ? xa[i] : cells.b_hi;
        nodes(cells.b_lo, hi, xb, wb);
        Complex inner = 0.0;
        for (std::size_t k = 0; k < xb.size(); ++k) inner += wb[k] * alpha(xa[i] - xb[k]);
        total += wa[i] * inner;
    }
    return total;
}

std::vector<double> exact_dephasing(const bath::ThermalBath& bath, double abs_rho12_0,
                                    const std::vector<double>& times) {
    bath.validate();
    const double beta = bath.beta();
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) throw DomainError("exact_dephasing: times must be non-negative");
        double gamma = 0.0;
        if (bath.discrete) {
            for (const auto& md : bath.modes) {
                const double s = std::sin(0.5 * md.omega * t);
                gamma += bath.coupling_scale * 2.0 * md.coupling * md.coupling /
                         std::pow(md.omega, 3) * coth_half(beta, md.omega) * 2.0 * s * s;
            }
        } else if (t > 0.0 && bath.params.eta != 0.0) {
            auto f = [&](double w) {
                const double s = std::sin(0.5 * w * t);
                return bath.density(w) / (w * w) * coth_half(beta, w) * 2.0 * s * s;
            };
            const double top = bath.omega_max();
            const int pieces = std::clamp(static_cast<int>(std::ceil(top * t / kPi)), 4, 20000);
            std::vector<double> cuts;
            for (int i = 1; i < pieces; ++i) cuts.push_back(top * i / pieces);
            const auto r = quad::integrate(f, 0.0, top, cuts, tight());
            if (!r.converged && r.error > 1e-12)
                throw QuadratureError("exact_dephasing", r.worst_lo, r.worst_hi, r.worst_error);
            gamma = 4.0 / kPi * r.value;
        }
        out.push_back(abs_rho12_0 * std::exp(-gamma));
    }
    return out;
}

quapi::TrajectoryResult small_bath_exact(const quapi::SystemSpec& system,
                                         const std::vector<bath::Mode>& modes, double beta,
                                         const std::vector<double>& times,
                                         const SmallBathOptions& opt) {
    using Eigen::MatrixXd;
    using Eigen::MatrixXcd;
    using Eigen::VectorXcd;
    using Eigen::VectorXd;
    system.validate();
    if (modes.size() > 4) throw DomainError("small_bath_exact: at most 4 modes");
    if (opt.fock_cut < 1) throw DomainError("small_bath_exact: fock_cut must be positive");
    if (!(beta > 0.0)) throw DomainError("small_bath_exact: beta must be positive");
    for (const auto& md : modes)
        if (!(md.omega > 0.0) || !std::isfinite(md.coupling))
            throw DomainError("small_bath_exact: invalid mode");

    const int F = opt.fock_cut;
    const int n = static_cast<int>(modes.size());
    long B = 1;
    for (int i = 0; i < n; ++i) B *= F;
    const long D = 2 * B;
    const std::size_t need = 12 * static_cast<std::size_t>(D) * static_cast<std::size_t>(D) * 8;
    if (need > opt.memory_budget)
        throw MemoryBudgetError("small_bath_exact: Hilbert space too large for the memory budget");

    // Bath occupation digits of basis index b (mode 0 least significant).
    auto digit = [&](long b, int i) {
        for (int k = 0; k < i; ++k) b /= F;
        return static_cast<int>(b % F);
    };

    MatrixXd H = MatrixXd::Zero(D, D);
    for (int s = 0; s < 2; ++s) {
        const double sz = s == 0 ? 1.0 : -1.0;
        for (long b = 0; b < B; ++b) {
            const long row = s * B + b;
            double diag = 0.5 * system.epsilon * sz;
            for (int i = 0; i < n; ++i) diag += modes[i].omega * digit(b, i);
            H(row, row) = diag;
            H(row, (1 - s) * B + b) = 0.5 * system.delta;
            long stride = 1;
            for (int i = 0; i < n; ++i) {
                const int k = digit(b, i);
                if (k + 1 < F) {
                    const double x = std::sqrt((k + 1) / (2.0 * modes[i].omega));
                    const long col = s * B + b + stride;
                    H(row, col) += sz * modes[i].coupling * x;
                    H(col, row) += sz * modes[i].coupling * x;
                }
                stride *= F;
            }
        }
    }

    // Thermal populations per mode, truncated at cumulative weight 1 - tol.
    VectorXd P = VectorXd::Ones(B);
    for (int i = 0; i < n; ++i) {
        const double q = std::exp(-beta * modes[i].omega);
        std::vector<double> p;
        double cum = 0.0, w = 1.0 - q;
        while (cum < 1.0 - opt.thermal_truncation) {
            if (static_cast<int>(p.size()) >= F)
                throw DomainError("small_bath_exact: Fock truncation too small for the thermal state");
            p.push_back(w);
            cum += w;
            w *= q;
        }
        for (double& v : p) v /= cum;
        for (long b = 0; b < B; ++b) {
            const int k = digit(b, i);
            P(b) *= k < static_cast<int>(p.size()) ? p[k] : 0.0;
        }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw ConvergenceError("small_bath_exact: eigensolver failed");
    const VectorXd& E = es.eigenvalues();
    const MatrixXd& V = es.eigenvectors();
    const MatrixXd V0 = V.topRows(B), V1 = V.bottomRows(B);

    // Initial state in the eigenbasis.
    const MatrixXd PV0 = P.asDiagonal() * V0, PV1 = P.asDiagonal() * V1;
    const auto& r0 = system.rho0;
    MatrixXcd R = r0(0, 0) * (V0.transpose() * PV0).cast<Complex>();
    R += r0(1, 1) * (V1.transpose() * PV1).cast<Complex>();
    const MatrixXd A01 = V0.transpose() * PV1;
    R += r0(0, 1) * A01.cast<Complex>();
    R += r0(1, 0) * A01.transpose().cast<Complex>();

    // rho_S[s,s'](t) = sum_ac R_ac exp(-i(E_a - E_c)t) (V_s^T V_s')_ac
    const MatrixXcd Q00 = R.cwiseProduct((V0.transpose() * V0).cast<Complex>());
    const MatrixXcd Q11 = R.cwiseProduct((V1.transpose() * V1).cast<Complex>());
    const MatrixXcd Q01 = R.cwiseProduct((V0.transpose() * V1).cast<Complex>());
    MatrixXcd Qtop;
    if (n > 0) {
        MatrixXd T = MatrixXd::Zero(2 * B, D);
        for (int s = 0; s < 2; ++s)
            for (long b = 0; b < B; ++b) {
                bool top = false;
                for (int i = 0; i < n; ++i) top = top || digit(b, i) == F - 1;
                if (top) T.row(s * B + b) = V.row(s * B + b);
            }
        Qtop = R.cwiseProduct((T.transpose() * V).cast<Complex>());
    }

    quapi::TrajectoryResult res;
    for (double t : times) {
        VectorXcd u(D), v(D);
        for (long a = 0; a < D; ++a) {
            u(a) = std::polar(1.0, -E(a) * t);
            v(a) = std::conj(u(a));
        }
        auto contract = [&](const MatrixXcd& Q) { return u.transpose() * (Q * v); };
        quapi::Matrix2c rho;
        rho(0, 0) = contract(Q00)(0, 0);
        rho(1, 1) = contract(Q11)(0, 0);
        rho(0, 1) = contract(Q01)(0, 0);
        rho(1, 0) = std::conj(rho(0, 1));
        if (n > 0) {
            const double top = std::abs(contract(Qtop)(0, 0));
            if (top > opt.population_bound) {
                std::ostringstream os;
                os << "small_bath_exact: highest Fock level holds population " << top
                   << " at t = " << t << " (fock_cut = " << F << ")";
                throw DomainError(os.str());
            }
        }
        res.times.push_back(t);
        res.rho.push_back(rho);
        const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
        res.diagnostics.max_trace_drift = std::max(res.diagnostics.max_trace_drift, drift);
    }
    return res;
}

} // namespace esdf::oracle
