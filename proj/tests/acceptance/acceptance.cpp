// esdf_acceptance: one PASS/FAIL line per acceptance criterion.
//
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "esdf/analysis.hpp"
#include "esdf/bath.hpp"
#include "esdf/errors.hpp"
#include "esdf/oracle.hpp"
#include "esdf/presets.hpp"
#include "esdf/quapi.hpp"
#include "esdf/specfun.hpp"
#include "esdf/spectral.hpp"

using namespace esdf;
using spectral::Model;
using spectral::SpectralDensityId;
using spectral::Variant;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << what << (ok ? "" : " [fail]");
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// One preset run (population or coherence) for one density, computed once.
struct Run {
    std::optional<quapi::TrajectoryResult> traj;
    std::string error;
};

class RunCache {
public:
    const Run& get(const std::string& preset, SpectralDensityId id, bool populations) {
        const auto key = preset + "/" + spectral::to_string(id) + (populations ? "/pop" : "/coh");
        auto it = runs_.find(key);
        if (it != runs_.end()) return it->second;
        Run r;
        try {
            const auto& s = presets::find(preset);
            const auto& coeffs = coefficients(preset, id);
            const auto sys = populations ? presets::population_system(s)
                                         : presets::coherence_system(s);
            r.traj = quapi::propagate(sys, coeffs, presets::propagation(s));
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        return runs_.emplace(key, std::move(r)).first->second;
    }

private:
    const bath::InfluenceCoefficients& coefficients(const std::string& preset, SpectralDensityId id) {
        const auto key = preset + "/" + spectral::to_string(id);
        auto it = coeffs_.find(key);
        if (it != coeffs_.end()) return it->second;
        const auto& s = presets::find(preset);
        auto c = bath::build_coefficients(presets::make_bath(s, id), s.delta_t, s.memory);
        return coeffs_.emplace(key, std::move(c)).first->second;
    }

    std::map<std::string, Run> runs_;
    std::map<std::string, bath::InfluenceCoefficients> coeffs_;
};

RunCache g_runs;

constexpr SpectralDensityId AI{Model::A, Variant::Infinite}, AF{Model::A, Variant::Finite};
constexpr SpectralDensityId BI{Model::B, Variant::Infinite}, BF{Model::B, Variant::Finite};
constexpr SpectralDensityId CI{Model::C, Variant::Infinite}, CF{Model::C, Variant::Finite};
constexpr SpectralDensityId DI{Model::D, Variant::Infinite}, DF{Model::D, Variant::Finite};

// Decay-time comparison of two densities on one preset: `faster` must decay
// strictly faster than `slower` in both relaxation and decoherence.
void require_faster(Verdict& v, const std::string& preset, SpectralDensityId faster,
                    SpectralDensityId slower) {
    const auto& fp = g_runs.get(preset, faster, true);
    const auto& sp = g_runs.get(preset, slower, true);
    const auto& fc = g_runs.get(preset, faster, false);
    const auto& sc = g_runs.get(preset, slower, false);
    for (const Run* r : {&fp, &sp, &fc, &sc}) {
        if (!r->traj) {
            v.require(false, preset + " run failed: " + r->error);
            return;
        }
    }
    const auto nf = spectral::to_string(faster), ns = spectral::to_string(slower);
    const double tf = analysis::settling_time(*fp.traj), ts = analysis::settling_time(*sp.traj);
    v.require(tf < ts, preset + " relaxation time " + nf + " " + fmt(tf) + " < " + ns + " " + fmt(ts));
    const double df = analysis::decoherence_time(*fc.traj), ds = analysis::decoherence_time(*sc.traj);
    v.require(df < ds,
              preset + " decoherence time " + nf + " " + fmt(df) + " < " + ns + " " + fmt(ds));
}

void require_close(Verdict& v, const std::string& preset, SpectralDensityId a, SpectralDensityId b,
                   double tol) {
    const auto& ap = g_runs.get(preset, a, true);
    const auto& bp = g_runs.get(preset, b, true);
    const auto& ac = g_runs.get(preset, a, false);
    const auto& bc = g_runs.get(preset, b, false);
    for (const Run* r : {&ap, &bp, &ac, &bc}) {
        if (!r->traj) {
            v.require(false, preset + " run failed: " + r->error);
            return;
        }
    }
    const double d11 = analysis::max_pointwise(ap.traj->rho11(), bp.traj->rho11());
    const double d12 = analysis::max_pointwise(ac.traj->abs_rho12(), bc.traj->abs_rho12());
    v.require(d11 <= tol && d12 <= tol, preset + " max |d rho11| " + fmt(d11) + ", max |d |rho12|| " +
                                            fmt(d12) + " <= " + fmt(tol));
}

// --- criteria -------------------------------------------------------------

void special_function_fidelity(Verdict& v) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.01 + (5.0 - 0.01) * i / 199.0;
        worst = std::max(worst, std::abs(specfun::w_function(m, 1.0).real() -
                                         oracle::re_w_quadrature(m)));
    }
    v.require(worst <= 1e-8, "max |Re W - oracle| over 200 points " + fmt(worst) + " <= 1e-8");
}

void im_w_trend(Verdict& v) {
    const double w = 1.0;
    double prev = INFINITY;
    bool monotone = true;
    std::string seq;
    for (double c : {4.0, 5.0, 10.0, 25.0, 100.0}) {
        const double im = std::abs(specfun::w_function(w, c).imag());
        monotone = monotone && im < prev;
        prev = im;
        seq += (seq.empty() ? "" : ", ") + fmt(im);
    }
    v.require(monotone, "|Im W| decreasing over omega_c/omega = 4, 5, 10, 25, 100: " + seq);
    const double far = std::abs(specfun::w_function(w, 1e4 * w).imag());
    v.require(far < 1e-4, "|Im W| at omega_c = 1e4 omega is " + fmt(far) + " < 1e-4");
}

void reduction_limits(Verdict& v) {
    const auto grid = spectral::FrequencyGrid::linear(0.01, 30.0, 200);
    spectral::ModelParams base;
    base.eta = 0.02;
    base.omega_c = 11.0;
    base.lambda = 1.0;
    base.kappa1 = 1.0;
    base.kappa2 = 1.0;
    base.omega0 = 10.0;
    spectral::apply_gamma(base, 52.0);
    double worst = 0.0;
    for (auto var : {Variant::Infinite, Variant::Finite}) {
        auto to_a = base;
        to_a.lambda = 0.0;
        to_a.kappa1 = 0.0;
        to_a.kappa2 = 1.0;
        auto to_b = base;
        to_b.kappa2 = 0.0;
        worst = std::max(worst, spectral::reduction_check({Model::C, var}, {Model::A, var}, to_a, grid));
        worst = std::max(worst, spectral::reduction_check({Model::C, var}, {Model::B, var}, to_b, grid));
        worst = std::max(worst, spectral::reduction_check({Model::D, var}, {Model::A, var}, to_a, grid));
        worst = std::max(worst, spectral::reduction_check({Model::D, var}, {Model::B, var}, to_b, grid));
    }
    v.require(worst < 1e-12, "C->A, C->B, D->A, D->B max deviation " + fmt(worst) + " < 1e-12");
    bool exact = true;
    for (double w : grid.points())
        exact = exact && spectral::evaluate(AI, base, w) == base.eta * w * std::exp(-w / base.omega_c);
    v.require(exact, "J_A^I identical to eta w exp(-w/omega_c)");
}

void decoupled_limit(Verdict& v) {
    auto s = presets::find("fig2-a");
    s.eta_prime = 0.0;
    s.params.eta = 0.0;
    s.pop_epsilon = 0.0;
    double worst = 0.0;
    for (auto id : s.densities) {
        const auto coeffs =
            bath::build_coefficients(presets::make_bath(s, id), s.delta_t, s.memory);
        const auto r = quapi::propagate(presets::population_system(s), coeffs, presets::propagation(s));
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            const double c = std::cos(0.5 * s.pop_delta * r.times[i]);
            worst = std::max(worst, std::abs(r.rho[i](0, 0).real() - c * c));
        }
    }
    v.require(worst <= 1e-10, "max |rho11 - cos^2(Delta t/2)| over 200 steps " + fmt(worst) + " <= 1e-10");
}

void pure_dephasing(Verdict& v) {
    // Pin the dephasing constant against exact two-mode dynamics.
    const std::vector<bath::Mode> modes{{1.0, 0.3}, {1.6, 0.2}};
    const double temperature = 300.0 * 0.025460775258592155 / 2.0; // beta = 2
    const auto small = bath::ThermalBath::discrete_modes(modes, temperature);
    quapi::SystemSpec sys;
    sys.epsilon = 1.0;
    sys.delta = 0.0;
    sys.rho0 = quapi::SystemSpec::superposition();
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(0.5 * i);
    const auto ed = oracle::small_bath_exact(sys, modes, small.beta(), times);
    const auto formula = oracle::exact_dephasing(small, 0.5, times);
    double c_dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        c_dev = std::max(c_dev, std::abs(std::abs(ed.rho[i](0, 1)) - formula[i]));
    v.require(c_dev < 1e-6, "two-mode exact dynamics vs dephasing formula " + fmt(c_dev) + " < 1e-6");

    const auto& s = presets::find("dephasing");
    for (auto id : {AI, AF}) {
        const auto& run = g_runs.get("dephasing", id, false);
        if (!run.traj) {
            v.require(false, "dephasing " + spectral::to_string(id) + " failed: " + run.error);
            continue;
        }
        const auto exact =
            oracle::exact_dephasing(presets::make_bath(s, id), 0.5, run.traj->times);
        const double err = analysis::max_pointwise(exact, run.traj->abs_rho12()) / 0.5;
        v.require(err <= 0.02, spectral::to_string(id) + " envelope error " + fmt(err) +
                                   " <= 0.02 (dt = " + fmt(s.delta_t) +
                                   ", memory = " + std::to_string(s.memory) + ")");
    }
}

void structural_invariants(Verdict& v) {
    int runs = 0;
    for (const auto& p : presets::catalog()) {
        if (p.kind != presets::Kind::Dynamics) continue;
        for (auto id : p.densities) {
            for (bool pop : {true, false}) {
                if (pop ? !p.run_populations : !p.run_coherences) continue;
                const auto& r = g_runs.get(p.name, id, pop);
                const std::string tag =
                    p.name + " " + spectral::to_string(id) + (pop ? " populations" : " coherences");
                ++runs;
                if (!r.traj) {
                    v.require(false, tag + ": " + r.error);
                    continue;
                }
                const auto& d = r.traj->diagnostics;
                if (!(d.max_trace_drift < 1e-10 && d.max_hermiticity_defect < 1e-10))
                    v.require(false, tag + ": trace drift " + fmt(d.max_trace_drift) +
                                         ", Hermiticity defect " + fmt(d.max_hermiticity_defect));
            }
        }
    }
    v.require(true, std::to_string(runs) + " preset runs checked for trace drift and Hermiticity < 1e-10");
}

void ohmic_cutoff_ordering(Verdict& v) {
    require_faster(v, "fig2-a", AI, AF);
    require_close(v, "fig2-d", AI, AF, 0.05);
}

void iho_cutoff_ordering(Verdict& v) {
    require_faster(v, "fig3-text-a", BF, BI);
    require_close(v, "fig3-text-d", BI, BF, 0.05);
    // The caption reading is run alongside; it does not decide the verdict.
    for (const char* p : {"fig3-caption-a", "fig3-caption-d"}) {
        Verdict info;
        if (std::string(p).back() == 'a')
            require_faster(info, p, BF, BI);
        else
            require_close(info, p, BI, BF, 0.05);
        v.detail << "; (informational) " << info.detail.str();
    }
}

void common_bath_ordering(Verdict& v) {
    require_faster(v, "fig5", CI, DI);
    require_faster(v, "fig5", CF, DF);
}

void convergence_protocol(Verdict& v) {
    const auto& s = presets::find("fig2-a");
    auto cfg = presets::propagation(s);
    for (auto id : s.densities) {
        const auto b = presets::make_bath(s, id);
        for (bool pop : {true, false}) {
            const auto sys = pop ? presets::population_system(s) : presets::coherence_system(s);
            const auto rep = quapi::convergence_sweep(sys, b, cfg, 0.02);
            const std::string tag = spectral::to_string(id) + (pop ? " populations" : " coherences");
            v.require(rep.dev_half_step_rho11 < 0.02 && rep.dev_half_step_rho12 < 0.02,
                      tag + " dt/2: " + fmt(rep.dev_half_step_rho11) + ", " +
                          fmt(rep.dev_half_step_rho12) + " < 0.02");
            v.require(rep.dev_memory_rho11 < 0.02 && rep.dev_memory_rho12 < 0.02,
                      tag + " memory " + std::to_string(cfg.memory_length + 1) + ": " +
                          fmt(rep.dev_memory_rho11) + ", " + fmt(rep.dev_memory_rho12) + " < 0.02");
        }
    }
}

void coefficient_oracle(Verdict& v) {
    const auto& s = presets::find("fig2-a");
    const double h = s.delta_t, hh = 0.5 * h;
    for (auto id : s.densities) {
        auto b = presets::make_bath(s, id);
        const auto c = bath::build_coefficients(b, h, 3);
        const oracle::CorrelationTable alpha(b, 1000);
        double worst = 0.0;
        auto cmp = [&](Complex got, const bath::CellPair& cells) {
            const Complex ref = oracle::coefficient_quadrature(alpha, cells, 2);
            worst = std::max({worst, std::abs(got.real() - ref.real()),
                              std::abs(got.imag() - ref.imag())});
        };
        cmp(c.full[0], {0.0, h, 0.0, h, true});
        cmp(c.half_self, {0.0, hh, 0.0, hh, true});
        for (int d = 1; d <= 3; ++d) {
            const double t = d * h;
            cmp(c.full[d], {t - hh, t + hh, -hh, hh, false});
            cmp(c.from_origin[d], {t - hh, t + hh, 0.0, hh, false});
            cmp(c.end_full[d], {t - hh, t, -hh, hh, false});
            cmp(c.end_origin[d], {t - hh, t, 0.0, hh, false});
        }
        v.require(worst <= 1e-8, spectral::to_string(id) + " lags 0..3 vs double quadrature " +
                                     fmt(worst) + " <= 1e-8");

        const double scale = 2.5;
        b.coupling_scale = scale;
        const auto cs = bath::build_coefficients(b, h, 3);
        double rel = 0.0;
        auto lin = [&](Complex a, Complex base) {
            if (base != Complex(0.0, 0.0))
                rel = std::max(rel, std::abs(a - scale * base) / std::abs(scale * base));
        };
        lin(cs.half_self, c.half_self);
        for (int d = 0; d <= 3; ++d) {
            lin(cs.full[d], c.full[d]);
            lin(cs.from_origin[d], c.from_origin[d]);
            lin(cs.end_full[d], c.end_full[d]);
            lin(cs.end_origin[d], c.end_origin[d]);
        }
        v.require(rel <= 1e-12, spectral::to_string(id) + " linearity in J " + fmt(rel) + " <= 1e-12");
    }
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds; // 0: no separate limit
    std::function<void(Verdict&)> check;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "special-function fidelity", 10.0, special_function_fidelity},
        {2, "imaginary part of W falls with the cutoff", 1.0, im_w_trend},
        {3, "reduction limits", 1.0, reduction_limits},
        {4, "decoupled-limit exactness", 5.0, decoupled_limit},
        {5, "pure-dephasing oracle", 120.0, pure_dephasing},
        {6, "structural invariants on every preset run", 0.0, structural_invariants},
        {7, "Ohmic bath: infinite cutoff decays faster, large cutoffs agree", 300.0,
         ohmic_cutoff_ordering},
        {8, "IHO model: reversed ordering, large cutoffs agree", 600.0, iho_cutoff_ordering},
        {9, "common bath decays slower than independent baths", 600.0, common_bath_ordering},
        {10, "convergence protocol", 600.0, convergence_protocol},
        {11, "bath-coefficient oracle", 60.0, coefficient_oracle},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.check(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0.0)
            v.require(secs < c.limit_seconds,
                      "runtime " + fmt(secs) + " s < " + fmt(c.limit_seconds) + " s");
        if (!v.pass) ++failures;
        std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
