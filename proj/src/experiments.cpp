#include "dynbif/experiments.hpp"

#include "dynbif/csv.hpp"
#include "dynbif/derivation.hpp"
#include "dynbif/dump.hpp"
#include "dynbif/modulation.hpp"
#include "dynbif/physical.hpp"
#include "dynbif/rng.hpp"
#include "dynbif/spectra.hpp"
#include "dynbif/validate.hpp"

#include <sys/utsname.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#ifndef DYNBIF_VERSION
#define DYNBIF_VERSION "unknown"
#endif

namespace dynbif {

namespace {

namespace fs = std::filesystem;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Output {
    fs::path dir;
    std::ostringstream summary;

    explicit Output(const ExperimentConfig& c) : dir(c.out)
    {
        fs::create_directories(dir);
        std::ofstream(dir / "manifest.txt") << manifest_text(c);
    }

    std::ofstream open(const std::string& name, bool binary = false) const
    {
        std::ofstream f(dir / name, binary ? std::ios::binary : std::ios::out);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    }

    void finish(std::ostream& log) const
    {
        open("summary.txt") << summary.str();
        log << summary.str();
    }
};

Grid physical_grid(const ExperimentConfig& c)
{
    Grid g = default_grid(c.model);
    if (c.nx > 0) g.nx = c.nx;
    if (c.length > 0) g.length = c.length;
    if (c.ny > 0) g.ny = c.ny;
    if (c.width > 0) g.width = c.width;
    return g;
}

SolverConfig solver_config(const ExperimentConfig& c)
{
    SolverConfig s = default_config(c.model);
    if (c.dt > 0) s.dt = c.dt;
    s.scheme = scheme_from_name(c.scheme);
    s.dealias = c.dealias;
    s.record_stride = c.record_stride;
    return s;
}

CoefficientTrack track_from(const ExperimentConfig& c)
{
    if (c.chart == "frozen") return CoefficientTrack::constant(c.bar_mu);
    SlowTrajectory t;
    t.chart = c.chart == "k1" ? ChartId::K1 : c.chart == "k2" ? ChartId::K2 : ChartId::K3;
    t.beta = c.model.beta();
    t.initial = ChartPoint{t.chart, c.r, c.slow, t.beta};
    return CoefficientTrack::chart(t);
}

// Low-mode random-phase envelope with sup norm `amp` (real for M4).
cvec random_envelope(const Grid& g, double amp, bool real, std::uint64_t seed)
{
    CounterRng rng(seed, 0);
    const int ny = std::max(g.ny, 1);
    cvec a(static_cast<std::size_t>(g.size()));
    for (int kx = 0; kx <= 3; ++kx) {
        for (int ky = 0; ky <= (g.ny > 0 ? 3 : 0); ++ky) {
            const double phase = 2 * std::numbers::pi * rng.uniform();
            const double weight = 1.0 / (1 + kx + ky);
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    double arg = 2 * std::numbers::pi * kx * i / g.nx + phase;
                    if (g.ny > 0) arg += 2 * std::numbers::pi * ky * j / g.ny;
                    const std::complex<double> z = real ? std::complex<double>(std::cos(arg)) : std::polar(1.0, arg);
                    a[static_cast<std::size_t>(i * ny + j)] += weight * z;
                }
        }
    }
    double sup = 0;
    for (const auto& v : a) sup = std::max(sup, std::abs(v));
    for (auto& v : a) v *= amp / sup;
    return a;
}

int run_spectra(const ExperimentConfig& c, Output& out)
{
    if (c.points < 2 || !(c.xi_max > c.xi_min) || c.xi_min < 0) throw ConfigError("spectra: need points >= 2 and 0 <= xi_min < xi_max");
    SpectraOptions opt;
    opt.m4_path = c.m4_path == "numeric" ? M4Path::Numeric : M4Path::Quartic;
    std::vector<double> xis;
    for (int k = 0; k < c.points; ++k) xis.push_back(c.xi_min + (c.xi_max - c.xi_min) * k / (c.points - 1));
    {
        auto f = out.open("dispersion.csv");
        write_dispersion_csv(f, c.model, c.spectra_mu, xis, opt);
    }
    const BifurcationData b = classify(c.model);
    out.summary << "model " << c.model.name() << ": " << kind_name(b.kind) << " instability at xi_c = " << format_double(b.xi_c)
                << ", omega_c = " << format_double(b.omega_c) << ", mu_c = " << format_double(b.mu_c) << "\n";
    return kExitOk;
}

int run_derive(const ExperimentConfig& c, Output& out)
{
    const DerivationResult r = derive(c.model);
    out.open("derivation.txt") << r.report;
    const ModulationCoefficients& mc = r.coefficients;
    {
        auto f = out.open("coefficients.csv");
        CsvWriter w(f, {"name", "amplitude", "re", "im", "exact"});
        auto row = [&](const std::string& name, std::size_t j, const Exact& e) {
            const auto z = e.to_complex();
            w.row_text({name, std::to_string(j), format_double(z.real()), format_double(z.imag()), e.str()});
        };
        if (c.model.id == ModelId::M4) {
            row("ch_fourth", 0, mc.ch_fourth);
            row("ch_second", 0, mc.ch_second);
            row("ch_cubic", 0, mc.ch_cubic);
        } else {
            for (std::size_t j = 0; j < mc.diffusion.size(); ++j) {
                row("diffusion", j, mc.diffusion[j]);
                row("mu_linear", j, mc.mu_linear[j]);
                row("advection", j, mc.advection[j]);
                row("cubic_self", j, mc.cubic_self[j]);
                if (j < mc.cubic_cross.size()) row("cubic_cross", j, mc.cubic_cross[j]);
            }
        }
        for (const auto& k : r.constants) row(k.name, 0, k.value);
    }
    out.summary << "model " << c.model.name() << " modulation coefficients\n";
    if (c.model.id == ModelId::M2) {
        // The Ginzburg-Landau form dT A = c1 dX^2 A + c2 A - c3 A|A|^2.
        out.summary << "c1 = " << mc.diffusion[0].str() << "\nc2 = " << mc.mu_linear[0].str()
                    << "\nc3 = " << (-mc.cubic_self[0]).str() << "\n";
    }
    const auto eq = r.report.rfind("Dt[");
    if (eq != std::string::npos) out.summary << r.report.substr(eq);
    return kExitOk;
}

int run_simulate(const ExperimentConfig& c, Output& out)
{
    if (c.level == "physical") {
        const Grid g = physical_grid(c);
        FieldState s = random_band_state(c.model, g, c.amplitude, c.band, c.seed, 0);
        s.mu = c.mu;
        s.eps = c.eps;
        const Trajectory tr = simulate(c.model, s, c.t_end, solver_config(c));
        {
            auto f = out.open("timeseries.csv");
            write_timeseries_csv(f, c.model, tr);
        }
        const FieldState& last = tr.records.back();
        FieldDump d{static_cast<std::uint32_t>(static_cast<int>(c.model.id) + 1),
                    static_cast<std::uint32_t>(g.dim()),
                    static_cast<std::uint32_t>(g.nx),
                    static_cast<std::uint32_t>(g.ny),
                    last.time,
                    last.mu,
                    last.eps,
                    last.components};
        auto f = out.open("final.bin", true);
        write_dump(f, d);
        double sup = 0;
        for (const auto& comp : last.components) sup = std::max(sup, sup_norm(comp));
        out.summary << "simulated " << c.model.name() << " to t = " << format_double(last.time)
                    << ", mu = " << format_double(last.mu) << ", sup = " << format_double(sup) << "\n";
        if (c.model.id == ModelId::M4)
            out.summary << "divergence = " << format_double(divergence_norm(last))
                        << ", mean flow = " << format_double(mean_flow_norm(last)) << "\n";
        return kExitOk;
    }

    const double box = c.envelope_length > 0 ? c.envelope_length : 8 * std::numbers::pi;
    const Grid g = c.model.space_dims == 2 ? Grid::plane(c.envelope_nx, box, c.envelope_nx, box) : Grid::line(c.envelope_nx, box);
    const CoefficientTrack track = track_from(c);
    ModulationState s = ModulationState::zeros(c.model.id, g, track);
    for (std::size_t j = 0; j < s.amplitudes.size(); ++j)
        s.amplitudes[j] = random_envelope(g, c.amplitude, c.model.id == ModelId::M4, c.seed + j);
    ModulationConfig mc;
    mc.dt = c.envelope_dt;
    mc.dealias = c.dealias;
    const double t_end = std::min(c.t_end, track.validity_end());
    const ModulationTrajectory tr = evolve(s, EnvelopeCoefficients::for_model(c.model), mc, t_end, c.record_stride);
    {
        auto f = out.open("modulation.csv");
        write_modulation_csv(f, tr);
    }
    auto f = out.open("final.bin", true);
    write_dump(f, to_dump(tr.records.back()));
    out.summary << "evolved the " << c.model.name() << " envelope on chart " << track.label() << " to tbar = "
                << format_double(tr.records.back().tbar) << ", sup = " << format_double(tr.records.back().sup_norm()) << "\n";
    return kExitOk;
}

struct DelayEntry {
    double eps = 0;
    int replica = 0;
    Takeoff takeoff;
    double oracle = 0;
};

std::vector<DelayEntry> delay_entries(const ExperimentConfig& c, int replicas)
{
    std::vector<DelayEntry> entries;
    for (double e : c.epsilons)
        for (int k = 0; k < replicas; ++k) entries.push_back({e, k, {}, 0});
    const double c2 = c.model.id == ModelId::M2 ? (1 + c.model.brusselator.a * c.model.brusselator.a) / 2 : 1.0;
    parallel_for(entries.size(), resolve_workers(c.workers), [&](std::size_t i) {
        DelayRunOptions o;
        o.eps = entries[i].eps;
        o.mu0 = c.mu0;
        o.amp0 = c.initial_sup;
        o.threshold = c.threshold;
        o.seed = c.seed;
        o.run = i;
        entries[i].takeoff = delay_run(c.model, o);
        entries[i].oracle = scalar_delay_oracle(c.mu0, entries[i].eps, c.initial_sup, c.threshold, c2);
    });
    return entries;
}

int run_validate(const ExperimentConfig& c, Output& out)
{
    bool ok = true;
    std::vector<ValidationRow> rows;
    if (c.model.id == ModelId::M1 || c.model.id == ModelId::M2) {
        if (c.deltas.size() < 2) throw ConfigError("validate: need at least two deltas");
        std::vector<ErrorReport> reports(c.deltas.size());
        std::vector<double> residuals(c.deltas.size(), kNaN);
        const bool with_residual = c.residual && c.model.id == ModelId::M1;
        parallel_for(c.deltas.size(), resolve_workers(c.workers), [&](std::size_t i) {
            StaticRunOptions o;
            o.delta = c.deltas[i];
            reports[i] = static_validity_run(c.model, o);
            if (with_residual) residuals[i] = reconstruction_residual(c.deltas[i]);
        });
        std::vector<double> errs;
        for (const auto& r : reports) errs.push_back(r.max_error);
        const SlopeFit fit = fit_loglog(c.deltas, errs);
        const double res_slope = with_residual ? fit_loglog(c.deltas, residuals).slope : kNaN;
        for (std::size_t i = 0; i < c.deltas.size(); ++i) {
            rows.push_back({c.deltas[i], 0.0, errs[i], fit.slope, res_slope, kNaN, kNaN});
            auto f = out.open("errors_delta_" + format_double(c.deltas[i]) + ".csv");
            CsvWriter w(f, {"t", "sup_error", "l2_error"});
            for (std::size_t k = 0; k < reports[i].times.size(); ++k)
                w.row({reports[i].times[k], reports[i].sup_errors[k], reports[i].l2_errors[k]});
        }
        const bool slope_ok = fit.slope >= 1.7 && fit.slope <= 2.3;
        ok = ok && slope_ok;
        out.summary << "error slope " << format_double(fit.slope) << " (95% interval " << format_double(fit.ci_low) << ", "
                    << format_double(fit.ci_high) << "), target [1.7, 2.3]: " << (slope_ok ? "ok" : "FAILED") << "\n";
        if (with_residual) {
            const bool res_ok = res_slope >= 2.6 && res_slope <= 3.4;
            ok = ok && res_ok;
            out.summary << "residual slope " << format_double(res_slope) << ", target [2.6, 3.4]: " << (res_ok ? "ok" : "FAILED") << "\n";
        }
    }
    if (c.model.id != ModelId::M4 && !c.epsilons.empty()) {
        for (const auto& e : delay_entries(c, 1)) {
            rows.push_back({kNaN, e.eps, kNaN, kNaN, kNaN, e.takeoff.time, e.takeoff.mu});
            const bool delayed = e.takeoff.mu > 0;
            ok = ok && delayed;
            out.summary << "eps " << format_double(e.eps) << ": take-off at t = " << format_double(e.takeoff.time)
                        << ", mu = " << format_double(e.takeoff.mu) << " (scalar oracle " << format_double(e.oracle)
                        << "): " << (delayed ? "delayed" : "NOT DELAYED") << "\n";
        }
    }
    if (c.model.id == ModelId::M4) {
        auto f = out.open("probes.csv");
        CsvWriter w(f, {"xi", "rate", "quartic", "relative_error"});
        for (double xi : {0.02, 0.05, 0.1}) {
            ProbeOptions po;
            po.transient = 10;
            const double rate = linear_growth_probe(c.model, xi, 0.0, po).rate;
            const double quartic = -3 * std::pow(xi, 4);
            const double rel = std::abs(rate - quartic) / std::abs(quartic);
            w.row({xi, rate, quartic, rel});
            ok = ok && rel <= 0.1;
            out.summary << "xi " << format_double(xi) << ": growth rate " << format_double(rate) << " vs -3 xi^4 = "
                        << format_double(quartic) << (rel <= 0.1 ? " ok" : " FAILED") << "\n";
        }
    }
    {
        auto f = out.open("validation.csv");
        write_validation_csv(f, rows);
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int run_sweep(const ExperimentConfig& c, Output& out)
{
    if (c.model.id == ModelId::M4) throw ConfigError("sweep: slow-passage sweeps cover m1 to m3");
    if (c.epsilons.empty() || c.replicas < 1) throw ConfigError("sweep: need epsilons and replicas >= 1");
    const auto entries = delay_entries(c, c.replicas);
    auto f = out.open("sweep.csv");
    CsvWriter w(f, {"eps", "replica", "t_takeoff", "mu_takeoff", "oracle_mu"});
    for (const auto& e : entries) {
        w.row({e.eps, static_cast<double>(e.replica), e.takeoff.time, e.takeoff.mu, e.oracle});
        out.summary << "eps " << format_double(e.eps) << " replica " << e.replica << ": mu at take-off "
                    << format_double(e.takeoff.mu) << "\n";
    }
    return kExitOk;
}

}  // namespace

std::string version_string() { return DYNBIF_VERSION; }

std::string platform_fingerprint()
{
    std::string s;
    utsname u{};
    if (uname(&u) == 0) s = std::string(u.sysname) + " " + u.release + " " + u.machine;
#if defined(__clang__)
    s += ", clang " __clang_version__;
#elif defined(__GNUC__)
    s += ", gcc " __VERSION__;
#endif
    s += ", C++ " + std::to_string(__cplusplus);
    return s;
}

std::string manifest_text(const ExperimentConfig& c)
{
    return "# version = " + version_string() + "\n# platform = " + platform_fingerprint() + "\n\n" + to_text(c);
}

int resolve_workers(int requested)
{
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

int run_experiment(const ExperimentConfig& c, std::ostream& log)
{
    try {
        c.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    Output out(c);
    int code = kExitOk;
    switch (c.kind) {
    case ExperimentKind::Spectra: code = run_spectra(c, out); break;
    case ExperimentKind::Simulate: code = run_simulate(c, out); break;
    case ExperimentKind::Derive: code = run_derive(c, out); break;
    case ExperimentKind::Validate: code = run_validate(c, out); break;
    case ExperimentKind::Sweep: code = run_sweep(c, out); break;
    }
    out.finish(log);
    return code;
}

}  // namespace dynbif
