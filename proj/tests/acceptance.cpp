// Acceptance checks, one PASS/FAIL line per criterion.
//   acceptance [--criterion N]
// Tolerances and runtime budgets are pinned below next to each check.

#include "oracles.hpp"

#include "dynbif/derivation.hpp"
#include "dynbif/geometry.hpp"
#include "dynbif/modulation.hpp"
#include "dynbif/opexpand.hpp"
#include "dynbif/physical.hpp"
#include "dynbif/rng.hpp"
#include "dynbif/spectra.hpp"
#include "dynbif/validate.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifndef DYNBIF_CLI_PATH
#define DYNBIF_CLI_PATH "dynbif"
#endif

using namespace dynbif;
using cd = std::complex<double>;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v, int prec = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// 1. Dispersion against brute-force symbol eigen-solves.
void dispersion_fidelity(Outcome& o)
{
    constexpr double tol = 1e-10;
    SpectraOptions numeric;
    numeric.m4_path = M4Path::Numeric;
    const std::vector<ModelSpec> models = {ModelSpec::m1(), ModelSpec::m2(), ModelSpec::m3(), ModelSpec::m4()};
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const ModelSpec& m = models[mi];
        CounterRng rng(2024, mi);
        double worst = 0;
        for (int s = 0; s < 50; ++s) {
            const double xi = 0.02 + 1.48 * rng.uniform();
            const double mu = -0.3 + 0.6 * rng.uniform();
            std::vector<cd> ref;
            switch (m.id) {
            case ModelId::M1: ref = oracle::m1_eigenvalues(xi, mu); break;
            case ModelId::M2: ref = oracle::m2_eigenvalues(1, 1, 0.5, xi, mu); break;
            case ModelId::M3: ref = oracle::m3_eigenvalues(xi, mu); break;
            case ModelId::M4: ref = {oracle::m4_leading_eigenvalue(xi, mu)}; break;
            }
            const DispersionResult got = dispersion(m, xi, mu, numeric);
            if (got.eigenvalues.size() < ref.size()) {
                worst = INFINITY;
                continue;
            }
            for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(got.eigenvalues[k] - ref[k]));
        }
        o.detail << " " << m.name() << " " << fmt(worst, 2);
        o.require(worst <= tol, m.name() + " dispersion error above 1e-10");
    }
}

// 2. Band edges against the leading-order asymptotics (and the exact roots).
void band_asymptotics(Outcome& o)
{
    for (double d : {0.05, 0.1, 0.2}) {
        const auto [lo, hi] = unstable_band(ModelSpec::m1(), d);
        const double exact_err = std::max(std::abs(lo - oracle::m1_band_edge(d, -1)), std::abs(hi - oracle::m1_band_edge(d, 1)));
        const double dev = std::max(std::abs(lo - (1 - d / 2)), std::abs(hi - (1 + d / 2)));
        o.require(exact_err <= 1e-10, "m1 band root at delta " + fmt(d));
        o.require(dev <= 0.6 * d * d, "m1 |xi - (1 +- delta/2)| <= 0.6 delta^2 at delta " + fmt(d));
        o.detail << " m1(" << fmt(d) << ") dev/delta^2 " << fmt(dev / (d * d), 3);
    }
    for (double d : {0.05, 0.1, 0.2}) {
        const auto [lo, hi] = unstable_band(ModelSpec::m4(), d);
        const double root = oracle::m4_quartic_band_edge(d);
        o.require(std::abs(hi - root) <= 1e-10 && std::abs(lo + root) <= 1e-10, "m4 band root of the quartic at delta " + fmt(d));
        const double leading = std::sqrt(2.0 / 3.0) * d;
        const double dev = std::max(std::abs(hi - leading), std::abs(lo + leading));
        o.require(dev <= 1.0 * d * d, "m4 |xi - sqrt(2/3) delta| <= delta^2 at delta " + fmt(d));
        o.detail << " m4(" << fmt(d) << ") xi+/delta " << fmt(hi / d, 4) << " vs " << fmt(std::sqrt(2.0 / 3.0), 4);
    }
}

std::vector<TestField> oracle_fields(int n, int p)
{
    auto fac = [](std::vector<cd> poly, cd rate) { return Factor1D{std::move(poly), rate}; };
    auto term = [&](cd c, std::vector<Factor1D> fast, std::vector<Factor1D> slow) {
        fast.resize(static_cast<std::size_t>(n), fac({1.0}, 0.0));
        slow.resize(static_cast<std::size_t>(p), fac({1.0}, 0.0));
        return SeparableTerm{c, fast, slow};
    };
    const cd I(0, 1);
    std::vector<TestField> f(6, TestField(n, p));
    f[0].add(term(1.0, {fac({1.0}, I), fac({1.0}, I)}, {fac({1.0, 0.5, -0.2}, 0.0)}));
    f[1].add(term(0.7, {fac({0.3, 0.1}, 0.7 * I), fac({1.0}, 2.0 * I)}, {fac({1.0}, -0.4), fac({1.0}, 0.3 * I)}));
    f[2].add(term(1.0, {fac({1.0}, I)}, {fac({0.0, 1.0}, 0.5 * I)}))
        .add(term(cd(0.2, -0.3), {fac({1.0, 0.0, 0.25}, -I), fac({0.5}, -I)}, {fac({1.0}, 0.2)}));
    f[3].add(term(0.5, {fac({1.0}, 2.0 * I), fac({1.0, 0.3}, 0.0)}, {fac({0.0, 0.0, 0.0, 1.0 / 6}, 0.0), fac({1.0, 1.0}, 0.0)}));
    f[4].add(term(1.0, {fac({1.0}, 0.2), fac({1.0}, 3.0 * I)}, {fac({1.0, 1.0}, I)}));
    f[5].add(term(cd(0, 1), {fac({0.5, -0.5, 0.1}, 1.3 * I), fac({1.0}, 0.1)}, {fac({0.2, 0.0, 0.3}, -0.6 * I), fac({1.0}, -0.1)}))
        .add(term(-0.4, {fac({1.0}, 0.0), fac({1.0}, I)}, {fac({1.0}, 0.9 * I), fac({1.0}, 0.0)}));
    return f;
}

// 3. Operator expansion: substitution residual and SH grades as word lists.
void operator_expansion(Outcome& o)
{
    constexpr double tol = 1e-11;
    struct Case {
        std::string name;
        OperatorSpec spec;
    };
    const std::vector<Case> cases = {{"sh", swift_hohenberg_operator()},
                                     {"laplacian(2,1)", laplacian_operator(2, 1)},
                                     {"laplacian(2,2)", laplacian_operator(2, 2)},
                                     {"kolmogorov", kolmogorov_operator_family()}};
    for (const auto& c : cases) {
        double worst = 0;
        const auto fields = oracle_fields(c.spec.n, c.spec.p);
        for (std::size_t comp = 0; comp < c.spec.components.size(); ++comp)
            for (double r : {0.1, 0.25, 0.5})
                for (const auto& f : fields)
                    worst = std::max(worst, substitution_check(c.spec, static_cast<int>(comp), f, r).max_abs_error);
        o.detail << " " << c.name << " " << fmt(worst, 2);
        o.require(worst <= tol, c.name + " substitution residual above 1e-11");
    }
    // -4 dxbar dx (1 + dx^2) and -2 dxbar^2 (1 + 3 dx^2) as word lists.
    auto word = [](int fast, int slow, int c) { return DerivativeWord{{fast}, {slow}, CoefficientTag::Constant, Exact(c)}; };
    std::vector<DerivativeWord> g1 = {word(1, 1, -4), word(3, 1, -4)};
    std::vector<DerivativeWord> g2 = {word(0, 2, -2), word(2, 2, -6)};
    normalize_words(g1);
    normalize_words(g2);
    const GradedExpansion sh = expand_operator(swift_hohenberg_operator());
    auto same = [](const std::vector<DerivativeWord>& a, const std::vector<DerivativeWord>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k].fast != b[k].fast || a[k].slow != b[k].slow || a[k].tag != b[k].tag || !(a[k].coefficient == b[k].coefficient))
                return false;
        return true;
    };
    o.require(same(sh.words(1, 0), g1), "SH grade 1 words");
    o.require(same(sh.words(2, 0), g2), "SH grade 2 words");
    o.detail << " grade1 '" << format_words(sh.words(1, 0), 1, 1) << "' grade2 '" << format_words(sh.words(2, 0), 1, 1) << "'";
}

// 4. Closed-form slow flows against RK4, and the eps invariant.
void slow_flows(Outcome& o)
{
    double worst = 0, worst_inv = 0;
    for (double beta : {2.0, 4.0}) {
        CounterRng rng(7, static_cast<std::uint64_t>(beta));
        for (int k = 0; k < 20; ++k) {
            for (ChartId chart : {ChartId::K1, ChartId::K2, ChartId::K3}) {
                const double r0 = 0.05 + 0.95 * rng.uniform();
                const double s0 = chart == ChartId::K2 ? -5 + 10 * rng.uniform() : 0.01 + 0.99 * rng.uniform();
                const SlowTrajectory tr{chart, {chart, r0, s0, beta}, beta};
                const double t_end = chart == ChartId::K1 ? 0.9 * k1_blowup_time(tr) : 50.0;
                const double inv0 = slow_invariant(tr.initial);
                for (int q = 1; q <= 4; ++q) {
                    const double t = t_end * q / 4;
                    const ChartPoint p = slow_flow_eval(tr, t);
                    const int id = chart == ChartId::K1 ? 1 : chart == ChartId::K2 ? 2 : 3;
                    const oracle::SlowState ref = oracle::slow_flow_rk4(id, beta, {r0, s0}, t, 20000);
                    worst = std::max({worst, std::abs(p.r - ref.r) / std::max(1.0, std::abs(ref.r)),
                                      std::abs(p.slow - ref.slow) / std::max(1.0, std::abs(ref.slow))});
                    if (chart != ChartId::K2)
                        worst_inv = std::max(worst_inv, std::abs(slow_invariant(p) - inv0) / std::abs(inv0));
                }
            }
        }
    }
    o.detail << " closed form vs RK4 " << fmt(worst, 2) << ", invariant drift " << fmt(worst_inv, 2);
    o.require(worst <= 1e-8, "slow flow closed form vs RK4 within 1e-8");
    o.require(worst_inv <= 1e-10, "r^(2+beta) eps invariant within 1e-10");
}

// 5. Chart transitions and the K2 -> K3 envelope handoff.
void chart_transitions(Outcome& o)
{
    CounterRng rng(11, 0);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const double beta = k % 2 ? 4.0 : 2.0;
        const ChartPoint k2{ChartId::K2, 0.05 + rng.uniform(), -(0.01 + 5 * rng.uniform()), beta};
        const SlowParams a = chart_to_params(k2);
        const SlowParams b = chart_to_params(kappa12(k2).point);
        worst = std::max({worst, std::abs(a.mu - b.mu) / std::abs(a.mu), std::abs(a.eps - b.eps) / std::abs(a.eps)});
        const ChartPoint k3{ChartId::K3, 0.05 + rng.uniform(), 0.01 + 5 * rng.uniform(), beta};
        const SlowParams c = chart_to_params(k3);
        const SlowParams d = chart_to_params(kappa23(k3).point);
        worst = std::max({worst, std::abs(c.mu - d.mu) / std::abs(c.mu), std::abs(c.eps - d.eps) / std::abs(c.eps)});
    }
    o.detail << " kappa12/kappa23 " << fmt(worst, 2);
    o.require(worst <= 1e-12, "chart maps agree on (mu, eps) to 1e-12");

    // Homogeneous M1 envelope carried in K2, and handed to K3 at the start;
    // r psi is compared at equal original times over one time unit.
    const EnvelopeCoefficients coeff = EnvelopeCoefficients::for_model(ModelSpec::m1());
    const double r2 = 0.5, mu2 = 1.0;
    const SlowTrajectory t2{ChartId::K2, {ChartId::K2, r2, mu2, 2}, 2};
    ModulationState s2 = ModulationState::zeros(ModelId::M1, Grid::line(16, 8 * std::numbers::pi), CoefficientTrack::chart(t2));
    for (auto& v : s2.amplitudes[0]) v = cd(0.2, 0.1);
    const ModulationState s3 = handoff_k2_to_k3(s2);
    double handoff = 0;
    for (double T : {0.25, 0.5, 0.75, 1.0}) {
        const int steps = 4000;
        ModulationConfig cfg;
        cfg.dt = std::pow(r2, 2) * T / steps;
        ModulationSolver a(s2, coeff, cfg);
        a.advance(steps);
        const double t3 = k3_time_for_original(s3.track.traj, T);
        cfg.dt = t3 / steps;
        ModulationSolver b(s3, coeff, cfg);
        b.advance(steps);
        const ModulationState sa = a.state(), sb = b.state();
        const double ra = sa.track.radius(sa.tbar), rb = sb.track.radius(sb.tbar);
        for (std::size_t q = 0; q < sa.amplitudes[0].size(); ++q)
            handoff = std::max(handoff, std::abs(ra * sa.amplitudes[0][q] - rb * sb.amplitudes[0][q]));
    }
    o.detail << ", handoff sup " << fmt(handoff, 2);
    o.require(handoff <= 1e-6, "K2/K3 handoff within 1e-6");
}

// 6. Derived modulation coefficients.
void derived_coefficients(Outcome& o)
{
    const ModulationCoefficients m1 = derive(ModelSpec::m1()).coefficients;
    o.require(m1.diffusion[0] == Exact(4) && m1.mu_linear[0] == Exact(1) && m1.cubic_self[0] == Exact(-3), "M1 (4, 1, -3)");

    double worst = 0;
    for (const BrusselatorParams& p : std::vector<BrusselatorParams>{{1, 1, 0.5}, {2, 1, 0.5}, {0.5, 1, 0.2}, {1.5, 2, 1}, {0.8, 1, 1}}) {
        const ModulationCoefficients c = derive(ModelSpec::m2(p)).coefficients;
        const auto ref = oracle::m2_reference_coefficients(p.a, p.d1, p.d2);
        worst = std::max({worst, std::abs(c.diffusion[0].to_complex() - ref.c1), std::abs(c.mu_linear[0].to_complex() - ref.c2),
                          std::abs(-c.cubic_self[0].to_complex() - ref.c3)});
    }
    o.detail << " m2 max deviation " << fmt(worst, 2);
    o.require(worst <= 1e-12, "M2 closed-form (c1, c2, c3) within 1e-12");

    const ModulationCoefficients m3 = derive(ModelSpec::m3()).coefficients;
    o.require(m3.advection.size() == 2 && m3.advection[0] == Exact(1) && m3.advection[1] == Exact(-1), "M3 group velocities +-1");

    const ModulationCoefficients m4 = derive(ModelSpec::m4()).coefficients;
    o.require(m4.ch_fourth == Exact(-3) && m4.ch_second == -Exact::sqrt2() && m4.ch_cubic == Exact::ratio(2, 3),
              "M4 (-3, -sqrt2, 2/3)");
    o.detail << "; m4 (" << m4.ch_fourth.str() << ", " << m4.ch_second.str() << ", " << m4.ch_cubic.str() << ")";
}

// 7. Static modulation validity, error slope in [1.7, 2.3].
void static_validity(Outcome& o)
{
    const std::vector<double> deltas = {0.2, 0.1, 0.05};
    for (const ModelSpec& m : {ModelSpec::m1(), ModelSpec::m2()}) {
        const SweepReport r = static_validity_sweep(m, deltas);
        const double slope = oracle::loglog_slope(r.deltas, r.max_errors);
        o.require(std::abs(slope - r.fit.slope) <= 1e-12, m.name() + " slope fit routes agree");
        o.require(slope >= 1.7 && slope <= 2.3, m.name() + " slope in [1.7, 2.3]");
        o.detail << " " << m.name() << " errors";
        for (double e : r.max_errors) o.detail << " " << fmt(e, 3);
        o.detail << " slope " << fmt(slope, 3) << " (95% " << fmt(r.fit.ci_low, 3) << ".." << fmt(r.fit.ci_high, 3) << ");";
    }
}

// 8. Residual of the reconstructed M1 field, slope in [2.6, 3.4].
void residual_order(Outcome& o)
{
    const std::vector<double> deltas = {0.2, 0.1, 0.05};
    std::vector<double> res;
    for (double d : deltas) res.push_back(reconstruction_residual(d));
    const double slope = oracle::loglog_slope(deltas, res);
    o.detail << " residuals " << fmt(res[0], 3) << " " << fmt(res[1], 3) << " " << fmt(res[2], 3) << " slope " << fmt(slope, 3);
    o.require(slope >= 2.6 && slope <= 3.4, "residual slope in [2.6, 3.4]");
}

// 9. Delayed stability loss for M1 and M2.
void delayed_loss(Outcome& o)
{
    const double mu0 = -0.05, amp0 = 1e-6, threshold = 1e-2;
    for (const ModelSpec& m : {ModelSpec::m1(), ModelSpec::m2()}) {
        const double c2 = m.id == ModelId::M1 ? 1.0 : (1 + m.brusselator.a * m.brusselator.a) / 2;
        std::vector<double> mus;
        for (double eps : {1e-3, 1e-4}) {
            DelayRunOptions opt;
            opt.eps = eps;
            opt.mu0 = mu0;
            opt.amp0 = amp0;
            opt.threshold = threshold;
            const Takeoff t = delay_run(m, opt);
            const double ref = oracle::scalar_takeoff_mu(mu0, eps, amp0, threshold, c2);
            mus.push_back(t.mu);
            o.require(t.mu > 0, m.name() + " take-off after mu = 0 at eps " + fmt(eps));
            o.require(std::abs(t.mu - ref) <= 0.3 * ref, m.name() + " within 30% of the scalar oracle at eps " + fmt(eps));
            o.detail << " " << m.name() << " eps " << fmt(eps) << " mu* " << fmt(t.mu, 4) << " (oracle " << fmt(ref, 4) << ");";
        }
        // Criterion as worded: mu* increases as eps decreases. The scalar
        // oracle decreases towards -mu0 instead; both are checked.
        o.require(mus[1] > mus[0], m.name() + " mu* increases as eps decreases");
        o.require(std::abs(mus[1] + mu0) < std::abs(mus[0] + mu0), m.name() + " mu* approaches -mu0 as eps decreases");
    }
}

// 10. Kolmogorov flow linear validation.
void kolmogorov_linear(Outcome& o)
{
    const ModelSpec m = ModelSpec::m4();
    for (double xi : {0.02, 0.05, 0.1}) {
        ProbeOptions po;
        po.transient = 10;
        const double rate = linear_growth_probe(m, xi, 0.0, po).rate;
        const double quartic = -3 * std::pow(xi, 4);
        const double rel = std::abs(rate - quartic) / std::abs(quartic);
        o.detail << " xi " << fmt(xi) << " rel " << fmt(rel, 2) << ";";
        o.require(rel <= 0.1, "growth rate within 10% of -3 xi^4 at xi " + fmt(xi));
    }
    const Grid g = default_grid(m);
    FieldState s = random_band_state(m, g, 0.05, 0.1, 3, 0);
    s.mu = 0.01;
    s.eps = 1e-3;
    SolverConfig cfg = default_config(m);
    Solver solver(m, s, cfg);
    double div = 0, mean = 0;
    for (int k = 0; k <= 300; ++k) {
        if (k > 0) solver.step();
        const FieldState st = solver.state();
        div = std::max(div, divergence_norm(st));
        mean = std::max(mean, mean_flow_norm(st));
    }
    o.detail << " max div " << fmt(div, 2) << ", max mean flow " << fmt(mean, 2);
    o.require(div <= 1e-10, "divergence within 1e-10 at every step");
    o.require(mean <= 1e-10, "mean flow within 1e-10 at every step");
}

// 11. Cahn-Hilliard mass law on chart K1.
void kolmogorov_mass_law(Outcome& o)
{
    const EnvelopeCoefficients coeff = EnvelopeCoefficients::for_model(ModelSpec::m4());
    const SlowTrajectory t1{ChartId::K1, {ChartId::K1, 0.2, 0.05, 4}, 4};
    const Grid g = Grid::line(64, 20 * std::numbers::pi);
    ModulationState s = ModulationState::zeros(ModelId::M4, g, CoefficientTrack::chart(t1));
    for (int i = 0; i < g.nx; ++i)
        s.amplitudes[0][static_cast<std::size_t>(i)] = 0.3 + 0.2 * std::cos(4 * std::numbers::pi * i / g.nx) + 0.1 * std::sin(2 * std::numbers::pi * i / g.nx);
    const double m0 = s.mass().real();
    ModulationConfig cfg;
    cfg.dt = 0.01;
    ModulationSolver solver(s, coeff, cfg);
    const long total = static_cast<long>(s.track.validity_end() / cfg.dt);
    double worst = 0;
    for (long k = 1; k <= total; ++k) {
        solver.step();
        if (k % 100 != 0 && k != total) continue;
        const ModulationState st = solver.state();
        const oracle::SlowState r = oracle::slow_flow_rk4(1, 4, {0.2, 0.05}, st.tbar, 200000);
        worst = std::max(worst, std::abs(st.mass().real() - m0 * 0.2 / r.r) / std::abs(m0 * 0.2 / r.r));
    }
    o.detail << " window " << fmt(s.track.validity_end(), 4) << ", max relative deviation " << fmt(worst, 2);
    o.require(worst <= 1e-8, "mass law within 1e-8");
}

// 12. Reruns with the same seed give identical CSV bytes.
void determinism(Outcome& o)
{
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / ("dynbif_acceptance_" + std::to_string(getpid()));
    const std::vector<std::string> runs = {"simulate --model m1 --t-end 5 --seed 42",
                                           "simulate --model m2 --level modulation --chart k2 --set modulation.slow=-1 --t-end 2 --seed 42",
                                           "sweep --model m1 --epsilons 0.002 --replicas 2 --mu0 -0.02 --seed 42",
                                           "spectra --model m4 --set spectra.m4_path=numeric --points 21 --seed 42"};
    std::size_t compared = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        std::vector<fs::path> dirs;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = base / (std::to_string(k) + "_" + std::to_string(rep));
            const std::string cmd = std::string(DYNBIF_CLI_PATH) + " " + runs[k] + " --out " + out.string() + " > /dev/null";
            const int rc = std::system(cmd.c_str());
            o.require(rc == 0, "run '" + runs[k] + "' exited with " + std::to_string(rc));
            dirs.push_back(out);
        }
        if (!fs::exists(dirs[0])) continue;
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            if (e.path().extension() != ".csv") continue;
            auto slurp = [](const fs::path& p) {
                std::ifstream in(p, std::ios::binary);
                return std::string(std::istreambuf_iterator<char>(in), {});
            };
            const std::string a = slurp(e.path()), b = slurp(dirs[1] / e.path().filename());
            o.require(!a.empty() && a == b, e.path().filename().string() + " differs between reruns");
            ++compared;
        }
    }
    fs::remove_all(base);
    o.detail << " " << compared << " CSV files compared";
    o.require(compared >= 4, "every run produced a CSV");
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> c = {
        {1, "dispersion fidelity", 60, dispersion_fidelity},
        {2, "band asymptotics", 10, band_asymptotics},
        {3, "operator expansion", 10, operator_expansion},
        {4, "slow-flow closed forms", 10, slow_flows},
        {5, "chart transitions", 60, chart_transitions},
        {6, "derived coefficients", 60, derived_coefficients},
        {7, "static modulation validity", 1200, static_validity},
        {8, "residual order", 300, residual_order},
        {9, "delayed stability loss", 900, delayed_loss},
        {10, "Kolmogorov linear validation", 600, kolmogorov_linear},
        {11, "Cahn-Hilliard mass law", 120, kolmogorov_mass_law},
        {12, "determinism", 60, determinism},
    };
    return c;
}

bool run_one(const Criterion& c)
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.run(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_seconds, "runtime above " + fmt(c.budget_seconds) + " s");
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ":" << o.detail.str() << " ("
              << fmt(secs, 3) << " s)" << std::endl;
    return o.pass;
}

}  // namespace

int main(int argc, char** argv)
{
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 2;
        }
    }
    bool all = true;
    bool found = false;
    for (const auto& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        found = true;
        all = run_one(c) && all;
    }
    if (!found) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return all ? 0 : 1;
}
