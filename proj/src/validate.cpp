#include "dynbif/validate.hpp"

#include "dynbif/csv.hpp"
#include "dynbif/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dynbif {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); }

// Move the spectrum of an n-point transform onto m points (zero padding or
// truncation; the Nyquist mode is split or dropped).
cvec resample_spectrum(const cvec& h, int n, int m)
{
    cvec out(static_cast<std::size_t>(m));
    const int half = std::min(n, m) / 2;
    const double scale = static_cast<double>(m) / n;
    for (int j = 0; j < n; ++j) {
        const int w = wave_index(j, n);
        const cd v = h[static_cast<std::size_t>(j)] * scale;
        if (std::abs(w) < half) {
            out[static_cast<std::size_t>((w + m) % m)] += v;
        } else if (std::abs(w) == half && m > n) {
            out[static_cast<std::size_t>(half)] += 0.5 * v;
            out[static_cast<std::size_t>(m - half)] += 0.5 * v;
        }
    }
    return out;
}

// Values of a field given on grid g at the points xbar_i = g.length * i / nx
// (and ybar_j likewise).
cvec resample(const cvec& f, const Grid& g, int nx, int ny)
{
    if (g.nx == nx && g.ny == ny) return f;
    if (g.ny == 0) {
        Fft a(g.nx), b(nx);
        cvec h, out;
        a.forward(f, h);
        b.inverse(resample_spectrum(h, g.nx, nx), out);
        return out;
    }
    // Rows then columns.
    cvec tmp(static_cast<std::size_t>(nx) * static_cast<std::size_t>(g.ny));
    {
        Fft a(g.nx), b(nx);
        for (int j = 0; j < g.ny; ++j) {
            cvec col(static_cast<std::size_t>(g.nx)), h, out;
            for (int i = 0; i < g.nx; ++i) col[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i * g.ny + j)];
            a.forward(col, h);
            b.inverse(resample_spectrum(h, g.nx, nx), out);
            for (int i = 0; i < nx; ++i) tmp[static_cast<std::size_t>(i * g.ny + j)] = out[static_cast<std::size_t>(i)];
        }
    }
    cvec res(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    Fft a(g.ny), b(ny);
    for (int i = 0; i < nx; ++i) {
        cvec row(tmp.begin() + static_cast<std::ptrdiff_t>(i) * g.ny, tmp.begin() + static_cast<std::ptrdiff_t>(i + 1) * g.ny);
        cvec h, out;
        a.forward(row, h);
        b.inverse(resample_spectrum(h, g.ny, ny), out);
        std::copy(out.begin(), out.end(), res.begin() + static_cast<std::ptrdiff_t>(i) * ny);
    }
    return res;
}

// Trigonometric interpolant of a 1-D field evaluated at arbitrary xbar.
cvec evaluate_at(const cvec& f, const Grid& g, const std::vector<double>& xbar)
{
    Fft a(g.nx);
    cvec h;
    a.forward(f, h);
    cvec out(xbar.size());
    for (std::size_t p = 0; p < xbar.size(); ++p) {
        cd s = 0;
        for (int j = 0; j < g.nx; ++j) {
            const int w = wave_index(j, g.nx);
            if (2 * std::abs(w) == g.nx) continue;
            s += h[static_cast<std::size_t>(j)] * std::polar(1.0, 2 * kPi * w * xbar[p] / g.length);
        }
        out[p] = s / static_cast<double>(g.nx);
    }
    return out;
}

// Amplitude sampled at xbar = r x on the physical x nodes (y nodes in 2-D).
cvec sample_amplitude(const cvec& a, const Grid& mg, const Grid& phys, const ReconstructContext& ctx)
{
    const bool box_x = close_rel(ctx.r * phys.length, mg.length, 1e-12);
    const bool box_y = mg.ny == 0 || close_rel(ctx.r * phys.width, mg.width, 1e-12);
    const int pny = mg.ny > 0 ? phys.ny : 0;
    if (box_x && box_y) {
        const bool nodes = mg.nx % phys.nx == 0 && (mg.ny == 0 || mg.ny % phys.ny == 0);
        if (nodes) {
            const int sx = mg.nx / phys.nx, sy = mg.ny > 0 ? mg.ny / phys.ny : 1;
            const int ny = std::max(pny, 1), mny = std::max(mg.ny, 1);
            cvec out(static_cast<std::size_t>(phys.nx) * static_cast<std::size_t>(ny));
            for (int i = 0; i < phys.nx; ++i)
                for (int j = 0; j < ny; ++j)
                    out[static_cast<std::size_t>(i * ny + j)] = a[static_cast<std::size_t>(i * sx * mny + j * sy)];
            return out;
        }
        if (!ctx.interpolate) throw ValidateError("reconstruct: grids are not node-aligned and interpolation is disabled");
        return resample(a, mg, phys.nx, pny);
    }
    if (!ctx.interpolate) throw ValidateError("reconstruct: r * physical box differs from the modulation box");
    if (mg.ny > 0) throw ValidateError("reconstruct: 2-D amplitudes need matching boxes");
    std::vector<double> xbar(static_cast<std::size_t>(phys.nx));
    for (int i = 0; i < phys.nx; ++i) xbar[static_cast<std::size_t>(i)] = ctx.r * phys.x(i);
    return evaluate_at(a, mg, xbar);
}

double cell_volume(const Grid& g)
{
    double v = g.length / g.nx;
    if (g.ny > 0) v *= g.width / g.ny;
    return v;
}

double growth_coefficient(const ModelSpec& m)
{
    switch (m.id) {
    case ModelId::M1:
    case ModelId::M3: return 1.0;
    case ModelId::M2: return (1 + m.brusselator.a * m.brusselator.a) / 2;
    case ModelId::M4: break;
    }
    throw ValidateError("delay runs cover M1 to M3");
}

double critical_wavenumber(const ModelSpec& m) { return m.id == ModelId::M2 ? 0.0 : 1.0; }

// Constant state balancing the drift forcing of M2 at mu: J(mu) w = -f with
// f = (0, -eps (1 + a^2) / a). Zero for the other models.
std::vector<double> quasi_static_offset(const ModelSpec& m, double mu, double eps)
{
    std::vector<double> w(static_cast<std::size_t>(m.components()), 0.0);
    if (m.id != ModelId::M2) return w;
    const double a2 = m.brusselator.a * m.brusselator.a;
    const double j11 = a2 + (1 + a2) * mu, j12 = a2, j21 = -(1 + a2) * (1 + mu), j22 = -a2;
    const double f2 = -eps * (1 + a2) / m.brusselator.a;
    const double det = j11 * j22 - j12 * j21;
    w[0] = j12 * f2 / det;
    w[1] = -j11 * f2 / det;
    return w;
}

cvec initial_envelope(const Grid& mg)
{
    cvec a(static_cast<std::size_t>(mg.nx));
    for (int i = 0; i < mg.nx; ++i) a[static_cast<std::size_t>(i)] = 0.5 + 0.25 * std::cos(2 * kPi * mg.x(i) / mg.length);
    return a;
}

}  // namespace

FieldState reconstruct(const ModelSpec& m, const ModulationState& s, const Grid& phys, const ReconstructContext& ctx)
{
    phys.validate();
    if (!(ctx.r > 0)) throw ValidateError("reconstruct: r must be positive");
    if (s.model != m.id) throw ValidateError("reconstruct: modulation state belongs to another model");
    if (m.id == ModelId::M4 && (phys.ny == 0 || s.grid.ny != 0))
        throw ValidateError("reconstruct: M4 needs a 1-D envelope and a 2-D physical grid");
    if (m.id != ModelId::M4 && (phys.ny > 0) != (s.grid.ny > 0))
        throw ValidateError("reconstruct: envelope and physical grids differ in dimension");

    FieldState out = FieldState::zeros(m, phys);
    out.time = ctx.time;
    out.mu = ctx.mu;
    out.eps = ctx.eps;
    const double r = ctx.r;
    const int ny = std::max(phys.ny, 1);
    auto at = [&](int i, int j) { return static_cast<std::size_t>(i * ny + j); };

    switch (m.id) {
    case ModelId::M1: {
        const cvec a = sample_amplitude(s.amplitudes[0], s.grid, phys, ctx);
        for (int i = 0; i < phys.nx; ++i)
            out.components[0][at(i, 0)] = 2 * r * (a[at(i, 0)] * std::polar(1.0, phys.x(i))).real();
        break;
    }
    case ModelId::M2: {
        const double aa = m.brusselator.a;
        const cd phi1(-1.0, 1.0 / aa);
        const cvec a = sample_amplitude(s.amplitudes[0], s.grid, phys, ctx);
        const cd phase = std::polar(1.0, aa * ctx.time);
        for (std::size_t q = 0; q < a.size(); ++q) {
            const cd z = a[q] * phase;
            out.components[0][q] = 2 * r * z.real();
            out.components[1][q] = 2 * r * (z * phi1).real();
        }
        break;
    }
    case ModelId::M3: {
        const std::vector<cvec> lab = lab_amplitudes(s);
        const cvec a1 = sample_amplitude(lab[0], s.grid, phys, ctx);
        const cvec a2 = sample_amplitude(lab[1], s.grid, phys, ctx);
        for (int i = 0; i < phys.nx; ++i) {
            const double x = phys.x(i);
            out.components[0][at(i, 0)] = 2 * r * (a1[at(i, 0)] * std::polar(1.0, x - ctx.time)).real();
            out.components[1][at(i, 0)] = 2 * r * (a2[at(i, 0)] * std::polar(1.0, x + ctx.time)).real();
        }
        break;
    }
    case ModelId::M4: {
        Grid line = phys;
        line.ny = 0;
        line.width = 0;
        const cvec a = sample_amplitude(s.amplitudes[0], s.grid, line, ctx);
        for (int i = 0; i < phys.nx; ++i) {
            const double ai = r * a[static_cast<std::size_t>(i)].real();
            for (int j = 0; j < phys.ny; ++j) {
                out.components[0][at(i, j)] = -std::numbers::sqrt2 * std::cos(phys.y(j)) * ai;
                out.components[1][at(i, j)] = ai;
            }
        }
        break;
    }
    }
    return out;
}

ErrorReport approximation_error(const std::vector<FieldState>& direct, const std::vector<FieldState>& approx)
{
    if (direct.size() != approx.size()) throw ValidateError("approximation_error: record counts differ");
    ErrorReport rep;
    for (std::size_t k = 0; k < direct.size(); ++k) {
        const FieldState& a = direct[k];
        const FieldState& b = approx[k];
        if (a.grid.nx != b.grid.nx || a.grid.ny != b.grid.ny || !close_rel(a.grid.length, b.grid.length, 1e-12) ||
            a.components.size() != b.components.size())
            throw ValidateError("approximation_error: grids differ at record " + std::to_string(k));
        if (!close_rel(a.time, b.time, 1e-9))
            throw ValidateError("approximation_error: record times differ at record " + std::to_string(k));
        double sup = 0, l2 = 0;
        for (std::size_t c = 0; c < a.components.size(); ++c) {
            for (std::size_t q = 0; q < a.components[c].size(); ++q) {
                const double d = a.components[c][q] - b.components[c][q];
                sup = std::max(sup, std::abs(d));
                l2 += d * d;
            }
        }
        if (!std::isfinite(sup)) throw ValidateError("approximation_error: non-finite difference");
        rep.times.push_back(0.5 * (a.time + b.time));
        rep.sup_errors.push_back(sup);
        rep.l2_errors.push_back(std::sqrt(l2 * cell_volume(a.grid)));
        rep.max_error = std::max(rep.max_error, sup);
    }
    return rep;
}

ResidualSeries residual(const ModelSpec& m, const std::vector<FieldState>& records)
{
    ResidualSeries out;
    if (records.size() < 5) return out;
    const double h = records[1].time - records[0].time;
    if (!(h > 0)) throw ValidateError("residual: record times must increase");
    for (std::size_t k = 1; k < records.size(); ++k)
        if (!close_rel(records[k].time - records[k - 1].time, h, 1e-6))
            throw ValidateError("residual: records are not uniformly spaced");

    SolverConfig cfg;
    cfg.dealias = false;
    cfg.contour_points = 1;  // the exponential coefficients are not used
    cfg.scheme = Scheme::IMEXBDF2;
    cfg.dt = h;
    Solver solver(m, records[0], cfg);
    const double cell = cell_volume(records[0].grid);
    for (std::size_t k = 2; k + 2 < records.size(); ++k) {
        solver.reset(records[k]);
        const auto rhs = solver.rhs_physical();
        double sup = 0, l2 = 0;
        for (std::size_t c = 0; c < rhs.size(); ++c) {
            for (std::size_t q = 0; q < rhs[c].size(); ++q) {
                const double dt = (-records[k + 2].components[c][q] + 8 * records[k + 1].components[c][q] -
                                   8 * records[k - 1].components[c][q] + records[k - 2].components[c][q]) /
                                  (12 * h);
                const double d = dt - rhs[c][q];
                sup = std::max(sup, std::abs(d));
                l2 += d * d;
            }
        }
        out.times.push_back(records[k].time);
        out.sup.push_back(sup);
        out.l2.push_back(std::sqrt(l2 * cell));
    }
    return out;
}

Takeoff delay_metric(const std::vector<FieldState>& records, double threshold)
{
    auto sup_all = [](const FieldState& s) {
        double m = 0;
        for (const auto& c : s.components) m = std::max(m, sup_norm(c));
        return m;
    };
    if (records.empty()) throw ValidateError("delay_metric: empty trajectory");
    double prev = sup_all(records[0]);
    if (prev >= threshold) throw ValidateError("delay_metric: trajectory starts above the threshold");
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double cur = sup_all(records[k]);
        if (cur >= threshold) {
            const FieldState& a = records[k - 1];
            const FieldState& b = records[k];
            double w = 1.0;
            if (prev > 0 && cur > prev) w = std::log(threshold / prev) / std::log(cur / prev);
            const Takeoff t{a.time + w * (b.time - a.time), a.mu + w * (b.mu - a.mu)};
            return t;
        }
        prev = cur;
    }
    throw ValidateError("delay_metric: threshold never crossed");
}

double scalar_delay_oracle(double mu0, double eps, double amp0, double threshold, double c2)
{
    if (!(eps > 0) || !(amp0 > 0) || !(threshold > amp0) || !(c2 > 0))
        throw ValidateError("scalar_delay_oracle: needs eps > 0, 0 < amp0 < threshold, c2 > 0");
    // c2 (mu*^2 - mu0^2) / (2 eps) = log(threshold / amp0)
    return std::sqrt(mu0 * mu0 + 2 * eps * std::log(threshold / amp0) / c2);
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw ValidateError("fit_loglog: need at least two (x, y) pairs");
    std::vector<double> lx(n), ly(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(x[k] > 0) || !(y[k] > 0)) throw ValidateError("fit_loglog: values must be positive");
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
    }
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += lx[k];
        my += ly[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    if (!(sxx > 0)) throw ValidateError("fit_loglog: x values must not all coincide");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n == 2) {
        f.ci_low = -std::numeric_limits<double>::infinity();
        f.ci_high = std::numeric_limits<double>::infinity();
        return f;
    }
    double sse = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = ly[k] - (f.intercept + f.slope * lx[k]);
        sse += e * e;
    }
    const double dof = static_cast<double>(n - 2);
    const double se = std::sqrt(sse / dof / sxx);
    const double t = boost::math::quantile(boost::math::students_t(dof), 0.975);
    f.ci_low = f.slope - t * se;
    f.ci_high = f.slope + t * se;
    return f;
}

ErrorReport static_validity_run(const ModelSpec& m, const StaticRunOptions& opt)
{
    if (m.id != ModelId::M1 && m.id != ModelId::M2) throw ValidateError("static validity runs cover M1 and M2");
    if (m.space_dims != 1) throw ValidateError("static validity runs are one-dimensional");
    const double d = opt.delta;
    if (!(d > 0 && d <= 0.5)) throw ValidateError("static validity run: delta must lie in (0, 0.5]");
    const double box = opt.box > 0 ? opt.box : 8 * kPi;
    const int base = opt.base_points > 0 ? opt.base_points : (m.id == ModelId::M1 ? 256 : 64);
    const int env = opt.envelope_points > 0 ? opt.envelope_points : base;
    const int nx = static_cast<int>(std::lround(base * 0.2 / d));

    const Grid pg = Grid::line(std::max(nx, 16), box / d);
    const Grid mg = Grid::line(env, box);
    ModulationState ms = ModulationState::zeros(m.id, mg, CoefficientTrack::constant(1.0));
    ms.amplitudes[0] = initial_envelope(mg);

    const double t_scale = 1 / (d * d);
    const long direct_stride = std::lround(opt.compare_every * t_scale / opt.dt);
    const long env_stride = std::lround(opt.compare_every / opt.envelope_dt);
    if (direct_stride <= 0 || env_stride <= 0) throw ValidateError("static validity run: compare_every below the time step");

    ReconstructContext ctx{d, 0.0, d * d, 0.0, true};
    SolverConfig cfg = default_config(m);
    cfg.dt = opt.dt;
    cfg.record_stride = static_cast<int>(direct_stride);
    const Trajectory direct = simulate(m, reconstruct(m, ms, pg, ctx), opt.window * t_scale, cfg);

    ModulationConfig mc;
    mc.dt = opt.envelope_dt;
    const ModulationTrajectory env_tr =
        evolve(ms, EnvelopeCoefficients::for_model(m), mc, opt.window, static_cast<int>(env_stride));
    std::vector<FieldState> approx;
    for (const auto& rec : env_tr.records) {
        ctx.time = rec.tbar * t_scale;
        approx.push_back(reconstruct(m, rec, pg, ctx));
    }
    ErrorReport rep = approximation_error(direct.records, approx);
    rep.metadata = {{"model", m.name()},
                    {"delta", format_double(d)},
                    {"window", format_double(opt.window)},
                    {"nx", std::to_string(pg.nx)},
                    {"length", format_double(pg.length)},
                    {"envelope_nx", std::to_string(mg.nx)},
                    {"dt", format_double(opt.dt)},
                    {"envelope_dt", format_double(opt.envelope_dt)}};
    return rep;
}

SweepReport static_validity_sweep(const ModelSpec& m, const std::vector<double>& deltas, StaticRunOptions opt)
{
    SweepReport rep;
    for (double d : deltas) {
        opt.delta = d;
        rep.deltas.push_back(d);
        rep.max_errors.push_back(static_validity_run(m, opt).max_error);
    }
    rep.fit = fit_loglog(rep.deltas, rep.max_errors);
    return rep;
}

double reconstruction_residual(double delta, double window)
{
    const ModelSpec m = ModelSpec::m1();
    const double box = 8 * kPi;
    const Grid pg = Grid::line(static_cast<int>(std::lround(256 * 0.2 / delta)), box / delta);
    const Grid mg = Grid::line(256, box);
    ModulationState ms = ModulationState::zeros(m.id, mg, CoefficientTrack::constant(1.0));
    ms.amplitudes[0] = initial_envelope(mg);
    ModulationConfig mc;
    mc.dt = delta * delta * 0.1;
    const ModulationTrajectory tr = evolve(ms, EnvelopeCoefficients::for_model(m), mc, window, 1);
    std::vector<FieldState> recs;
    for (const auto& rec : tr.records)
        recs.push_back(reconstruct(m, rec, pg, {delta, rec.tbar / (delta * delta), delta * delta, 0.0, true}));
    const ResidualSeries res = residual(m, recs);
    if (res.sup.empty()) throw ValidateError("reconstruction_residual: window too short");
    return *std::max_element(res.sup.begin(), res.sup.end());
}

FieldState random_band_state(const ModelSpec& m, const Grid& g, double amplitude, double band, std::uint64_t seed,
                             std::uint64_t run)
{
    FieldState s = FieldState::zeros(m, g);
    CounterRng rng(seed, run);
    const double kc = m.id == ModelId::M4 ? 0.0 : critical_wavenumber(m);
    const int ny = std::max(g.ny, 1);
    for (auto& comp : s.components) {
        std::vector<double> prof(static_cast<std::size_t>(g.nx));
        bool any = false;
        for (int j = 0; j <= g.nx / 2; ++j) {
            const double k = 2 * kPi * j / g.length;
            if (std::abs(k - kc) > band) continue;
            const double phase = 2 * kPi * rng.uniform();
            for (int i = 0; i < g.nx; ++i) prof[static_cast<std::size_t>(i)] += std::cos(k * g.x(i) + phase);
            any = true;
        }
        if (!any) throw ValidateError("random_band_state: no box mode inside the band");
        const double sup = sup_norm(prof);
        for (int i = 0; i < g.nx; ++i) {
            const double v = amplitude * prof[static_cast<std::size_t>(i)] / sup;
            for (int j = 0; j < ny; ++j) {
                const double shape = m.id == ModelId::M4 && &comp == &s.components[0] ? -std::cos(g.y(j)) : 1.0;
                comp[static_cast<std::size_t>(i * ny + j)] = v * shape;
            }
        }
    }
    return s;
}

Takeoff delay_run(const ModelSpec& m, const DelayRunOptions& opt)
{
    const double c2 = growth_coefficient(m);
    if (!(opt.mu0 < 0)) throw ValidateError("delay_run: mu0 must be negative");
    const double oracle = scalar_delay_oracle(opt.mu0, opt.eps, opt.amp0, opt.threshold, c2);
    const double t_max = opt.t_max > 0 ? opt.t_max : 2 * (oracle - opt.mu0) / opt.eps;

    const Grid g = default_grid(m);
    FieldState s = random_band_state(m, g, opt.amp0, 0.25, opt.seed, opt.run);
    // Start on the slowly drifting equilibrium so that only the random data
    // seeds the critical mode.
    const std::vector<double> w = quasi_static_offset(m, opt.mu0, opt.eps);
    for (std::size_t c = 0; c < s.components.size(); ++c)
        for (auto& v : s.components[c]) v += w[c];
    s.mu = opt.mu0;
    s.eps = opt.eps;
    SolverConfig cfg = default_config(m);
    Solver solver(m, s, cfg);
    std::vector<FieldState> window{solver.state()};
    const long total = std::lround(t_max / cfg.dt);
    for (long k = 1; k <= total; ++k) {
        solver.step();
        if (k % opt.record_stride != 0 && k != total) continue;
        FieldState cur = solver.state();
        double sup = 0;
        for (const auto& c : cur.components) sup = std::max(sup, sup_norm(c));
        window.push_back(std::move(cur));
        if (sup >= opt.threshold) return delay_metric(window, opt.threshold);
        window.erase(window.begin());
    }
    throw ValidateError("delay_run: no take-off before t = " + format_double(t_max));
}

void write_validation_csv(std::ostream& os, const std::vector<ValidationRow>& rows)
{
    CsvWriter w(os, {"delta", "eps", "max_error", "slope", "residual_slope", "t_takeoff", "mu_takeoff"});
    for (const auto& r : rows) w.row({r.delta, r.eps, r.max_error, r.slope, r.residual_slope, r.t_takeoff, r.mu_takeoff});
}

}  // namespace dynbif
