#include "dynbif/modulation.hpp"

#include "dynbif/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dynbif {

namespace {
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
}  // namespace

CoefficientTrack CoefficientTrack::constant(double bar_mu, double dilation)
{
    CoefficientTrack t;
    t.frozen = true;
    t.frozen_bar_mu = bar_mu;
    t.frozen_dilation = dilation;
    return t;
}

CoefficientTrack CoefficientTrack::chart(const SlowTrajectory& traj)
{
    CoefficientTrack t;
    t.frozen = false;
    t.traj = traj;
    return t;
}

double CoefficientTrack::bar_mu(double t) const { return frozen ? frozen_bar_mu : chart_bar_mu(traj, t); }
double CoefficientTrack::bar_mu_integral(double t) const { return frozen ? frozen_bar_mu * t : chart_bar_mu_integral(traj, t); }
double CoefficientTrack::dilation(double t) const { return frozen ? frozen_dilation : chart_dilation(traj, t); }
double CoefficientTrack::dilation_integral(double t) const
{
    return frozen ? frozen_dilation * t : chart_dilation_integral(traj, t);
}
double CoefficientTrack::linear_drift(double t) const { return bar_mu(t) + dilation(t); }
double CoefficientTrack::radius(double t) const { return frozen ? traj.initial.r : slow_flow_eval(traj, t).r; }

double CoefficientTrack::validity_end() const
{
    if (frozen || traj.chart != ChartId::K1) return std::numeric_limits<double>::infinity();
    return 0.99 * k1_blowup_time(traj);
}

std::string CoefficientTrack::label() const { return frozen ? "frozen" : chart_name(traj.chart); }

EnvelopeCoefficients EnvelopeCoefficients::from(const ModulationCoefficients& c)
{
    EnvelopeCoefficients e;
    e.diffusion.clear();
    e.mu_linear.clear();
    e.advection.clear();
    e.cubic_self.clear();
    e.cubic_cross.clear();
    for (std::size_t j = 0; j < c.diffusion.size(); ++j) {
        e.diffusion.push_back(c.diffusion[j].to_complex());
        e.mu_linear.push_back(c.mu_linear[j].to_complex().real());
        e.advection.push_back(c.advection[j].to_complex().real());
        e.cubic_self.push_back(c.cubic_self[j].to_complex());
        e.cubic_cross.push_back(c.cubic_cross[j].to_complex());
    }
    if (c.model == ModelId::M4) {
        e.ch_fourth = c.ch_fourth.to_complex().real();
        e.ch_second = c.ch_second.to_complex().real();
        e.ch_cubic = c.ch_cubic.to_complex().real();
    }
    return e;
}

EnvelopeCoefficients EnvelopeCoefficients::for_model(const ModelSpec& m) { return from(derive(m).coefficients); }

namespace {

int amplitude_count(ModelId m) { return m == ModelId::M3 ? 2 : 1; }

}  // namespace

ModulationState ModulationState::zeros(ModelId m, const Grid& g, const CoefficientTrack& track)
{
    g.validate();
    ModulationState s;
    s.model = m;
    s.grid = g;
    s.track = track;
    s.amplitudes.assign(static_cast<std::size_t>(amplitude_count(m)), cvec(static_cast<std::size_t>(g.size())));
    return s;
}

double ModulationState::sup_norm() const
{
    double m = 0;
    for (const auto& a : amplitudes)
        for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

std::complex<double> ModulationState::mass() const
{
    cd s = 0;
    for (const auto& v : amplitudes.at(0)) s += v;
    double cell = grid.length / grid.nx;
    if (grid.ny > 0) cell *= grid.width / grid.ny;
    return s * cell;
}

struct ModulationSolver::Impl {
    ModulationState base;  // metadata of the initial state
    EnvelopeCoefficients coef;
    ModulationConfig cfg;
    Fft fft;
    int nx, nyy;
    std::size_t n;
    std::vector<double> k2, kxd;
    std::vector<char> keep;
    std::vector<cvec> a;                 // time-independent symbol per amplitude
    std::vector<std::vector<double>> b;  // coefficient of the bar_mu integral
    std::vector<cvec> hat;
    double t0;
    long steps = 0;

    Impl(const ModulationState& s, const EnvelopeCoefficients& c, const ModulationConfig& conf)
        : base(s), coef(c), cfg(conf), fft(s.grid.nx, s.grid.ny), nx(s.grid.nx), nyy(s.grid.ny > 0 ? s.grid.ny : 1),
          n(static_cast<std::size_t>(s.grid.size())), t0(s.tbar)
    {
        const bool m4 = s.model == ModelId::M4;
        const std::size_t na = s.amplitudes.size();
        if (!m4 && (c.diffusion.size() < na || c.mu_linear.size() < na || c.advection.size() < na ||
                    c.cubic_self.size() < na || c.cubic_cross.size() < na))
            throw ModulationError("modulation: coefficient vectors do not cover every amplitude");
        if (s.model != ModelId::M2 && s.grid.ny != 0) throw ModulationError("modulation: only M2 supports a 2-D box");
        keep.assign(n, 1);
        for (int i = 0; i < nx; ++i) {
            const int wi = wave_index(i, nx);
            const double kx = 2 * kPi / s.grid.length * wi;
            for (int j = 0; j < nyy; ++j) {
                const int wj = s.grid.ny > 0 ? wave_index(j, nyy) : 0;
                const double ky = s.grid.ny > 0 ? 2 * kPi / s.grid.width * wj : 0.0;
                k2.push_back(kx * kx + ky * ky);
                kxd.push_back(2 * wi == nx ? 0.0 : kx);
                if (cfg.dealias && (3 * std::abs(wi) > nx || 3 * std::abs(wj) > nyy)) keep[k2.size() - 1] = 0;
            }
        }
        a.assign(na, cvec(n));
        b.assign(na, std::vector<double>(n));
        for (std::size_t j = 0; j < na; ++j) {
            for (std::size_t q = 0; q < n; ++q) {
                if (m4) {
                    a[j][q] = coef.ch_fourth * k2[q] * k2[q];
                    b[j][q] = -coef.ch_second * k2[q];
                } else {
                    a[j][q] = -coef.diffusion[j] * k2[q];
                    if (s.frame == Frame::Lab) a[j][q] -= cd(0, coef.advection[j] * kxd[q]);
                    b[j][q] = coef.mu_linear[j];
                }
            }
        }
        for (const auto& amp : s.amplitudes) {
            if (amp.size() != n) throw ModulationError("modulation: amplitude size does not match the grid");
            hat.push_back(to_hat(amp));
        }
        if (m4) make_real(hat);
    }

    cvec to_hat(const cvec& f) const
    {
        cvec out;
        fft.forward(f, out);
        return out;
    }

    cvec to_phys(const cvec& h) const
    {
        cvec out;
        fft.inverse(h, out);
        return out;
    }

    void make_real(std::vector<cvec>& h) const
    {
        for (auto& c : h) {
            cvec f = to_phys(c);
            for (auto& v : f) v = v.real();
            c = to_hat(f);
        }
    }

    double time() const { return t0 + static_cast<double>(steps) * cfg.dt; }

    // Fourier shift f(x) -> f(x + d).
    cvec shifted(const cvec& h, double d) const
    {
        cvec out(n);
        for (std::size_t q = 0; q < n; ++q) out[q] = h[q] * std::polar(1.0, kxd[q] * d);
        return out;
    }

    std::vector<cvec> nonlinear(const std::vector<cvec>& h, double t) const
    {
        std::vector<cvec> out(h.size(), cvec(n));
        if (!cfg.nonlinear) return out;
        if (base.model == ModelId::M4) {
            cvec A = to_phys(h[0]);
            cvec cube(n);
            for (std::size_t q = 0; q < n; ++q) {
                const double r = A[q].real();
                cube[q] = r * r * r;
            }
            cvec ch = to_hat(cube);
            for (std::size_t q = 0; q < n; ++q) out[0][q] = -coef.ch_cubic * k2[q] * ch[q];
        } else {
            std::vector<cvec> phys;
            for (const auto& c : h) phys.push_back(to_phys(c));
            const double tau = base.shift + (t - t0);
            for (std::size_t j = 0; j < h.size(); ++j) {
                cvec f(n);
                for (std::size_t q = 0; q < n; ++q) f[q] = coef.cubic_self[j] * phys[j][q] * std::norm(phys[j][q]);
                for (std::size_t k = 0; k < h.size(); ++k) {
                    if (k == j) continue;
                    cvec other = phys[k];
                    if (base.frame == Frame::CoMoving)
                        other = to_phys(shifted(h[k], (coef.advection[j] - coef.advection[k]) * tau));
                    for (std::size_t q = 0; q < n; ++q) f[q] += coef.cubic_cross[j] * phys[j][q] * std::norm(other[q]);
                }
                out[j] = to_hat(f);
            }
        }
        for (auto& c : out)
            for (std::size_t q = 0; q < n; ++q)
                if (!keep[q]) c[q] = 0;
        return out;
    }

    void step()
    {
        const double h = cfg.dt;
        const double t = time();
        if (t + h > base.track.validity_end())
            throw ModulationError("modulation: step leaves the chart validity window at t = " + format_double(t + h));
        const double tm = t + h / 2, te = t + h;
        const CoefficientTrack& tr = base.track;
        const double im0 = tr.bar_mu_integral(t), imm = tr.bar_mu_integral(tm), ime = tr.bar_mu_integral(te);
        const double id0 = tr.dilation_integral(t), idm = tr.dilation_integral(tm), ide = tr.dilation_integral(te);
        const std::size_t na = hat.size();
        std::vector<cvec> eh(na, cvec(n)), ehe(na, cvec(n)), efull(na, cvec(n));
        for (std::size_t j = 0; j < na; ++j) {
            for (std::size_t q = 0; q < n; ++q) {
                eh[j][q] = std::exp(a[j][q] * (h / 2) + b[j][q] * (imm - im0) + (idm - id0));
                ehe[j][q] = std::exp(a[j][q] * (h / 2) + b[j][q] * (ime - imm) + (ide - idm));
                efull[j][q] = std::exp(a[j][q] * h + b[j][q] * (ime - im0) + (ide - id0));
            }
        }
        auto k1 = nonlinear(hat, t);
        std::vector<cvec> s(na, cvec(n));
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t q = 0; q < n; ++q) s[j][q] = eh[j][q] * (hat[j][q] + h / 2 * k1[j][q]);
        auto k2v = nonlinear(s, tm);
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t q = 0; q < n; ++q) s[j][q] = eh[j][q] * hat[j][q] + h / 2 * k2v[j][q];
        auto k3 = nonlinear(s, tm);
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t q = 0; q < n; ++q) s[j][q] = efull[j][q] * hat[j][q] + h * ehe[j][q] * k3[j][q];
        auto k4 = nonlinear(s, te);
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t q = 0; q < n; ++q)
                hat[j][q] = efull[j][q] * hat[j][q] +
                            h / 6 * (efull[j][q] * k1[j][q] + 2.0 * ehe[j][q] * (k2v[j][q] + k3[j][q]) + k4[j][q]);
        if (base.model == ModelId::M4) make_real(hat);
        ++steps;

        const double limit = cfg.blowup_threshold;
        for (const auto& c : hat) {
            cvec f = to_phys(c);
            for (const auto& v : f)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > limit)
                    throw BlowUpError("modulation amplitude exceeded the blow-up threshold at t = " + format_double(time()),
                                      time());
        }
    }
};

ModulationSolver::ModulationSolver(const ModulationState& s, const EnvelopeCoefficients& c, const ModulationConfig& cfg)
{
    if (!(cfg.dt > 0)) throw ModulationError("modulation: dt must be positive");
    s.grid.validate();
    if (s.amplitudes.size() != static_cast<std::size_t>(amplitude_count(s.model)))
        throw ModulationError("modulation: wrong number of amplitudes");
    impl_ = std::make_unique<Impl>(s, c, cfg);
}

ModulationSolver::~ModulationSolver() = default;

void ModulationSolver::step() { impl_->step(); }

void ModulationSolver::advance(long steps)
{
    for (long k = 0; k < steps; ++k) impl_->step();
}

double ModulationSolver::tbar() const { return impl_->time(); }

ModulationState ModulationSolver::state() const
{
    ModulationState s = impl_->base;
    s.tbar = impl_->time();
    s.shift = impl_->base.shift + (s.tbar - impl_->t0);
    s.amplitudes.clear();
    for (const auto& h : impl_->hat) s.amplitudes.push_back(impl_->to_phys(h));
    if (s.model == ModelId::M4)
        for (auto& v : s.amplitudes[0]) v = v.real();
    return s;
}

namespace {

ModulationState one_step(const ModulationState& s, const EnvelopeCoefficients& c, double dt)
{
    ModulationConfig cfg;
    cfg.dt = dt;
    ModulationSolver solver(s, c, cfg);
    solver.step();
    return solver.state();
}

}  // namespace

ModulationState step_gl_real(const ModulationState& s, double dt)
{
    if (s.model != ModelId::M1) throw ModulationError("step_gl_real: expects an M1 state");
    return one_step(s, EnvelopeCoefficients::for_model(ModelSpec::m1()), dt);
}

ModulationState step_gl_complex(const ModulationState& s, double dt, std::complex<double> c1, double c2,
                                std::complex<double> c3)
{
    if (s.model != ModelId::M2) throw ModulationError("step_gl_complex: expects an M2 state");
    EnvelopeCoefficients c;
    c.diffusion = {c1};
    c.mu_linear = {c2};
    c.advection = {0.0};
    c.cubic_self = {-c3};
    c.cubic_cross = {0.0};
    return one_step(s, c, dt);
}

ModulationState step_gl_coupled(const ModulationState& s, double dt, std::complex<double> gamma1,
                                std::complex<double> gamma2)
{
    if (s.model != ModelId::M3) throw ModulationError("step_gl_coupled: expects an M3 state");
    EnvelopeCoefficients c;
    c.diffusion = {4.0, 4.0};
    c.mu_linear = {1.0, 1.0};
    c.advection = {1.0, -1.0};
    c.cubic_self = {-gamma1, -std::conj(gamma1)};
    c.cubic_cross = {-gamma2, -std::conj(gamma2)};
    return one_step(s, c, dt);
}

ModulationState step_ch(const ModulationState& s, double dt)
{
    if (s.model != ModelId::M4) throw ModulationError("step_ch: expects an M4 state");
    return one_step(s, EnvelopeCoefficients::for_model(ModelSpec::m4()), dt);
}

std::vector<cvec> lab_amplitudes(const ModulationState& s)
{
    if (s.frame == Frame::Lab || s.model != ModelId::M3) return s.amplitudes;
    // Co-moving field a_j relates to the lab field by A_j(x) = a_j(x - c_j tau).
    const double c[2] = {1.0, -1.0};
    Fft fft(s.grid.nx);
    std::vector<cvec> out;
    for (std::size_t j = 0; j < s.amplitudes.size(); ++j) {
        cvec h, f;
        fft.forward(s.amplitudes[j], h);
        for (int i = 0; i < s.grid.nx; ++i) {
            const int w = wave_index(i, s.grid.nx);
            const double k = 2 * w == s.grid.nx ? 0.0 : 2 * kPi / s.grid.length * w;
            h[static_cast<std::size_t>(i)] *= std::polar(1.0, -k * c[j] * s.shift);
        }
        fft.inverse(h, f);
        out.push_back(std::move(f));
    }
    return out;
}

ModulationState handoff_k2_to_k3(const ModulationState& s)
{
    if (s.track.frozen || s.track.traj.chart != ChartId::K2) throw ModulationError("handoff: expects a K2 chart state");
    const ChartPoint p2 = slow_flow_eval(s.track.traj, s.tbar);
    if (!(p2.slow > 0)) throw ModulationError("handoff: K3 needs mu2 > 0");
    const ChartTransition t = kappa32(p2);
    ModulationState out = s;
    SlowTrajectory traj{ChartId::K3, t.point, t.point.beta};
    out.track = CoefficientTrack::chart(traj);
    out.tbar = 0;
    for (auto& a : out.amplitudes)
        for (auto& v : a) v *= t.psi_scale;
    const double stretch = t.point.r / p2.r;
    out.grid.length *= stretch;
    if (out.grid.ny > 0) out.grid.width *= stretch;
    return out;
}

double k3_time_for_original(const SlowTrajectory& traj, double original)
{
    if (traj.chart != ChartId::K3) throw ModulationError("k3_time_for_original: expects a K3 trajectory");
    const double k = 2 + traj.beta;
    const double r0 = traj.initial.r, e0 = traj.initial.slow;
    if (e0 == 0) return original * std::pow(r0, traj.beta);
    // Inverts t = r0^-beta (g^(2/k) - 1)/eps0 with g = 1 + k eps0 t3 / 2.
    const double g = std::pow(1 + e0 * std::pow(r0, traj.beta) * original, k / 2);
    return 2 * (g - 1) / (k * e0);
}

ModulationTrajectory evolve(const ModulationState& s, const EnvelopeCoefficients& c, const ModulationConfig& cfg,
                            double t_end, int record_stride)
{
    if (record_stride <= 0) throw ModulationError("evolve: record_stride must be positive");
    ModulationSolver solver(s, c, cfg);
    const long total = std::lround((t_end - s.tbar) / cfg.dt);
    ModulationTrajectory tr;
    tr.records.push_back(solver.state());
    for (long k = 1; k <= total; ++k) {
        solver.step();
        if (k % record_stride == 0 || k == total) tr.records.push_back(solver.state());
    }
    return tr;
}

void write_modulation_csv(std::ostream& os, const ModulationTrajectory& tr)
{
    CsvWriter w(os, {"t", "mass", "sup", "drift"});
    for (const auto& s : tr.records) {
        const double drift = s.model == ModelId::M4 ? s.track.dilation(s.tbar) : s.track.linear_drift(s.tbar);
        w.row({s.tbar, s.mass().real(), s.sup_norm(), drift});
    }
}

FieldDump to_dump(const ModulationState& s)
{
    FieldDump d;
    d.model_id = 101 + static_cast<std::uint32_t>(s.model);
    d.dim = static_cast<std::uint32_t>(s.grid.dim());
    d.nx = static_cast<std::uint32_t>(s.grid.nx);
    d.ny = static_cast<std::uint32_t>(s.grid.ny);
    d.time = s.tbar;
    d.mu = s.track.bar_mu(s.tbar);
    d.eps = s.track.frozen ? 0.0 : (s.track.traj.chart == ChartId::K2 ? 1.0 : slow_flow_eval(s.track.traj, s.tbar).slow);
    for (const auto& a : s.amplitudes) {
        std::vector<double> re, im;
        for (const auto& v : a) {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        d.components.push_back(std::move(re));
        d.components.push_back(std::move(im));
    }
    return d;
}

}  // namespace dynbif
