#include "dynbif/physical.hpp"

#include "dynbif/csv.hpp"
#include "dynbif/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dynbif {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

}  // namespace

void Grid::validate() const
{
    auto pow2 = [](int n) { return n >= 16 && (n & (n - 1)) == 0; };
    if (!pow2(nx)) throw std::invalid_argument("grid: nx must be a power of two >= 16");
    if (!(length > 0)) throw std::invalid_argument("grid: length must be positive");
    if (ny != 0 && !pow2(ny)) throw std::invalid_argument("grid: ny must be 0 or a power of two >= 16");
    if (ny != 0 && !(width > 0)) throw std::invalid_argument("grid: width must be positive");
}

Grid default_grid(const ModelSpec& m)
{
    switch (m.id) {
    case ModelId::M1:
    case ModelId::M3: return Grid::line(256, 32 * kPi);
    case ModelId::M2: return m.space_dims == 2 ? Grid::plane(64, 32 * kPi, 64, 32 * kPi) : Grid::line(256, 32 * kPi);
    case ModelId::M4: {
        // Most unstable mode of -(1 - R^2/2) xi^2 - 3 xi^4 at delta = 0.2.
        const double delta = 0.2;
        const double xi_hat = delta * std::sqrt(std::sqrt(2.0) / 6.0);
        return Grid::plane(64, 40 * kPi / xi_hat, 32, 2 * kPi);
    }
    }
    return {};
}

FieldState FieldState::zeros(const ModelSpec& m, const Grid& g)
{
    g.validate();
    FieldState s;
    s.grid = g;
    s.components.assign(static_cast<std::size_t>(m.components()), std::vector<double>(static_cast<std::size_t>(g.size())));
    return s;
}

SolverConfig default_config(const ModelSpec& m)
{
    SolverConfig c;
    c.dt = m.id == ModelId::M4 ? 0.002 : 0.01;
    return c;
}

std::string scheme_name(Scheme s) { return s == Scheme::ETDRK4 ? "etdrk4" : "imex-bdf2"; }

Scheme scheme_from_name(const std::string& s)
{
    if (s == "etdrk4") return Scheme::ETDRK4;
    if (s == "imex-bdf2") return Scheme::IMEXBDF2;
    throw std::invalid_argument("unknown scheme: " + s);
}

struct Solver::Impl {
    ModelSpec model;
    Grid grid;
    SolverConfig cfg;
    Fft fft;
    int nx, nyy;  // nyy = 1 in 1-D
    std::size_t n;
    double t0, mu0, eps;
    bool complex_fields = false;
    std::vector<double> kx, ky, kxd, kyd;  // kxd/kyd: zero at Nyquist for odd derivatives
    std::vector<double> siny, cosy;
    std::vector<char> keep;  // dealias mask
    std::vector<cvec> L, E, E2, Q, f1, f2, f3;
    // IMEX-BDF2 history
    std::vector<cvec> prev_hat, prev_N;
    bool have_prev = false;

    Impl(const ModelSpec& m, const Grid& g, const SolverConfig& c)
        : model(m), grid(g), cfg(c), fft(g.nx, g.ny), nx(g.nx), nyy(g.ny > 0 ? g.ny : 1),
          n(static_cast<std::size_t>(g.size()))
    {
        for (int i = 0; i < nx; ++i) {
            int w = wave_index(i, nx);
            kx.push_back(2 * kPi / g.length * w);
            kxd.push_back(2 * w == nx ? 0.0 : kx.back());
        }
        for (int j = 0; j < nyy; ++j) {
            int w = g.ny > 0 ? wave_index(j, nyy) : 0;
            double k = g.ny > 0 ? 2 * kPi / g.width * w : 0.0;
            ky.push_back(k);
            kyd.push_back(g.ny > 0 && 2 * w == nyy ? 0.0 : k);
            double y = g.ny > 0 ? g.y(j) : 0.0;
            siny.push_back(std::sin(y));
            cosy.push_back(std::cos(y));
        }
        keep.assign(n, 1);
        if (cfg.dealias) {
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < nyy; ++j) {
                    bool drop = 3 * std::abs(wave_index(i, nx)) > nx;
                    if (g.ny > 0) drop = drop || 3 * std::abs(wave_index(j, nyy)) > nyy;
                    keep[idx(i, j)] = !drop;
                }
        }
        build_symbols();
        build_etd();
    }

    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(nyy) + static_cast<std::size_t>(j); }

    void build_symbols()
    {
        const int nc = model.components();
        L.assign(static_cast<std::size_t>(nc), cvec(n));
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < nyy; ++j) {
                const double k2 = kx[static_cast<std::size_t>(i)] * kx[static_cast<std::size_t>(i)] +
                                  ky[static_cast<std::size_t>(j)] * ky[static_cast<std::size_t>(j)];
                const double sh = -(1 - k2) * (1 - k2);
                const std::size_t q = idx(i, j);
                switch (model.id) {
                case ModelId::M1: L[0][q] = sh; break;
                case ModelId::M2:
                    L[0][q] = -model.brusselator.d1 * k2;
                    L[1][q] = -model.brusselator.d2 * k2;
                    break;
                case ModelId::M3:
                    L[0][q] = cd(sh, -kxd[static_cast<std::size_t>(i)]);
                    L[1][q] = cd(sh, kxd[static_cast<std::size_t>(i)]);
                    break;
                case ModelId::M4:
                    L[0][q] = -k2;
                    L[1][q] = -k2;
                    break;
                }
            }
        }
    }

    void build_etd()
    {
        const double h = cfg.dt;
        const int M = cfg.contour_points;
        const std::size_t nc = L.size();
        E = E2 = Q = f1 = f2 = f3 = std::vector<cvec>(nc, cvec(n));
        for (std::size_t c = 0; c < nc; ++c) {
            for (std::size_t q = 0; q < n; ++q) {
                const cd z = L[c][q] * h;
                E[c][q] = std::exp(z);
                E2[c][q] = std::exp(z / 2.0);
                cd sq = 0, s1 = 0, s2 = 0, s3 = 0;
                for (int k = 0; k < M; ++k) {
                    const cd r = z + std::polar(1.0, 2 * kPi * (k + 0.5) / M);
                    const cd er = std::exp(r);
                    const cd r3 = r * r * r;
                    sq += (std::exp(r / 2.0) - 1.0) / r;
                    s1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
                    s2 += (2.0 + r + er * (r - 2.0)) / r3;
                    s3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
                }
                Q[c][q] = h * sq / double(M);
                f1[c][q] = h * s1 / double(M);
                f2[c][q] = h * s2 / double(M);
                f3[c][q] = h * s3 / double(M);
            }
        }
    }

    cvec to_phys(const cvec& hat) const
    {
        cvec out;
        fft.inverse(hat, out);
        if (!complex_fields)
            for (auto& v : out) v = v.real();
        return out;
    }

    cvec to_hat(const cvec& f) const
    {
        cvec out;
        fft.forward(f, out);
        return out;
    }

    cvec ddx(const cvec& hat) const
    {
        cvec d(n);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < nyy; ++j) d[idx(i, j)] = cd(0, kxd[static_cast<std::size_t>(i)]) * hat[idx(i, j)];
        return d;
    }

    cvec ddy(const cvec& hat) const
    {
        cvec d(n);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < nyy; ++j) d[idx(i, j)] = cd(0, kyd[static_cast<std::size_t>(j)]) * hat[idx(i, j)];
        return d;
    }

    void leray(cvec& fu, cvec& fv) const
    {
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < nyy; ++j) {
                const std::size_t q = idx(i, j);
                const double a = kx[static_cast<std::size_t>(i)], b = ky[static_cast<std::size_t>(j)];
                const double k2 = a * a + b * b;
                if (k2 == 0) {
                    fu[q] = 0;  // zero mean flow
                    continue;
                }
                const cd dot = (a * fu[q] + b * fv[q]) / k2;
                fu[q] -= a * dot;
                fv[q] -= b * dot;
            }
        }
        // Zero mean flow: the y-averaged u vanishes for every x.
        for (int i = 0; i < nx; ++i) fu[idx(i, 0)] = 0;
    }

    double mu_at(double t) const { return mu0 + eps * (t - t0); }

    std::vector<cvec> nonlinear(const std::vector<cvec>& hat, double t) const
    {
        const double mu = mu_at(t);
        const bool nl = !cfg.linear_only;
        std::vector<cvec> out(hat.size(), cvec(n));
        switch (model.id) {
        case ModelId::M1: {
            cvec u = to_phys(hat[0]);
            cvec f(n);
            for (std::size_t q = 0; q < n; ++q) f[q] = mu * u[q] - (nl ? u[q] * u[q] * u[q] : cd(0));
            out[0] = to_hat(f);
            break;
        }
        case ModelId::M2: {
            const double a = model.brusselator.a, a2 = a * a;
            cvec u = to_phys(hat[0]), v = to_phys(hat[1]);
            cvec f(n), g(n);
            const double forcing = -eps * (1 + a2) / a;
            for (std::size_t q = 0; q < n; ++q) {
                const cd lin = a2 * u[q] + a2 * v[q] + (1 + a2) * u[q] * mu;
                const cd F = nl ? (1 + a2) * (1 + mu) / a * u[q] * u[q] + 2 * a * u[q] * v[q] + u[q] * u[q] * v[q] : cd(0);
                f[q] = lin + F;
                g[q] = -(1 + a2) * u[q] - a2 * v[q] - (1 + a2) * u[q] * mu - F + forcing;
            }
            out[0] = to_hat(f);
            out[1] = to_hat(g);
            break;
        }
        case ModelId::M3: {
            out[0] = hat[0];
            out[1] = hat[1];
            for (auto& c : out)
                for (auto& v : c) v *= mu;
            if (nl) {
                cvec u = to_phys(hat[0]), v = to_phys(hat[1]);
                cvec qf(n);
                for (std::size_t q = 0; q < n; ++q) qf[q] = u[q] * u[q] + u[q] * v[q] + v[q] * v[q];
                cvec dq = ddx(to_hat(qf));
                for (std::size_t q = 0; q < n; ++q) {
                    out[0][q] += dq[q];
                    out[1][q] += dq[q];
                }
            }
            break;
        }
        case ModelId::M4: {
            const double R = kolmogorov_critical_reynolds() + mu;
            cvec u = to_phys(hat[0]), v = to_phys(hat[1]);
            cvec ux = to_phys(ddx(hat[0])), vx = to_phys(ddx(hat[1]));
            cvec uy, vy;
            if (nl) {
                uy = to_phys(ddy(hat[0]));
                vy = to_phys(ddy(hat[1]));
            }
            cvec fu(n), fv(n);
            for (int i = 0; i < nx; ++i) {
                for (int j = 0; j < nyy; ++j) {
                    const std::size_t q = idx(i, j);
                    const double s = siny[static_cast<std::size_t>(j)], c = cosy[static_cast<std::size_t>(j)];
                    fu[q] = -R * (s * ux[q] + c * v[q]) - eps * s;
                    fv[q] = -R * s * vx[q];
                    if (nl) {
                        fu[q] -= u[q] * ux[q] + v[q] * uy[q];
                        fv[q] -= u[q] * vx[q] + v[q] * vy[q];
                    }
                }
            }
            out[0] = to_hat(fu);
            out[1] = to_hat(fv);
            leray(out[0], out[1]);
            break;
        }
        }
        for (auto& c : out)
            for (std::size_t q = 0; q < n; ++q)
                if (!keep[q]) c[q] = 0;
        return out;
    }
};

Solver::Solver(const ModelSpec& m, const FieldState& initial, const SolverConfig& cfg)
{
    m.validate();
    initial.grid.validate();
    if (!(cfg.dt > 0)) throw std::invalid_argument("solver: dt must be positive");
    if (cfg.record_stride <= 0) throw std::invalid_argument("solver: record_stride must be positive");
    if (m.id == ModelId::M4 && initial.grid.ny == 0) throw std::invalid_argument("solver: M4 needs a 2-D grid");
    if (m.id != ModelId::M4 && m.id != ModelId::M2 && initial.grid.ny != 0)
        throw std::invalid_argument("solver: this model is one-dimensional");
    if (m.id == ModelId::M2 && (initial.grid.ny != 0) != (m.space_dims == 2))
        throw std::invalid_argument("solver: grid dimension does not match the model");
    if (initial.components.size() != static_cast<std::size_t>(m.components()))
        throw std::invalid_argument("solver: wrong number of components");
    if (initial.eps < 0) throw std::invalid_argument("solver: eps must be nonnegative");

    impl_ = std::make_unique<Impl>(m, initial.grid, cfg);
    impl_->t0 = initial.time;
    impl_->mu0 = initial.mu;
    impl_->eps = initial.eps;
    for (const auto& c : initial.components) {
        if (c.size() != impl_->n) throw std::invalid_argument("solver: component size does not match the grid");
        cvec f(c.begin(), c.end());
        hat_.push_back(impl_->to_hat(f));
    }
    if (m.id == ModelId::M4) {
        // Start from the projected (divergence-free, zero mean flow) field.
        impl_->leray(hat_[0], hat_[1]);
    }
}

Solver::~Solver() = default;

void Solver::set_complex_fields(bool on)
{
    if (on && !impl_->cfg.linear_only) throw std::invalid_argument("complex fields require a linear run");
    impl_->complex_fields = on;
}

double Solver::kx(int i) const { return impl_->kx.at(static_cast<std::size_t>(i)); }
double Solver::ky(int j) const { return impl_->ky.at(static_cast<std::size_t>(j)); }

double Solver::time() const { return impl_->t0 + static_cast<double>(steps_) * impl_->cfg.dt; }
double Solver::mu() const { return impl_->mu0 + impl_->eps * (static_cast<double>(steps_) * impl_->cfg.dt); }

void Solver::step()
{
    Impl& s = *impl_;
    const double h = s.cfg.dt;
    const double t = time();
    const std::size_t nc = hat_.size();

    if (s.cfg.scheme == Scheme::ETDRK4) {
        auto Nv = s.nonlinear(hat_, t);
        std::vector<cvec> a(nc, cvec(s.n)), b(nc, cvec(s.n)), c(nc, cvec(s.n));
        for (std::size_t k = 0; k < nc; ++k)
            for (std::size_t q = 0; q < s.n; ++q) a[k][q] = s.E2[k][q] * hat_[k][q] + s.Q[k][q] * Nv[k][q];
        auto Na = s.nonlinear(a, t + h / 2);
        for (std::size_t k = 0; k < nc; ++k)
            for (std::size_t q = 0; q < s.n; ++q) b[k][q] = s.E2[k][q] * hat_[k][q] + s.Q[k][q] * Na[k][q];
        auto Nb = s.nonlinear(b, t + h / 2);
        for (std::size_t k = 0; k < nc; ++k)
            for (std::size_t q = 0; q < s.n; ++q) c[k][q] = s.E2[k][q] * a[k][q] + s.Q[k][q] * (2.0 * Nb[k][q] - Nv[k][q]);
        auto Nc = s.nonlinear(c, t + h);
        for (std::size_t k = 0; k < nc; ++k)
            for (std::size_t q = 0; q < s.n; ++q)
                hat_[k][q] = s.E[k][q] * hat_[k][q] + s.f1[k][q] * Nv[k][q] + 2.0 * s.f2[k][q] * (Na[k][q] + Nb[k][q]) +
                             s.f3[k][q] * Nc[k][q];
    } else {
        auto Nv = s.nonlinear(hat_, t);
        std::vector<cvec> next(nc, cvec(s.n));
        for (std::size_t k = 0; k < nc; ++k) {
            for (std::size_t q = 0; q < s.n; ++q) {
                if (!s.have_prev) {
                    next[k][q] = (hat_[k][q] + h * Nv[k][q]) / (1.0 - h * s.L[k][q]);
                } else {
                    next[k][q] = (4.0 * hat_[k][q] - s.prev_hat[k][q] + 2.0 * h * (2.0 * Nv[k][q] - s.prev_N[k][q])) /
                                 (3.0 - 2.0 * h * s.L[k][q]);
                }
            }
        }
        s.prev_hat = hat_;
        s.prev_N = std::move(Nv);
        s.have_prev = true;
        hat_ = std::move(next);
    }
    if (s.model.id == ModelId::M4) s.leray(hat_[0], hat_[1]);
    ++steps_;

    const double limit = 1e10 * static_cast<double>(s.n);
    for (const auto& comp : hat_)
        for (const auto& v : comp)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > limit)
                throw BlowUpError("solution blew up at t = " + format_double(time()), time());
}

std::vector<std::vector<double>> Solver::rhs_physical() const
{
    const Impl& s = *impl_;
    auto N = s.nonlinear(hat_, time());
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < hat_.size(); ++k) {
        cvec r(s.n);
        for (std::size_t q = 0; q < s.n; ++q) r[q] = s.L[k][q] * hat_[k][q] + N[k][q];
        cvec f;
        s.fft.inverse(r, f);
        std::vector<double> re(f.size());
        for (std::size_t q = 0; q < f.size(); ++q) re[q] = f[q].real();
        out.push_back(std::move(re));
    }
    return out;
}

void Solver::reset(const FieldState& s)
{
    if (s.grid.nx != impl_->grid.nx || s.grid.ny != impl_->grid.ny || s.components.size() != hat_.size())
        throw std::invalid_argument("solver: reset state does not match the grid");
    impl_->t0 = s.time;
    impl_->mu0 = s.mu;
    impl_->eps = s.eps;
    impl_->have_prev = false;
    steps_ = 0;
    for (std::size_t k = 0; k < hat_.size(); ++k) {
        cvec f(s.components[k].begin(), s.components[k].end());
        hat_[k] = impl_->to_hat(f);
    }
    if (impl_->model.id == ModelId::M4) impl_->leray(hat_[0], hat_[1]);
}

void Solver::advance(long steps)
{
    for (long k = 0; k < steps; ++k) step();
}

FieldState Solver::state() const
{
    FieldState st;
    st.grid = impl_->grid;
    st.mu = mu();
    st.eps = impl_->eps;
    st.time = time();
    for (const auto& h : hat_) {
        cvec f;
        impl_->fft.inverse(h, f);
        std::vector<double> re(f.size());
        for (std::size_t q = 0; q < f.size(); ++q) re[q] = f[q].real();
        st.components.push_back(std::move(re));
    }
    return st;
}

FieldState step(const ModelSpec& m, const FieldState& s, const SolverConfig& cfg)
{
    Solver solver(m, s, cfg);
    solver.step();
    return solver.state();
}

Trajectory simulate(const ModelSpec& m, const FieldState& initial, double t_end, const SolverConfig& cfg)
{
    if (!(t_end > initial.time)) throw std::invalid_argument("simulate: t_end must exceed the initial time");
    Solver solver(m, initial, cfg);
    const long total = static_cast<long>(std::llround((t_end - initial.time) / cfg.dt));
    Trajectory tr;
    tr.records.push_back(solver.state());
    for (long k = 1; k <= total; ++k) {
        solver.step();
        if (k % cfg.record_stride == 0 || k == total) tr.records.push_back(solver.state());
    }
    return tr;
}

GrowthProbe linear_growth_probe(const ModelSpec& m, double xi, double mu, const ProbeOptions& opt)
{
    using std::numbers::pi;
    if (xi < 0) throw std::invalid_argument("linear_growth_probe: xi must be nonnegative");
    if (m.id == ModelId::M4 && !(xi > 0)) throw std::invalid_argument("linear_growth_probe: M4 needs xi > 0");
    const double len = xi > 0 ? 2 * pi / xi : 2 * pi;
    const int mode = xi > 0 ? 1 : 0;
    Grid g = m.id == ModelId::M4 ? Grid::plane(16, len, 64, 2 * pi) : Grid::line(16, len);
    if (m.id == ModelId::M2 && m.space_dims == 2) g = Grid::plane(16, len, 16, len);

    SolverConfig cfg = default_config(m);
    if (opt.dt > 0) cfg.dt = opt.dt;
    cfg.linear_only = true;
    cfg.dealias = false;
    FieldState init = FieldState::zeros(m, g);
    init.mu = mu;
    Solver solver(m, init, cfg);
    solver.set_complex_fields(true);
    auto& hat = solver.spectral();
    const int nyy = g.ny > 0 ? g.ny : 1;
    auto at = [&](int i, int j) -> std::size_t { return static_cast<std::size_t>(i * nyy + j); };

    switch (m.id) {
    case ModelId::M1: hat[0][at(mode, 0)] = 1.0; break;
    case ModelId::M3: hat[0][at(mode, 0)] = 1.0; break;  // leading branch lives in u
    case ModelId::M2: {
        const double a = m.brusselator.a, a2 = a * a;
        const double x2 = xi * xi;
        const double j11 = a2 + (1 + a2) * mu - m.brusselator.d1 * x2;
        const std::complex<double> lam = dispersion(m, xi, mu).leading();
        hat[0][at(mode, 0)] = a2;
        hat[1][at(mode, 0)] = lam - j11;
        break;
    }
    case ModelId::M4: {
        const int modes = 64;
        auto A = kolmogorov_linear_matrix(xi, mu, modes);
        const auto dim = static_cast<Eigen::Index>(A.size());
        Eigen::MatrixXd M(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) M(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        Eigen::EigenSolver<Eigen::MatrixXd> es(M, true);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < dim; ++i)
            if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
        const auto vec = es.eigenvectors().col(best);
        for (int nn = -modes / 2; nn < modes / 2; ++nn) {
            const double k = std::sqrt(xi * xi + double(nn) * nn);
            const double eu = -nn / k, ev = xi / k;
            // The grid starts at y = -pi, so e^{i n y} carries (-1)^n in FFT coordinates.
            const double sign = (nn % 2 == 0) ? 1.0 : -1.0;
            const std::complex<double> c = vec(nn + modes / 2) * sign;
            const int j = ((nn % nyy) + nyy) % nyy;
            hat[0][at(mode, j)] = c * eu;
            hat[1][at(mode, j)] = c * ev;
        }
        break;
    }
    }

    auto log_norm = [&]() {
        double s = 0;
        for (const auto& comp : hat)
            for (int j = 0; j < nyy; ++j) s += std::norm(comp[at(mode, j)]);
        return 0.5 * std::log(s);
    };
    solver.advance(std::lround(opt.transient / cfg.dt));
    const long n_fit = std::lround(opt.fit_time / cfg.dt);
    const long stride = std::max(1L, n_fit / 200);
    std::vector<double> ts, ls;
    for (long k = 0; k <= n_fit; ++k) {
        if (k % stride == 0) {
            ts.push_back(solver.time());
            ls.push_back(log_norm());
        }
        if (k < n_fit) solver.step();
    }
    double tm = 0, lm = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        tm += ts[k];
        lm += ls[k];
    }
    tm /= double(ts.size());
    lm /= double(ts.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sxy += (ts[k] - tm) * (ls[k] - lm);
        sxx += (ts[k] - tm) * (ts[k] - tm);
    }
    GrowthProbe r;
    r.rate = sxy / sxx;
    r.reduced_precision = ls.back() < std::log(1e-14);
    return r;
}

double sup_norm(const std::vector<double>& f)
{
    double m = 0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double divergence_norm(const FieldState& s)
{
    const Grid& g = s.grid;
    if (g.ny == 0 || s.components.size() < 2) throw std::invalid_argument("divergence_norm: needs a 2-D velocity");
    Fft fft(g.nx, g.ny);
    cvec u(s.components[0].begin(), s.components[0].end()), v(s.components[1].begin(), s.components[1].end());
    cvec uh, vh, d(static_cast<std::size_t>(g.size()));
    fft.forward(u, uh);
    fft.forward(v, vh);
    for (int i = 0; i < g.nx; ++i) {
        const int wi = wave_index(i, g.nx);
        const double kx = (2 * wi == g.nx) ? 0.0 : 2 * kPi / g.length * wi;
        for (int j = 0; j < g.ny; ++j) {
            const int wj = wave_index(j, g.ny);
            const double ky = (2 * wj == g.ny) ? 0.0 : 2 * kPi / g.width * wj;
            const std::size_t q = static_cast<std::size_t>(i * g.ny + j);
            d[q] = std::complex<double>(0, kx) * uh[q] + std::complex<double>(0, ky) * vh[q];
        }
    }
    cvec out;
    fft.inverse(d, out);
    double m = 0;
    for (const auto& z : out) m = std::max(m, std::abs(z.real()));
    return m;
}

double mean_flow_norm(const FieldState& s)
{
    const Grid& g = s.grid;
    if (g.ny == 0) throw std::invalid_argument("mean_flow_norm: needs a 2-D field");
    double m = 0;
    for (int i = 0; i < g.nx; ++i) {
        double acc = 0;
        for (int j = 0; j < g.ny; ++j) acc += s.components[0][static_cast<std::size_t>(i * g.ny + j)];
        m = std::max(m, std::abs(acc / g.ny));
    }
    return m;
}

std::vector<std::string> component_names(const ModelSpec& m)
{
    switch (m.id) {
    case ModelId::M1: return {"u"};
    case ModelId::M2:
    case ModelId::M3:
    case ModelId::M4: return {"u", "v"};
    }
    return {};
}

void write_timeseries_csv(std::ostream& os, const ModelSpec& m, const Trajectory& tr)
{
    std::vector<std::string> header{"t", "mu"};
    for (const auto& n : component_names(m)) header.push_back("sup_" + n);
    CsvWriter w(os, header);
    for (const auto& s : tr.records) {
        std::vector<double> row{s.time, s.mu};
        for (const auto& c : s.components) row.push_back(sup_norm(c));
        w.row(row);
    }
}

}  // namespace dynbif
