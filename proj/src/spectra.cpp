#include "dynbif/spectra.hpp"

#include "dynbif/csv.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace dynbif {

std::string kind_name(BifurcationKind k)
{
    switch (k) {
    case BifurcationKind::Turing: return "Turing";
    case BifurcationKind::Hopf: return "Hopf";
    case BifurcationKind::TuringHopf: return "TuringHopf";
    case BifurcationKind::LongWaveConserved: return "LongWaveConserved";
    }
    return "?";
}

void sort_eigenvalues(std::vector<std::complex<double>>& ev)
{
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
}

std::vector<std::vector<double>> kolmogorov_linear_matrix(double xi, double r_prime, int modes)
{
    const double R = kolmogorov_critical_reynolds() + r_prime;
    const int lo = -modes / 2;
    const int hi = lo + modes - 1;

    // Basis vector (eu, ev) of the divergence-free subspace at y-mode n.
    // At xi = 0, n = 0 only the v direction survives (zero mean flow).
    struct Basis {
        int n;
        double eu, ev, k2;
    };
    std::vector<Basis> basis;
    for (int n = lo; n <= hi; ++n) {
        double k2 = xi * xi + double(n) * n;
        if (k2 == 0) {
            basis.push_back({n, 0.0, 1.0, 0.0});
            continue;
        }
        double k = std::sqrt(k2);
        basis.push_back({n, -n / k, xi / k, k2});
    }
    const std::size_t dim = basis.size();
    auto index_of = [&](int n) -> long {
        if (n < lo || n > hi) return -1;
        return n - lo;
    };

    std::vector<std::vector<double>> A(dim, std::vector<double>(dim, 0.0));
    for (std::size_t j = 0; j < dim; ++j) {
        const Basis& b = basis[j];
        A[j][j] -= b.k2;
        // W U = (sin y d_x u + cos y v, sin y d_x v) applied to the single mode e_j e^{i n y}.
        // sin y e^{iny} = (e^{i(n+1)y} - e^{i(n-1)y}) / 2i, cos y e^{iny} = (e^{i(n+1)y} + e^{i(n-1)y}) / 2.
        for (int s : {+1, -1}) {
            long m = index_of(b.n + s);
            if (m < 0) continue;
            double wu = s * xi * b.eu / 2 + b.ev / 2;
            double wv = s * xi * b.ev / 2;
            const Basis& t = basis[static_cast<std::size_t>(m)];
            A[static_cast<std::size_t>(m)][j] -= R * (t.eu * wu + t.ev * wv);
        }
    }
    return A;
}

namespace {

DispersionResult m2_dispersion(const BrusselatorParams& p, double xi, double mu)
{
    const double a2 = p.a * p.a;
    const double b = (1 + mu) * (1 + a2);
    const double x2 = xi * xi;
    const double sigma = 1 + a2 - b + (p.d1 + p.d2) * x2;
    const double kappa = a2 + (a2 * p.d1 + (1 - b) * p.d2) * x2 + p.d1 * p.d2 * x2 * x2;
    const std::complex<double> disc = std::sqrt(std::complex<double>(sigma * sigma - 4 * kappa));
    DispersionResult r;
    // Avoid cancellation in the smaller root.
    std::complex<double> q = -0.5 * (sigma + (sigma >= 0 ? 1.0 : -1.0) * disc);
    if (std::abs(q) == 0) {
        r.eigenvalues = {0.0, 0.0};
    } else {
        r.eigenvalues = {q, kappa / q};
    }
    if (disc.real() == 0 && disc.imag() != 0) {
        // Complex pair: make the conjugate symmetry exact.
        r.eigenvalues = {{-sigma / 2, std::abs(disc.imag()) / 2}, {-sigma / 2, -std::abs(disc.imag()) / 2}};
    }
    sort_eigenvalues(r.eigenvalues);
    return r;
}

DispersionResult m4_quartic(double xi, double rp, const SpectraOptions& opt)
{
    if (std::abs(xi) > opt.m4_quartic_max)
        throw RangeError("kolmogorov quartic dispersion used outside its validity window");
    const double R = kolmogorov_critical_reynolds() + rp;
    const double R2 = R * R;
    const double x2 = xi * xi;
    double lam = -(1 - R2 / 2) * x2 - R2 * (1 + R2 / 4) * x2 * x2;
    return {{lam}};
}

DispersionResult m4_numeric(double xi, double rp, const SpectraOptions& opt)
{
    auto A = kolmogorov_linear_matrix(xi, rp, opt.m4_modes);
    const auto n = static_cast<Eigen::Index>(A.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("kolmogorov eigen-solve failed");
    DispersionResult r;
    for (Eigen::Index i = 0; i < n; ++i) r.eigenvalues.push_back(es.eigenvalues()(i));
    sort_eigenvalues(r.eigenvalues);
    return r;
}

}  // namespace

DispersionResult dispersion(const ModelSpec& m, double xi, double mu, const SpectraOptions& opt)
{
    const double sh = -(1 - xi * xi) * (1 - xi * xi);
    switch (m.id) {
    case ModelId::M1: return {{sh + mu}};
    case ModelId::M2: return m2_dispersion(m.brusselator, xi, mu);
    case ModelId::M3: {
        DispersionResult r{{{sh + mu, -xi}, {sh + mu, xi}}};
        sort_eigenvalues(r.eigenvalues);
        return r;
    }
    case ModelId::M4:
        return opt.m4_path == M4Path::Quartic ? m4_quartic(xi, mu, opt) : m4_numeric(xi, mu, opt);
    }
    throw std::invalid_argument("dispersion: unknown model");
}

namespace {

double critical_wavenumber(ModelId id) { return (id == ModelId::M1 || id == ModelId::M3) ? 1.0 : 0.0; }

double bisect_root(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a);
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-12; ++it) {
        double mid = 0.5 * (a + b);
        double fm = f(mid);
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Walk from xi_c in the direction `dir` until Re lambda_1 turns negative.
double band_edge(const std::function<double(double)>& f, double xi_c, double step, int dir)
{
    const int max_steps = 100000;
    double prev = xi_c;
    if (f(prev) <= 0) {
        prev = xi_c + dir * step;
        if (f(prev) <= 0) throw std::runtime_error("unstable_band: no instability at this mu");
    }
    for (int i = 1; i < max_steps; ++i) {
        double cur = prev + dir * step;
        if (f(cur) < 0) return bisect_root(f, prev, cur);
        prev = cur;
    }
    throw std::runtime_error("unstable_band: no sign change found");
}

}  // namespace

std::pair<double, double> unstable_band(const ModelSpec& m, double delta, const SpectraOptions& opt)
{
    if (!(delta > 0 && delta <= 0.5)) throw std::invalid_argument("unstable_band: delta must lie in (0, 0.5]");
    const double mu = delta * delta;
    auto f = [&](double xi) { return dispersion(m, xi, mu, opt).leading().real(); };
    const double xc = critical_wavenumber(m.id);
    const double step = delta / 50;
    if (xc == 0) {
        double plus = band_edge(f, 0.0, step, +1);
        return {-plus, plus};
    }
    return {band_edge(f, xc, step, -1), band_edge(f, xc, step, +1)};
}

BifurcationData classify(const ModelSpec& m)
{
    SpectraOptions opt;
    auto re = [&](double xi) { return dispersion(m, xi, 0.0, opt).leading().real(); };
    const double xmax = m.id == ModelId::M4 ? opt.m4_quartic_max : 3.0;
    const int n = 3000;
    double best = 0;
    double best_val = re(0);
    for (int i = 1; i <= n; ++i) {
        double x = xmax * i / n;
        double v = re(x);
        if (v > best_val) {
            best_val = v;
            best = x;
        }
    }
    // Golden-section refinement inside the neighbouring grid cells.
    double a = std::max(0.0, best - xmax / n);
    double b = std::min(xmax, best + xmax / n);
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        if (re(c) >= re(d)) b = d;
        else a = c;
    }
    double xi_c = best == 0 ? 0.0 : 0.5 * (a + b);
    if (std::abs(xi_c) < 1e-6) xi_c = 0;

    const auto lead = dispersion(m, xi_c, 0.0, opt).leading();
    // At xi_c = 0 a real system has a conjugate pair; report the positive frequency.
    double omega_c = xi_c == 0 ? std::abs(lead.imag()) : lead.imag();
    if (std::abs(omega_c) < 1e-12) omega_c = 0;

    BifurcationData d{xi_c, omega_c, 0.0, BifurcationKind::Turing};
    bool conserved = xi_c == 0 && omega_c == 0 && std::abs(dispersion(m, 0.0, 0.1, opt).leading().real()) < 1e-14 &&
                     std::abs(dispersion(m, 0.0, -0.1, opt).leading().real()) < 1e-14;
    if (conserved) d.kind = BifurcationKind::LongWaveConserved;
    else if (xi_c != 0 && omega_c == 0) d.kind = BifurcationKind::Turing;
    else if (xi_c == 0 && omega_c != 0) d.kind = BifurcationKind::Hopf;
    else if (xi_c != 0 && omega_c != 0) d.kind = BifurcationKind::TuringHopf;
    else throw std::runtime_error("classify: degenerate critical data");
    return d;
}

void write_dispersion_csv(std::ostream& os, const ModelSpec& m, double mu, const std::vector<double>& xis,
                          const SpectraOptions& opt)
{
    CsvWriter w(os, {"xi", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2"});
    for (double xi : xis) {
        auto ev = dispersion(m, xi, mu, opt).eigenvalues;
        std::vector<double> row{xi, ev[0].real(), ev[0].imag()};
        if (ev.size() > 1) {
            row.push_back(ev[1].real());
            row.push_back(ev[1].imag());
        } else {
            row.push_back(std::nan(""));
            row.push_back(std::nan(""));
        }
        w.row(row);
    }
}

}  // namespace dynbif
