#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

void sort_desc(std::vector<cd>& v)
{
    std::sort(v.begin(), v.end(), [](const cd& a, const cd& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
}

}  // namespace

std::vector<cd> m1_eigenvalues(double xi, double mu)
{
    const double s = 1 - xi * xi;
    return {cd(mu - s * s, 0)};
}

std::vector<cd> m2_eigenvalues(double a, double d1, double d2, double xi, double mu)
{
    // Linearisation about the homogeneous state, b = b_c + (1 + a^2) mu.
    const double a2 = a * a, k2 = xi * xi;
    Eigen::Matrix2d j;
    j << a2 + (1 + a2) * mu - d1 * k2, a2, -(1 + a2) * (1 + mu), -a2 - d2 * k2;
    Eigen::EigenSolver<Eigen::Matrix2d> es(j, false);
    std::vector<cd> v{es.eigenvalues()(0), es.eigenvalues()(1)};
    sort_desc(v);
    return v;
}

std::vector<cd> m3_eigenvalues(double xi, double mu)
{
    const double s = 1 - xi * xi;
    std::vector<cd> v{cd(mu - s * s, -xi), cd(mu - s * s, xi)};
    sort_desc(v);
    return v;
}

cd m4_leading_eigenvalue(double xi, double r_prime, int modes)
{
    if (xi == 0) return 0.0;
    // zeta_t = Lap zeta - R sin y (zeta_x + v), v = -psi_x, zeta = -Lap psi,
    // in Fourier modes exp(i xi x + i n y).
    const double R = std::sqrt(2.0) + r_prime;
    const int lo = -modes / 2;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(modes, modes);
    auto k2 = [&](int n) { return xi * xi + double(n) * n; };
    for (int row = 0; row < modes; ++row) {
        const int n = lo + row;
        m(row, row) = -k2(n);
        if (row > 0) m(row, row - 1) = -(R * xi / 2) * (1 - 1 / k2(n - 1));
        if (row + 1 < modes) m(row, row + 1) = (R * xi / 2) * (1 - 1 / k2(n + 1));
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    std::vector<cd> v(es.eigenvalues().data(), es.eigenvalues().data() + modes);
    sort_desc(v);
    return v.front();
}

double m1_band_edge(double delta, int sign) { return std::sqrt(1 + sign * delta); }

double m4_quartic_band_edge(double delta)
{
    const double R2 = std::pow(std::sqrt(2.0) + delta * delta, 2);
    const double a = R2 / 2 - 1;  // coefficient of xi^2
    const double b = R2 * (1 + R2 / 4);
    return std::sqrt(a / b);
}

SlowState slow_flow_rk4(int chart, double beta, SlowState s, double t, int steps)
{
    const double k = 2 + beta;
    auto f = [&](const SlowState& p) -> SlowState {
        switch (chart) {
        case 1: return {-0.5 * p.r * p.slow, 0.5 * k * p.slow * p.slow};
        case 2: return {0.0, 1.0};
        case 3: return {0.5 * p.r * p.slow, -0.5 * k * p.slow * p.slow};
        }
        throw std::invalid_argument("chart must be 1, 2 or 3");
    };
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) {
        const SlowState k1 = f(s);
        const SlowState k2 = f({s.r + 0.5 * h * k1.r, s.slow + 0.5 * h * k1.slow});
        const SlowState k3 = f({s.r + 0.5 * h * k2.r, s.slow + 0.5 * h * k2.slow});
        const SlowState k4 = f({s.r + h * k3.r, s.slow + h * k3.slow});
        s.r += h / 6 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r);
        s.slow += h / 6 * (k1.slow + 2 * k2.slow + 2 * k3.slow + k4.slow);
    }
    return s;
}

GlCoefficients m2_reference_coefficients(double a, double d1, double d2)
{
    const double a2 = a * a;
    return {cd(d1 + d2, -a * (d1 - d2)) / 2.0, cd((1 + a2) / 2, 0),
            0.5 * cd((2 + a2) / a2, (4 - 7 * a2 + 4 * a2 * a2) / (3 * a2 * a))};
}

double scalar_takeoff_mu(double mu0, double eps, double amp0, double threshold, double c2)
{
    // log(a(t) / amp0) = c2 (mu0 t + eps t^2 / 2), increasing once mu > 0.
    auto gain = [&](double t) { return c2 * (mu0 * t + 0.5 * eps * t * t) - std::log(threshold / amp0); };
    double lo = std::max(0.0, -mu0 / eps), hi = lo + 1;
    while (gain(hi) < 0) hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gain(mid) < 0 ? lo : hi) = mid;
    }
    return mu0 + eps * 0.5 * (lo + hi);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

}  // namespace oracle
