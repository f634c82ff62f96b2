#include "dynbif/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynbif {

std::string chart_name(ChartId c)
{
    switch (c) {
    case ChartId::K1: return "K1";
    case ChartId::K2: return "K2";
    case ChartId::K3: return "K3";
    }
    return "?";
}

SlowParams blowup_to_params(const BlowUpPoint& p)
{
    return {p.r * p.r * p.bar_mu, std::pow(p.r, 2 + p.beta) * p.bar_eps};
}

BlowUpPoint params_to_blowup(double mu, double eps, double beta)
{
    if (eps < 0) throw GeometryError("params_to_blowup: eps must be nonnegative");
    if (mu == 0 && eps == 0) throw GeometryError("params_to_blowup: (0,0) has no unique preimage");
    const double k = 2 + beta;
    if (eps == 0) return {std::sqrt(std::abs(mu)), mu > 0 ? 1.0 : -1.0, 0.0, beta};
    if (mu == 0) return {std::pow(eps, 1 / k), 0.0, 1.0, beta};

    auto f = [&](double r) {
        double a = mu / (r * r);
        double b = eps / std::pow(r, k);
        return a * a + b * b - 1;
    };
    double s1 = std::sqrt(std::abs(mu));
    double s2 = std::pow(eps, 1 / k);
    double lo = std::min(s1, s2) / 2;
    double hi = std::max(s1, s2) * 2;
    // f is strictly decreasing in r: positive at lo, negative at hi.
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0) lo = mid;
        else hi = mid;
    }
    double r = 0.5 * (lo + hi);
    double bm = mu / (r * r);
    double be = eps / std::pow(r, k);
    double n = std::hypot(bm, be);
    return {r, bm / n, be / n, beta};
}

ChartTransition chart_from_global(const BlowUpPoint& p, ChartId chart)
{
    const double k = 2 + p.beta;
    SlowParams sp = blowup_to_params(p);
    ChartPoint q{chart, 0, 0, p.beta};
    switch (chart) {
    case ChartId::K1:
        if (!(p.bar_mu < 0)) throw GeometryError("chart_from_global: K1 requires bar_mu < 0");
        q.r = std::sqrt(-sp.mu);
        q.slow = sp.eps / std::pow(q.r, k);
        break;
    case ChartId::K2:
        if (!(p.bar_eps > 0)) throw GeometryError("chart_from_global: K2 requires bar_eps > 0");
        q.r = std::pow(sp.eps, 1 / k);
        q.slow = sp.mu / (q.r * q.r);
        break;
    case ChartId::K3:
        if (!(p.bar_mu > 0)) throw GeometryError("chart_from_global: K3 requires bar_mu > 0");
        q.r = std::sqrt(sp.mu);
        q.slow = sp.eps / std::pow(q.r, k);
        break;
    }
    return {q, p.r / q.r};
}

ChartId preferred_chart(double mu, double eps, double beta, const ChartThresholds& th)
{
    if (eps < 0) throw GeometryError("preferred_chart: eps must be nonnegative");
    if (mu == 0 && eps == 0) throw GeometryError("preferred_chart: (0,0) has no chart");
    const double k = 2 + beta;
    if (eps == 0) return mu < 0 ? ChartId::K1 : ChartId::K3;
    if (mu < 0) {
        double eps1 = eps / std::pow(-mu, k / 2);
        return eps1 < th.eps1_exit ? ChartId::K1 : ChartId::K2;
    }
    double mu2 = mu / std::pow(eps, 2 / k);
    return mu2 >= th.mu2_exit ? ChartId::K3 : ChartId::K2;
}

SlowParams chart_to_params(const ChartPoint& p)
{
    const double rk = std::pow(p.r, 2 + p.beta);
    switch (p.chart) {
    case ChartId::K1: return {-p.r * p.r, rk * p.slow};
    case ChartId::K2: return {p.r * p.r * p.slow, rk};
    case ChartId::K3: return {p.r * p.r, rk * p.slow};
    }
    return {};
}

ChartTransition kappa12(const ChartPoint& k2)
{
    if (k2.chart != ChartId::K2) throw GeometryError("kappa12: expected a K2 point");
    if (!(k2.slow < 0)) throw GeometryError("kappa12: requires mu2 < 0");
    const double s = std::sqrt(-k2.slow);
    ChartPoint q{ChartId::K1, k2.r * s, std::pow(-k2.slow, -(2 + k2.beta) / 2), k2.beta};
    return {q, 1 / s};
}

ChartTransition kappa21(const ChartPoint& k1)
{
    if (k1.chart != ChartId::K1) throw GeometryError("kappa21: expected a K1 point");
    if (!(k1.slow > 0)) throw GeometryError("kappa21: requires eps1 > 0");
    const double k = 2 + k1.beta;
    const double s = std::pow(k1.slow, 1 / k);  // = 1/sqrt(-mu2)
    ChartPoint q{ChartId::K2, k1.r * s, -1 / (s * s), k1.beta};
    return {q, 1 / s};
}

ChartTransition kappa23(const ChartPoint& k3)
{
    if (k3.chart != ChartId::K3) throw GeometryError("kappa23: expected a K3 point");
    if (!(k3.slow > 0)) throw GeometryError("kappa23: requires eps3 > 0");
    const double k = 2 + k3.beta;
    const double s = std::pow(k3.slow, 1 / k);
    ChartPoint q{ChartId::K2, k3.r * s, 1 / (s * s), k3.beta};
    return {q, 1 / s};
}

ChartTransition kappa32(const ChartPoint& k2)
{
    if (k2.chart != ChartId::K2) throw GeometryError("kappa32: expected a K2 point");
    if (!(k2.slow > 0)) throw GeometryError("kappa32: requires mu2 > 0");
    const double s = std::sqrt(k2.slow);
    ChartPoint q{ChartId::K3, k2.r * s, std::pow(k2.slow, -(2 + k2.beta) / 2), k2.beta};
    return {q, 1 / s};
}

double k1_blowup_time(const SlowTrajectory& traj)
{
    if (traj.chart != ChartId::K1) throw GeometryError("k1_blowup_time: expected a K1 trajectory");
    const double e0 = traj.initial.slow;
    if (e0 <= 0) return std::numeric_limits<double>::infinity();
    return 2 / ((2 + traj.beta) * e0);
}

namespace {

// g(t) = 1 + sign*(2+beta)*slow0*t/2 for the K1 (sign -1) and K3 (sign +1) flows.
double log_g(const SlowTrajectory& traj, double t)
{
    const double k = 2 + traj.beta;
    const double sign = traj.chart == ChartId::K1 ? -1.0 : 1.0;
    return std::log1p(sign * k * traj.initial.slow * t / 2);
}

void check_time(const SlowTrajectory& traj, double t)
{
    if (t < 0) throw GeometryError("slow flow: negative time");
    if (traj.chart == ChartId::K1 && t >= k1_blowup_time(traj))
        throw GeometryError("slow flow: time beyond the K1 blow-up of eps1");
}

}  // namespace

ChartPoint slow_flow_eval(const SlowTrajectory& traj, double t)
{
    check_time(traj, t);
    const double k = 2 + traj.beta;
    ChartPoint p = traj.initial;
    p.chart = traj.chart;
    p.beta = traj.beta;
    if (traj.chart == ChartId::K2) {
        p.slow = traj.initial.slow + t;
        return p;
    }
    const double lg = log_g(traj, t);
    p.slow = traj.initial.slow * std::exp(-lg);
    p.r = traj.initial.r * std::exp(lg / k);
    return p;
}

SlowRate slow_flow_rhs(const ChartPoint& p)
{
    const double k = 2 + p.beta;
    switch (p.chart) {
    case ChartId::K1: return {-0.5 * p.r * p.slow, 0.5 * k * p.slow * p.slow};
    case ChartId::K2: return {0.0, 1.0};
    case ChartId::K3: return {0.5 * p.r * p.slow, -0.5 * k * p.slow * p.slow};
    }
    return {};
}

double chart_bar_mu(const SlowTrajectory& traj, double t)
{
    switch (traj.chart) {
    case ChartId::K1: return -1;
    case ChartId::K2: return traj.initial.slow + t;
    case ChartId::K3: return 1;
    }
    return 0;
}

double chart_bar_mu_integral(const SlowTrajectory& traj, double t)
{
    switch (traj.chart) {
    case ChartId::K1: return -t;
    case ChartId::K2: return traj.initial.slow * t + 0.5 * t * t;
    case ChartId::K3: return t;
    }
    return 0;
}

double chart_dilation(const SlowTrajectory& traj, double t)
{
    if (traj.chart == ChartId::K2) return 0;
    ChartPoint p = slow_flow_eval(traj, t);
    return traj.chart == ChartId::K1 ? 0.5 * p.slow : -0.5 * p.slow;
}

double chart_dilation_integral(const SlowTrajectory& traj, double t)
{
    if (traj.chart == ChartId::K2) return 0;
    check_time(traj, t);
    return -log_g(traj, t) / (2 + traj.beta);
}

double elapsed_original_time(const SlowTrajectory& traj, double t)
{
    check_time(traj, t);
    const double r0b = std::pow(traj.initial.r, traj.beta);
    const double e0 = traj.initial.slow;
    if (traj.chart == ChartId::K2 || e0 == 0) return t / r0b;
    const double k = 2 + traj.beta;
    // integral of r(s)^-beta ds = r0^-beta * (1 - g^(2/k)) / eps0 (K1), (g^(2/k) - 1) / eps0 (K3)
    const double em = std::expm1(2 / k * log_g(traj, t));
    return (traj.chart == ChartId::K1 ? -em : em) / (e0 * r0b);
}

double slow_invariant(const ChartPoint& p)
{
    return chart_to_params(p).eps;
}

}  // namespace dynbif
