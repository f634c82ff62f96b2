#pragma once

// Blow-up of the slow parameter plane (mu, eps) at the origin and its three
// directional charts.
//
//   mu  = r^2 * bar_mu,   eps = r^(2+beta) * bar_eps,   (bar_mu, bar_eps) on S^1
//
//   K1 (bar_mu = -1): (r1*psi1, -r1^2,     r1^(2+beta)*eps1)
//   K2 (bar_eps = 1): (r2*psi2, r2^2*mu2,  r2^(2+beta))
//   K3 (bar_mu = +1): (r3*psi3, r3^2,      r3^(2+beta)*eps3)

#include <stdexcept>
#include <string>

namespace dynbif {

enum class ChartId { K1, K2, K3 };

std::string chart_name(ChartId c);

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowUpPoint {
    double r = 0;
    double bar_mu = 0;
    double bar_eps = 0;
    double beta = 2;
};

// r_i is the chart radius; slow is eps1 (K1), mu2 (K2) or eps3 (K3).
struct ChartPoint {
    ChartId chart = ChartId::K2;
    double r = 0;
    double slow = 0;
    double beta = 2;
};

struct SlowTrajectory {
    ChartId chart = ChartId::K2;
    ChartPoint initial;
    double beta = 2;
};

struct ChartTransition {
    ChartPoint point;
    double psi_scale = 1;  // psi_target = psi_scale * psi_source
};

struct ChartThresholds {
    double eps1_exit = 1.0;  // K1 -> K2 once eps1 reaches this
    double mu2_exit = 1.0;   // K2 -> K3 once mu2 reaches this
};

struct SlowParams {
    double mu = 0;
    double eps = 0;
};

SlowParams blowup_to_params(const BlowUpPoint& p);

// Inverse of blowup_to_params restricted to r > 0; r is found by bisection.
BlowUpPoint params_to_blowup(double mu, double eps, double beta);

// Chart coordinates of p in the requested chart; psi_scale maps the global
// amplitude (u = r*psi) to the chart amplitude (u = r_i*psi_i).
ChartTransition chart_from_global(const BlowUpPoint& p, ChartId chart);

// Chart selected by the switch policy: K1 while eps1 < eps1_exit, K3 once
// mu2 >= mu2_exit, K2 otherwise.
ChartId preferred_chart(double mu, double eps, double beta, const ChartThresholds& th = {});

SlowParams chart_to_params(const ChartPoint& p);

// K2 -> K1 (requires mu2 < 0) and K3 -> K2 (requires eps3 > 0), plus inverses.
ChartTransition kappa12(const ChartPoint& k2);
ChartTransition kappa23(const ChartPoint& k3);
ChartTransition kappa21(const ChartPoint& k1);
ChartTransition kappa32(const ChartPoint& k2);

// Closed-form solution of the chart-restricted slow flow at chart time t.
ChartPoint slow_flow_eval(const SlowTrajectory& traj, double t);

// Right-hand side (dr/dt, dslow/dt) of the chart slow flow.
struct SlowRate {
    double dr = 0;
    double dslow = 0;
};
SlowRate slow_flow_rhs(const ChartPoint& p);

// K1 finite-time blow-up of eps1 (infinite for eps1(0) <= 0).
double k1_blowup_time(const SlowTrajectory& traj);

// bar_mu along the chart trajectory and its time integral from 0 to t.
double chart_bar_mu(const SlowTrajectory& traj, double t);
double chart_bar_mu_integral(const SlowTrajectory& traj, double t);

// -(dr/dt)/r along the chart trajectory, and its integral ln(r(0)/r(t)).
double chart_dilation(const SlowTrajectory& traj, double t);
double chart_dilation_integral(const SlowTrajectory& traj, double t);

// Original time elapsed while the chart time runs from 0 to t.
double elapsed_original_time(const SlowTrajectory& traj, double t);

// Invariant r^(2+beta) * eps of the slow flow (eps as in the original variables).
double slow_invariant(const ChartPoint& p);

}  // namespace dynbif
