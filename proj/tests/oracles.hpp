#pragma once

// Independent reference computations for the acceptance checks. None of
// these call into the library's solvers; they rebuild each quantity from the
// model equations directly.

#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

// Eigenvalues of the Fourier symbol at wavenumber xi, sorted by descending
// real part (ties: ascending imaginary part).
std::vector<cd> m1_eigenvalues(double xi, double mu);
std::vector<cd> m2_eigenvalues(double a, double d1, double d2, double xi, double mu);
std::vector<cd> m3_eigenvalues(double xi, double mu);
// Vorticity form of the Kolmogorov linearisation, y modes -modes/2..modes/2-1;
// returns the eigenvalue with the largest real part.
cd m4_leading_eigenvalue(double xi, double r_prime, int modes = 64);

// Exact band edges of -(1 - xi^2)^2 + delta^2.
double m1_band_edge(double delta, int sign);
// Positive root of the long-wave quartic -(1 - R^2/2) xi^2 - R^2 (1 + R^2/4) xi^4
// with R = sqrt2 + delta^2.
double m4_quartic_band_edge(double delta);

// Classical RK4 for the chart slow flows: K1 (r1, eps1), K2 (r2, mu2),
// K3 (r3, eps3); chart = 1, 2 or 3.
struct SlowState {
    double r;
    double slow;
};
SlowState slow_flow_rk4(int chart, double beta, SlowState s, double t, int steps);

// Closed-form Brusselator Ginzburg-Landau coefficients (c1, c2, c3) for
// dT A = c1 dX^2 A + c2 A - c3 A|A|^2.
struct GlCoefficients {
    cd c1, c2, c3;
};
GlCoefficients m2_reference_coefficients(double a, double d1, double d2);

// mu at which a single mode with growth rate c2 * (mu0 + eps t) first grows
// from amp0 to threshold, by bisection on the exact log-amplitude.
double scalar_takeoff_mu(double mu0, double eps, double amp0, double threshold, double c2);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
