#pragma once

// Comparison of direct simulations against reconstructed modulation
// approximations: leading-order reconstruction, error and residual norms,
// take-off detection for slow passages, and log-log slope fits.

#include "dynbif/modulation.hpp"
#include "dynbif/physical.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynbif {

struct ValidateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Where and when the reconstructed field lives: x = xbar / r, physical time t
// (for the oscillating phases of M2/M3), and the mu/eps echoed into the state.
struct ReconstructContext {
    double r = 0.1;
    double time = 0;
    double mu = 0;
    double eps = 0;
    bool interpolate = true;
};

// Leading-order field r psi^(0) sampled on `phys`.
//   M1: r (A e^{ix} + c.c.)
//   M2: r (A phi e^{iat} + c.c.), phi = (1, -1 + i/a)
//   M3: r (A1 e^{i(x-t)} + c.c., A2 e^{i(x+t)} + c.c.) from the lab amplitudes
//   M4: r A(xbar) (-sqrt2 cos y, 1)
// The xbar sample points are modulation nodes when the boxes match and the
// modulation size is a multiple of the physical one; otherwise the amplitude
// is interpolated spectrally (an error when interpolation is disabled).
FieldState reconstruct(const ModelSpec& m, const ModulationState& s, const Grid& phys, const ReconstructContext& ctx);

struct ErrorReport {
    std::vector<double> times;
    std::vector<double> sup_errors;
    std::vector<double> l2_errors;
    double max_error = 0;
    double fitted_slope = 0;
    double slope_ci_low = 0;
    double slope_ci_high = 0;
    std::vector<double> residual_norms;
    std::vector<std::pair<std::string, std::string>> metadata;
};

// Per-record sup and L2 norms of (direct - approx) over all components.
// Records must share grids and times.
ErrorReport approximation_error(const std::vector<FieldState>& direct, const std::vector<FieldState>& approx);

struct ResidualSeries {
    std::vector<double> times;
    std::vector<double> l2;
    std::vector<double> sup;
};

// d_t u - F(u, mu(t)) on a uniformly spaced trajectory: fourth-order central
// differences in time, spectral space derivatives without dealiasing. One
// entry per record with two neighbours on each side.
ResidualSeries residual(const ModelSpec& m, const std::vector<FieldState>& records);

struct Takeoff {
    double time = 0;
    double mu = 0;
};

// First crossing of sup|u| over `threshold`, log-linearly interpolated
// between records. Throws when the trajectory never crosses.
Takeoff delay_metric(const std::vector<FieldState>& records, double threshold);

// mu at take-off for a single mode with growth rate c2 * mu(t), mu(t) =
// mu0 + eps t, grown from amp0 to threshold.
double scalar_delay_oracle(double mu0, double eps, double amp0, double threshold, double c2);

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double ci_low = 0;
    double ci_high = 0;
};

// Least-squares fit of log y against log x with a 95% Student-t interval on
// the slope (infinite with two points).
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Static-regime comparison: direct run from the reconstructed initial field
// against the frozen-coefficient envelope equation (bar mu = 1, mu = delta^2)
// over t in [0, window / delta^2], both sampled every compare_every / delta^2.
struct StaticRunOptions {
    double delta = 0.1;
    double window = 1.0;
    double compare_every = 0.05;
    double box = 0;          // slow box length, 0: 8 pi
    int base_points = 0;     // physical points at delta = 0.2, 0: model default
    int envelope_points = 0; // modulation points, 0: model default
    double dt = 0.01;
    double envelope_dt = 1e-3;
};

ErrorReport static_validity_run(const ModelSpec& m, const StaticRunOptions& opt);

// Runs static_validity_run per delta and fits max error against delta.
struct SweepReport {
    std::vector<double> deltas;
    std::vector<double> max_errors;
    SlopeFit fit;
};

SweepReport static_validity_sweep(const ModelSpec& m, const std::vector<double>& deltas, StaticRunOptions opt = {});

// Residual of the reconstructed M1 leading-order field along the frozen GL
// flow (records every 0.1 time units up to tbar = window); returns the
// largest sup residual.
double reconstruction_residual(double delta, double window = 0.3);

// Slow passage from mu0 < 0 with band-limited random-phase data of sup norm
// amp0 (seeded); returns the take-off point.
struct DelayRunOptions {
    double eps = 1e-3;
    double mu0 = -0.05;
    double amp0 = 1e-6;
    double threshold = 1e-2;
    std::uint64_t seed = 1;
    std::uint64_t run = 0;
    double t_max = 0;  // 0: twice the scalar-oracle take-off time
    int record_stride = 10;
};

Takeoff delay_run(const ModelSpec& m, const DelayRunOptions& opt);

// Sum over the unstable band |k - k_c| <= band of random-phase modes, scaled
// to the requested sup norm. One field per model component.
FieldState random_band_state(const ModelSpec& m, const Grid& g, double amplitude, double band, std::uint64_t seed,
                             std::uint64_t run);

// Columns: delta, eps, max_error, slope, residual_slope, t_takeoff, mu_takeoff.
struct ValidationRow {
    double delta = 0;
    double eps = 0;
    double max_error = 0;
    double slope = 0;
    double residual_slope = 0;
    double t_takeoff = 0;
    double mu_takeoff = 0;
};

void write_validation_csv(std::ostream& os, const std::vector<ValidationRow>& rows);

}  // namespace dynbif
