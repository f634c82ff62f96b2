#pragma once

// Pseudospectral solvers for the four fast-slow model PDEs on periodic boxes.
// The linear diagonal part is integrated exactly (ETD-RK4 or IMEX-BDF2); the
// slow parameter follows mu(t) = mu(0) + eps t.

#include "dynbif/fft.hpp"
#include "dynbif/model.hpp"

#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynbif {

struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

// Periodic grid: x in [0, length) with nx points; ny > 0 adds a second
// periodic direction y in [-width/2, width/2) (M4 cross-section, or M2 in 2-D).
struct Grid {
    int nx = 256;
    double length = 0;
    int ny = 0;
    double width = 0;

    static Grid line(int nx, double length) { return {nx, length, 0, 0}; }
    static Grid plane(int nx, double length, int ny, double width) { return {nx, length, ny, width}; }

    int dim() const { return ny > 0 ? 2 : 1; }
    int size() const { return ny > 0 ? nx * ny : nx; }
    double x(int i) const { return length * i / nx; }
    double y(int j) const { return -width / 2 + width * j / ny; }
    void validate() const;
};

// Default boxes: L = 32 pi for M1/M3, 2 pi / xi per the caller for M4.
Grid default_grid(const ModelSpec& m);

struct FieldState {
    Grid grid;
    // One real field per component, row-major (x outer, y inner).
    std::vector<std::vector<double>> components;
    double mu = 0;   // bifurcation parameter (M4: R' = R - R*)
    double eps = 0;  // slow drift rate
    double time = 0;

    static FieldState zeros(const ModelSpec& m, const Grid& g);
};

enum class Scheme { ETDRK4, IMEXBDF2 };

struct SolverConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::ETDRK4;
    bool dealias = true;
    int record_stride = 1;
    // Drop the nonlinear terms (the eps forcing of M2/M4 is kept).
    bool linear_only = false;
    int contour_points = 64;
};

SolverConfig default_config(const ModelSpec& m);

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& s);

class Solver {
public:
    Solver(const ModelSpec& m, const FieldState& initial, const SolverConfig& cfg);
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    void step();
    void advance(long steps);
    // Restart from another state on the same grid (time, mu and eps included).
    void reset(const FieldState& s);

    double time() const;
    double mu() const;
    long steps_taken() const { return steps_; }
    FieldState state() const;

    // Fourier coefficients per component (unnormalized forward transform).
    std::vector<cvec>& spectral() { return hat_; }
    const std::vector<cvec>& spectral() const { return hat_; }
    // Keep complex physical fields (linear runs only).
    void set_complex_fields(bool on);
    // Full right-hand side (M + L)u + N(u, mu, eps) at the current state, in
    // physical space (M4: Leray-projected).
    std::vector<std::vector<double>> rhs_physical() const;

    double kx(int i) const;
    double ky(int j) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<cvec> hat_;
    long steps_ = 0;
};

FieldState step(const ModelSpec& m, const FieldState& s, const SolverConfig& cfg);

struct Trajectory {
    std::vector<FieldState> records;
};

// Records the initial state and every record_stride steps; the last record
// is at t_end (rounded to a whole number of steps).
Trajectory simulate(const ModelSpec& m, const FieldState& initial, double t_end, const SolverConfig& cfg);

struct GrowthProbe {
    double rate = 0;
    bool reduced_precision = false;
};

struct ProbeOptions {
    double fit_time = 5.0;
    double transient = 0.0;
    double dt = 0;  // 0: model default
};

// Single-mode linear run; returns the least-squares slope of log|mode|.
GrowthProbe linear_growth_probe(const ModelSpec& m, double xi, double mu, const ProbeOptions& opt = {});

double sup_norm(const std::vector<double>& f);
// M4 diagnostics: sup |div U'| and sup_x |y-mean of u'|.
double divergence_norm(const FieldState& s);
double mean_flow_norm(const FieldState& s);

// CSV time series: t, mu, sup_<component>...
void write_timeseries_csv(std::ostream& os, const ModelSpec& m, const Trajectory& tr);

std::vector<std::string> component_names(const ModelSpec& m);

}  // namespace dynbif
