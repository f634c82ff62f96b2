#pragma once

// Non-autonomous modulation equations in blown-up coordinates, per chart or
// with frozen coefficients. All steppers share one integrating-factor RK4
// (Lawson) scheme whose per-mode linear factor exp(Lambda_k(t)) is evaluated
// from the closed-form integrals of bar_mu and -r'/r along the chart flow.

#include "dynbif/derivation.hpp"
#include "dynbif/dump.hpp"
#include "dynbif/fft.hpp"
#include "dynbif/geometry.hpp"
#include "dynbif/physical.hpp"

#include <complex>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace dynbif {

struct ModulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time-dependent coefficients along a chart trajectory, or constants when frozen.
struct CoefficientTrack {
    bool frozen = true;
    double frozen_bar_mu = 1.0;
    double frozen_dilation = 0.0;  // -r'/r
    SlowTrajectory traj;

    static CoefficientTrack constant(double bar_mu, double dilation = 0.0);
    static CoefficientTrack chart(const SlowTrajectory& t);

    double bar_mu(double t) const;
    double bar_mu_integral(double t) const;
    double dilation(double t) const;
    double dilation_integral(double t) const;
    // bar_mu - r^-1 r' (the GL linear drift with unit mu coefficient).
    double linear_drift(double t) const;
    // r(t) along the chart (frozen: the chart point's r).
    double radius(double t) const;
    // Largest admissible time (K1: 99% of the eps1 blow-up time).
    double validity_end() const;
    std::string label() const;
};

// Numeric right-hand-side coefficients (signs as in ModulationCoefficients).
struct EnvelopeCoefficients {
    std::vector<std::complex<double>> diffusion{4.0};
    std::vector<double> mu_linear{1.0};
    std::vector<double> advection{0.0};
    std::vector<std::complex<double>> cubic_self{-3.0};
    std::vector<std::complex<double>> cubic_cross{0.0};
    double ch_fourth = -3;
    double ch_second = -1.4142135623730951;
    double ch_cubic = 2.0 / 3.0;

    static EnvelopeCoefficients from(const ModulationCoefficients& c);
    // Derived coefficients of the model (runs the exact derivation).
    static EnvelopeCoefficients for_model(const ModelSpec& m);
};

enum class Frame { Lab, CoMoving };

struct ModulationState {
    ModelId model = ModelId::M1;
    Grid grid;                           // periodic grid in xbar (ny > 0: M2 in 2-D)
    std::vector<cvec> amplitudes;        // physical values, one field per amplitude
    CoefficientTrack track;
    double tbar = 0;                     // chart time since the track origin
    Frame frame = Frame::Lab;            // M3 only
    double shift = 0;                    // M3 co-moving: accumulated advection distance

    static ModulationState zeros(ModelId m, const Grid& g, const CoefficientTrack& track);
    double sup_norm() const;
    // Integral of the first amplitude over the box (real part for M4).
    std::complex<double> mass() const;
};

struct ModulationConfig {
    double dt = 0.01;
    bool dealias = true;
    bool nonlinear = true;
    double blowup_threshold = 1e6;
};

// Persistent stepper (FFT plans and symbols kept between steps).
class ModulationSolver {
public:
    ModulationSolver(const ModulationState& s, const EnvelopeCoefficients& c, const ModulationConfig& cfg);
    ~ModulationSolver();
    ModulationSolver(const ModulationSolver&) = delete;
    ModulationSolver& operator=(const ModulationSolver&) = delete;

    void step();
    void advance(long steps);
    ModulationState state() const;
    double tbar() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Single-step entry points.
ModulationState step_gl_real(const ModulationState& s, double dt);
ModulationState step_gl_complex(const ModulationState& s, double dt, std::complex<double> c1, double c2,
                                std::complex<double> c3);
ModulationState step_gl_coupled(const ModulationState& s, double dt, std::complex<double> gamma1,
                                std::complex<double> gamma2);
ModulationState step_ch(const ModulationState& s, double dt);

// Lab-frame amplitudes of an M3 state (co-moving fields shifted back).
std::vector<cvec> lab_amplitudes(const ModulationState& s);

// Hand a K2 state at mu2 >= 0 over to K3 via kappa32: amplitudes scale by
// r2/r3, the box by r3/r2, and the chart clock restarts at 0.
ModulationState handoff_k2_to_k3(const ModulationState& s);

// Chart time t3 at which the K3 clock has covered `original` units of t.
double k3_time_for_original(const SlowTrajectory& traj, double original);

struct ModulationTrajectory {
    std::vector<ModulationState> records;
};

ModulationTrajectory evolve(const ModulationState& s, const EnvelopeCoefficients& c, const ModulationConfig& cfg,
                            double t_end, int record_stride);

// CSV columns: t, mass, sup, drift.
void write_modulation_csv(std::ostream& os, const ModulationTrajectory& tr);

FieldDump to_dump(const ModulationState& s);

}  // namespace dynbif
