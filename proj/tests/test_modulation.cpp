#include "doctest.h"

#include "dynbif/modulation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dynbif;

namespace {

ModulationState homogeneous(ModelId id, std::complex<double> a, const CoefficientTrack& track)
{
    ModulationState s = ModulationState::zeros(id, Grid::line(16, 8 * std::numbers::pi), track);
    for (auto& f : s.amplitudes)
        for (auto& v : f) v = a;
    return s;
}

}  // namespace

TEST_SUITE("modulation")
{
    TEST_CASE("real GL: homogeneous state relaxes to sqrt(1/3)")
    {
        ModulationConfig cfg;
        cfg.dt = 0.01;
        ModulationSolver s(homogeneous(ModelId::M1, 0.1, CoefficientTrack::constant(1)), EnvelopeCoefficients{}, cfg);
        s.advance(3000);
        CHECK(std::abs(s.state().amplitudes[0][3]) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-8));
    }

    TEST_CASE("homogeneous logistic solution is matched to fourth order in dt")
    {
        // A' = A - 3 A^3 with A(0) = a0 has A^2 = 1 / (3 + (1/a0^2 - 3) e^{-2t}).
        const double a0 = 0.2, t = 1.0;
        const double exact = 1 / std::sqrt(3 + (1 / (a0 * a0) - 3) * std::exp(-2 * t));
        double err[2];
        for (int k = 0; k < 2; ++k) {
            ModulationConfig cfg;
            cfg.dt = k ? 0.05 : 0.1;
            ModulationSolver s(homogeneous(ModelId::M1, a0, CoefficientTrack::constant(1)), EnvelopeCoefficients{}, cfg);
            s.advance(std::lround(t / cfg.dt));
            err[k] = std::abs(s.state().amplitudes[0][0].real() - exact);
        }
        CHECK(std::log2(err[0] / err[1]) > 3.7);
    }

    TEST_CASE("Cahn-Hilliard conserves mass with frozen coefficients")
    {
        ModulationState s = ModulationState::zeros(ModelId::M4, Grid::line(64, 20 * std::numbers::pi),
                                                   CoefficientTrack::constant(1));
        for (int i = 0; i < 64; ++i) s.amplitudes[0][static_cast<std::size_t>(i)] = 0.1 + 0.3 * std::sin(2 * std::numbers::pi * i / 64);
        const double m0 = s.mass().real();
        ModulationConfig cfg;
        cfg.dt = 0.01;
        ModulationSolver solver(s, EnvelopeCoefficients{}, cfg);
        solver.advance(500);
        CHECK(std::abs(solver.state().mass().real() - m0) < 1e-12 * std::abs(m0));
    }

    TEST_CASE("chart tracks: K2 radius fixed, K1 window before blow-up")
    {
        const CoefficientTrack k2 = CoefficientTrack::chart({ChartId::K2, {ChartId::K2, 0.5, -1, 2}, 2});
        CHECK(k2.radius(3.0) == 0.5);
        CHECK(k2.bar_mu(2.0) == doctest::Approx(1.0));
        const CoefficientTrack k1 = CoefficientTrack::chart({ChartId::K1, {ChartId::K1, 0.2, 0.05, 4}, 4});
        CHECK(k1.validity_end() == doctest::Approx(0.99 / 0.15));
        CHECK(k1.bar_mu(0.0) == -1);
    }

    TEST_CASE("handoff scales amplitude and box")
    {
        const CoefficientTrack k2 = CoefficientTrack::chart({ChartId::K2, {ChartId::K2, 0.5, 1.0, 2}, 2});
        const ModulationState s = homogeneous(ModelId::M1, 0.2, k2);
        const ModulationState t = handoff_k2_to_k3(s);
        const double r3 = t.track.radius(0);
        CHECK(std::abs(t.amplitudes[0][0] * r3 - 0.2 * 0.5) < 1e-15);
        CHECK(t.grid.length == doctest::Approx(s.grid.length * r3 / 0.5));
        CHECK(t.tbar == 0);
        const CoefficientTrack negative = CoefficientTrack::chart({ChartId::K2, {ChartId::K2, 0.5, -1.0, 2}, 2});
        CHECK_THROWS(handoff_k2_to_k3(homogeneous(ModelId::M1, 0.2, negative)));
    }

    TEST_CASE("coupled amplitudes are transported in opposite directions")
    {
        ModulationState s = ModulationState::zeros(ModelId::M3, Grid::line(64, 8 * std::numbers::pi), CoefficientTrack::constant(0));
        for (int i = 0; i < 64; ++i) {
            const double x = s.grid.x(i);
            s.amplitudes[0][static_cast<std::size_t>(i)] = 1e-6 * std::cos(x / 4);
            s.amplitudes[1][static_cast<std::size_t>(i)] = 1e-6 * std::cos(x / 4);
        }
        EnvelopeCoefficients c = EnvelopeCoefficients::for_model(ModelSpec::m3());
        for (auto& d : c.diffusion) d = 0;
        ModulationConfig cfg;
        cfg.dt = 0.01;
        cfg.nonlinear = false;
        ModulationSolver solver(s, c, cfg);
        solver.advance(100);
        const auto lab = lab_amplitudes(solver.state());
        // Shifted by +-1 over one unit of time.
        CHECK(std::abs(lab[0][0] - 1e-6 * std::cos(-1.0 / 4)) < 1e-12);
        CHECK(std::abs(lab[1][0] - 1e-6 * std::cos(1.0 / 4)) < 1e-12);
    }

    TEST_CASE("trajectory csv and dump")
    {
        const ModulationState s = homogeneous(ModelId::M1, 0.1, CoefficientTrack::constant(1));
        const ModulationTrajectory tr = evolve(s, EnvelopeCoefficients{}, ModulationConfig{}, 1.0, 50);
        CHECK(tr.records.size() == 3);
        std::ostringstream os;
        write_modulation_csv(os, tr);
        CHECK(os.str().rfind("t,mass,sup,drift\n", 0) == 0);
        const FieldDump d = to_dump(s);
        CHECK(d.model_id == 101);
        CHECK(d.components.size() == 2);
    }
}
