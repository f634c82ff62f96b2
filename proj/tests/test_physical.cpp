#include "doctest.h"

#include "dynbif/physical.hpp"
#include "dynbif/validate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace dynbif;

TEST_SUITE("physical")
{
    TEST_CASE("a single Swift-Hohenberg mode follows the linear symbol")
    {
        const ModelSpec m = ModelSpec::m1();
        const Grid g = Grid::line(64, 32 * std::numbers::pi);
        FieldState s = FieldState::zeros(m, g);
        const double k = 2 * std::numbers::pi * 15 / g.length;
        for (int i = 0; i < g.nx; ++i) s.components[0][static_cast<std::size_t>(i)] = 1e-8 * std::cos(k * g.x(i));
        s.mu = 0.05;
        SolverConfig cfg = default_config(m);
        cfg.dt = 0.05;
        Solver solver(m, s, cfg);
        solver.advance(100);
        const double expected = 1e-8 * std::exp((0.05 - std::pow(1 - k * k, 2)) * 5.0);
        CHECK(sup_norm(solver.state().components[0]) == doctest::Approx(expected).epsilon(1e-9));
    }

    TEST_CASE("ETDRK4 and IMEX-BDF2 agree on a smooth nonlinear run")
    {
        const ModelSpec m = ModelSpec::m1();
        const Grid g = Grid::line(64, 32 * std::numbers::pi);
        FieldState s = random_band_state(m, g, 0.1, 0.25, 4, 0);
        s.mu = 0.1;
        SolverConfig a = default_config(m), b = default_config(m);
        a.dt = b.dt = 0.005;
        b.scheme = Scheme::IMEXBDF2;
        const auto ta = simulate(m, s, 2.0, a), tb = simulate(m, s, 2.0, b);
        double diff = 0;
        for (std::size_t i = 0; i < ta.records.back().components[0].size(); ++i)
            diff = std::max(diff, std::abs(ta.records.back().components[0][i] - tb.records.back().components[0][i]));
        CHECK(diff < 1e-5);
    }

    TEST_CASE("mu drifts linearly and records land on t_end")
    {
        const ModelSpec m = ModelSpec::m3();
        FieldState s = FieldState::zeros(m, Grid::line(32, 32 * std::numbers::pi));
        s.mu = -0.1;
        s.eps = 0.01;
        SolverConfig cfg = default_config(m);
        cfg.dt = 0.1;
        cfg.record_stride = 5;
        const Trajectory tr = simulate(m, s, 3.0, cfg);
        CHECK(tr.records.front().time == 0);
        CHECK(tr.records.back().time == doctest::Approx(3.0));
        CHECK(tr.records.back().mu == doctest::Approx(-0.1 + 0.03));
    }

    TEST_CASE("reset restarts the solver deterministically")
    {
        const ModelSpec m = ModelSpec::m2();
        const Grid g = Grid::line(32, 32 * std::numbers::pi);
        FieldState s = random_band_state(m, g, 0.01, 0.25, 9, 0);
        s.mu = 0.02;
        Solver solver(m, s, default_config(m));
        solver.advance(10);
        const FieldState first = solver.state();
        solver.reset(s);
        CHECK(solver.steps_taken() == 0);
        solver.advance(10);
        CHECK(solver.state().components == first.components);
        CHECK_THROWS(solver.reset(FieldState::zeros(m, Grid::line(16, 1.0))));
    }

    TEST_CASE("Kolmogorov runs stay divergence free without mean flow")
    {
        const ModelSpec m = ModelSpec::m4();
        const Grid g = default_grid(m);
        FieldState s = random_band_state(m, g, 0.05, 0.05, 2, 0);
        s.mu = 0.01;
        Solver solver(m, s, default_config(m));
        solver.advance(20);
        CHECK(divergence_norm(solver.state()) < 1e-12);
        CHECK(mean_flow_norm(solver.state()) < 1e-12);
        CHECK_THROWS(Solver(m, FieldState::zeros(m, Grid::line(16, 1.0)), default_config(m)));
    }

    TEST_CASE("linear growth probe recovers the M1 rate")
    {
        const GrowthProbe p = linear_growth_probe(ModelSpec::m1(), 1.0, 0.05);
        CHECK(p.rate == doctest::Approx(0.05).epsilon(1e-6));
    }

    TEST_CASE("scheme names round-trip and timeseries has a header")
    {
        CHECK(scheme_from_name(scheme_name(Scheme::IMEXBDF2)) == Scheme::IMEXBDF2);
        CHECK_THROWS(scheme_from_name("euler"));
        std::ostringstream os;
        Trajectory tr;
        tr.records.push_back(FieldState::zeros(ModelSpec::m2(), Grid::line(16, 1.0)));
        write_timeseries_csv(os, ModelSpec::m2(), tr);
        CHECK(os.str().rfind("t,mu,", 0) == 0);
    }
}
