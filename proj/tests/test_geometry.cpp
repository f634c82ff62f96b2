#include "doctest.h"

#include "dynbif/geometry.hpp"
#include "dynbif/rng.hpp"

#include <cmath>

using namespace dynbif;

TEST_SUITE("geometry")
{
    TEST_CASE("blow-up map round-trips through the parameter plane")
    {
        CounterRng rng(5, 0);
        for (int k = 0; k < 200; ++k) {
            const double beta = k % 2 ? 2.0 : 4.0;
            const double mu = -1 + 2 * rng.uniform();
            const double eps = 1e-3 + rng.uniform();
            const BlowUpPoint p = params_to_blowup(mu, eps, beta);
            CHECK(std::abs(std::hypot(p.bar_mu, p.bar_eps) - 1) < 1e-12);
            const SlowParams q = blowup_to_params(p);
            CHECK(std::abs(q.mu - mu) < 1e-12);
            CHECK(std::abs(q.eps - eps) < 1e-12 * std::max(1.0, eps));
        }
    }

    TEST_CASE("chart coordinates reproduce the global point")
    {
        const BlowUpPoint p = params_to_blowup(-0.04, 1e-3, 2);
        for (ChartId c : {ChartId::K1, ChartId::K2}) {
            const ChartTransition t = chart_from_global(p, c);
            const SlowParams q = chart_to_params(t.point);
            CHECK(std::abs(q.mu + 0.04) < 1e-14);
            CHECK(std::abs(q.eps - 1e-3) < 1e-15);
        }
    }

    TEST_CASE("kappa maps invert each other")
    {
        const ChartPoint k2{ChartId::K2, 0.3, -2.0, 2};
        const ChartPoint back = kappa21(kappa12(k2).point).point;
        CHECK(back.chart == ChartId::K2);
        CHECK(std::abs(back.r - k2.r) < 1e-14);
        CHECK(std::abs(back.slow - k2.slow) < 1e-13);
        const ChartTransition t = kappa12(k2);
        CHECK(std::abs(t.psi_scale * kappa21(t.point).psi_scale - 1) < 1e-14);

        const ChartPoint k3{ChartId::K3, 0.4, 0.5, 4};
        const ChartPoint back3 = kappa32(kappa23(k3).point).point;
        CHECK(std::abs(back3.r - k3.r) < 1e-14);
        CHECK(std::abs(back3.slow - k3.slow) < 1e-13);
    }

    TEST_CASE("kappa domains are enforced")
    {
        CHECK_THROWS_AS(kappa12({ChartId::K2, 0.3, 1.0, 2}), GeometryError);
        CHECK_THROWS_AS(kappa23({ChartId::K3, 0.3, -1.0, 2}), GeometryError);
        CHECK_THROWS_AS(params_to_blowup(0, 0, 2), GeometryError);
        CHECK_THROWS_AS(params_to_blowup(0.1, -1, 2), GeometryError);
    }

    TEST_CASE("slow flow right-hand side matches the closed form derivative")
    {
        for (ChartId c : {ChartId::K1, ChartId::K2, ChartId::K3}) {
            const SlowTrajectory tr{c, {c, 0.3, 0.2, 2}, 2};
            const double t = 0.7, h = 1e-5;
            const ChartPoint p = slow_flow_eval(tr, t);
            const ChartPoint pp = slow_flow_eval(tr, t + h), pm = slow_flow_eval(tr, t - h);
            const SlowRate f = slow_flow_rhs(p);
            CHECK(std::abs((pp.r - pm.r) / (2 * h) - f.dr) < 1e-8);
            CHECK(std::abs((pp.slow - pm.slow) / (2 * h) - f.dslow) < 1e-8);
        }
    }

    TEST_CASE("K1 blows up in finite time only for positive eps1")
    {
        const SlowTrajectory up{ChartId::K1, {ChartId::K1, 0.2, 0.05, 4}, 4};
        CHECK(std::abs(k1_blowup_time(up) - 1 / (3 * 0.05)) < 1e-12);
        const SlowTrajectory flat{ChartId::K1, {ChartId::K1, 0.2, 0.0, 4}, 4};
        CHECK(std::isinf(k1_blowup_time(flat)));
    }

    TEST_CASE("dilation integral is ln r(0)/r(t)")
    {
        const SlowTrajectory tr{ChartId::K3, {ChartId::K3, 0.5, 0.3, 2}, 2};
        const double t = 2.0;
        CHECK(std::abs(chart_dilation_integral(tr, t) - std::log(0.5 / slow_flow_eval(tr, t).r)) < 1e-13);
    }

    TEST_CASE("preferred chart follows the thresholds")
    {
        CHECK(preferred_chart(-0.1, 1e-6, 2) == ChartId::K1);
        CHECK(preferred_chart(0.0, 1e-3, 2) == ChartId::K2);
        CHECK(preferred_chart(0.1, 1e-6, 2) == ChartId::K3);
    }
}
