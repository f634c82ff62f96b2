#include "doctest.h"

#include "dynbif/derivation.hpp"

#include <cmath>
#include <string>

using namespace dynbif;

TEST_SUITE("derivation")
{
    TEST_CASE("symbolic polynomials")
    {
        const Poly a = Poly::amplitude(0), ac = Poly::amplitude(0, true);
        const Poly p = a * a * ac;
        CHECK(p.amplitude_degree() == 3);
        CHECK(p.str() == "A^2*conj(A)");
        CHECK((p - p).is_zero());
        CHECK(p.conj() == a * ac * ac);
        CHECK((a * Poly::mu()).dx() == Poly::amplitude(0, false, 1) * Poly::mu());
    }

    TEST_CASE("Swift-Hohenberg Ginzburg-Landau coefficients and report")
    {
        const DerivationResult r = derive(ModelSpec::m1());
        CHECK(r.coefficients.diffusion[0] == Exact(4));
        CHECK(r.coefficients.mu_linear[0] == Exact(1));
        CHECK(r.coefficients.cubic_self[0] == Exact(-3));
        CHECK(r.report.find("Dt[A] = (4) dxbar^2 A + (1) mubar A + (-3) A|A|^2") != std::string::npos);
        CHECK(r.report.find("resonant projection [A]: (-3)*A^2*conj(A) + A*mubar + (4)*dxbar^2 A + -Dt[A]") !=
              std::string::npos);
        for (const VecField& f : r.series.orders) CHECK(reality_closed(f));
    }

    TEST_CASE("harmonic order does not change the result")
    {
        DerivationOptions rev;
        rev.reverse_harmonic_order = true;
        for (const ModelSpec& m : {ModelSpec::m1(), ModelSpec::m2(), ModelSpec::m3()}) {
            const auto a = derive(m).coefficients, b = derive(m, rev).coefficients;
            CHECK(a.diffusion == b.diffusion);
            CHECK(a.cubic_self == b.cubic_self);
            CHECK(a.cubic_cross == b.cubic_cross);
        }
    }

    TEST_CASE("Brusselator coefficients at a = 1")
    {
        const DerivationResult r = derive(ModelSpec::m2());
        CHECK(r.coefficients.diffusion[0].str() == "(3/4) + (-1/4)i");
        CHECK(r.coefficients.mu_linear[0] == Exact(1));
        CHECK(r.coefficients.cubic_self[0].str() == "(-3/2) + (-1/6)i");
        const BrusselatorCoefficients ref = brusselator_reference({1, 1, 0.5});
        CHECK(std::abs(r.coefficients.cubic_self[0].to_complex() + ref.c3) < 1e-14);
    }

    TEST_CASE("null vectors of the Brusselator Hopf harmonic")
    {
        const HarmonicProblem p = make_problem(ModelSpec::m2({2, 1, 0.5}));
        const ExactMatrix H = harmonic_matrix(p, {0, 1});
        const auto phi = right_null_vector(H);
        const auto psi = left_null_vector(H, phi);
        for (std::size_t i = 0; i < H.size(); ++i) {
            Exact row(0), col(0);
            for (std::size_t j = 0; j < H.size(); ++j) {
                row += H[i][j] * phi[j];
                col += psi[j] * H[j][i];
            }
            CHECK(row.is_zero());
            CHECK(col.is_zero());
        }
        Exact norm(0);
        for (std::size_t j = 0; j < phi.size(); ++j) norm += psi[j] * phi[j];
        CHECK(norm == Exact(1));
    }

    TEST_CASE("coupled system: group velocities and constants")
    {
        const DerivationResult r = derive(ModelSpec::m3());
        REQUIRE(r.coefficients.advection.size() == 2);
        CHECK(r.coefficients.advection[0] == Exact(1));
        CHECK(r.coefficients.advection[1] == Exact(-1));
        CHECK(r.coefficients.cubic_self[0] == r.coefficients.cubic_self[1].conj());
        bool saw_v2 = false;
        for (const auto& c : r.constants)
            if (c.name == "v2") {
                saw_v2 = true;
                CHECK(c.value.str() == "(2/9)i");
            }
        CHECK(saw_v2);
    }

    TEST_CASE("Kolmogorov hierarchy gives the Cahn-Hilliard coefficients")
    {
        const DerivationResult r = derive(ModelSpec::m4());
        CHECK(r.coefficients.ch_fourth == Exact(-3));
        CHECK(r.coefficients.ch_second == -Exact::sqrt2());
        CHECK(r.coefficients.ch_cubic == Exact::ratio(2, 3));
        CHECK_THROWS_AS(derive_m4_hierarchy(2), DerivationError);
        CHECK_THROWS_AS(make_problem(ModelSpec::m4()), DerivationError);
    }
}
