#include "doctest.h"

#include "dynbif/opexpand.hpp"

#include <cmath>

using namespace dynbif;

namespace {

std::string grade(const OperatorSpec& s, int l, int comp)
{
    return format_words(expand_operator(s).words(l, comp), s.n, s.p);
}

}  // namespace

TEST_SUITE("opexpand")
{
    TEST_CASE("Swift-Hohenberg grades")
    {
        const OperatorSpec sh = swift_hohenberg_operator();
        CHECK(grade(sh, 0, 0) == "-(1 + 2 dx^2 + dx^4)");
        CHECK(grade(sh, 1, 0) == "-4 dx dxbar (1 + dx^2)");
        CHECK(grade(sh, 2, 0) == "-2 dxbar^2 (1 + 3 dx^2)");
        CHECK(grade(sh, 3, 0) == "-4 dx dxbar^3");
        CHECK(grade(sh, 4, 0) == "-dxbar^4");
        CHECK(expand_operator(sh).nonempty_grades() == 5);
    }

    TEST_CASE("Kolmogorov family grades")
    {
        const OperatorSpec k = kolmogorov_operator_family();
        CHECK(grade(k, 0, 0) == "dy^2 + (-sqrt2) siny dx + dx^2");
        CHECK(grade(k, 1, 0) == "(-sqrt2) siny dxbar + 2 dx dxbar");
        CHECK(grade(k, 2, 0) == "dxbar^2");
        CHECK(grade(k, 0, 1) == "dx");
        CHECK(grade(k, 1, 1) == "dxbar");
        CHECK(grade(k, 0, 2) == "dy");
        CHECK(expand_operator(k).words(1, 2).empty());
    }

    TEST_CASE("Laplacian with one unbounded direction")
    {
        const OperatorSpec l = laplacian_operator(2, 1);
        CHECK(grade(l, 0, 0) == "dy^2 + dx^2");
        CHECK(grade(l, 1, 0) == "2 dx dxbar");
        CHECK(grade(l, 2, 0) == "dxbar^2");
    }

    TEST_CASE("normalization merges equal words and drops zeros")
    {
        std::vector<DerivativeWord> w = {{{1}, {1}, CoefficientTag::Constant, Exact(2)},
                                         {{1}, {1}, CoefficientTag::Constant, Exact(-2)},
                                         {{2}, {0}, CoefficientTag::Constant, Exact(1)},
                                         {{2}, {0}, CoefficientTag::Constant, Exact(1)}};
        normalize_words(w);
        REQUIRE(w.size() == 1);
        CHECK(w[0].coefficient == Exact(2));
    }

    TEST_CASE("grade sum over r powers recovers the substituted operator")
    {
        const OperatorSpec sh = swift_hohenberg_operator();
        TestField f(1, 1);
        f.add({1.0, {{{1.0, 0.3}, {0, 1}}}, {{{0.5, 0.0, 1.0}, {0.2, 0}}}});
        for (double r : {0.1, 0.5}) {
            const SubstitutionReport rep = substitution_check(sh, 0, f, r);
            CHECK(rep.max_abs_value > 0.1);
            CHECK(rep.max_abs_error < 1e-12 * std::max(1.0, rep.max_abs_value));
        }
    }

    TEST_CASE("restricted test field composes the slow argument")
    {
        TestField f(1, 1);
        f.add({1.0, {{{0.0, 1.0}, 0.0}}, {{{1.0}, {0, 1}}}});
        const TestField g = f.restricted(0.25);
        const double x = 0.7;
        const auto direct = f.derivative({0}, {0}, {x}, {0.25 * x});
        const auto composed = g.derivative({0}, {0}, {x}, {0.0});
        CHECK(std::abs(direct - composed) < 1e-14);
    }

    TEST_CASE("invalid operators are rejected")
    {
        OperatorSpec s;
        s.n = 1;
        s.p = 2;
        CHECK_THROWS(s.validate());
    }
}
