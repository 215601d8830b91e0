#include <cmath>
#include <limits>

#include "doctest.h"
#include "smoothsat/analysis.hpp"
#include "smoothsat/errors.hpp"

using namespace smoothsat;
using namespace smoothsat::analysis;

TEST_CASE("closed form at gamma = 1 and gamma = 2")
{
    const auto p1 = closed_form(1.0);
    CHECK(p1.alpha == doctest::Approx(std::cbrt(64.0 / 9.0)).epsilon(1e-12));
    CHECK(p1.alpha == doctest::Approx(1.922999427076544).epsilon(1e-12));
    CHECK(p1.beta == doctest::Approx(0.9615).epsilon(1e-4));
    CHECK(p1.delta == doctest::Approx(1.4422).epsilon(1e-4));
    CHECK(p1.alpha == doctest::Approx(2 * p1.beta).epsilon(1e-14));

    const auto p2 = closed_form(2.0);
    CHECK(p2.alpha == doctest::Approx(1.386722548701269).epsilon(1e-12));
    CHECK(p2.alpha == doctest::Approx(2 * p2.beta).epsilon(1e-14));
    CHECK(p2.alpha < p1.alpha);
}

TEST_CASE("the closed form is a balance point of search and linear algebra")
{
    for (double g : {0.5, 1.0, 1.5, 2.0, 3.0, 8.0}) {
        const auto p = closed_form(g);
        CHECK(p.epsilon == doctest::Approx(tight_epsilon(p.beta, p.delta)).epsilon(1e-9));
        CHECK(search_exponent(g, p.beta, p.epsilon) == doctest::Approx(2 * p.beta).epsilon(1e-9));
    }
}

TEST_CASE("numeric optimum matches the closed form for gamma >= 1")
{
    for (double g : {1.0, 1.5, 2.0, 3.0}) {
        const auto c = closed_form(g);
        const auto n = numeric_optimum(g, 2.0);
        CHECK(std::abs(n.alpha - c.alpha) < 1e-4);
        CHECK(std::abs(n.beta - c.beta) < 1e-3);
    }
    // Below gamma = 1 the minimax optimum is strictly better than the balance point.
    const auto c = closed_form(0.5);
    const auto n = numeric_optimum(0.5, 2.0);
    CHECK(n.alpha <= c.alpha + 1e-9);
    CHECK(runtime_exponent(0.5, 2.0, c.beta, c.delta) == doctest::Approx(c.alpha).epsilon(1e-9));
}

TEST_CASE("numeric optimum with a heavier linear-algebra step")
{
    CHECK(numeric_optimum(1.0, 2.5).alpha == doctest::Approx(1.976).epsilon(0.002 / 1.976));
    CHECK(numeric_optimum(2.0, 2.5).alpha == doctest::Approx(1.456).epsilon(0.002 / 1.456));
}

TEST_CASE("gamma curve")
{
    const auto curve = gamma_curve(1.0, 4.0, 31, 2.0);
    REQUIRE(curve.size() == 31);
    CHECK(curve.front().gamma == doctest::Approx(1.0));
    CHECK(curve.back().gamma == doctest::Approx(4.0));
    CHECK(curve.front().alpha == doctest::Approx(closed_form(1.0).alpha).epsilon(1e-4));
    int annotated = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        annotated += curve[i].annotated;
        if (i) CHECK(curve[i].alpha < curve[i - 1].alpha);
    }
    CHECK(annotated == 2);
    CHECK(gamma_curve(1.0, 2.0, 2, 2.0).size() == 2);
    CHECK_THROWS_AS(gamma_curve(1.0, 2.0, 1, 2.0), InvalidParameter);
    const auto csv = curve_csv(gamma_curve(1.0, 2.0, 2, 2.0));
    CHECK(csv.rfind("gamma,alpha", 0) == 0);
}

TEST_CASE("constraint checks")
{
    const auto r1 = check_constraints(closed_form(1.0));
    CHECK(r1.ok());
    CHECK(r1.six_beta_over_delta == doctest::Approx(4.0).epsilon(1e-12));
    const auto r2 = check_constraints(closed_form(2.0));
    CHECK(r2.ok());
    CHECK(r2.six_beta_over_delta == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r2.smoothness_exponent == doctest::Approx(closed_form(2.0).beta - 2 * closed_form(2.0).epsilon));

    auto broken = closed_form(1.0);
    broken.delta *= 2;
    CHECK_FALSE(check_constraints(broken).ok());
}

TEST_CASE("quadratic roots")
{
    for (double g : {0.5, 1.0, 2.0, 5.0}) {
        const auto p = closed_form(g);
        CHECK(discarded_beta_root(g, p.delta) < 0);
        CHECK(balanced_beta(g, p.delta) == doctest::Approx(p.beta).epsilon(1e-12));
    }
}

TEST_CASE("tight epsilon degenerates to infinity")
{
    CHECK(std::isinf(tight_epsilon(0.1, 1.0)));
    CHECK(std::isfinite(tight_epsilon(1.0, 1.0)));
}

TEST_CASE("invalid gamma")
{
    CHECK_THROWS_AS(closed_form(0.0), InvalidParameter);
    CHECK_THROWS_AS(closed_form(-1.0), InvalidParameter);
    CHECK_THROWS_AS(numeric_optimum(0.0, 2.0), InvalidParameter);
    CHECK_THROWS_AS(closed_form(std::numeric_limits<double>::quiet_NaN()), InvalidParameter);
}
