#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "suppflow/functionals.hpp"

using namespace suppflow;
namespace {
constexpr double kPi = std::numbers::pi;

GridPtr circle(int m = 256) { return build_grid(1, m, GridKind::Circle); }
GridPtr axi(int m = 256) { return build_grid(2, m, GridKind::Axisymmetric); }

ConvexBodyState ellipse_body(double a, double b, int m = 256) {
    BodyRecipe r;
    r.kind = BodyKind::Ellipse;
    r.semi_axis_a = a;
    r.semi_axis_b = b;
    return realize(r, circle(m));
}
}  // namespace

TEST_CASE("modified quermassintegral on balls") {
    auto b1 = realize(ball_recipe(1.0), axi());
    CHECK(modified_quermassintegral(b1, sigma_k_root(1, 2)) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(modified_quermassintegral(b1, gauss_curvature(2)) ==
          doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-10));
    auto b3 = realize(ball_recipe(3.0), axi());
    CHECK(modified_quermassintegral(b3, sigma_k_root(1, 2)) ==
          doctest::Approx(2.0 * kPi * 9.0).epsilon(1e-10));
    CHECK_THROWS_AS(modified_quermassintegral(b1, sigma_quotient(2, 1, 2)),
                    std::invalid_argument);
}

TEST_CASE("u potential closed forms") {
    auto b1 = realize(ball_recipe(1.0), circle());
    // phi = f s^{p-1} with p = 1/2, k = 1, beta = 1/2 gives phi^{-k/beta} = s
    ForcingSpec half;
    half.kind = ForcingKind::NuU;
    half.p = 0.5;
    CHECK(u_potential(b1, half, 0.5, 1, 1e-6) ==
          doctest::Approx(kPi).epsilon(1e-10));
    CHECK(u_potential(b1, half, 0.5, 1, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

    // phi independent of s: phi^{-k/beta} = 1
    ForcingSpec flat;
    flat.kind = ForcingKind::NuU;
    flat.p = 1.0;
    auto b2 = realize(ball_recipe(2.0), circle());
    CHECK(u_potential(b2, flat, 0.5, 1, 1.0) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-10));

    CHECK_THROWS_AS(u_potential(b1, power_forcing(1.0, 0.0, 0.0), 0.5, 1, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(u_potential(b1, half, 0.5, 1, 2.0), std::invalid_argument);
}

TEST_CASE("u potential shifts by a body-independent constant in eps") {
    ForcingSpec half;
    half.kind = ForcingKind::NuU;
    half.p = 0.5;
    auto bA = realize(ball_recipe(1.3), circle());
    auto bB = ellipse_body(1.6, 1.1);
    double dA = u_potential(bA, half, 0.5, 1, 0.2) - u_potential(bA, half, 0.5, 1, 0.4);
    double dB = u_potential(bB, half, 0.5, 1, 0.2) - u_potential(bB, half, 0.5, 1, 0.4);
    CHECK(dA == doctest::Approx(dB).epsilon(1e-9));
}

TEST_CASE("v potential closed forms and pullback consistency") {
    ForcingSpec comp;  // g = 1, delta = 0: phi_hat^{n/beta} = 1
    comp.kind = ForcingKind::Composite;
    comp.delta = 0.0;
    auto b2 = realize(ball_recipe(2.0), circle());
    CHECK(v_potential(b2, comp, 0.5, 1e-6) ==
          doctest::Approx(0.5 * 4.0 * 2.0 * kPi).epsilon(1e-8));  // R^2 |S^1| / 2
    auto b1 = realize(ball_recipe(1.0), circle());
    CHECK(v_potential(b1, comp, 0.5, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(v_potential(b1, power_forcing(1.0, 0.0, 0.0), 0.5, 0.5),
                    std::invalid_argument);
}

TEST_CASE("orlicz combination closed forms") {
    auto g = circle(64);
    ScalarField uK(g, 1.0), uL(g, 2.0);
    ScalarField lam = orlicz_combination(uK, uL, 1.0, orlicz_power(2), orlicz_power(2));
    CHECK(lam.min() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-11));
    CHECK(lam.max() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-11));

    ScalarField lam0 = orlicz_combination(uK, uL, 0.0, orlicz_power(2), orlicz_power(2));
    CHECK(lam0.max() == doctest::Approx(1.0).epsilon(1e-14));

    ScalarField lin = orlicz_combination(uK, uL, 0.5, orlicz_linear(), orlicz_linear());
    CHECK(lin.min() == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(lin.max() == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("orlicz mixed quermassintegral on balls") {
    auto bK = realize(ball_recipe(1.0), axi());
    auto bL = realize(ball_recipe(2.0), axi());
    auto spec = sigma_k_root(1, 2);
    CHECK(orlicz_mixed_quermassintegral(bK, bK, spec, orlicz_linear(), orlicz_linear()) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-10));
    CHECK(orlicz_mixed_quermassintegral(bK, bL, spec, orlicz_linear(), orlicz_linear()) ==
          doctest::Approx(8.0 * kPi).epsilon(1e-10));
    CHECK(orlicz_mixed_quermassintegral(bK, bL, spec, orlicz_linear(), orlicz_power(2)) ==
          doctest::Approx(16.0 * kPi).epsilon(1e-10));
}

TEST_CASE("variational check on the ball family") {
    auto bK = realize(ball_recipe(1.0), axi());
    auto bL = realize(ball_recipe(2.0), axi());
    auto rep = variational_check(bK, bL, sigma_k_root(1, 2), orlicz_linear(),
                                 orlicz_linear(), {1e-2, 5e-3, 2.5e-3});
    CHECK(rep.failures.empty());
    CHECK(rep.integral == doctest::Approx(8.0 * kPi).epsilon(1e-8));
    // combination is the ball of radius 1 + 2 eps: quotient = 8 pi (1 + eps)
    CHECK(rep.quotients.back() == doctest::Approx(8.0 * kPi).epsilon(4e-3));
    CHECK(rep.extrapolated == doctest::Approx(8.0 * kPi).epsilon(1e-6));
    CHECK(rep.order == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("dual volumes") {
    auto b2 = realize(ball_recipe(2.0), circle());
    CHECK(dual_volume(b2, 2.0) == doctest::Approx(kPi * 4.0).epsilon(1e-10));
    auto b1 = realize(ball_recipe(1.0), circle());
    CHECK(dual_volume(b1, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    auto a2 = realize(ball_recipe(2.0), axi());
    CHECK(dual_volume(a2, 3.0) == doctest::Approx(8.0 * 4.0 * kPi / 3.0).epsilon(1e-10));
    // disc area of an ellipse: pi a b
    CHECK(dual_volume(ellipse_body(2.0, 1.0), 2.0) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-6));
}

TEST_CASE("dual volume homogeneity") {
    for (double c : {0.5, 2.0})
        for (double q : {-1.0, 2.0, 3.5}) {
            auto b = realize(ball_recipe(1.3), circle());
            auto bc = realize(ball_recipe(1.3 * c), circle());
            CHECK(dual_volume(bc, q) ==
                  doctest::Approx(std::pow(c, q) * dual_volume(b, q)).epsilon(1e-10));
        }
}

TEST_CASE("lp dual mixed volume on balls") {
    auto bK = realize(ball_recipe(1.5), circle());
    CHECK(lp_dual_mixed_volume(bK, bK, 2.0, 3.0) ==
          doctest::Approx(std::pow(1.5, 3.0) * 2.0 * kPi).epsilon(1e-10));
    auto b1 = realize(ball_recipe(1.0), circle());
    auto b2 = realize(ball_recipe(2.0), circle());
    CHECK(lp_dual_mixed_volume(b1, b2, 2.0, 2.0) ==
          doctest::Approx(8.0 * kPi).epsilon(1e-10));
    // p = 0, q = n+1 reduces to (n+1) times the volume
    CHECK(lp_dual_mixed_volume(b2, b1, 0.0, 2.0) ==
          doctest::Approx(2.0 * dual_volume(b2, 2.0)).epsilon(1e-10));
}

TEST_CASE("surface measure density") {
    auto b1 = realize(ball_recipe(1.0), axi());
    ScalarField d = surface_measure_density(b1, sigma_k_root(1, 2), orlicz_linear());
    CHECK(d.min() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.max() == doctest::Approx(1.0).epsilon(1e-12));

    auto bR = realize(ball_recipe(1.7), axi());
    ScalarField dp = surface_measure_density(bR, sigma_k_root(1, 2), orlicz_power(3));
    double ref = 1.7 * std::pow(1.7, -3.0) * 1.7;  // u phi(1/u) F^k
    CHECK(dp.min() == doctest::Approx(ref).epsilon(1e-10));

    // integrating u'' + u over the circle gives the curve length 4 a E(e)
    auto e = ellipse_body(2.0, 1.0);
    ScalarField de = surface_measure_density(e, sigma_k_root(1, 1), orlicz_linear());
    CHECK(integrate(de) == doctest::Approx(9.688448220547675).epsilon(1e-5));
}

TEST_CASE("inequality margins on balls") {
    auto bK = realize(ball_recipe(1.0), axi());
    auto bL = realize(ball_recipe(2.0), axi());
    auto spec = sigma_k_root(1, 2);

    auto eq = lp_mixed_margin(bK, bK, spec, 3.0);
    CHECK(eq.pass);
    CHECK(std::abs(eq.margin) < 1e-8);
    CHECK(lp_mixed_margin(bK, bL, spec, 3.0).pass);
    CHECK_THROWS_AS(lp_mixed_margin(bK, bL, spec, 1.5), std::invalid_argument);

    auto ball_eq = power_integral_margin(bK, spec, 3.0);
    CHECK(ball_eq.pass);
    CHECK(std::abs(ball_eq.margin) < 1e-8);
    CHECK(power_integral_margin(bL, spec, 3.0).pass);
    CHECK_THROWS_AS(power_integral_margin(bK, spec, 1.5), std::invalid_argument);

    CHECK(dual_mixed_margin(bK, bL, 3.0, 2.0).pass);
    CHECK_THROWS_AS(dual_mixed_margin(bK, bL, 2.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(dual_mixed_margin(bK, bL, 3.0, 0.0), std::invalid_argument);

    auto m68 = lp_minkowski_margin(bK, bL, 2.0 + 2.0);  // p = n + 2 on S^2
    CHECK(m68.pass);
    CHECK(m68.margin > 0.0);
    CHECK_THROWS_AS(lp_minkowski_margin(bK, bL, 2.5), std::invalid_argument);
}
