#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "cubicmaps/grid.hpp"
#include "support.hpp"
#include "cubicmaps/prototypes.hpp"

using namespace cubicmaps;
using Catch::Matchers::WithinAbs;

TEST_CASE("mandelbrot membership examples", "[prototypes]") {
    for (complex c : {complex(0), complex(-1), complex(-2), complex(0.25), complex(0, 1), complex(-0.1226, 0.7449)})
        CHECK(mandelbrot_membership(c));
    for (complex c : {complex(0.26), complex(-2.01), complex(1), complex(1, 1), complex(-0.75, 0.2)})
        CHECK_FALSE(mandelbrot_membership(c));
}

TEST_CASE("arch prototype: closed form agrees with iteration", "[prototypes]") {
    const auto [frac, worst] =
        support::grid_disagreement({-2.3, 0.4, -2.2, 2.2}, 256, [](double c, double xhat) { return arch_membership(c, xhat); });
    INFO("disagreement " << frac << ", farthest " << worst << " px from the boundary");
    CHECK(frac <= 0.005);
    CHECK(worst <= 2);
    CHECK(arch_membership(0.0, 1.0).closed_form);
    CHECK_FALSE(arch_membership(0.0, 1.01).dynamic);
    CHECK(arch_membership(-2.0, 2.0).dynamic);
}

TEST_CASE("product prototype: closed form agrees with iteration", "[prototypes]") {
    const auto [frac, worst] =
        support::grid_disagreement({-2.5, 1.0, -2.5, 1.0}, 256, [](double a, double b) { return product_membership(a, b); });
    INFO("disagreement " << frac << ", farthest " << worst << " px from the boundary");
    CHECK(frac <= 0.005);
    CHECK(worst <= 2);
}

TEST_CASE("biquadratic orbits", "[prototypes]") {
    const biquadratic_verdict both = biquadratic_status(-1.0, 0.0);
    CHECK_FALSE(both.orbits[0].escaped);
    CHECK_FALSE(both.orbits[1].escaped);
    const biquadratic_verdict gone = biquadratic_status(1.0, 1.0);
    CHECK(gone.orbits[0].escaped);
    CHECK(gone.orbits[1].escaped);
    // equal parameters reduce to a single quadratic map
    for (double c : {-1.9, -1.3, -0.2, 0.24, 0.3}) {
        const biquadratic_verdict v = biquadratic_status(c, c);
        CHECK(v.orbits[0].escaped == !mandelbrot_membership(c, 4000));
    }
}

TEST_CASE("tricorn real slice is the real Mandelbrot slice", "[prototypes]") {
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const double c = -2.2 + 2.8 * (i + 0.5) / 1000.0;
        if (tricorn_membership(c) != mandelbrot_membership(c, 4000)) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("tricorn has threefold symmetry", "[prototypes]") {
    const complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int agree = 0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
        const complex c(u(rng), u(rng));
        if (tricorn_membership(c, 500) == tricorn_membership(omega * c, 500)) ++agree;
    }
    CHECK(agree >= 0.999 * n);
}

TEST_CASE("henon search", "[prototypes]") {
    henon_options opt;
    opt.seed = 1;
    const henon_result r = henon_search(1.44, -0.22, opt);
    REQUIRE(r.period);
    CHECK(*r.period == 5);
    REQUIRE(r.orbit.size() == 5);
    std::array<double, 2> p = r.orbit[0];
    for (int k = 0; k < 5; ++k) p = {p[1], p[1] * p[1] - 1.44 + 0.22 * p[0]};
    CHECK(std::hypot(p[0] - r.orbit[0][0], p[1] - r.orbit[0][1]) < 1e-12);
    // the Jacobian determinant is beta at every point
    CHECK(std::abs(r.eigenvalues[0] * r.eigenvalues[1] - std::pow(-0.22, 5)) < 1e-12);
    CHECK(std::abs(r.eigenvalues[0]) < 1.0);
    CHECK(std::abs(r.eigenvalues[1]) < 1.0);

    const henon_result again = henon_search(1.44, -0.22, opt);
    CHECK(to_json(again) == to_json(r));

    const henon_result origin = henon_search(0.0, 0.0, opt);
    REQUIRE(origin.period);
    CHECK(*origin.period == 1);
    CHECK(std::hypot(origin.orbit[0][0], origin.orbit[0][1]) < 1e-12);

    const henon_result none = henon_search(10.0, 0.0, opt);
    CHECK_FALSE(none.period);
    CHECK(none.bounded_trials == 0);
    CHECK(to_json(none)["period"].is_null());
}

TEST_CASE("circle map rotation numbers", "[prototypes]") {
    for (double c : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.731}) CHECK(circle_rotation_number(c, 0.0).rho == c);

    const rotation_estimate half = circle_rotation_number(0.5, 0.05);
    CHECK(half.locked);
    CHECK(half.p == 1);
    CHECK(half.q == 2);
    CHECK_THAT(half.rho, WithinAbs(0.5, 1e-9));

    // F(t) = t + p has a solution exactly when |c - p| <= k
    const rotation_estimate zero = circle_rotation_number(0.01, 0.05);
    CHECK(zero.locked);
    CHECK(zero.rho == 0.0);

    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        const double c = 0.15 + 0.55 * i / 40.0;
        const double rho = circle_rotation_number(c, 0.1, {.n = 20000}).rho;
        CHECK(rho >= prev - 1e-3);
        prev = rho;
    }
    CHECK_FALSE(circle_rotation_number(0.3, 0.2).injective);
}
