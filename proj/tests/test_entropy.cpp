#include <catch_amalgamated.hpp>

#include <random>

#include "cubicmaps/entropy.hpp"
#include "cubicmaps/hyperbolic.hpp"
#include "oracles.hpp"

using namespace cubicmaps;
using Catch::Matchers::WithinAbs;

TEST_CASE("laps of the full three-branch map are powers of three", "[entropy]") {
    lap_options opt;
    opt.kmax = 12;
    const lap_result r = lap_sequence(monic_form::from_moduli(1.0, 0.0), opt);
    REQUIRE(r.laps.size() == 12);
    std::size_t p = 1;
    for (std::size_t l : r.laps) {
        p *= 3;
        CHECK(l == p);
    }
    const entropy_estimate e = estimate_entropy(monic_form::from_moduli(1.0, 0.0));
    CHECK(e.cap_exceeded);
    CHECK(e.k == 13);
    CHECK(e.lap == 1594323);
    CHECK_THAT(e.s, WithinAbs(3.0, 1e-6));
}

TEST_CASE("monotone cubics have one lap", "[entropy]") {
    for (const monic_form m : {monic_form{1, 0.0, 0.0}, monic_form{1, -0.7, 0.3}, monic_form{-1, 0.4, -0.2}}) {
        const lap_result r = lap_sequence(m, {.kmax = 20});
        for (std::size_t l : r.laps) CHECK(l == 1);
        const entropy_estimate e = estimate_entropy(m);
        CHECK(e.s == 1.0);
        CHECK(e.converged);
    }
}

TEST_CASE("branch counts match dense sign-change counts", "[entropy]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uA(0.05, 1.3), ub(-1.5, 1.5);
    std::uniform_int_distribution<int> us(0, 1);
    for (int t = 0; t < 50; ++t) {
        const int sigma = us(rng) ? 1 : -1;
        const double A = sigma * uA(rng), b = ub(rng);
        const monic_form m{sigma, A, b};
        const lap_result r = lap_sequence(m, {.kmax = 6});
        const auto oracle = oracles::lap_numbers_by_sign_changes(sigma, A, b, escape_radius(m), 6, 4000000);
        INFO("sigma=" << sigma << " A=" << A << " b=" << b);
        REQUIRE(r.laps.size() == 6);
        for (int k = 0; k < 6; ++k) CHECK(r.laps[k] == oracle[k]);
    }
}

TEST_CASE("lap numbers are submultiplicative and nondecreasing", "[entropy]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uA(0.05, 1.3), ub(-1.5, 1.5);
    for (int t = 0; t < 40; ++t) {
        const monic_form m{1, uA(rng), ub(rng)};
        const lap_result r = lap_sequence(m, {.kmax = 12});
        const auto& l = r.laps;
        for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] >= l[i - 1]);
        for (std::size_t i = 0; i < l.size(); ++i)
            for (std::size_t j = 0; i + j + 1 < l.size(); ++j) CHECK(l[i + j + 1] <= l[i] * l[j]);
    }
}

TEST_CASE("conjugation by x -> -x preserves laps", "[entropy]") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uA(0.05, 1.3), ub(0.0, 1.5);
    for (int t = 0; t < 40; ++t) {
        const int sigma = t % 2 ? 1 : -1;
        const double A = sigma * uA(rng), b = ub(rng);
        const lap_result p = lap_sequence(monic_form{sigma, A, b}, {.kmax = 14});
        const lap_result q = lap_sequence(monic_form{sigma, A, -b}, {.kmax = 14});
        CHECK(p.laps == q.laps);
    }
}

TEST_CASE("growth numbers at known centers", "[entropy]") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK_THAT(estimate_entropy(monic_form::from_moduli(-0.75, -0.1875)).s, WithinAbs(2.0, 1e-2));
    CHECK_THAT(estimate_entropy(monic_form::from_moduli(.71327, .12977)).s, WithinAbs(phi, 1e-2));
    CHECK_THAT(estimate_entropy(monic_form::from_moduli(-.55310, -.62882)).s, WithinAbs(1.83929, 1e-2));
    CHECK(estimate_entropy(monic_form::from_moduli(2.0, 0.0)).s > 2.99);
}

TEST_CASE("zero-entropy centers stay near one", "[entropy]") {
    int rows = 0;
    for (const center_record& rec : builtin_center_table()) {
        if (!rec.entropy || *rec.entropy != 0.0) continue;
        ++rows;
        INFO(rec.label << " at (" << rec.A << ", " << rec.B << ")");
        CHECK(estimate_entropy(monic_form::from_moduli(rec.A, rec.B)).s <= 1.02);
    }
    CHECK(rows >= 10);
}

TEST_CASE("estimate from a synthetic lap sequence", "[entropy]") {
    std::vector<std::size_t> laps;
    std::size_t l = 1;
    for (int k = 0; k < 20; ++k) laps.push_back(l *= 2);
    const entropy_estimate e = estimate_from_laps(laps);
    CHECK_THAT(e.h, WithinAbs(std::log(2.0), 1e-12));
    CHECK_THAT(e.s, WithinAbs(2.0, 1e-12));
    CHECK(e.converged);
    CHECK(e.lap == (std::size_t{1} << 20));
    CHECK_THAT(e.h_upper, WithinAbs(std::log(2.0), 1e-12));
}

TEST_CASE("turning points lie where the skeleton says", "[entropy]") {
    const monic_form m{1, 0.8, 0.3};
    const detail::real_cubic f = detail::make_real_cubic(m);
    for (int k = 1; k <= 4; ++k) {
        const piecewise_monotone p = locate_turning_points(m, k);
        REQUIRE(p.turning_points.size() == p.values.size());
        CHECK(p.values.size() + 1 == lap_sequence(m, {.kmax = k}).laps.back());
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            double x = p.turning_points[i];
            for (int j = 0; j < k; ++j) x = f.image(x);
            CHECK_THAT(x, WithinAbs(p.values[i], 1e-6));
        }
    }
}

TEST_CASE("entropy grid", "[entropy]") {
    const window w{0.57, 1.03, -0.03, 0.43};
    const entropy_grid_result g = entropy_grid(entropy_plane::Ab, w, 5, 5);
    REQUIRE(g.s.size() == 25);
    for (double s : g.s) {
        CHECK(s >= 1.0);
        CHECK(s <= 3.0);
    }

    const window one{0.70, 0.72, 0.11, 0.13};
    const entropy_grid_result g1 = entropy_grid(entropy_plane::Ab, one, 1, 1);
    CHECK(g1.s[0] == estimate_entropy(plane_map(entropy_plane::Ab, 0.71, 0.12)).s);

    const entropy_grid_result a = entropy_grid(entropy_plane::Abp, {-1.05, -0.02, -0.05, 1.35}, 4, 4, {}, 1);
    const entropy_grid_result b = entropy_grid(entropy_plane::Abp, {-1.05, -0.02, -0.05, 1.35}, 4, 4, {}, 4);
    CHECK(a.s == b.s);
    CHECK_THROWS_AS(entropy_grid(entropy_plane::AB, w, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(parse_entropy_plane("XY"), std::invalid_argument);
}
