#include <catch_amalgamated.hpp>

#include "cubicmaps/classifier.hpp"
#include "cubicmaps/hyperbolic.hpp"
#include "cubicmaps/io.hpp"
#include "cubicmaps/prototypes.hpp"
#include "cubicmaps/raster.hpp"

using namespace cubicmaps;

namespace {

raster_config config(family f, window w, int width, int height) {
    raster_config cfg;
    cfg.fam = f;
    cfg.win = w;
    cfg.width = width;
    cfg.height = height;
    return cfg;
}

pixel_class tagged(pixel_tag t) {
    pixel_class p;
    p.tag = t;
    return p;
}

}  // namespace

TEST_CASE("palette", "[raster]") {
    CHECK(shade(tagged(pixel_tag::both_escape)) == 255);
    CHECK(shade(tagged(pixel_tag::one_escapes)) == 208);
    CHECK(shade(tagged(pixel_tag::boundary)) == 0);
    CHECK(shade(tagged(pixel_tag::structure_change)) == 0);
    pixel_class conv = tagged(pixel_tag::both_converge);
    conv.periods = {1, 2};
    CHECK(shade(conv) == 176);
    conv.same_cycle = true;
    CHECK(shade(conv) == 160);
    pixel_class ch = tagged(pixel_tag::chaotic);
    ch.chaotic_orbits = 1;
    CHECK(shade(ch) == 112);
    ch.chaotic_orbits = 2;
    CHECK(shade(ch) == 64);

    CHECK(shade(conv, family::henon) == 255);
    CHECK(shade(ch, family::henon) == 128);
    CHECK(shade(tagged(pixel_tag::both_escape), family::henon) == 0);
    conv.periods = {3, 3};
    CHECK(shade(conv, family::circle) == 64);
    CHECK(shade(tagged(pixel_tag::chaotic), family::circle) == 255);
}

TEST_CASE("distance estimate", "[raster]") {
    CHECK(distance_estimate(std::exp(1.0), 1.0) == std::exp(1.0));
    CHECK(distance_estimate(10.0, 0.0) == inf);
    CHECK(distance_estimate(100.0, 1e6) < 1e-3);
}

TEST_CASE("family names round trip", "[raster]") {
    for (const auto& [f, name] : family_names()) {
        CHECK(parse_family(name) == f);
        CHECK(to_string(f) == name);
    }
    CHECK_THROWS_AS(parse_family("quartic"), std::invalid_argument);
}

TEST_CASE("single pixel classes", "[raster]") {
    const raster_config cfg = config(family::cubic_AB, {-1.2, 1.2, -1.85, 0.75}, 288, 225);

    CHECK(classify_pixel(cfg, 2.0, 0.05).tag == pixel_tag::both_escape);
    // the B-gradient is infinite on B = 0 (dB/db = 2b vanishes), so the estimate is zero there
    CHECK(classify_pixel(cfg, 2.0, 0.0).tag == pixel_tag::boundary);

    const pixel_class origin = classify_pixel(cfg, 0.0, 0.0);
    CHECK(origin.tag == pixel_tag::both_converge);
    CHECK(origin.same_cycle);
    CHECK(origin.periods == std::array<int, 2>{1, 1});

    const pixel_class split = classify_pixel(cfg, -0.5, 0.0);
    CHECK(split.tag == pixel_tag::both_converge);
    CHECK_FALSE(split.same_cycle);
    CHECK(split.periods == std::array<int, 2>{1, 1});

    const pixel_class mixed = classify_pixel(cfg, .8156, .0674);
    CHECK(mixed.tag == pixel_tag::both_converge);
    CHECK(mixed.periods == std::array<int, 2>{3, 4});

    const raster_config m = config(family::mandelbrot, {-2.25, 0.75, -1.25, 1.25}, 300, 250);
    CHECK(classify_pixel(m, 0.0, 0.0).tag == pixel_tag::both_converge);
    CHECK(classify_pixel(m, 1.0, 0.0).tag == pixel_tag::both_escape);
}

TEST_CASE("a one-pixel render", "[raster]") {
    const raster_image img = render(config(family::cubic_AB, {-0.01, 0.01, -0.01, 0.01}, 1, 1));
    REQUIRE(img.pixels.size() == 1);
    CHECK(img.pixels[0] == 160);
    CHECK(img.metadata["counts"]["both_converge"] == 1);
}

TEST_CASE("renders do not depend on the thread count", "[raster]") {
    for (family f : {family::cubic_AB, family::tricorn, family::henon}) {
        window w = f == family::cubic_AB ? window{-.6, -.53, -.7, -.55}
                   : f == family::henon  ? window{1.4, 1.6, -.3, -.1}
                                         : window{-2.2, 1.4, -1.8, 1.8};
        raster_config cfg = config(f, w, 48, 40);
        cfg.threads = 1;
        const raster_image a = render(cfg);
        cfg.threads = 4;
        const raster_image b = render(cfg);
        CHECK(a.pixels == b.pixels);
        CHECK(pgm_bytes(a.width, a.height, a.pixels) == pgm_bytes(b.width, b.height, b.pixels));
    }
}

TEST_CASE("pgm header", "[raster]") {
    const std::string bytes = pgm_bytes(3, 2, {0, 1, 2, 253, 254, 255});
    CHECK(bytes == std::string("P5\n3 2\n255\n") + std::string("\x00\x01\x02\xfd\xfe\xff", 6));
    CHECK_THROWS(pgm_bytes(3, 2, {0, 1}));
}

TEST_CASE("cubic raster agrees with the region classes", "[raster]") {
    const raster_config cfg = config(family::cubic_AB, {-1.2, 1.2, -1.85, 0.75}, 128, 100);
    const raster_image img = render(cfg);
    long long total = 0, boundary = 0, r3 = 0;
    for (int j = 0; j < cfg.height; ++j) {
        for (int i = 0; i < cfg.width; ++i) {
            const pixel_tag t = img.classes[j * cfg.width + i].tag;
            ++total;
            if (t == pixel_tag::boundary) ++boundary;
            const double A = cfg.win.x_at(i, cfg.width), B = cfg.win.y_at(j, cfg.height);
            if (classify_region(monic_form::from_moduli(A, B)) == region_class::R3) {
                ++r3;
                CHECK((t == pixel_tag::both_escape || t == pixel_tag::boundary));
            }
        }
    }
    CHECK(r3 > 30);
    CHECK(boundary < 0.15 * total);
    long long counted = 0;
    for (const auto& [k, v] : img.metadata["counts"].items()) counted += v.get<long long>();
    CHECK(counted == total);
}

TEST_CASE("escaping mandelbrot pixels lie outside the set", "[raster]") {
    const raster_config cfg = config(family::mandelbrot, {-2.25, 0.75, -1.25, 1.25}, 96, 80);
    const raster_image img = render(cfg);
    int escaped = 0;
    for (int j = 0; j < cfg.height; ++j)
        for (int i = 0; i < cfg.width; ++i) {
            if (img.classes[j * cfg.width + i].tag != pixel_tag::both_escape) continue;
            ++escaped;
            CHECK_FALSE(mandelbrot_membership({cfg.win.x_at(i, cfg.width), cfg.win.y_at(j, cfg.height)}));
        }
    CHECK(escaped > 1000);
}

TEST_CASE("tabulated centers render as converging pixels", "[raster]") {
    const raster_config cfg = config(family::cubic_AB, {-1.2, 1.2, -1.85, 0.75}, 288, 225);
    for (const center_record& rec : builtin_center_table()) {
        const refinement r = refine_record(rec);
        INFO(rec.label);
        CHECK(classify_pixel(cfg, r.A, r.B).tag == pixel_tag::both_converge);
    }
}

TEST_CASE("invalid render configurations", "[raster]") {
    CHECK_THROWS_AS(render(config(family::cubic_AB, {0, 1, 0, 1}, 0, 5)), std::invalid_argument);
    CHECK_THROWS_AS(render(config(family::cubic_AB, {1, 0, 0, 1}, 5, 5)), std::invalid_argument);
    raster_config cfg = config(family::cubic_AB, {0, 1, 0, 1}, 5, 5);
    cfg.nmax = 0;
    CHECK_THROWS_AS(render(cfg), std::invalid_argument);
}

TEST_CASE("render metadata", "[raster]") {
    raster_config cfg = config(family::henon, {1.4, 1.6, -.3, -.1}, 4, 3);
    cfg.seed = 7;
    const raster_image img = render(cfg);
    CHECK(img.metadata["config"]["family"] == "henon");
    CHECK(img.metadata["config"]["seed"] == 7);
    CHECK(img.metadata["palette_version"] == palette_version);
    CHECK(img.metadata["library_version"] == library_version);
    CHECK_FALSE(to_json(config(family::cubic_AB, {0, 1, 0, 1}, 2, 2)).contains("seed"));
}
