#pragma once

// Parameter-plane rendering. Each pixel center runs both critical orbits
// together with their derivatives in the two plane coordinates. An orbit that
// escapes gives an exterior distance estimate |z| log|z| / |grad z|; a pixel is
// a boundary pixel when that estimate is below the pixel size. Bounded orbits
// are tested for an attracting cycle, and a second pass blackens pixels where
// the pair of cycle periods changes between neighbors.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicmaps/core.hpp"
#include "cubicmaps/grid.hpp"
#include "cubicmaps/hyperbolic.hpp"
#include "cubicmaps/prototypes.hpp"
#include "cubicmaps/version.hpp"

namespace cubicmaps {

enum class family { cubic_AB, cubic_Ab, cubic_Abp, mandelbrot, tricorn, biquadratic, arch, product, henon, circle };

inline const std::vector<std::pair<family, std::string>>& family_names() {
    static const std::vector<std::pair<family, std::string>> names{
        {family::cubic_AB, "cubic-AB"},       {family::cubic_Ab, "cubic-Ab"}, {family::cubic_Abp, "cubic-Abp"},
        {family::mandelbrot, "mandelbrot"},   {family::tricorn, "tricorn"},   {family::biquadratic, "biquadratic"},
        {family::arch, "arch"},               {family::product, "product"},   {family::henon, "henon"},
        {family::circle, "circle"},
    };
    return names;
}

inline std::string to_string(family f) {
    for (const auto& [k, v] : family_names()) {
        if (k == f) return v;
    }
    return "?";
}

inline family parse_family(const std::string& s) {
    for (const auto& [k, v] : family_names()) {
        if (v == s) return k;
    }
    throw std::invalid_argument("unknown family: " + s);
}

struct raster_config {
    family fam = family::cubic_AB;
    window win{-1.2, 1.2, -1.85, 0.75};
    int width = 288;
    int height = 225;
    int nmax = 400;
    int pmax = 64;
    double period_tol = 1e-6;
    double blowup = 1e14;
    double hyperbolic_bound = 1e6;
    std::uint64_t seed = 0x5eed;  ///< henon only
    int henon_trials = 16;
    int circle_iterations = 2000;
    unsigned threads = 0;

    double pixel_size() const { return (win.xmax - win.xmin) / width; }

    void validate() const {
        if (width < 1 || height < 1) throw std::invalid_argument("raster: width and height must be >= 1");
        if (!(win.xmax > win.xmin) || !(win.ymax > win.ymin)) throw std::invalid_argument("raster: degenerate window");
        if (nmax < 1 || pmax < 1) throw std::invalid_argument("raster: nmax and pmax must be >= 1");
    }
};

enum class pixel_tag { both_escape, one_escapes, both_converge, chaotic, boundary, structure_change };

inline std::string to_string(pixel_tag t) {
    switch (t) {
        case pixel_tag::both_escape: return "both_escape";
        case pixel_tag::one_escapes: return "one_escapes";
        case pixel_tag::both_converge: return "both_converge";
        case pixel_tag::chaotic: return "chaotic";
        case pixel_tag::boundary: return "boundary";
        case pixel_tag::structure_change: return "structure_change";
    }
    return "?";
}

struct pixel_class {
    pixel_tag tag = pixel_tag::chaotic;
    bool same_cycle = false;
    std::array<int, 2> periods{};  ///< sorted ascending when both converge
    int chaotic_orbits = 0;        ///< 1 or 2 when tag == chaotic

    bool operator==(const pixel_class&) const = default;
};

/// Gray level of a class (palette version 1). Henon and circle images use
/// their own three-level and period-graded scales.
inline std::uint8_t shade(const pixel_class& p, family f = family::cubic_AB) {
    if (f == family::henon) {
        switch (p.tag) {
            case pixel_tag::both_converge: return 255;
            case pixel_tag::chaotic: return 128;
            default: return 0;
        }
    }
    if (f == family::circle) {
        if (p.tag != pixel_tag::both_converge) return 255;
        return static_cast<std::uint8_t>(std::min(200, 40 + 12 * (p.periods[0] - 1)));
    }
    switch (p.tag) {
        case pixel_tag::structure_change:
        case pixel_tag::boundary: return 0;
        case pixel_tag::chaotic: return p.chaotic_orbits >= 2 ? 64 : 112;
        case pixel_tag::both_converge: return p.same_cycle ? 160 : 176;
        case pixel_tag::one_escapes: return 208;
        case pixel_tag::both_escape: return 255;
    }
    return 0;
}

/// |z| log|z| / |grad z|; infinite when the gradient vanishes.
inline double distance_estimate(double abs_z, double abs_grad) {
    if (abs_grad == 0.0) return inf;
    return abs_z * std::log(abs_z) / abs_grad;
}

namespace detail {

struct orbit_outcome {
    enum kind_t { escaped, converged, chaotic } kind = chaotic;
    double distance = inf;
    int period = 0;
    std::vector<std::pair<int, complex>> cycle;  ///< (copy tag, point)
};

inline bool same_cycle_points(const orbit_outcome& a, const orbit_outcome& b, double tol) {
    if (a.period != b.period || a.cycle.empty() || b.cycle.empty()) return false;
    const auto& [tag, z] = b.cycle.front();
    for (const auto& [t, w] : a.cycle) {
        if (t == tag && std::abs(w - z) < tol) return true;
    }
    return false;
}

inline pixel_class combine(const std::vector<orbit_outcome>& o, double px, double cycle_tol) {
    pixel_class p;
    int escaped = 0, chaotic = 0;
    for (const auto& x : o) {
        if (x.kind == orbit_outcome::escaped) {
            ++escaped;
            if (x.distance < px) {
                p.tag = pixel_tag::boundary;
                return p;
            }
        } else if (x.kind == orbit_outcome::chaotic) {
            ++chaotic;
        }
    }
    const int n = static_cast<int>(o.size());
    if (escaped == n) {
        p.tag = pixel_tag::both_escape;
    } else if (escaped > 0) {
        p.tag = pixel_tag::one_escapes;
    } else if (chaotic > 0) {
        p.tag = pixel_tag::chaotic;
        p.chaotic_orbits = (chaotic == n) ? 2 : 1;
    } else {
        p.tag = pixel_tag::both_converge;
        p.periods = {o[0].period, o[n - 1].period};
        std::sort(p.periods.begin(), p.periods.end());
        p.same_cycle = n == 1 || same_cycle_points(o[0], o[1], cycle_tol);
    }
    return p;
}

/// Cubic critical orbit with derivatives in (A, b).
inline orbit_outcome cubic_orbit(const monic_form& m, int which, const raster_config& cfg, bool ab_plane) {
    orbit_outcome out;
    const double r_esc = escape_radius(m);
    const double bailout = std::max(1e4, r_esc);
    jet_state s = critical_jet_seed(m, which);
    bool tracking = true;
    double max_jet = 0.0;
    auto grad_norm = [&](const jet_state& st) {
        complex dB = st.dz_db;
        if (ab_plane) {
            const double b = std::abs(m.b);
            if (b < 1e-8) return inf;  // indeterminate on B = 0: treated as boundary
            dB = double(m.sigma) * st.dz_db / (2.0 * b);
        }
        return std::sqrt(std::norm(st.dz_dA) + std::norm(dB));
    };
    for (int n = 0; n < cfg.nmax; ++n) {
        const jet_state prev = s;
        if (tracking) {
            jet_step(m, s);
        } else {
            s.z = m(s.z);
            ++s.n;
        }
        const double az = std::abs(s.z);
        if (tracking && !(jet_magnitude(s) <= cfg.blowup)) {
            // derivative overflow: fall back to the last finite jet if already outside
            tracking = false;
            if (std::abs(prev.z) > r_esc) {
                out.kind = orbit_outcome::escaped;
                const double g = grad_norm(prev);
                out.distance = std::isinf(g) ? 0.0 : distance_estimate(std::abs(prev.z), g);
                return out;
            }
            continue;
        }
        if (!(az <= r_esc)) {
            // keep going until the asymptotic estimate is meaningful
            if (tracking && az < bailout) continue;
            out.kind = orbit_outcome::escaped;
            if (!tracking) {
                out.distance = 0.0;
            } else {
                const double g = grad_norm(s);
                out.distance = std::isinf(g) ? 0.0 : distance_estimate(az, g);
            }
            return out;
        }
        if (tracking) max_jet = std::max(max_jet, jet_magnitude(s));
    }
    if (std::abs(s.z) > r_esc) {  // budget ran out on the way out
        out.kind = orbit_outcome::escaped;
        const double g = tracking ? grad_norm(s) : inf;
        out.distance = std::isinf(g) ? 0.0 : distance_estimate(std::abs(s.z), g);
        return out;
    }
    if (!tracking || max_jet > cfg.hyperbolic_bound) return out;  // chaotic
    const auto cyc = detect_cycle(m, s.z, {0, cfg.pmax, cfg.period_tol});
    if (!cyc) return out;
    out.kind = orbit_outcome::converged;
    out.period = cyc->period;
    for (const auto& z : cyc->points) out.cycle.push_back({0, z});
    return out;
}

/// Orbit of z0 under z -> z^2 + P[sel[n % 2]] with the gradient in the two
/// parameters (treated as independent complex variables, so conjugate
/// parameters are handled through Wirtinger derivatives).
struct alternating_spec {
    complex z0;
    std::array<complex, 2> grad0;
    std::array<int, 2> sel;
};

inline orbit_outcome alternating_orbit_class(const std::array<complex, 2>& P, const alternating_spec& spec,
                                             const raster_config& cfg, bool single_step) {
    orbit_outcome out;
    const double cmax = std::max(std::abs(P[0]), std::abs(P[1]));
    const double r_esc = quadratic_radius(cmax, 2.0);
    const double bailout = std::max(1e4, r_esc);
    complex z = spec.z0;
    std::array<complex, 2> g = spec.grad0;
    bool tracking = true;
    const int steps = single_step ? cfg.nmax : 2 * cfg.nmax;
    for (int n = 0; n < steps; ++n) {
        const int k = spec.sel[n % 2];
        if (tracking) {
            for (int j = 0; j < 2; ++j) g[j] = 2.0 * z * g[j] + (j == k ? 1.0 : 0.0);
        }
        z = z * z + P[k];
        const double az = std::abs(z);
        if (tracking && !(std::max(std::abs(g[0]), std::abs(g[1])) <= cfg.blowup)) tracking = false;
        if (!(az <= r_esc)) {
            if (tracking && az < bailout && n + 1 < steps) continue;
            out.kind = orbit_outcome::escaped;
            out.distance = tracking ? distance_estimate(az, std::sqrt(std::norm(g[0]) + std::norm(g[1]))) : 0.0;
            return out;
        }
    }
    if (std::abs(z) > r_esc) {
        out.kind = orbit_outcome::escaped;
        out.distance = tracking ? distance_estimate(std::abs(z), std::sqrt(std::norm(g[0]) + std::norm(g[1]))) : 0.0;
        return out;
    }
    if (!tracking) return out;
    // period in round trips of the return map
    const int stride = single_step ? 1 : 2;
    const complex z0 = z;
    complex w = z;
    int period = 0;
    for (int q = 1; q <= cfg.pmax && period == 0; ++q) {
        for (int s = 0; s < stride; ++s) w = w * w + P[spec.sel[(steps + (q - 1) * stride + s) % 2]];
        if (!(std::abs(w) <= r_esc)) return out;
        if (std::abs(w - z0) < cfg.period_tol) period = q;
    }
    if (period == 0) return out;
    out.kind = orbit_outcome::converged;
    out.period = period;
    w = z0;
    for (int s = 0; s < period * stride; ++s) {
        const int k = spec.sel[(steps + s) % 2];
        out.cycle.push_back({k, w});
        w = w * w + P[k];
    }
    return out;
}

}  // namespace detail

/// Parameter point of a cubic plane: (A, B) uses sigma = sgn(B) and sigma = +1
/// on B = 0; the (A, b) and (A, b') planes fix sigma = +1 and -1.
inline monic_form cubic_plane_map(family f, double x, double y) {
    switch (f) {
        case family::cubic_AB: return monic_form::from_moduli(x, y);
        case family::cubic_Ab: return {1, complex(x), complex(y)};
        case family::cubic_Abp: return {-1, complex(x), complex(y)};
        default: throw std::invalid_argument("cubic_plane_map: not a cubic family");
    }
}

/// Pass-one class of a single parameter point (x, y) of the configured plane.
/// `i`, `j` are the pixel indices, used only to seed the Henon search.
inline pixel_class classify_pixel(const raster_config& cfg, double x, double y, int i = 0, int j = 0) {
    const double px = cfg.pixel_size();
    const double cycle_tol = 1e-7;
    using detail::alternating_spec;
    switch (cfg.fam) {
        case family::cubic_AB:
        case family::cubic_Ab:
        case family::cubic_Abp: {
            const monic_form m = cubic_plane_map(cfg.fam, x, y);
            const bool ab = cfg.fam == family::cubic_AB;
            std::vector<detail::orbit_outcome> o{detail::cubic_orbit(m, +1, cfg, ab),
                                                 detail::cubic_orbit(m, -1, cfg, ab)};
            return detail::combine(o, px, cycle_tol);
        }
        case family::mandelbrot: {
            const complex c(x, y);
            std::vector<detail::orbit_outcome> o{
                detail::alternating_orbit_class({c, c}, alternating_spec{0.0, {0.0, 0.0}, {0, 0}}, cfg, true)};
            return detail::combine(o, px, cycle_tol);
        }
        case family::tricorn: {
            const complex c(x, y);
            const std::array<complex, 2> P{c, std::conj(c)};
            std::vector<detail::orbit_outcome> o{
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {0, 1}}, cfg, false),
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {1, 0}}, cfg, false)};
            return detail::combine(o, px, cycle_tol);
        }
        case family::biquadratic: {
            const std::array<complex, 2> P{x, y};
            std::vector<detail::orbit_outcome> o{
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {0, 1}}, cfg, false),
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {1, 0}}, cfg, false)};
            return detail::combine(o, px, cycle_tol);
        }
        case family::arch: {
            // parameters (c, xhat): orbits of 0 and of xhat under x^2 + c
            const std::array<complex, 2> P{x, 0.0};
            std::vector<detail::orbit_outcome> o{
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {0, 0}}, cfg, true),
                detail::alternating_orbit_class(P, alternating_spec{y, {0.0, 1.0}, {0, 0}}, cfg, true)};
            return detail::combine(o, px, cycle_tol);
        }
        case family::product: {
            const std::array<complex, 2> P{x, y};
            std::vector<detail::orbit_outcome> o{
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {0, 0}}, cfg, true),
                detail::alternating_orbit_class(P, alternating_spec{0.0, {0.0, 0.0}, {1, 1}}, cfg, true)};
            return detail::combine(o, px, cycle_tol);
        }
        case family::henon: {
            henon_options opt;
            opt.trials = cfg.henon_trials;
            opt.nmax = cfg.nmax;
            opt.pmax = std::min(cfg.pmax, 16);
            opt.seed = detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
            const henon_result r = henon_search(x, y, opt);
            pixel_class p;
            if (r.period) {
                p.tag = pixel_tag::both_converge;
                p.periods = {*r.period, *r.period};
                p.same_cycle = true;
            } else if (r.bounded_trials > 0) {
                p.tag = pixel_tag::chaotic;
                p.chaotic_orbits = 2;
            } else {
                p.tag = pixel_tag::both_escape;
            }
            return p;
        }
        case family::circle: {
            rotation_options opt;
            opt.n = cfg.circle_iterations;
            opt.qmax = cfg.pmax;
            opt.lock_tol = 1e-9;
            const rotation_estimate r = circle_rotation_number(x, y, opt);
            pixel_class p;
            if (r.locked) {
                p.tag = pixel_tag::both_converge;
                p.periods = {r.q, r.q};
                p.same_cycle = true;
            } else {
                p.tag = pixel_tag::chaotic;
                p.chaotic_orbits = 2;
            }
            return p;
        }
    }
    return {};
}

struct raster_image {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<pixel_class> classes;
    nlohmann::json metadata;
};

inline nlohmann::json to_json(const raster_config& cfg) {
    nlohmann::json j;
    j["family"] = to_string(cfg.fam);
    j["window"] = {cfg.win.xmin, cfg.win.xmax, cfg.win.ymin, cfg.win.ymax};
    j["width"] = cfg.width;
    j["height"] = cfg.height;
    j["nmax"] = cfg.nmax;
    j["pmax"] = cfg.pmax;
    j["period_tol"] = cfg.period_tol;
    j["blowup"] = cfg.blowup;
    j["hyperbolic_bound"] = cfg.hyperbolic_bound;
    if (cfg.fam == family::henon) {
        j["seed"] = cfg.seed;
        j["henon_trials"] = cfg.henon_trials;
    }
    if (cfg.fam == family::circle) j["circle_iterations"] = cfg.circle_iterations;
    return j;
}

/// Two-pass render. Pass one is row-parallel; pass two compares each
/// converging pixel's (periods, same-cycle) signature with its left and upper
/// neighbors, using pass-one classes only, so the output bytes do not depend
/// on the number of threads.
inline raster_image render(const raster_config& cfg) {
    cfg.validate();
    raster_image img;
    img.width = cfg.width;
    img.height = cfg.height;
    const std::size_t n = static_cast<std::size_t>(cfg.width) * cfg.height;
    std::vector<pixel_class> pass1(n);
    parallel_rows(cfg.height, resolve_threads(cfg.threads), [&](int j) {
        const double y = cfg.win.y_at(j, cfg.height);
        for (int i = 0; i < cfg.width; ++i) {
            pass1[static_cast<std::size_t>(j) * cfg.width + i] = classify_pixel(cfg, cfg.win.x_at(i, cfg.width), y, i, j);
        }
    });

    img.classes = pass1;
    const bool structure_pass = cfg.fam != family::henon && cfg.fam != family::circle;
    if (structure_pass) {
        auto signature_differs = [&](const pixel_class& a, const pixel_class& b) {
            return a.tag == pixel_tag::both_converge && b.tag == pixel_tag::both_converge &&
                   (a.periods != b.periods || a.same_cycle != b.same_cycle);
        };
        for (int j = 0; j < cfg.height; ++j) {
            for (int i = 0; i < cfg.width; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * cfg.width + i;
                const pixel_class& here = pass1[idx];
                const bool left = i > 0 && signature_differs(here, pass1[idx - 1]);
                const bool up = j > 0 && signature_differs(here, pass1[idx - cfg.width]);
                if (left || up) img.classes[idx].tag = pixel_tag::structure_change;
            }
        }
    }

    img.pixels.resize(n);
    std::map<std::string, long long> counts;
    for (std::size_t k = 0; k < n; ++k) {
        img.pixels[k] = shade(img.classes[k], cfg.fam);
        ++counts[to_string(img.classes[k].tag)];
    }
    img.metadata["config"] = to_json(cfg);
    img.metadata["palette_version"] = palette_version;
    img.metadata["library_version"] = library_version;
    img.metadata["counts"] = counts;
    return img;
}

}  // namespace cubicmaps
