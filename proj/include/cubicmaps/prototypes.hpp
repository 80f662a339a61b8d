#pragma once

// Model families that reproduce the local pictures around hyperbolic centers:
// quadratic maps, two-copy compositions (biquadratic swallow, arch, product,
// tricorn), the Henon map and circle maps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "cubicmaps/core.hpp"

namespace cubicmaps {

struct escape_status {
    bool escaped = false;
    int step = 0;
};

namespace detail {

/// Beyond this radius |z^2 + c| > 2|z| for every c with |c| <= cmax.
inline double quadratic_radius(double cmax, double floor_radius) {
    return std::max(floor_radius, 1.0 + std::sqrt(1.0 + cmax));
}

/// Orbit of z0 under the alternating maps z -> z^2 + c_first, z -> z^2 + c_second.
inline escape_status alternating_orbit(complex z, complex c_first, complex c_second, int nmax, double radius) {
    for (int n = 0; n < nmax; ++n) {
        z = z * z + ((n % 2) == 0 ? c_first : c_second);
        if (!(std::abs(z) <= radius)) return {true, n + 1};
    }
    return {false, nmax};
}

}  // namespace detail

/// Orbit of 0 under z -> z^2 + c stays within radius 2 for nmax steps.
inline bool mandelbrot_membership(complex c, int nmax = 2000) {
    complex z{};
    for (int n = 0; n < nmax; ++n) {
        z = z * z + c;
        if (std::norm(z) > 4.0) return false;
    }
    return true;
}

/// x -> (x^2 + c1)^2 + c2 viewed as two real copies exchanged by x^2 + c1 and
/// x^2 + c2. Orbit 0 starts at the critical point of the first copy, orbit 1
/// at the critical point of the second copy.
struct biquadratic_verdict {
    std::array<escape_status, 2> orbits;
    bool connected() const { return !orbits[0].escaped && !orbits[1].escaped; }
};

inline biquadratic_verdict biquadratic_status(double c1, double c2, int nmax = 2000) {
    const double r = detail::quadratic_radius(std::max(std::abs(c1), std::abs(c2)), 4.0);
    biquadratic_verdict v;
    v.orbits[0] = detail::alternating_orbit(0.0, c1, c2, 2 * nmax, r);
    v.orbits[1] = detail::alternating_orbit(0.0, c2, c1, 2 * nmax, r);
    return v;
}

struct membership {
    bool closed_form = false;
    bool dynamic = false;
};

namespace detail {

inline bool real_quadratic_bounded(double x, double c, int nmax) {
    const double r = quadratic_radius(std::abs(c), 2.0);
    for (int n = 0; n < nmax; ++n) {
        if (std::abs(x) > r) return false;
        x = x * x + c;
    }
    return std::abs(x) <= r;
}

}  // namespace detail

/// Arch prototype: one copy folds by xi -> +-xi^2 + xhat onto a second copy
/// that carries x -> x^2 + c. The fold's critical point lands on xhat either
/// way, so the branch sign does not affect membership.
inline membership arch_membership(double c, double xhat, int nmax = 2000) {
    membership m;
    m.closed_form = c >= -2.0 && c <= 0.25 && 2.0 * std::abs(xhat) <= 1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * c));
    m.dynamic = detail::real_quadratic_bounded(0.0, c, nmax) && detail::real_quadratic_bounded(xhat, c, nmax);
    return m;
}

/// Product prototype: two independent quadratic maps x^2 + c1 and x^2 + c2.
inline membership product_membership(double c1, double c2, int nmax = 2000) {
    membership m;
    m.closed_form = c1 >= -2.0 && c1 <= 0.25 && c2 >= -2.0 && c2 <= 0.25;
    m.dynamic = detail::real_quadratic_bounded(0.0, c1, nmax) && detail::real_quadratic_bounded(0.0, c2, nmax);
    return m;
}

/// Tricorn prototype: z -> w = z^2 + c from the first copy to the second and
/// w -> z = w^2 + conj(c) back, so the return map is (z^2 + c)^2 + conj(c).
/// Both critical orbits (one per copy) must stay bounded for nmax round trips.
inline bool tricorn_membership(complex c, int nmax = 2000) {
    const double r = detail::quadratic_radius(std::abs(c), 4.0);
    return !detail::alternating_orbit(0.0, c, std::conj(c), 2 * nmax, r).escaped &&
           !detail::alternating_orbit(0.0, std::conj(c), c, 2 * nmax, r).escaped;
}

// ---------------------------------------------------------------------------
// Henon map (x, y) -> (y, y^2 - alpha - beta x)

struct henon_result {
    double alpha = 0.0, beta = 0.0;
    std::uint64_t seed = 0;
    std::optional<int> period;
    std::vector<std::array<double, 2>> orbit;
    std::array<complex, 2> eigenvalues{};
    int bounded_trials = 0;  ///< trials whose orbit never left the radius-100 ball
};

struct henon_options {
    int trials = 32;
    int nmax = 2000;
    int pmax = 16;
    std::uint64_t seed = 0x5eed;
};

namespace detail {

/// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(a)) ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits, so the stream is identical
/// on every standard library.
inline double unit_double(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

struct mat2 {
    double a, b, c, d;
    mat2 operator*(const mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

inline std::array<double, 2> henon_step(double alpha, double beta, std::array<double, 2> p) {
    return {p[1], p[1] * p[1] - alpha - beta * p[0]};
}

inline mat2 henon_jacobian(double beta, std::array<double, 2> p) { return {0.0, 1.0, -beta, 2.0 * p[1]}; }

inline std::array<complex, 2> eigenvalues(const mat2& m) {
    const complex tr = m.a + m.d, det = m.a * m.d - m.b * m.c;
    const complex disc = std::sqrt(tr * tr - 4.0 * det);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

}  // namespace detail

/// Random search for an attracting periodic orbit of period <= pmax. Every
/// trial draws its start in [-3, 3]^2 from its own generator seeded by
/// (seed, trial), so the result does not depend on evaluation order.
inline henon_result henon_search(double alpha, double beta, const henon_options& opt = {}) {
    henon_result res;
    res.alpha = alpha;
    res.beta = beta;
    res.seed = opt.seed;
    using P = std::array<double, 2>;
    for (int t = 0; t < opt.trials; ++t) {
        std::mt19937_64 gen(detail::mix_seed(opt.seed, static_cast<std::uint64_t>(t)));
        P p{6.0 * detail::unit_double(gen) - 3.0, 6.0 * detail::unit_double(gen) - 3.0};
        bool escaped = false;
        for (int n = 0; n < opt.nmax; ++n) {
            p = detail::henon_step(alpha, beta, p);
            if (!(std::hypot(p[0], p[1]) <= 100.0)) {
                escaped = true;
                break;
            }
        }
        if (escaped) continue;
        ++res.bounded_trials;
        int period = 0;
        P q = p;
        for (int k = 1; k <= opt.pmax; ++k) {
            q = detail::henon_step(alpha, beta, q);
            if (std::hypot(q[0] - p[0], q[1] - p[1]) < 1e-6) {
                period = k;
                break;
            }
        }
        if (period == 0) continue;
        if (res.period && *res.period <= period) continue;

        // Newton on F^p(X) - X
        P x = p;
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            P y = x;
            detail::mat2 J{1, 0, 0, 1};
            for (int k = 0; k < period; ++k) {
                J = detail::henon_jacobian(beta, y) * J;
                y = detail::henon_step(alpha, beta, y);
            }
            const double g0 = y[0] - x[0], g1 = y[1] - x[1];
            if (std::hypot(g0, g1) < 1e-13) {
                ok = true;
                break;
            }
            const double a = J.a - 1.0, b = J.b, c = J.c, d = J.d - 1.0;
            const double det = a * d - b * c;
            if (det == 0.0) break;
            x[0] -= (d * g0 - b * g1) / det;
            x[1] -= (a * g1 - c * g0) / det;
        }
        if (!ok) continue;
        detail::mat2 J{1, 0, 0, 1};
        std::vector<P> orbit;
        P y = x;
        for (int k = 0; k < period; ++k) {
            orbit.push_back(y);
            J = detail::henon_jacobian(beta, y) * J;
            y = detail::henon_step(alpha, beta, y);
        }
        const auto ev = detail::eigenvalues(J);
        if (std::abs(ev[0]) < 1.0 && std::abs(ev[1]) < 1.0) {
            res.period = period;
            res.orbit = std::move(orbit);
            res.eigenvalues = ev;
        }
    }
    return res;
}

inline nlohmann::json to_json(const henon_result& r) {
    nlohmann::json j;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["seed"] = r.seed;
    j["period"] = r.period ? nlohmann::json(*r.period) : nlohmann::json(nullptr);
    j["orbit"] = nlohmann::json::array();
    for (const auto& p : r.orbit) j["orbit"].push_back({p[0], p[1]});
    j["eigenvalues"] = nlohmann::json::array();
    if (r.period) {
        for (const auto& e : r.eigenvalues) j["eigenvalues"].push_back({e.real(), e.imag()});
    }
    j["bounded_trials"] = r.bounded_trials;
    return j;
}

// ---------------------------------------------------------------------------
// Circle maps t -> t + c + k sin(2 pi t)

struct rotation_estimate {
    double rho = 0.0;
    bool locked = false;  ///< an attracting p/q orbit was found and rho is exact
    int p = 0, q = 0;
    bool injective = true;  ///< |2 pi k| < 1
};

struct rotation_options {
    int n = 100000;
    int qmax = 64;
    double lock_tol = 1e-10;
};

/// Rotation number of the lift F(t) = t + c + k sin(2 pi t). The orbit is
/// followed as an integer winding count plus a fractional part so precision
/// does not degrade with N. After N steps the orbit is tested for a closed
/// cycle F^q(t) = t + p; if one is found rho = p/q exactly, otherwise the
/// average displacement over eight starting points is returned.
inline rotation_estimate circle_rotation_number(double c, double k, const rotation_options& opt = {}) {
    rotation_estimate r;
    r.injective = std::abs(2.0 * std::numbers::pi * k) < 1.0;
    if (k == 0.0) {
        r.rho = c;
        return r;
    }
    auto step = [&](double t) { return t + c + k * std::sin(2.0 * std::numbers::pi * t); };
    double sum = 0.0;
    const int starts = 8;
    for (int s = 0; s < starts; ++s) {
        const double t0 = static_cast<double>(s) / starts;
        double frac = t0;
        long long wind = 0;
        for (int i = 0; i < opt.n; ++i) {
            const double t = step(frac);
            const double fl = std::floor(t);
            wind += static_cast<long long>(fl);
            frac = t - fl;
        }
        if (s == 0) {
            double t = frac;
            for (int q = 1; q <= opt.qmax; ++q) {
                t = step(t);
                const double p = std::round(t - frac);
                if (std::abs(t - frac - p) < opt.lock_tol) {
                    r.locked = true;
                    r.p = static_cast<int>(p);
                    r.q = q;
                    r.rho = static_cast<double>(r.p) / q;
                    return r;
                }
            }
        }
        sum += (static_cast<double>(wind) + frac - t0) / opt.n;
    }
    r.rho = sum / starts;
    return r;
}

}  // namespace cubicmaps
