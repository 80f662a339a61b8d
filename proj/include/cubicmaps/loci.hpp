#pragma once

// Closed-form curves in the (A, B) moduli plane and the multiplier identities
// that tie fixed-point and period-two multipliers to the invariants.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicmaps/core.hpp"
#include "cubicmaps/roots.hpp"

namespace cubicmaps {

enum class curve_kind {
    per1,         ///< a fixed point with multiplier mu
    per2_saddle,  ///< a period-two orbit with multiplier +1
    preper11,     ///< a critical point maps onto a fixed point
    preper12,     ///< a critical point maps onto a period-two orbit
};

struct curve_id {
    curve_kind kind = curve_kind::per1;
    double mu = 0.0;  ///< per1 only
    int branch = 0;   ///< preper12 only: +1, -1, or 0 for both

    static curve_id per1(double mu) { return {curve_kind::per1, mu, 0}; }
    static curve_id per2_saddle() { return {curve_kind::per2_saddle, 0.0, 0}; }
    static curve_id preper11() { return {curve_kind::preper11, 0.0, 0}; }
    static curve_id preper12(int branch = 0) { return {curve_kind::preper12, 0.0, branch}; }

    std::string name() const {
        switch (kind) {
            case curve_kind::per1: {
                char buf[48];
                std::snprintf(buf, sizeof buf, "Per1(%g)", mu);
                return buf;
            }
            case curve_kind::per2_saddle: return "Per2(1)";
            case curve_kind::preper11: return "Preper(1)1";
            case curve_kind::preper12:
                return branch > 0 ? "Preper(1)2+" : branch < 0 ? "Preper(1)2-" : "Preper(1)2";
        }
        return "?";
    }
};

/// A point on a curve together with a monic representative z^3 - 3Az + b.
/// `kappa` is the construction parameter (location of the distinguished
/// fixed point for per1, half-width of the period-two orbit for per2_saddle).
struct curve_sample {
    complex A{};
    complex B{};
    complex b{};
    curve_id curve;
    std::optional<complex> kappa;

    monic_form map() const { return {1, A, b}; }
};

/// Per1(mu) through the fixed point kappa of z^3 - 3Az + b.
inline curve_sample per1_parametric(complex mu, complex kappa) {
    curve_sample s;
    s.A = kappa * kappa - mu / 3.0;
    s.b = kappa * (2.0 * kappa * kappa + 1.0 - mu);
    s.B = s.b * s.b;
    s.curve = curve_id::per1(mu.real());
    s.kappa = kappa;
    return s;
}

/// Per2(1) parametrized by kappa, where the parabolic period-two orbit is
/// {m + kappa, m - kappa} with m^2 = (kappa^2 - 1)/9.
inline curve_sample per2_saddle_parametric(complex kappa) {
    curve_sample s;
    const complex k2 = kappa * kappa;
    const complex m = branch_sqrt((k2 - 1.0) / 9.0);
    s.A = (2.0 / 9.0) * (2.0 * k2 + 1.0);
    s.b = m * (-3.0 * k2 - m * m + 3.0 * s.A + 1.0);
    s.B = s.b * s.b;
    s.curve = curve_id::per2_saddle();
    s.kappa = kappa;
    return s;
}

/// Midpoint of the parabolic orbit of a per2_saddle_parametric sample.
inline complex per2_saddle_midpoint(complex kappa) { return branch_sqrt((kappa * kappa - 1.0) / 9.0); }

/// Preper(1)1 through a = sqrt(A): b = 2a^3 - 2a, so f(a) = -2a is fixed.
inline curve_sample preper11_parametric(complex a) {
    curve_sample s;
    s.A = a * a;
    s.b = 2.0 * a * a * a - 2.0 * a;
    s.B = s.b * s.b;
    s.curve = curve_id::preper11();
    s.kappa = a;
    return s;
}

/// Preper(1)2 through a = sqrt(A): b = 2a^3 + a + branch*i, so f(a) = a + branch*i
/// and {-2a, a + branch*i} is a period-two orbit.
inline curve_sample preper12_parametric(complex a, int branch) {
    const complex i1(0.0, branch >= 0 ? 1.0 : -1.0);
    curve_sample s;
    s.A = a * a;
    s.b = 2.0 * a * a * a + a + i1;
    s.B = s.b * s.b;
    s.curve = curve_id::preper12(branch >= 0 ? 1 : -1);
    s.kappa = a;
    return s;
}

/// All real B on the curve above A. Preper(1)2 is defined for A <= 0 only and
/// returns the requested branch (or both, '+' first).
inline std::vector<double> curve_B(const curve_id& c, double A) {
    switch (c.kind) {
        case curve_kind::per1: {
            const double t = 2.0 * A + 1.0 - c.mu / 3.0;
            return {(A + c.mu / 3.0) * t * t};
        }
        case curve_kind::per2_saddle: {
            const double t = A - 2.0 / 3.0;
            return {4.0 * t * t * t};
        }
        case curve_kind::preper11: return {4.0 * A * (A - 1.0) * (A - 1.0)};
        case curve_kind::preper12: {
            if (A > 0) throw std::domain_error("curve_B: Preper(1)2 requires A <= 0");
            const double r = (2.0 * A + 1.0) * std::sqrt(-A);
            const double plus = -(1.0 + r) * (1.0 + r);
            const double minus = -(1.0 - r) * (1.0 - r);
            if (c.branch > 0) return {plus};
            if (c.branch < 0) return {minus};
            return {plus, minus};
        }
    }
    return {};
}

/// dB/dA along the curve, one value per branch as in curve_B.
inline std::vector<double> curve_slope(const curve_id& c, double A) {
    switch (c.kind) {
        case curve_kind::per1: {
            const double t = 2.0 * A + 1.0 - c.mu / 3.0;
            return {t * t + 4.0 * (A + c.mu / 3.0) * t};
        }
        case curve_kind::per2_saddle: {
            const double t = A - 2.0 / 3.0;
            return {12.0 * t * t};
        }
        case curve_kind::preper11: return {4.0 * (A - 1.0) * (A - 1.0) + 8.0 * A * (A - 1.0)};
        case curve_kind::preper12: {
            if (A >= 0) throw std::domain_error("curve_slope: Preper(1)2 requires A < 0");
            const double q = std::sqrt(-A);
            const double r = (2.0 * A + 1.0) * q;
            const double dr = 2.0 * q - (2.0 * A + 1.0) / (2.0 * q);
            const double plus = -2.0 * (1.0 + r) * dr;
            const double minus = 2.0 * (1.0 - r) * dr;
            if (c.branch > 0) return {plus};
            if (c.branch < 0) return {minus};
            return {plus, minus};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Fixed points and multipliers

/// Roots of f(z) = z, in lexicographic order.
inline std::array<complex, 3> fixed_points(const monic_form& m) {
    auto r = cubic_roots(double(m.sigma), 0.0, -(3.0 * m.A + 1.0), m.b);
    sort_lexicographic(r);
    return r;
}

/// f'(z) at the three fixed points, ordered by real part then imaginary part.
inline std::array<complex, 3> fixed_point_multipliers(const monic_form& m) {
    const auto z = fixed_points(m);
    std::array<complex, 3> mu{m.derivative(z[0]), m.derivative(z[1]), m.derivative(z[2])};
    sort_lexicographic(mu);
    return mu;
}

/// The multiplier forced on the third fixed point by sum_{i<j}(mu_i-1)(mu_j-1) = 0.
inline complex third_multiplier(complex mu1, complex mu2) {
    const complex den = mu1 + mu2 - 2.0;
    if (den == complex{}) throw std::domain_error("third_multiplier: mu1 + mu2 == 2");
    return 2.0 + (1.0 - mu1 * mu2) / den;
}

/// Elementary symmetric functions of (mu_i - 1) predicted from (A, B):
/// { 9(A + 1/3), 0, 27(B - 4(A + 1/3)^3) }.
inline std::array<complex, 3> fixed_point_symmetrics_closed(complex A, complex B) {
    const complex t = A + 1.0 / 3.0;
    return {9.0 * t, complex{}, 27.0 * (B - 4.0 * t * t * t)};
}

struct period2_orbit {
    complex u{}, v{};
    complex multiplier{};
};

/// The three period-two orbits {u, v}. With s = u + v and p = uv, f(u) = v and
/// f(v) = u reduce to sigma*s^3 - (3A - 2)s - b = 0 and p = s^2 - sigma(3A - 1),
/// which is the sextic (f(f(z)) - z)/(f(z) - z) solved through its orbit sums.
inline std::array<period2_orbit, 3> period2_orbits(const monic_form& m) {
    const double sg = m.sigma;
    const auto sums = cubic_roots(sg, 0.0, -(3.0 * m.A - 2.0), -m.b);
    std::array<period2_orbit, 3> out;
    for (int i = 0; i < 3; ++i) {
        const complex s = sums[i];
        const complex p = s * s - sg * (3.0 * m.A - 1.0);
        const auto uv = quadratic_roots(1.0, -s, p);
        out[i].u = uv[0];
        out[i].v = uv[1];
        out[i].multiplier = 9.0 * (p * p - sg * m.A * (s * s - 2.0 * p) + m.A * m.A);
    }
    return out;
}

/// Elementary symmetric functions of the three period-two multipliers as
/// polynomials in (A, B). The last factor of sigma_3 is the Per1(-1) curve.
inline std::array<complex, 3> period2_symmetrics_closed(complex A, complex B) {
    const complex s1 = 9.0 * (3.0 - 4.0 * A);
    const complex s2 = 81.0 * (3.0 - 8.0 * A + 16.0 * A * A * A - 12.0 * A * A * A * A + 2.0 * B + 3.0 * A * B);
    const complex t = A - 2.0 / 3.0;
    const complex per2 = B - 4.0 * t * t * t;
    const complex per1m = B - 4.0 * (A - 1.0 / 3.0) * (A + 2.0 / 3.0) * (A + 2.0 / 3.0);
    const complex s3 = s2 - s1 + 1.0 + 729.0 * per2 * per1m;
    return {s1, s2, s3};
}

struct period2_report {
    std::array<complex, 3> closed{};    ///< sigma_1..3 from the closed forms
    std::array<complex, 3> computed{};  ///< from the orbits (unset when degenerate)
    std::array<period2_orbit, 3> orbits{};
    bool degenerate = false;            ///< an orbit collapsed onto a fixed point
    double max_relative_error = 0.0;
};

/// Closed-form period-two symmetrics checked against the actual orbits. When an
/// orbit degenerates to a fixed point (on Per1(-1)) the check is skipped. Near
/// the contact with Per2(1) the collapsing orbits split like the cube root of
/// the rounding error, hence the loose default tolerance.
inline period2_report period2_multiplier_symmetrics(const monic_form& m, double degenerate_tol = 1e-3) {
    period2_report r;
    const auto mp = m.moduli();
    r.closed = period2_symmetrics_closed(mp.A, mp.B);
    r.orbits = period2_orbits(m);
    for (const auto& o : r.orbits) {
        if (std::abs(o.u - o.v) < degenerate_tol) r.degenerate = true;
    }
    if (r.degenerate) return r;
    const complex m1 = r.orbits[0].multiplier, m2 = r.orbits[1].multiplier, m3 = r.orbits[2].multiplier;
    r.computed = {m1 + m2 + m3, m1 * m2 + m1 * m3 + m2 * m3, m1 * m2 * m3};
    for (int i = 0; i < 3; ++i) {
        const double e = std::abs(r.computed[i] - r.closed[i]) / std::max(1.0, std::abs(r.closed[i]));
        r.max_relative_error = std::max(r.max_relative_error, e);
    }
    return r;
}

/// The segment of Per1(2) where two complex conjugate fixed points have
/// multipliers e^{+-i theta}; A = (2/9)(cos theta - 2).
inline curve_sample indifferent_segment(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi)) throw std::domain_error("indifferent_segment: theta must lie in (0, pi)");
    curve_sample s;
    const double A = (2.0 / 9.0) * (std::cos(theta) - 2.0);
    s.A = A;
    s.B = curve_B(curve_id::per1(2.0), A).front();
    s.b = branch_sqrt(s.B);
    s.curve = curve_id::per1(2.0);
    return s;
}

// ---------------------------------------------------------------------------
// Named points

struct special_point {
    std::string name;
    double A = 0.0;
    double B = 0.0;
    std::vector<curve_id> curves;  ///< curves the point lies on
    bool tangency = false;         ///< the first two curves touch with equal slope
};

inline std::vector<special_point> special_points() {
    const double bmin = -(1.0 + std::sqrt(2.0 / 27.0)) * (1.0 + std::sqrt(2.0 / 27.0));
    return {
        {"per1(-1)^per2(1) tangency", 2.0 / 9.0, -256.0 / 729.0,
         {curve_id::per1(-1.0), curve_id::per2_saddle()}, true},
        {"per1(1)^preper11 tangency", 1.0 / 9.0, 256.0 / 729.0,
         {curve_id::per1(1.0), curve_id::preper11()}, true},
        {"per2(1)^preper12 tangency", -1.0 / 36.0, -15625.0 / 11664.0,
         {curve_id::per2_saddle(), curve_id::preper12(+1)}, true},
        {"B max of real connectedness locus", 1.0 / 3.0, 16.0 / 27.0, {curve_id::preper11()}, false},
        {"B min of real connectedness locus", -1.0 / 6.0, bmin, {curve_id::preper12(+1)}, false},
        {"A max (entropy log 3)", 1.0, 0.0, {curve_id::preper11()}, false},
        {"A min (entropy log 3)", -1.0, 0.0, {curve_id::preper12(+1)}, false},
        {"per1(1)^per1(2) corner", -2.0 / 9.0, 4.0 / 729.0, {curve_id::per1(1.0), curve_id::per1(2.0)}, false},
    };
}

}  // namespace cubicmaps
