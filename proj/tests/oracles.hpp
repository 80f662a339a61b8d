#pragma once

// Multiplier checks that stay well conditioned at parabolic parameters.
//
// On Per1(1) the distinguished fixed point is a double root of f(z) = z, and on
// Per2(1) two period-two orbits coincide. Rounding the coefficients to double
// splits such a root by about sqrt(epsilon), which moves the individual
// multipliers by ~1e-8 even though the map is exact to 1e-16. The centroid of
// the coalescing pair is well conditioned (its sum is fixed by the simple
// root), so the multiplier is read off there.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "cubicmaps/loci.hpp"

namespace oracles {

using cubicmaps::complex;

inline std::array<complex, 3> with_centroid_of_closest_pair(const std::array<complex, 3>& r, double cluster_tol) {
    int bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(r[i] - r[j]) < best) {
                best = std::abs(r[i] - r[j]);
                bi = i;
                bj = j;
            }
    std::array<complex, 3> out = r;
    if (best < cluster_tol) out[bi] = out[bj] = 0.5 * (r[bi] + r[bj]);
    return out;
}

/// Distance from mu to the nearest fixed-point multiplier, with a coalescing
/// pair of fixed points replaced by its centroid.
inline double fixed_multiplier_distance(const cubicmaps::monic_form& m, complex mu, double cluster_tol = 1e-5) {
    auto z = cubicmaps::cubic_roots(double(m.sigma), 0.0, -(3.0 * m.A + 1.0), m.b);
    z = with_centroid_of_closest_pair(z, cluster_tol);
    double best = std::numeric_limits<double>::infinity();
    for (complex x : z) best = std::min(best, std::abs(m.derivative(x) - mu));
    return best;
}

/// Same for the period-two orbits, through their orbit sums s = u + v.
inline double period2_multiplier_distance(const cubicmaps::monic_form& m, complex mu, double cluster_tol = 1e-5) {
    const double sg = m.sigma;
    auto sums = cubicmaps::cubic_roots(sg, 0.0, -(3.0 * m.A - 2.0), -m.b);
    sums = with_centroid_of_closest_pair(sums, cluster_tol);
    double best = std::numeric_limits<double>::infinity();
    for (complex s : sums) {
        const complex p = s * s - sg * (3.0 * m.A - 1.0);
        const complex mult = 9.0 * (p * p - sg * m.A * (s * s - 2.0 * p) + m.A * m.A);
        best = std::min(best, std::abs(mult - mu));
    }
    return best;
}

}  // namespace oracles

namespace oracles {

/// Lap numbers l(f^k), k = 1..kmax, of a real cubic by brute force: the sign of
/// (f^k)'(x) is the product of the signs of f' along the orbit, evaluated on
/// `samples` equally spaced points of [-radius, radius], and every sign change
/// is one turning point. Past the escape radius each further factor has the
/// sign of sigma, so escaping orbits need not be followed.
inline std::vector<std::size_t> lap_numbers_by_sign_changes(int sigma, double A, double b, double radius, int kmax,
                                                            int samples) {
    std::vector<std::size_t> changes(static_cast<std::size_t>(kmax), 0);
    std::vector<int> prev(static_cast<std::size_t>(kmax), 0);
    for (int i = 0; i < samples; ++i) {
        double x = -radius + 2.0 * radius * i / (samples - 1);
        bool escaped = false;
        int sign = 1;
        for (int k = 0; k < kmax; ++k) {
            if (escaped) {
                sign *= sigma;
            } else {
                const double d = 3.0 * sigma * x * x - 3.0 * A;
                sign *= d > 0 ? 1 : (d < 0 ? -1 : 0);
                x = sigma * x * x * x - 3.0 * A * x + b;
                escaped = std::abs(x) > radius;
            }
            if (sign != 0 && prev[k] != 0 && sign != prev[k]) ++changes[k];
            if (sign != 0) prev[k] = sign;
        }
    }
    for (auto& c : changes) c += 1;
    return changes;
}

}  // namespace oracles
