#pragma once

// Closed-form roots of quadratics and cubics.
//
// All solvers work internally in long double and finish with a short Newton
// polish on the original polynomial, so simple roots come back to within a few
// ulps; double roots are only good to about sqrt(epsilon) of long double.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace cubicmaps {

using complex = std::complex<double>;

namespace detail {

using lcomplex = std::complex<long double>;

inline lcomplex principal_cbrt(lcomplex z) {
    if (z == lcomplex{}) return z;
    return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0L);
}

// Newton polish on a*z^3 + b*z^2 + c*z + d, keeping the best iterate seen.
inline lcomplex polish_cubic(lcomplex a, lcomplex b, lcomplex c, lcomplex d, lcomplex z) {
    auto eval = [&](lcomplex x) { return ((a * x + b) * x + c) * x + d; };
    lcomplex best = z;
    long double best_res = std::abs(eval(z));
    for (int it = 0; it < 6 && best_res > 0; ++it) {
        lcomplex dp = (3.0L * a * z + 2.0L * b) * z + c;
        if (dp == lcomplex{}) break;
        z -= eval(z) / dp;
        long double res = std::abs(eval(z));
        if (res < best_res) {
            best = z;
            best_res = res;
        } else {
            break;
        }
    }
    return best;
}

}  // namespace detail

/// Roots of a*z^2 + b*z + c (a != 0), numerically stable form.
inline std::array<complex, 2> quadratic_roots(complex a, complex b, complex c) {
    using detail::lcomplex;
    lcomplex la{a}, lb{b}, lc{c};
    lcomplex disc = std::sqrt(lb * lb - 4.0L * la * lc);
    // pick the sign that avoids cancellation
    lcomplex q = (std::real(std::conj(lb) * disc) >= 0) ? -0.5L * (lb + disc) : -0.5L * (lb - disc);
    if (q == lcomplex{}) return {complex{}, complex{}};
    return {complex(q / la), complex(lc / q)};
}

/// Roots of a*z^3 + b*z^2 + c*z + d with complex coefficients, a != 0.
/// Cardano's formula with the cancellation-free choice of the cube-root branch.
inline std::array<complex, 3> cubic_roots(complex a, complex b, complex c, complex d) {
    using detail::lcomplex;
    const lcomplex la{a}, lb{b}, lc{c}, ld{d};
    const lcomplex shift = lb / (3.0L * la);
    const lcomplex p = (3.0L * la * lc - lb * lb) / (3.0L * la * la);
    const lcomplex q = (2.0L * lb * lb * lb - 9.0L * la * lb * lc + 27.0L * la * la * ld) / (27.0L * la * la * la);

    const lcomplex disc = std::sqrt(q * q / 4.0L + p * p * p / 27.0L);
    lcomplex u3 = -q / 2.0L + disc;
    lcomplex alt = -q / 2.0L - disc;
    if (std::abs(alt) > std::abs(u3)) u3 = alt;

    const lcomplex u = detail::principal_cbrt(u3);
    const lcomplex omega = std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> / 3.0L);
    std::array<complex, 3> out;
    for (int k = 0; k < 3; ++k) {
        lcomplex uk = u * std::pow(omega, static_cast<long double>(k));
        lcomplex t = (uk == lcomplex{}) ? lcomplex{} : uk - p / (3.0L * uk);
        out[k] = complex(detail::polish_cubic(la, lb, lc, ld, t - shift));
    }
    return out;
}

/// Real roots of a real cubic a*x^3 + b*x^2 + c*x + d (a != 0), sorted ascending.
/// Uses the trigonometric form when all three roots are real. A double root is
/// reported twice. `tangency_tol` widens the three-real-roots test so that a
/// numerically split double root is still reported as real.
inline std::vector<double> real_cubic_roots(double a, double b, double c, double d,
                                            double tangency_tol = 1e-12) {
    using L = long double;
    const L la = a, lb = b, lc = c, ld = d;
    const L shift = lb / (3.0L * la);
    const L p = (3.0L * la * lc - lb * lb) / (3.0L * la * la);
    const L q = (2.0L * lb * lb * lb - 9.0L * la * lb * lc + 27.0L * la * la * ld) / (27.0L * la * la * la);
    const L delta = q * q / 4.0L + p * p * p / 27.0L;
    const L scale = std::max<L>({std::abs(q * q / 4.0L), std::abs(p * p * p / 27.0L), 1e-300L});

    auto polish = [&](L x) {
        for (int it = 0; it < 4; ++it) {
            L f = ((la * x + lb) * x + lc) * x + ld;
            L df = (3.0L * la * x + 2.0L * lb) * x + lc;
            if (df == 0) break;
            L nx = x - f / df;
            L nf = ((la * nx + lb) * nx + lc) * nx + ld;
            if (std::abs(nf) >= std::abs(f)) break;
            x = nx;
        }
        return x;
    };

    std::vector<double> out;
    if (delta <= tangency_tol * scale && p <= 0) {
        if (p == 0) {
            out.assign(3, static_cast<double>(polish(std::cbrt(-q) - shift)));
        } else {
            const L m = 2.0L * std::sqrt(-p / 3.0L);
            L arg = 3.0L * q / (p * m);
            arg = std::clamp(arg, -1.0L, 1.0L);
            const L theta = std::acos(arg) / 3.0L;
            for (int k = 0; k < 3; ++k) {
                L t = m * std::cos(theta - 2.0L * std::numbers::pi_v<long double> * k / 3.0L);
                out.push_back(static_cast<double>(polish(t - shift)));
            }
        }
    } else {
        const L sd = std::sqrt(std::max<L>(delta, 0));
        const L u = std::cbrt(-q / 2.0L + (q <= 0 ? sd : -sd));
        const L t = (u == 0) ? 0 : u - p / (3.0L * u);
        out.push_back(static_cast<double>(polish(t - shift)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Sorts complex values by real part, ties broken by imaginary part.
inline void sort_lexicographic(std::span<complex> values, double tie_tol = 1e-9) {
    std::sort(values.begin(), values.end(), [tie_tol](complex x, complex y) {
        if (std::abs(x.real() - y.real()) > tie_tol) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

}  // namespace cubicmaps
