#pragma once

// Normal forms and iteration for cubic maps.
//
// Every cubic is affinely conjugate to z -> z^3 - 3Az + b, and (A, B = b^2)
// are the conjugacy invariants. Real cubics additionally carry the sign of the
// leading coefficient; the real normal form is x -> sigma*x^3 - 3Ax + sqrt|B|.
// Complex arithmetic is used throughout; real maps have zero imaginary parts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubicmaps/roots.hpp"

namespace cubicmaps {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Imaginary parts below this are treated as zero when extracting real forms.
inline constexpr double real_tolerance = 1e-9;

inline bool is_real(complex z, double tol = real_tolerance) {
    return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z.real()));
}

/// sqrt that returns +i*sqrt(|x|) for negative reals regardless of the sign of
/// a zero imaginary part, so the "first" critical point is always well defined.
inline complex branch_sqrt(complex z) {
    if (z.imag() == 0.0) {
        return z.real() >= 0 ? complex(std::sqrt(z.real()), 0.0) : complex(0.0, std::sqrt(-z.real()));
    }
    return std::sqrt(z);
}

/// c3*x^3 + c2*x^2 + c1*x + c0 with c3 != 0.
struct general_cubic {
    complex c3{1.0}, c2{}, c1{}, c0{};

    complex operator()(complex x) const { return ((c3 * x + c2) * x + c1) * x + c0; }

    /// The unique point where the second derivative vanishes.
    complex barycenter() const { return -c2 / (3.0 * c3); }

    bool real() const { return is_real(c3) && is_real(c2) && is_real(c1) && is_real(c0); }
};

/// Affine-conjugacy invariants. For real maps sigma is the sign of the leading
/// coefficient; for complex maps sigma is always +1.
struct moduli_point {
    complex A{};
    complex B{};
    int sigma = 1;
};

/// x -> sigma*x^3 - 3*A*x + b.
struct monic_form {
    int sigma = 1;
    complex A{};
    complex b{};

    complex operator()(complex x) const { return double(sigma) * x * x * x - 3.0 * A * x + b; }
    complex derivative(complex x) const { return 3.0 * double(sigma) * x * x - 3.0 * A; }

    /// Invariants (A, B) with B = sigma*b^2 (the sign convention of the real half-planes).
    moduli_point moduli() const { return {A, double(sigma) * b * b, sigma}; }

    bool real() const { return is_real(A) && is_real(b); }

    /// Real normal form for a point of the real moduli space. sigma defaults to
    /// sgn(B), and to +1 on the line B = 0.
    static monic_form from_moduli(double A, double B, int sigma = 0) {
        if (sigma == 0) sigma = (B < 0) ? -1 : 1;
        return {sigma, complex(A), complex(std::sqrt(std::abs(B)))};
    }
};

/// Normalizes a cubic to its invariants and monic centered form. Real input
/// yields the real normal form with b = +sqrt|B|.
inline std::pair<moduli_point, monic_form> normalize(const general_cubic& g) {
    if (g.c3 == complex{}) throw std::invalid_argument("normalize: leading coefficient is zero");
    const complex A = (g.c2 * g.c2 - 3.0 * g.c1 * g.c3) / (9.0 * g.c3);
    const complex zhat = g.barycenter();
    const complex w = g(zhat) - zhat;
    const complex B = w * w * g.c3;
    if (g.real()) {
        const int sigma = g.c3.real() > 0 ? 1 : -1;
        const double a = A.real(), bb = B.real();
        return {{complex(a), complex(bb), sigma}, monic_form{sigma, complex(a), complex(std::sqrt(std::abs(bb)))}};
    }
    return {{A, B, 1}, monic_form{1, A, w * std::sqrt(g.c3)}};
}

/// The two critical points +-sqrt(sigma*A); the first one is +i*sqrt(|A|) when
/// sigma*A is a negative real.
inline std::pair<complex, complex> critical_points(const monic_form& m) {
    const complex a = branch_sqrt(double(m.sigma) * m.A);
    return {a, -a};
}

/// x0, f(x0), ..., f^n(x0).
inline std::vector<complex> iterate(const monic_form& m, complex x0, int n) {
    if (n < 0) throw std::invalid_argument("iterate: negative count");
    std::vector<complex> orbit;
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    orbit.push_back(x0);
    for (int i = 0; i < n; ++i) orbit.push_back(m(orbit.back()));
    return orbit;
}

/// max(2, sqrt(3|A| + |b| + 2)); beyond it |f(x)| > 2|x|.
inline double escape_radius(const monic_form& m) {
    return std::max(2.0, std::sqrt(3.0 * std::abs(m.A) + std::abs(m.b) + 2.0));
}

struct bounded_verdict {
    bool escaped = false;
    int step = 0;  ///< first n with |x_n| > R when escaped
    int nmax = 0;  ///< iteration budget the verdict refers to
};

/// Orbit escape test. A non-escaped verdict only means "not escaped within nmax".
inline bounded_verdict bounded(const monic_form& m, complex x0, int nmax) {
    if (nmax < 1) throw std::invalid_argument("bounded: nmax must be >= 1");
    const double r = escape_radius(m);
    complex x = x0;
    for (int n = 0; n <= nmax; ++n) {
        if (std::abs(x) > r) return {true, n, nmax};
        if (n < nmax) x = m(x);
    }
    return {false, nmax, nmax};
}

// ---------------------------------------------------------------------------
// Critical orbits with parameter derivatives

/// n-th iterate of a critical point and its partial derivatives in A and b.
struct jet_state {
    complex z{};
    complex dz_dA{};
    complex dz_db{};
    int n = 0;
};

enum class jet_stop { completed, escaped, derivative_blowup };

struct jet_run {
    jet_state state;
    jet_stop stop = jet_stop::completed;
};

struct jet_limits {
    double blowup = 1e14;   ///< any |partial| above this stops the run
    double escape = 0.0;    ///< stop once |z| exceeds this; 0 disables
};

/// Start of the critical orbit: which = +1 for +sqrt(sigma*A), -1 for the other.
/// The start point moves with A, so dz/dA is seeded with d(+-sqrt(sigma*A))/dA
/// (zero at the double critical point A = 0).
inline jet_state critical_jet_seed(const monic_form& m, int which) {
    const complex a = critical_points(m).first;
    const double w = which >= 0 ? 1.0 : -1.0;
    jet_state s;
    s.z = w * a;
    s.dz_dA = (a == complex{}) ? complex{} : w * double(m.sigma) / (2.0 * a);
    s.dz_db = complex{};
    return s;
}

inline void jet_step(const monic_form& m, jet_state& s) {
    const double sg = m.sigma;
    const complex z = s.z;
    const complex fp = 3.0 * sg * z * z - 3.0 * m.A;
    s.dz_dA = fp * s.dz_dA - 3.0 * z;
    s.dz_db = fp * s.dz_db + 1.0;
    s.z = sg * z * z * z - 3.0 * m.A * z + m.b;
    ++s.n;
}

inline double jet_magnitude(const jet_state& s) { return std::max(std::abs(s.dz_dA), std::abs(s.dz_db)); }

/// Iterates a jet from an arbitrary state for up to n further steps.
inline jet_run advance_jet(const monic_form& m, jet_state s, int n, const jet_limits& lim = {}) {
    for (int i = 0; i < n; ++i) {
        jet_step(m, s);
        if (lim.escape > 0 && std::abs(s.z) > lim.escape) return {s, jet_stop::escaped};
        if (!(jet_magnitude(s) <= lim.blowup)) return {s, jet_stop::derivative_blowup};
    }
    return {s, jet_stop::completed};
}

/// n steps of the critical orbit with parameter derivatives.
inline jet_run iterate_with_jet(const monic_form& m, int which, int n, const jet_limits& lim = {}) {
    if (n < 0) throw std::invalid_argument("iterate_with_jet: negative count");
    return advance_jet(m, critical_jet_seed(m, which), n, lim);
}

}  // namespace cubicmaps
