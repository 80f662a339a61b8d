#pragma once

// Topological entropy of real cubics from lap-number growth,
// h = lim (1/k) log l(f^k).
//
// The k-th iterate is represented by the ordered list of its values at its
// turning points. That list is enough to build the list for f^(k+1): on each
// monotone branch running from value p to value q, every critical point of f
// strictly between p and q creates a new turning point whose value is the
// corresponding critical value, and every old turning point survives with value
// f(q). Turning-point locations are never needed for the count; they can be
// recovered by bisection (locate_turning_points) when wanted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubicmaps/core.hpp"
#include "cubicmaps/grid.hpp"

namespace cubicmaps {

/// The k-th iterate of a real interval map as a monotone-piece skeleton.
/// `values` are f^k at the turning points t_1 < ... < t_m, left to right;
/// values beyond the escape radius are stored as +-infinity because their
/// further images can only grow in modulus with a known sign.
struct piecewise_monotone {
    int k = 0;
    std::vector<double> values;
    double left_end = -inf;   ///< limit of f^k at -infinity
    double right_end = inf;   ///< limit of f^k at +infinity
    /// turning-point locations, filled only by locate_turning_points
    std::vector<double> turning_points;

    std::size_t lap() const { return values.size() + 1; }
};

struct lap_options {
    int kmax = 256;
    std::size_t cap = 2'000'000;  ///< maximum number of turning points kept
    double tangency_tol = 1e-11;  ///< critical points this close to a branch end do not split it
};

struct lap_result {
    std::vector<std::size_t> laps;  ///< laps[j] = l(f^(j+1))
    bool cap_exceeded = false;
    int k_reached = 0;
};

namespace detail {

struct real_cubic {
    int sigma;
    double A, b;
    double radius;
    std::vector<double> critical;  // sorted ascending, empty when monotone

    double operator()(double x) const { return sigma * x * x * x - 3.0 * A * x + b; }

    double image(double v) const {
        if (std::isinf(v)) return sigma * v;
        const double y = (*this)(v);
        if (std::abs(y) > radius) return y > 0 ? inf : -inf;
        return y;
    }
};

inline real_cubic make_real_cubic(const monic_form& m) {
    if (!m.real()) throw std::invalid_argument("entropy: map is not real");
    real_cubic f{m.sigma, m.A.real(), m.b.real(), escape_radius(m), {}};
    const double sa = m.sigma * f.A;
    if (sa > 0) {
        const double a = std::sqrt(sa);
        f.critical = {-a, a};
    }
    return f;
}

// One composition step on the value skeleton.
inline void compose_once(const real_cubic& f, const piecewise_monotone& in, piecewise_monotone& out, double tol) {
    out.values.clear();
    out.k = in.k + 1;
    out.left_end = f.image(in.left_end);
    out.right_end = f.image(in.right_end);
    std::vector<double> crit_values;
    crit_values.reserve(f.critical.size());
    for (double c : f.critical) crit_values.push_back(f.image(c));

    auto emit_branch = [&](double p, double q) {
        if (p < q) {
            for (std::size_t i = 0; i < f.critical.size(); ++i) {
                const double c = f.critical[i];
                if (c > p + tol && c < q - tol) out.values.push_back(crit_values[i]);
            }
        } else {
            for (std::size_t i = f.critical.size(); i-- > 0;) {
                const double c = f.critical[i];
                if (c < p - tol && c > q + tol) out.values.push_back(crit_values[i]);
            }
        }
    };

    double p = in.left_end;
    for (double q : in.values) {
        emit_branch(p, q);
        out.values.push_back(f.image(q));
        p = q;
    }
    emit_branch(p, in.right_end);
}

}  // namespace detail

/// The skeleton of f^k for k = 1, seeded from the identity.
inline piecewise_monotone identity_skeleton() { return {}; }

/// l(f^k) for k = 1..kmax, stopping early once the number of turning points
/// would exceed the cap (the partial sequence is kept and flagged).
inline lap_result lap_sequence(const monic_form& m, const lap_options& opt = {}) {
    if (opt.kmax < 1) throw std::invalid_argument("lap_sequence: kmax must be >= 1");
    const detail::real_cubic f = detail::make_real_cubic(m);
    lap_result r;
    if (f.critical.empty()) {
        r.laps.assign(static_cast<std::size_t>(opt.kmax), 1);
        r.k_reached = opt.kmax;
        return r;
    }
    // reused across calls so grids do not fault in fresh pages for every pixel
    thread_local piecewise_monotone cur, next;
    cur.k = 0;
    cur.values.clear();
    cur.turning_points.clear();
    cur.left_end = -inf;
    cur.right_end = inf;
    for (int k = 1; k <= opt.kmax; ++k) {
        detail::compose_once(f, cur, next, opt.tangency_tol);
        if (next.values.size() > opt.cap) {
            r.cap_exceeded = true;
            break;
        }
        std::swap(cur, next);
        r.laps.push_back(cur.lap());
        r.k_reached = k;
    }
    return r;
}

/// The value skeleton of f^k itself (no cap), for inspection and tests.
inline piecewise_monotone skeleton(const monic_form& m, int k, double tangency_tol = 1e-11) {
    const detail::real_cubic f = detail::make_real_cubic(m);
    piecewise_monotone cur = identity_skeleton(), next;
    if (f.critical.empty()) {
        for (int j = 0; j < k; ++j) {
            cur.left_end = f.image(cur.left_end);
            cur.right_end = f.image(cur.right_end);
        }
        cur.k = k;
        return cur;
    }
    for (int j = 0; j < k; ++j) {
        detail::compose_once(f, cur, next, tangency_tol);
        std::swap(cur, next);
    }
    return cur;
}

/// Fills `turning_points` of the skeleton of f^k by bisection: the turning
/// points of f^k are the turning points of f^(k-1) together with the solutions
/// of f^(k-1)(x) = c on each monotone branch. Intended for small k.
inline piecewise_monotone locate_turning_points(const monic_form& m, int k, double tol = 1e-13) {
    const detail::real_cubic f = detail::make_real_cubic(m);
    auto iterate_k = [&](double x, int n) {
        for (int i = 0; i < n; ++i) x = f.image(x);
        return x;
    };
    const double span = 2.0 * f.radius;
    std::vector<double> pts;
    for (int j = 1; j <= k; ++j) {
        std::vector<double> nodes;
        nodes.push_back(-span);
        nodes.insert(nodes.end(), pts.begin(), pts.end());
        nodes.push_back(span);
        std::vector<double> found;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double lo = nodes[i], hi = nodes[i + 1];
            const double flo = iterate_k(lo, j - 1), fhi = iterate_k(hi, j - 1);
            for (double c : f.critical) {
                if ((flo - c) * (fhi - c) >= 0) continue;
                double a = lo, b2 = hi, fa = flo - c;
                while (b2 - a > tol) {
                    const double mid = 0.5 * (a + b2);
                    const double fm = iterate_k(mid, j - 1) - c;
                    if ((fm < 0) == (fa < 0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b2 = mid;
                    }
                }
                found.push_back(0.5 * (a + b2));
            }
        }
        pts.insert(pts.end(), found.begin(), found.end());
        std::sort(pts.begin(), pts.end());
    }
    piecewise_monotone out = skeleton(m, k);
    out.turning_points = std::move(pts);
    return out;
}

struct entropy_estimate {
    int k = 0;
    std::size_t lap = 1;
    double h_upper = 0.0;   ///< log(l_k)/k, an upper bound for h
    double h = 0.0;         ///< ratio estimate
    double s = 1.0;         ///< e^h clamped to [1, 3]
    bool converged = false;
    bool cap_exceeded = false;
};

/// Entropy from a lap sequence: the mean of the last five log-ratios
/// log(l_k / l_(k-1)), declared converged when the last three such windowed
/// means agree to within 1e-3.
inline entropy_estimate estimate_from_laps(const std::vector<std::size_t>& laps) {
    entropy_estimate e;
    if (laps.empty()) return e;
    e.k = static_cast<int>(laps.size());
    e.lap = laps.back();
    e.h_upper = std::log(static_cast<double>(e.lap)) / e.k;
    // ratios[i] = log(l_(i+1)/l_i) with l_0 = 1
    std::vector<double> ratios;
    double prev = 1.0;
    for (std::size_t l : laps) {
        ratios.push_back(std::log(static_cast<double>(l) / prev));
        prev = static_cast<double>(l);
    }
    const int window = 5;
    auto windowed = [&](int end) {  // mean of ratios[end-window+1 .. end]
        const int lo = std::max(0, end - window + 1);
        double sum = 0.0;
        for (int i = lo; i <= end; ++i) sum += ratios[i];
        return sum / (end - lo + 1);
    };
    const int last = static_cast<int>(ratios.size()) - 1;
    e.h = std::max(0.0, windowed(last));
    e.s = std::clamp(std::exp(e.h), 1.0, 3.0);
    if (last >= 2) {
        const double a = windowed(last), b = windowed(last - 1), c = windowed(last - 2);
        e.converged = std::max({a, b, c}) - std::min({a, b, c}) < 1e-3;
    }
    return e;
}

/// Maps with complex or coincident critical points are monotone and are
/// answered without running the engine.
inline entropy_estimate estimate_entropy(const monic_form& m, const lap_options& opt = {}) {
    if (!m.real()) throw std::invalid_argument("estimate_entropy: map is not real");
    if (m.sigma * m.A.real() <= 0) {
        entropy_estimate e;
        e.k = opt.kmax;
        e.converged = true;
        return e;
    }
    const lap_result r = lap_sequence(m, opt);
    entropy_estimate e = estimate_from_laps(r.laps);
    e.cap_exceeded = r.cap_exceeded;
    return e;
}

// ---------------------------------------------------------------------------
// Grids

/// Ab: x -> x^3 - 3Ax + b; Abp: x -> -x^3 - 3Ax + b'; AB: sigma = sgn(B).
enum class entropy_plane { Ab, Abp, AB };

inline std::string to_string(entropy_plane p) {
    switch (p) {
        case entropy_plane::Ab: return "Ab";
        case entropy_plane::Abp: return "Abp";
        case entropy_plane::AB: return "AB";
    }
    return "?";
}

inline entropy_plane parse_entropy_plane(const std::string& s) {
    if (s == "Ab") return entropy_plane::Ab;
    if (s == "Abp") return entropy_plane::Abp;
    if (s == "AB") return entropy_plane::AB;
    throw std::invalid_argument("unknown plane: " + s);
}

inline monic_form plane_map(entropy_plane plane, double x, double y) {
    switch (plane) {
        case entropy_plane::Ab: return {1, complex(x), complex(y)};
        case entropy_plane::Abp: return {-1, complex(x), complex(y)};
        case entropy_plane::AB: return monic_form::from_moduli(x, y);
    }
    return {};
}

struct entropy_grid_result {
    int nx = 0, ny = 0;
    std::vector<double> s;       ///< row-major, top row first
    std::vector<char> converged;
};

inline entropy_grid_result entropy_grid(entropy_plane plane, const window& w, int nx, int ny,
                                        const lap_options& opt = {}, unsigned threads = 0) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("entropy_grid: empty grid");
    entropy_grid_result g;
    g.nx = nx;
    g.ny = ny;
    g.s.assign(static_cast<std::size_t>(nx) * ny, 1.0);
    g.converged.assign(static_cast<std::size_t>(nx) * ny, 0);
    parallel_rows(ny, resolve_threads(threads), [&](int j) {
        const double y = w.y_at(j, ny);
        for (int i = 0; i < nx; ++i) {
            const entropy_estimate e = estimate_entropy(plane_map(plane, w.x_at(i, nx), y), opt);
            const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
            g.s[idx] = e.s;
            g.converged[idx] = e.converged ? 1 : 0;
        }
    });
    return g;
}

}  // namespace cubicmaps
