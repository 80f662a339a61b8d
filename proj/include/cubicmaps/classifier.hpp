#pragma once

// Real cubics fall into four classes R0..R3 according to how many components
// the graph of f has over I x I, where I is the smallest interval containing
// every bounded real orbit. This header computes the class twice: from the
// dynamics (hull interval plus critical values) and from the position of
// (A, B) relative to the separating curves.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicmaps/core.hpp"
#include "cubicmaps/loci.hpp"
#include "cubicmaps/roots.hpp"

namespace cubicmaps {

enum class region_class { R0 = 0, R1 = 1, R2 = 2, R3 = 3 };

inline std::string to_string(region_class r) {
    switch (r) {
        case region_class::R0: return "R0";
        case region_class::R1: return "R1";
        case region_class::R2: return "R2";
        case region_class::R3: return "R3";
    }
    return "?";
}

struct hull_interval {
    double alpha = 0.0;
    double beta = 0.0;
    bool degenerate = false;
    /// max over endpoints of the distance from f(endpoint) to {alpha, beta}
    double endpoint_residual = 0.0;
};

namespace detail {

inline double real_eval(const monic_form& m, double x) {
    return m.sigma * x * x * x - 3.0 * m.A.real() * x + m.b.real();
}

inline void require_real(const monic_form& m, const char* who) {
    if (!m.real()) throw std::invalid_argument(std::string(who) + ": map is not real");
}

/// Real points of period one or two for sigma = -1 (fixed points plus real
/// period-two orbits), unsorted.
inline std::vector<double> real_period_le2_points(const monic_form& m) {
    const double A = m.A.real(), b = m.b.real();
    const double sg = m.sigma;
    std::vector<double> pts = real_cubic_roots(sg, 0.0, -(3.0 * A + 1.0), b);
    for (double s : real_cubic_roots(sg, 0.0, -(3.0 * A - 2.0), -b)) {
        const double p = s * s - sg * (3.0 * A - 1.0);
        const double disc = s * s - 4.0 * p;
        if (disc < -1e-12 * std::max(1.0, s * s)) continue;
        const double r = std::sqrt(std::max(disc, 0.0));
        pts.push_back(0.5 * (s + r));
        pts.push_back(0.5 * (s - r));
    }
    return pts;
}

}  // namespace detail

/// Smallest closed interval containing all bounded real orbits.
///
/// sigma = +1: every x beyond the largest fixed point beta has f(x) > x and
/// runs off monotonically, and every x below all fixed points and all
/// preimages of beta drifts to -infinity, so I = [min(fixed, f^-1(beta)), beta].
/// sigma = -1: the same argument applied to f o f, whose leading coefficient
/// is positive, gives I = [min, max] of the real points of period <= 2.
inline hull_interval compute_hull(const monic_form& m) {
    detail::require_real(m, "hull_interval");
    const double A = m.A.real(), b = m.b.real();
    const double sg = m.sigma;
    std::vector<double> cand;
    double beta = 0.0;
    if (m.sigma > 0) {
        cand = real_cubic_roots(1.0, 0.0, -(3.0 * A + 1.0), b);
        beta = *std::max_element(cand.begin(), cand.end());
        for (double x : real_cubic_roots(1.0, 0.0, -3.0 * A, b - beta)) cand.push_back(x);
    } else {
        cand = detail::real_period_le2_points(m);
        beta = *std::max_element(cand.begin(), cand.end());
    }
    hull_interval h;
    h.alpha = *std::min_element(cand.begin(), cand.end());
    h.beta = beta;
    const double scale = std::max(1.0, std::abs(beta));
    h.degenerate = (h.beta - h.alpha) <= 1e-9 * scale;
    auto endpoint_gap = [&](double x) {
        const double y = sg * x * x * x - 3.0 * A * x + b;
        return std::min(std::abs(y - h.alpha), std::abs(y - h.beta));
    };
    h.endpoint_residual = std::max(endpoint_gap(h.alpha), endpoint_gap(h.beta));
    return h;
}

/// Number of components of graph(f) over I x I, as a class.
/// Critical values landing exactly on an endpoint count as inside.
inline region_class classify_region(const monic_form& m, double tie_tol = 1e-12) {
    const hull_interval h = compute_hull(m);
    if (h.degenerate) return region_class::R0;
    const double sa = m.sigma * m.A.real();
    if (sa <= 0) return region_class::R1;
    const double a = std::sqrt(sa);
    int n = 1;
    for (double c : {a, -a}) {
        if (!(c > h.alpha && c < h.beta)) continue;
        const double v = detail::real_eval(m, c);
        if (v < h.alpha - tie_tol || v > h.beta + tie_tol) ++n;
    }
    return static_cast<region_class>(n);
}

struct quadratic_classification {
    region_class dynamic = region_class::R0;
    region_class closed_form = region_class::R0;
};

/// x -> x^2 + c. Dynamic: hull [-beta, beta] from the fixed point
/// beta = (1 + sqrt(1 - 4c))/2; closed form: R2 for c < -2, R1 for
/// -2 <= c <= 1/4, R0 beyond.
inline quadratic_classification classify_quadratic(double c) {
    quadratic_classification q;
    q.closed_form = c < -2.0 ? region_class::R2 : (c <= 0.25 ? region_class::R1 : region_class::R0);
    const double disc = 1.0 - 4.0 * c;
    if (disc < 0) {
        q.dynamic = region_class::R0;
        return q;
    }
    const double beta = 0.5 * (1.0 + std::sqrt(disc));
    // the critical point 0 lies strictly inside [-beta, beta] since beta >= 1/2
    q.dynamic = (c < -beta - 1e-12) ? region_class::R2 : region_class::R1;
    return q;
}

/// Thrown when a moduli point is too close to a separating curve for the curve
/// partition to decide.
struct ambiguous_near_boundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Class from the position of (A, B) relative to the separating curves.
///
/// Upper half-plane: above Per1(1) is R0; left of the Per1(1)/Preper(1)1
/// tangency at A = 1/9 everything else is R1; to the right, the band between
/// the two curves is R2 and the region under Preper(1)1 is R1 for A < 1 and R3
/// beyond.
/// Lower half-plane: below the lower envelope of Per2(1) (for A <= 2/9) and
/// Per1(-1) (for A > 2/9) is R0; right of the Per2(1)/Preper(1)2 tangency at
/// A = -1/36 the rest is R1; to the left, above the '+' branch of Preper(1)2 is
/// R1 (or R3 when A <= -1) and below it R2.
inline region_class classify_by_curves(double A, double B, int sigma, double tol = 1e-9) {
    auto decide = [&](double lhs, double rhs, const char* what) {
        if (std::abs(lhs - rhs) < tol) throw ambiguous_near_boundary(std::string("within tolerance of ") + what);
        return lhs > rhs;
    };
    if (sigma == 0) sigma = B < 0 ? -1 : 1;
    if (sigma > 0) {
        const double per1 = curve_B(curve_id::per1(1.0), A).front();
        if (decide(B, per1, "Per1(1)")) return region_class::R0;
        if (A <= 1.0 / 9.0) return region_class::R1;
        const double pre = curve_B(curve_id::preper11(), A).front();
        if (decide(B, pre, "Preper(1)1")) return region_class::R2;
        return A < 1.0 ? region_class::R1 : region_class::R3;
    }
    const double lower = A <= 2.0 / 9.0 ? curve_B(curve_id::per2_saddle(), A).front()
                                        : curve_B(curve_id::per1(-1.0), A).front();
    if (!decide(B, lower, A <= 2.0 / 9.0 ? "Per2(1)" : "Per1(-1)")) return region_class::R0;
    if (A >= -1.0 / 36.0) return region_class::R1;
    const double pre = curve_B(curve_id::preper12(+1), A).front();
    if (decide(B, pre, "Preper(1)2")) return A > -1.0 ? region_class::R1 : region_class::R3;
    return region_class::R2;
}

inline region_class classify_by_curves(const moduli_point& p, double tol = 1e-9) {
    if (!is_real(p.A) || !is_real(p.B)) throw std::invalid_argument("classify_by_curves: point is not real");
    return classify_by_curves(p.A.real(), p.B.real(), p.sigma, tol);
}

/// JSON report {A, B, sigma, class, interval, agreement}. `agreement` is null
/// when the curve partition cannot decide.
inline nlohmann::json classification_report(double A, double B, int sigma) {
    const monic_form m = monic_form::from_moduli(A, B, sigma);
    const hull_interval h = compute_hull(m);
    const region_class dyn = classify_region(m);
    nlohmann::json j;
    j["A"] = A;
    j["B"] = B;
    j["sigma"] = m.sigma;
    j["class"] = to_string(dyn);
    j["interval"] = {h.alpha, h.beta};
    try {
        j["agreement"] = classify_by_curves(A, B, m.sigma) == dyn;
    } catch (const ambiguous_near_boundary&) {
        j["agreement"] = nullptr;
    }
    return j;
}

}  // namespace cubicmaps
