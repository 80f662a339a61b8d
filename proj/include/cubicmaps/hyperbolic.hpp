#pragma once

// Attracting cycles, critical-orbit behavior, and the centers of hyperbolic
// components described by itinerary relations between the critical points.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicmaps/core.hpp"

namespace cubicmaps {

struct cycle_info {
    std::vector<complex> points;
    int period = 0;
    complex multiplier{};
    bool refined = false;  ///< false when Newton failed and the raw orbit was kept

    bool attracting() const { return std::abs(multiplier) < 1.0; }
};

struct cycle_options {
    int warmup = 400;
    int pmax = 64;
    double tol = 1e-6;
};

namespace detail {

inline complex iterate_n(const monic_form& m, complex z, int n) {
    for (int i = 0; i < n; ++i) z = m(z);
    return z;
}

/// f^p(z) and d/dz f^p(z).
inline std::pair<complex, complex> iterate_with_derivative(const monic_form& m, complex z, int p) {
    complex d{1.0};
    for (int i = 0; i < p; ++i) {
        d *= m.derivative(z);
        z = m(z);
    }
    return {z, d};
}

inline cycle_info cycle_from(const monic_form& m, complex z0, int p, bool refined) {
    cycle_info c;
    c.period = p;
    c.refined = refined;
    c.multiplier = 1.0;
    complex z = z0;
    for (int i = 0; i < p; ++i) {
        c.points.push_back(z);
        c.multiplier *= m.derivative(z);
        z = m(z);
    }
    return c;
}

}  // namespace detail

/// Periodic orbit reached from x0: after `warmup` steps, the smallest p <= pmax
/// with |x_(n+p) - x_n| < tol, polished by Newton on f^p(z) - z. If Newton
/// wanders off, the unrefined orbit is returned with refined = false.
inline std::optional<cycle_info> detect_cycle(const monic_form& m, complex x0, const cycle_options& opt = {}) {
    const double r = escape_radius(m);
    complex z = x0;
    for (int i = 0; i < opt.warmup; ++i) {
        z = m(z);
        if (!(std::abs(z) <= r)) return std::nullopt;
    }
    int period = 0;
    complex w = z;
    for (int p = 1; p <= opt.pmax; ++p) {
        w = m(w);
        if (!(std::abs(w) <= r)) return std::nullopt;
        if (std::abs(w - z) < opt.tol) {
            period = p;
            break;
        }
    }
    if (period == 0) return std::nullopt;

    complex x = z;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
        auto [fp, dfp] = detail::iterate_with_derivative(m, x, period);
        const complex g = fp - x;
        if (std::abs(g) < 1e-15 * std::max(1.0, std::abs(x))) {
            ok = true;
            break;
        }
        const complex dg = dfp - 1.0;
        if (dg == complex{}) break;
        const complex step = g / dg;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) {
            ok = true;
            break;
        }
    }
    if (!ok || std::abs(x - z) > 10.0 * opt.tol || std::abs(detail::iterate_n(m, x, period) - x) > 1e-10) {
        return detail::cycle_from(m, z, period, false);
    }
    return detail::cycle_from(m, x, period, true);
}

/// True when the two cycles are the same point set (within tol); `offset`
/// receives k with b.points[0] == a.points[k].
inline bool same_cycle(const cycle_info& a, const cycle_info& b, double tol = 1e-7, int* offset = nullptr) {
    if (a.period != b.period) return false;
    for (int k = 0; k < a.period; ++k) {
        if (std::abs(a.points[k] - b.points[0]) < tol) {
            if (offset) *offset = k;
            return true;
        }
    }
    return false;
}

enum class orbit_verdict { escaped, converged, chaotic };

struct orbit_behavior {
    orbit_verdict verdict = orbit_verdict::chaotic;
    int escape_step = 0;
    std::optional<cycle_info> cycle;
};

struct behavior_summary {
    std::array<orbit_behavior, 2> orbits;  ///< critical points +a and -a
    bool same_cycle = false;
    int phase_offset = 0;  ///< index of the second orbit's cycle entry in the first's
};

inline behavior_summary classify_behavior(const monic_form& m, int nmax = 400, int pmax = 64) {
    behavior_summary s;
    const auto [c1, c2] = critical_points(m);
    const std::array<complex, 2> starts{c1, c2};
    for (int i = 0; i < 2; ++i) {
        auto& o = s.orbits[i];
        const bounded_verdict bv = bounded(m, starts[i], nmax);
        if (bv.escaped) {
            o.verdict = orbit_verdict::escaped;
            o.escape_step = bv.step;
            continue;
        }
        o.cycle = detect_cycle(m, starts[i], {nmax, pmax, 1e-6});
        o.verdict = o.cycle ? orbit_verdict::converged : orbit_verdict::chaotic;
    }
    if (s.orbits[0].cycle && s.orbits[1].cycle) {
        s.same_cycle = same_cycle(*s.orbits[0].cycle, *s.orbits[1].cycle, 1e-7, &s.phase_offset);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Itineraries and centers

/// c = +sqrt(sigma*A), c' = -c, cbar = conj(c). When the critical points are
/// complex, cbar is c'; when they are real, cbar is c.
enum class crit_symbol { c, c_prime, c_bar };

inline std::string to_string(crit_symbol s) {
    switch (s) {
        case crit_symbol::c: return "c";
        case crit_symbol::c_prime: return "c'";
        case crit_symbol::c_bar: return "cbar";
    }
    return "?";
}

struct itinerary_relation {
    crit_symbol source = crit_symbol::c;
    int n = 1;
    crit_symbol target = crit_symbol::c;
};

struct itinerary_spec {
    std::vector<itinerary_relation> relations;
    bool coincident = false;  ///< c = c', i.e. A = 0

    std::string describe() const {
        std::string out = coincident ? "c=c'; " : "";
        for (std::size_t i = 0; i < relations.size(); ++i) {
            const auto& r = relations[i];
            if (i) out += ", ";
            out += to_string(r.source) + " ->" + std::to_string(r.n) + " " + to_string(r.target);
        }
        return out;
    }
};

enum class component_type { A, B, C, D };

struct center_record {
    std::string label;  ///< e.g. "B+(1+2)"
    component_type type = component_type::A;
    double A = 0.0;
    double B = 0.0;
    itinerary_spec spec;
    std::optional<double> entropy;  ///< growth exponent log(s) where listed
    bool exact = false;             ///< A and B are exact values, not 5-digit roundings

    int sigma() const { return B < 0 ? -1 : 1; }
};

struct malformed_spec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct newton_divergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct overdetermined_spec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline itinerary_relation rel(crit_symbol s, int n, crit_symbol t) { return {s, n, t}; }

}  // namespace detail

/// Twenty centers of hyperbolic components in the real (A, B) plane.
inline std::vector<center_record> builtin_center_table() {
    using detail::rel;
    constexpr auto c = crit_symbol::c, cp = crit_symbol::c_prime, cb = crit_symbol::c_bar;
    const double golden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    const double r2 = std::sqrt(2.0) / 2.0;
    auto spec = [](std::vector<itinerary_relation> r, bool coincident = false) {
        return itinerary_spec{std::move(r), coincident};
    };
    return {
        {"D-(3,3)", component_type::D, -.55881, .08656, spec({rel(c, 3, c), rel(cb, 3, cb)}), {}, false},
        {"C+((2)2)", component_type::C, .47567, .33217, spec({rel(c, 2, cp), rel(cp, 2, cp)}), 0.0, false},
        {"C+((3)2)", component_type::C, .49408, .45878, spec({rel(c, 3, cp), rel(cp, 2, cp)}), 0.0, false},
        {"B+(1+3)", component_type::B, .62827, .04135, spec({rel(c, 1, cp), rel(cp, 3, c)}), 0.0, false},
        {"B+(1+2)", component_type::B, .71327, .12977, spec({rel(c, 1, cp), rel(cp, 2, c)}), golden, false},
        {"D(2,2)", component_type::D, -r2, 0.0, spec({rel(c, 2, c), rel(cp, 2, cp)}), 0.0, true},
        {"D(1,1)", component_type::D, -0.5, 0.0, spec({rel(c, 1, c), rel(cp, 1, cp)}), 0.0, true},
        {"A(1)", component_type::A, 0.0, 0.0, spec({rel(c, 1, c)}, true), 0.0, true},
        {"B(1+1)", component_type::B, 0.5, 0.0, spec({rel(c, 1, cp), rel(cp, 1, c)}), 0.0, true},
        {"D(2,2)", component_type::D, r2, 0.0, spec({rel(c, 2, c), rel(cp, 2, cp)}), 0.0, true},
        {"C+((2)1)", component_type::C, -0.75, -0.1875, spec({rel(c, 2, cp), rel(cp, 1, cp)}), std::log(2.0), true},
        {"D+(1,2)", component_type::D, -.61688, -.03371, spec({rel(c, 1, c), rel(cp, 2, cp)}), 0.0, false},
        {"B+(2+2)", component_type::B, -.55310, -.62882, spec({rel(c, 2, cp), rel(cp, 2, c)}), std::log(1.83929), false},
        {"C+((2)2)", component_type::C, -.39736, -.31371, spec({rel(c, 2, cp), rel(cp, 2, cp)}), 0.0, false},
        {"B+(1+2)", component_type::B, -.36464, -1.09040, spec({rel(c, 1, cp), rel(cp, 2, c)}), golden, false},
        {"C+((1)2)", component_type::C, -0.25, -0.5625, spec({rel(c, 1, cp), rel(cp, 2, cp)}), 0.0, true},
        {"B+(2+2)", component_type::B, -.13414, -1.37344, spec({rel(c, 2, cp), rel(cp, 2, c)}), 0.0, false},
        {"A(2)", component_type::A, 0.0, -1.0, spec({rel(c, 2, c)}, true), 0.0, true},
        {"D-(2,2)", component_type::D, 0.25, -0.4375, spec({rel(c, 2, c), rel(cb, 2, cb)}), {}, true},
        {"B-(3+3)", component_type::B, .27286, -.93044, spec({rel(c, 3, cb), rel(cb, 3, c)}), {}, false},
    };
}

namespace detail {

/// Which critical point a symbol denotes: +1 for +a, -1 for -a.
inline int symbol_sign(crit_symbol s, bool complex_critical, bool swapped) {
    int w = 1;
    switch (s) {
        case crit_symbol::c: w = 1; break;
        case crit_symbol::c_prime: w = -1; break;
        case crit_symbol::c_bar: w = complex_critical ? -1 : 1; break;
    }
    return swapped ? -w : w;
}

inline void validate(const itinerary_spec& spec) {
    if (spec.relations.empty()) throw malformed_spec("itinerary has no relations");
    for (const auto& r : spec.relations) {
        if (r.n < 1) throw malformed_spec("itinerary relation with n < 1");
    }
}

/// Residual f^n(source) - target with its derivatives in A and b.
struct relation_value {
    complex r, dA, db;
};

inline relation_value evaluate_relation(const monic_form& m, const itinerary_relation& rel, bool swapped) {
    const bool cc = m.sigma * m.A.real() < 0;
    const int ws = symbol_sign(rel.source, cc, swapped);
    const int wt = symbol_sign(rel.target, cc, swapped);
    const jet_run run = iterate_with_jet(m, ws, rel.n, {inf, 0.0});
    const jet_state target = critical_jet_seed(m, wt);
    return {run.state.z - target.z, run.state.dz_dA - target.dz_dA, run.state.dz_db - target.dz_db};
}

}  // namespace detail

struct verification_report {
    std::vector<double> residuals;
    double max_residual = 0.0;
    bool swapped = false;  ///< true when the c <-> c' assignment fit better
    bool pass = false;
};

/// Evaluates each relation at the record's (A, b = sqrt|B|) with sigma = sgn(B),
/// under both assignments of c and c', and reports the better one.
inline verification_report verify_center(const center_record& rec, double tol) {
    detail::validate(rec.spec);
    const monic_form m = monic_form::from_moduli(rec.A, rec.B);
    verification_report best;
    for (bool swapped : {false, true}) {
        verification_report r;
        r.swapped = swapped;
        for (const auto& rel : rec.spec.relations) {
            r.residuals.push_back(std::abs(detail::evaluate_relation(m, rel, swapped).r));
        }
        if (rec.spec.coincident) r.residuals.push_back(std::abs(rec.A));
        r.max_residual = *std::max_element(r.residuals.begin(), r.residuals.end());
        if (!swapped || r.max_residual < best.max_residual) best = r;
    }
    best.pass = best.max_residual < tol;
    return best;
}

struct refinement {
    double A = 0.0;
    double b = 0.0;
    double B = 0.0;
    int sigma = 1;
    double residual = 0.0;
    int iterations = 0;
    bool swapped = false;
};

namespace detail {

/// With complex critical points, conjugation exchanges +a and -a, so a relation
/// is redundant when its mirror image under that exchange is already present.
inline bool conjugate_relation(const itinerary_relation& a, const itinerary_relation& b) {
    return a.n == b.n && symbol_sign(a.source, true, false) == -symbol_sign(b.source, true, false) &&
           symbol_sign(a.target, true, false) == -symbol_sign(b.target, true, false);
}

}  // namespace detail

/// Newton in the real unknowns (A, b) on the itinerary relations. A complex
/// relation contributes its real and imaginary parts; a relation that is the
/// complex conjugate of an earlier one adds nothing. Steps are damped by
/// halving until the residual norm decreases.
inline refinement refine_center(const itinerary_spec& spec, double A0, double B0, int sigma = 0,
                                bool swapped = false) {
    detail::validate(spec);
    if (sigma == 0) sigma = B0 < 0 ? -1 : 1;
    const bool complex_critical = sigma * A0 < 0;

    std::vector<itinerary_relation> rels;
    for (const auto& r : spec.relations) {
        bool redundant = false;
        for (const auto& q : rels) {
            if (complex_critical && detail::conjugate_relation(q, r)) redundant = true;
        }
        if (!redundant) rels.push_back(r);
    }

    auto residual = [&](double A, double b, std::vector<double>& F, std::vector<std::array<double, 2>>& J) {
        F.clear();
        J.clear();
        const monic_form m{sigma, complex(A), complex(b)};
        const bool cc = sigma * A < 0;
        if (spec.coincident) {
            F.push_back(A);
            J.push_back({1.0, 0.0});
        }
        for (const auto& r : rels) {
            const auto v = detail::evaluate_relation(m, r, swapped);
            F.push_back(v.r.real());
            J.push_back({v.dA.real(), v.db.real()});
            if (cc && !spec.coincident) {
                F.push_back(v.r.imag());
                J.push_back({v.dA.imag(), v.db.imag()});
            }
        }
    };
    auto norm = [](const std::vector<double>& F) {
        double s = 0.0;
        for (double x : F) s += x * x;
        return std::sqrt(s);
    };

    double A = A0, b = std::sqrt(std::abs(B0));
    std::vector<double> F;
    std::vector<std::array<double, 2>> J;
    residual(A, b, F, J);
    if (F.size() > 2) throw overdetermined_spec("more than two independent real equations");
    if (F.size() < 2) throw malformed_spec("fewer than two real equations");

    refinement out;
    out.sigma = sigma;
    out.swapped = swapped;
    double fn = norm(F);
    int it = 0;
    for (; it < 100 && fn >= 1e-12; ++it) {
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (!std::isfinite(det) || det == 0.0) throw newton_divergence("singular Jacobian");
        const double dA = (F[0] * J[1][1] - F[1] * J[0][1]) / det;
        const double db = (J[0][0] * F[1] - J[1][0] * F[0]) / det;
        double t = 1.0;
        bool accepted = false;
        std::vector<double> Ft;
        std::vector<std::array<double, 2>> Jt;
        for (int h = 0; h <= 40; ++h, t *= 0.5) {
            residual(A - t * dA, b - t * db, Ft, Jt);
            if (Ft.size() == F.size() && norm(Ft) < fn) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (std::hypot(dA, db) < 1e-14 * std::max(1.0, std::hypot(A, b))) break;
            throw newton_divergence("no descent step after 40 halvings");
        }
        A -= t * dA;
        b -= t * db;
        F = Ft;
        J = Jt;
        fn = norm(F);
        if (std::hypot(t * dA, t * db) < 1e-14 * std::max(1.0, std::hypot(A, b))) {
            ++it;
            break;
        }
    }
    if (!(fn < 1e-10)) throw newton_divergence("residual did not converge");
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double jscale = std::max({std::abs(J[0][0]), std::abs(J[0][1]), std::abs(J[1][0]), std::abs(J[1][1]), 1.0});
    if (std::abs(det) < 1e-12 * jscale * jscale) throw newton_divergence("singular Jacobian at the solution");
    out.A = A;
    out.b = b;
    out.B = sigma * b * b;
    out.residual = fn;
    out.iterations = it;
    return out;
}

/// Refines a table record, using the c <-> c' assignment that verify_center
/// found to fit.
inline refinement refine_record(const center_record& rec) {
    const bool swapped = verify_center(rec, inf).swapped;
    return refine_center(rec.spec, rec.A, rec.B, rec.sigma(), swapped);
}

/// Multiplier of the cycle containing the orbit of each critical point.
inline std::array<double, 2> critical_cycle_multipliers(const monic_form& m, int pmax = 64) {
    std::array<double, 2> out{};
    const auto [c1, c2] = critical_points(m);
    int i = 0;
    for (complex c : {c1, c2}) {
        const auto cyc = detect_cycle(m, c, {64, pmax, 1e-8});
        out[i++] = cyc ? std::abs(cyc->multiplier) : inf;
    }
    return out;
}

inline nlohmann::json to_json(const center_record& rec) {
    nlohmann::json j;
    j["type"] = rec.label;
    j["A"] = rec.A;
    j["B"] = rec.B;
    j["spec"] = rec.spec.describe();
    if (rec.entropy) j["entropy"] = *rec.entropy;
    return j;
}

}  // namespace cubicmaps
