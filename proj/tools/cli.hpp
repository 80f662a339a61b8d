#pragma once

// Command-line front end. run() takes the arguments without the program name
// and returns the process exit code: 0 success, 1 usage error, 2 computation
// failure. Diagnostics go to `err`, results to `out` or to files.

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubicmaps/cubicmaps.hpp"

namespace cubicmaps::cli {

namespace detail {

inline nlohmann::json complex_json(complex z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::json::array({z.real(), z.imag()});
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        atomic_write(path, text);
    }
}

inline window to_window(const std::vector<double>& w) { return {w[0], w[1], w[2], w[3]}; }

inline void check_window(const window& w) {
    if (!(w.xmax > w.xmin) || !(w.ymax > w.ymin)) throw std::invalid_argument("degenerate window");
}

inline std::filesystem::path sidecar_path(const std::string& out) {
    return std::filesystem::path(out).replace_extension(".json");
}

inline void add_window(CLI::App* sc, std::vector<double>& w, const std::string& what) {
    sc->add_option("--window", w, what + " as xmin xmax ymin ymax")->expected(4)->required();
}

inline void add_threads(CLI::App* sc, unsigned& threads) {
    sc->add_option("--threads", threads, "worker threads (0 = CUBICMAPS_THREADS or all cores)");
}

// --- subcommands -----------------------------------------------------------

struct render_args {
    std::string fam = "cubic-AB";
    std::vector<double> win;
    std::vector<int> size{288, 225};
    raster_config cfg;
    std::string out;
};

inline void setup_render(CLI::App& app, render_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("render", "render a parameter-plane picture to PGM plus a JSON sidecar");
    std::vector<std::string> names;
    for (const auto& [f, n] : family_names()) names.push_back(n);
    sc->add_option("--family", a.fam, "parameter family")->check(CLI::IsMember(names))->capture_default_str();
    add_window(sc, a.win, "parameter window");
    sc->add_option("--size", a.size, "image width and height in pixels")->expected(2)->capture_default_str();
    sc->add_option("--nmax", a.cfg.nmax, "iteration budget per critical orbit")->capture_default_str();
    sc->add_option("--pmax", a.cfg.pmax, "largest period searched")->capture_default_str();
    sc->add_option("--period-tol", a.cfg.period_tol, "cycle closing tolerance")->capture_default_str();
    sc->add_option("--seed", a.cfg.seed, "random seed (henon family)")->capture_default_str();
    sc->add_option("--henon-trials", a.cfg.henon_trials, "random starts per pixel (henon family)")->capture_default_str();
    sc->add_option("--circle-iterations", a.cfg.circle_iterations, "iterations per pixel (circle family)")
        ->capture_default_str();
    add_threads(sc, a.cfg.threads);
    sc->add_option("--out", a.out, "output PGM path; the sidecar replaces the extension with .json")->required();
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            raster_config cfg = a.cfg;
            cfg.fam = parse_family(a.fam);
            cfg.win = to_window(a.win);
            cfg.width = a.size[0];
            cfg.height = a.size[1];
            cfg.validate();
            const raster_image img = render(cfg);
            atomic_write(a.out, pgm_bytes(img.width, img.height, img.pixels));
            const auto side = sidecar_path(a.out);
            atomic_write(side, json_text(img.metadata));
            out << a.out << "\n" << side.string();
            return 0;
        };
    });
}

struct classify_args {
    double A = 0.0, B = 0.0;
    int sigma = 0;
};

inline void setup_classify(CLI::App& app, classify_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("classify", "region class R0..R3 of a real cubic from its moduli (A, B)");
    sc->add_option("--A", a.A, "moduli coordinate A")->required();
    sc->add_option("--B", a.B, "moduli coordinate B")->required();
    sc->add_option("--sigma", a.sigma, "leading sign +1 or -1 (default: sign of B)")
        ->check(CLI::IsMember({-1, 0, 1}));
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            out << json_text(classification_report(a.A, a.B, a.sigma));
            return 0;
        };
    });
}

struct entropy_args {
    double A = 0.0;
    std::optional<double> B, b;
    int sigma = 0;
    lap_options opt;
};

inline void setup_entropy(CLI::App& app, entropy_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("entropy", "growth number s = exp(h) of a real cubic from lap counts");
    sc->add_option("--A", a.A, "coefficient A")->required();
    auto* ob = sc->add_option("--B", a.B, "moduli coordinate B (b = sqrt|B|, sigma = sign of B)");
    auto* oc = sc->add_option("--b", a.b, "constant term b of sigma x^3 - 3Ax + b");
    ob->excludes(oc);
    oc->excludes(ob);
    sc->add_option("--sigma", a.sigma, "leading sign +1 or -1")->check(CLI::IsMember({-1, 0, 1}));
    sc->add_option("--kmax", a.opt.kmax, "largest iterate examined")->capture_default_str();
    sc->add_option("--cap", a.opt.cap, "turning-point budget")->capture_default_str();
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            if (!a.B && !a.b) throw std::invalid_argument("entropy: one of --B or --b is required");
            const monic_form m = a.B ? monic_form::from_moduli(a.A, *a.B, a.sigma)
                                     : monic_form{a.sigma == 0 ? 1 : a.sigma, complex(a.A), complex(*a.b)};
            const entropy_estimate e = estimate_entropy(m, a.opt);
            nlohmann::json j;
            j["sigma"] = m.sigma;
            j["A"] = m.A.real();
            j["b"] = m.b.real();
            j["B"] = m.moduli().B.real();
            j["k"] = e.k;
            j["lap"] = e.lap;
            j["h"] = e.h;
            j["h_upper"] = e.h_upper;
            j["s"] = e.s;
            j["converged"] = e.converged;
            j["cap_exceeded"] = e.cap_exceeded;
            out << json_text(j);
            return 0;
        };
    });
}

struct entropy_grid_args {
    std::string plane = "Ab";
    std::vector<double> win;
    std::vector<int> size{64, 64};
    lap_options opt;
    unsigned threads = 0;
    std::string out;
};

inline void setup_entropy_grid(CLI::App& app, entropy_grid_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("entropy-grid", "growth number s over a grid, as CSV or raw float64 plus sidecar");
    sc->add_option("--plane", a.plane, "Ab: x^3-3Ax+b, Abp: -x^3-3Ax+b', AB: moduli plane")
        ->check(CLI::IsMember({"Ab", "Abp", "AB"}))
        ->capture_default_str();
    add_window(sc, a.win, "grid window");
    sc->add_option("--size", a.size, "grid points nx ny")->expected(2)->capture_default_str();
    sc->add_option("--kmax", a.opt.kmax, "largest iterate examined")->capture_default_str();
    sc->add_option("--cap", a.opt.cap, "turning-point budget")->capture_default_str();
    add_threads(sc, a.threads);
    sc->add_option("--out", a.out, "output path: .csv for text, .bin for raw float64 (sidecar .json)")->required();
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            const window w = to_window(a.win);
            check_window(w);
            const entropy_plane plane = parse_entropy_plane(a.plane);
            const entropy_grid_result g = entropy_grid(plane, w, a.size[0], a.size[1], a.opt, a.threads);
            if (std::filesystem::path(a.out).extension() == ".bin") {
                std::string bytes(g.s.size() * sizeof(double), '\0');
                std::memcpy(bytes.data(), g.s.data(), bytes.size());
                atomic_write(a.out, bytes);
                nlohmann::json side;
                side["window"] = a.win;
                side["nx"] = g.nx;
                side["ny"] = g.ny;
                side["plane"] = a.plane;
                side["kmax"] = a.opt.kmax;
                side["layout"] = "row-major float64, top row first";
                atomic_write(sidecar_path(a.out), json_text(side));
            } else {
                std::string csv = plane == entropy_plane::AB ? "A,B,s,converged\n" : "A,b,s,converged\n";
                for (int j = 0; j < g.ny; ++j) {
                    const double y = w.y_at(j, g.ny);
                    for (int i = 0; i < g.nx; ++i) {
                        const std::size_t k = static_cast<std::size_t>(j) * g.nx + i;
                        csv += format_double(w.x_at(i, g.nx)) + "," + format_double(y) + "," + format_double(g.s[k]) +
                               "," + (g.converged[k] ? "1" : "0") + "\n";
                    }
                }
                atomic_write(a.out, csv);
            }
            out << a.out << "\n";
            return 0;
        };
    });
}

struct curves_args {
    std::vector<std::string> names{"per1", "per2", "preper11", "preper12+", "preper12-"};
    std::vector<double> mu{1.0, -1.0};
    std::vector<double> range{-1.2, 1.2};
    int samples = 401;
    std::string out;
};

inline void setup_curves(CLI::App& app, curves_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("curves", "sample the bifurcation curves B(A) as CSV curve,A,B");
    sc->add_option("--curve", a.names, "curves to sample")
        ->check(CLI::IsMember({"per1", "per2", "preper11", "preper12+", "preper12-"}))
        ->capture_default_str();
    sc->add_option("--mu", a.mu, "multipliers for per1")->capture_default_str();
    sc->add_option("--A-range", a.range, "sampled A interval")->expected(2)->capture_default_str();
    sc->add_option("--samples", a.samples, "samples per curve")->check(CLI::Range(2, 10000000))->capture_default_str();
    sc->add_option("--out", a.out, "output CSV path (default: standard output)");
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            if (!(a.range[1] > a.range[0])) throw std::invalid_argument("curves: empty A range");
            std::vector<curve_id> ids;
            for (const auto& n : a.names) {
                if (n == "per1") {
                    for (double mu : a.mu) ids.push_back(curve_id::per1(mu));
                } else if (n == "per2") {
                    ids.push_back(curve_id::per2_saddle());
                } else if (n == "preper11") {
                    ids.push_back(curve_id::preper11());
                } else {
                    ids.push_back(curve_id::preper12(n.back() == '+' ? 1 : -1));
                }
            }
            std::string csv = "curve,A,B\n";
            for (const auto& id : ids) {
                for (int i = 0; i < a.samples; ++i) {
                    const double A = a.range[0] + (a.range[1] - a.range[0]) * i / (a.samples - 1);
                    if (id.kind == curve_kind::preper12 && A > 0) continue;
                    for (double B : curve_B(id, A)) csv += id.name() + "," + format_double(A) + "," + format_double(B) + "\n";
                }
            }
            emit(csv, a.out, out);
            return 0;
        };
    });
}

struct centers_args {
    bool verify = false, refine = false, entropy = false;
    double tol = 2e-3;
    std::string out;
};

inline void setup_centers(CLI::App& app, centers_args& a, std::function<int()>& action, std::ostream& out,
                          std::ostream& err) {
    auto* sc = app.add_subcommand("centers", "the table of hyperbolic-component centers, verified and refined");
    sc->add_flag("--verify", a.verify, "evaluate each itinerary relation at the tabulated point");
    sc->add_flag("--refine", a.refine, "Newton-refine each center");
    sc->add_flag("--entropy", a.entropy, "compute the entropy at each refined (or tabulated) center");
    sc->add_option("--tol", a.tol, "verification tolerance")->capture_default_str();
    sc->add_option("--out", a.out, "output JSON path (default: standard output)");
    sc->callback([&a, &action, &out, &err] {
        action = [&a, &out, &err] {
            nlohmann::json rows = nlohmann::json::array();
            int failures = 0, passed = 0;
            const auto table = builtin_center_table();
            for (const auto& rec : table) {
                nlohmann::json j = to_json(rec);
                double A = rec.A, B = rec.B;
                if (a.verify) {
                    const verification_report v = verify_center(rec, a.tol);
                    j["residuals"] = v.residuals;
                    j["pass"] = v.pass;
                    j["swapped"] = v.swapped;
                    if (v.pass) {
                        ++passed;
                    } else {
                        ++failures;
                        err << "verify failed: " << rec.label << " max residual " << format_double(v.max_residual) << "\n";
                    }
                }
                if (a.refine) {
                    try {
                        const refinement r = refine_record(rec);
                        A = r.A;
                        B = r.B;
                        const auto mult = critical_cycle_multipliers(monic_form{r.sigma, complex(r.A), complex(r.b)});
                        j["refined"] = {{"A", r.A},
                                        {"B", r.B},
                                        {"residual", r.residual},
                                        {"iterations", r.iterations},
                                        {"multipliers", {mult[0], mult[1]}}};
                    } catch (const newton_divergence& e) {
                        ++failures;
                        err << "refine failed: " << rec.label << ": " << e.what() << "\n";
                        j["refined"] = nullptr;
                    }
                }
                if (a.entropy && rec.entropy && A * B >= 0) {
                    const entropy_estimate e = estimate_entropy(monic_form::from_moduli(A, B));
                    j["entropy"] = {{"expected", *rec.entropy}, {"computed", e.h}};
                } else if (rec.entropy) {
                    j["entropy"] = {{"expected", *rec.entropy}, {"computed", nullptr}};
                }
                rows.push_back(std::move(j));
            }
            emit(json_text(rows), a.out, out);
            if (a.verify) err << passed << "/" << table.size() << " rows pass at tol " << format_double(a.tol) << "\n";
            return failures ? 2 : 0;
        };
    });
}

struct henon_args {
    std::optional<double> alpha, beta;
    std::vector<double> win;
    std::vector<int> size{21, 21};
    henon_options opt;
    unsigned threads = 0;
    std::string out;
};

inline void setup_henon(CLI::App& app, henon_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("henon-search", "random search for an attracting periodic orbit of the Henon map");
    auto* oa = sc->add_option("--alpha", a.alpha, "parameter alpha of (x, y) -> (y, y^2 - alpha - beta x)");
    auto* ob = sc->add_option("--beta", a.beta, "parameter beta");
    auto* ow = sc->add_option("--window", a.win, "search every grid point of xmin xmax ymin ymax in (alpha, beta)")
                   ->expected(4);
    oa->needs(ob);
    ob->needs(oa);
    oa->excludes(ow);
    ow->excludes(oa);
    sc->add_option("--size", a.size, "grid points for --window")->expected(2)->capture_default_str();
    sc->add_option("--trials", a.opt.trials, "random initial conditions")->capture_default_str();
    sc->add_option("--nmax", a.opt.nmax, "iterations per trial")->capture_default_str();
    sc->add_option("--pmax", a.opt.pmax, "largest period searched")->capture_default_str();
    sc->add_option("--seed", a.opt.seed, "random seed")->capture_default_str();
    add_threads(sc, a.threads);
    sc->add_option("--out", a.out, "output JSON path (default: standard output)");
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            if (a.alpha) {
                emit(json_text(to_json(henon_search(*a.alpha, *a.beta, a.opt))), a.out, out);
                return 0;
            }
            if (a.win.empty()) throw std::invalid_argument("henon-search: give --alpha/--beta or --window");
            const window w = to_window(a.win);
            check_window(w);
            const int nx = a.size[0], ny = a.size[1];
            if (nx < 1 || ny < 1) throw std::invalid_argument("henon-search: empty grid");
            std::vector<henon_result> res(static_cast<std::size_t>(nx) * ny);
            parallel_rows(ny, resolve_threads(a.threads), [&](int j) {
                for (int i = 0; i < nx; ++i) res[static_cast<std::size_t>(j) * nx + i] = henon_search(w.x_at(i, nx), w.y_at(j, ny), a.opt);
            });
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : res) arr.push_back(to_json(r));
            emit(json_text(arr), a.out, out);
            return 0;
        };
    });
}

struct tongues_args {
    std::vector<double> win;
    std::vector<int> size{128, 128};
    rotation_options opt{2000, 64, 1e-10};
    unsigned threads = 0;
    std::string out;
};

inline void setup_tongues(CLI::App& app, tongues_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("tongues", "rotation numbers of t -> t + c + k sin(2 pi t) over a (c, k) grid as CSV");
    add_window(sc, a.win, "(c, k) window");
    sc->add_option("--size", a.size, "grid points nc nk")->expected(2)->capture_default_str();
    sc->add_option("--iterations", a.opt.n, "iterations per point")->capture_default_str();
    sc->add_option("--qmax", a.opt.qmax, "largest locking denominator tested")->capture_default_str();
    add_threads(sc, a.threads);
    sc->add_option("--out", a.out, "output CSV path (default: standard output)");
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            const window w = to_window(a.win);
            check_window(w);
            const int nx = a.size[0], ny = a.size[1];
            if (nx < 1 || ny < 1) throw std::invalid_argument("tongues: empty grid");
            std::vector<rotation_estimate> res(static_cast<std::size_t>(nx) * ny);
            parallel_rows(ny, resolve_threads(a.threads), [&](int j) {
                for (int i = 0; i < nx; ++i) {
                    res[static_cast<std::size_t>(j) * nx + i] = circle_rotation_number(w.x_at(i, nx), w.y_at(j, ny), a.opt);
                }
            });
            std::string csv = "c,k,rho,locked,p,q\n";
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < nx; ++i) {
                    const auto& r = res[static_cast<std::size_t>(j) * nx + i];
                    csv += format_double(w.x_at(i, nx)) + "," + format_double(w.y_at(j, ny)) + "," + format_double(r.rho) +
                           "," + (r.locked ? "1" : "0") + "," + std::to_string(r.p) + "," + std::to_string(r.q) + "\n";
                }
            }
            emit(csv, a.out, out);
            return 0;
        };
    });
}

struct normalize_args {
    std::vector<double> re, im;
};

inline void setup_normalize(CLI::App& app, normalize_args& a, std::function<int()>& action, std::ostream& out) {
    auto* sc = app.add_subcommand("normalize", "normal form sigma x^3 - 3Ax + b and moduli (A, B) of a cubic");
    sc->add_option("--coeffs", a.re, "coefficients c3 c2 c1 c0 of c3 x^3 + c2 x^2 + c1 x + c0")->expected(4)->required();
    sc->add_option("--imag", a.im, "imaginary parts of the four coefficients")->expected(4);
    sc->callback([&a, &action, &out] {
        action = [&a, &out] {
            std::array<complex, 4> c;
            for (int i = 0; i < 4; ++i) c[i] = complex(a.re[i], a.im.empty() ? 0.0 : a.im[i]);
            const auto [p, m] = normalize(general_cubic{c[0], c[1], c[2], c[3]});
            nlohmann::json j;
            j["sigma"] = m.sigma;
            j["A"] = complex_json(p.A);
            j["B"] = complex_json(p.B);
            j["b"] = complex_json(m.b);
            out << json_text(j);
            return 0;
        };
    });
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parameter-space dynamics of real cubic maps and their quadratic prototypes", "cubicmaps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version));

    std::function<int()> action;
    detail::render_args render_a;
    detail::classify_args classify_a;
    detail::entropy_args entropy_a;
    detail::entropy_grid_args grid_a;
    detail::curves_args curves_a;
    detail::centers_args centers_a;
    detail::henon_args henon_a;
    detail::tongues_args tongues_a;
    detail::normalize_args normalize_a;
    detail::setup_render(app, render_a, action, out);
    detail::setup_classify(app, classify_a, action, out);
    detail::setup_entropy(app, entropy_a, action, out);
    detail::setup_entropy_grid(app, grid_a, action, out);
    detail::setup_curves(app, curves_a, action, out);
    detail::setup_centers(app, centers_a, action, out, err);
    detail::setup_henon(app, henon_a, action, out);
    detail::setup_tongues(app, tongues_a, action, out);
    detail::setup_normalize(app, normalize_a, action, out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << library_version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run with --help for usage\n";
        return 1;
    }

    try {
        return action ? action() : 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cubicmaps::cli
