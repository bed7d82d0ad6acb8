#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "arcspect/errors.hpp"
#include "arcspect/parallel.hpp"
#include "arcspect/specfun.hpp"
#include "io.hpp"
#include "svg.hpp"

namespace arcspect::cli {

namespace {

const std::vector<std::string> kSweepKeys = {"e", "R", "n", "polarization", "sector", "N",
                                             "modes", "problems", "approach_step", "tolerances"};
const std::vector<std::string> kArcKeys = {"e", "R", "n", "polarization", "sector", "N", "modes",
                                           "problems", "approach_step", "tolerances", "husimi",
                                           "field", "fit_half_window"};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

fs::path out_path(const RunConfig& c, const std::string& name) { return fs::path(c.out_dir) / name; }

fs::path cache_dir(const RunConfig& c) {
    if (const char* env = std::getenv("CACHE_DIR"); env && *env) return env;
    return c.cache_dir;
}

std::string file_tag(const std::string& label, double e) {
    std::string tag = label;
    for (char& ch : tag)
        if (ch == ':') ch = '_';
    char buf[32];
    std::snprintf(buf, sizeof buf, "_e%.4f", e);
    return tag + buf;
}

void note(const std::string& message) { std::cerr << "arcspect: " << message << '\n'; }

bem::ProblemKind open_kind(const RunConfig& c) { return bem::OpenDielectric{c.n, c.polarization}; }

// ---- sweep ---------------------------------------------------------------

std::vector<spectrum::Trajectory> compute_sweep(const RunConfig& c) {
    if (c.modes.empty()) throw ConfigError("modes: need at least one mode");
    struct Task {
        bem::ProblemKind kind;
        spectrum::Provenance p;
    };
    std::vector<Task> tasks;
    if (c.open)
        for (const auto& m : c.modes) tasks.push_back({open_kind(c), m});
    if (c.closed)
        for (const auto& m : c.modes) tasks.push_back({bem::ClosedDirichlet{c.n}, m});
    if (tasks.empty()) throw ConfigError("problems: nothing to sweep");

    const auto pair = pair_config(c);
    std::vector<spectrum::Trajectory> out(tasks.size());
    parallel_for(tasks.size(), c.workers,
                 [&](std::size_t i) { out[i] = pipeline::track_mode(pair, tasks[i].kind, tasks[i].p); });
    return out;
}

std::vector<spectrum::Trajectory> cached_sweep(const RunConfig& c) {
    const Cache cache(cache_dir(c));
    const std::string key = Cache::key("sweep", canonical(c, kSweepKeys));
    if (auto hit = cache.load(key)) {
        note("sweep cache hit " + key.substr(0, 12));
        std::vector<spectrum::Trajectory> out;
        for (const auto& t : *hit) out.push_back(trajectory_from_json(t));
        return out;
    }
    note("sweeping " + std::to_string(c.e_grid.size()) + " eccentricities");
    auto out = compute_sweep(c);
    json payload = json::array();
    for (const auto& t : out) payload.push_back(trajectory_to_json(t));
    cache.store(key, "sweep", payload);
    return out;
}

std::string trajectory_svg(const std::vector<spectrum::Trajectory>& ts, const std::vector<double>& marks) {
    Panel re{"e", "Re kR", {}, marks};
    Panel im{"e", "Im kR", {}, marks};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        Series sr{ts[i].mode_label, {}, {}, kColors[i % 6], true};
        Series si = sr;
        for (const auto& p : ts[i].points) {
            sr.x.push_back(p.e);
            sr.y.push_back(p.resonance.k.real());
            si.x.push_back(p.e);
            si.y.push_back(p.resonance.k.imag());
        }
        re.series.push_back(sr);
        if (bem::is_open(ts[i].kind)) im.series.push_back(si);
    }
    std::vector<Panel> panels{re};
    if (!im.series.empty()) panels.push_back(im);
    return line_plot("Eigenvalue trajectories", panels);
}

void run_sweep(const RunConfig& c) {
    const auto ts = cached_sweep(c);
    atomic_write(out_path(c, "trajectories.csv"), trajectories_csv(ts));
    atomic_write(out_path(c, "trajectories.svg"), trajectory_svg(ts, {}));
}

// ---- solve ---------------------------------------------------------------

void run_solve(const RunConfig& c) {
    std::vector<spectrum::Trajectory> found;
    for (double e : c.e_grid) {
        const auto mesh = geometry::discretize(geometry::make_ellipse(e, c.scale), c.nodes);
        std::vector<std::pair<std::string, bem::ProblemKind>> kinds;
        if (c.open) kinds.emplace_back("open", open_kind(c));
        if (c.closed) kinds.emplace_back("closed", bem::ClosedDirichlet{c.n});
        for (const auto& [name, kind] : kinds) {
            const auto seeds = bem::scan_window(mesh, kind, c.window, c.scan, c.track.solve, c.workers);
            std::vector<bem::Resonance> list;
            for (const auto& s : seeds) {
                try {
                    auto r = bem::find_resonance(mesh, kind, s, c.track.solve);
                    const bool inside = r.mu >= c.window.re_min && r.mu <= c.window.re_max &&
                                        (!bem::is_open(kind) ||
                                         (r.k.imag() >= c.window.im_min && r.k.imag() <= c.window.im_max));
                    bool duplicate = false;
                    for (const auto& o : list) duplicate = duplicate || std::abs(o.k - r.k) < 1e-5;
                    if (inside && !duplicate) list.push_back(std::move(r));
                } catch (const NoResonance&) {
                } catch (const NotConverged&) {
                }
            }
            std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.mu < b.mu; });
            for (std::size_t i = 0; i < list.size(); ++i) {
                spectrum::Trajectory t;
                t.kind = kind;
                t.sector = c.sector;
                t.mode_label = name + ":" + std::string(bem::parity_name(c.sector)) + ":" + std::to_string(i + 1);
                t.points.push_back({e, list[i]});
                found.push_back(std::move(t));
            }
        }
    }
    note(std::to_string(found.size()) + " resonances found");
    atomic_write(out_path(c, "resonances.csv"), trajectories_csv(found));
}

// ---- field / husimi ------------------------------------------------------

std::vector<const spectrum::Trajectory*> open_trajectories(const std::vector<spectrum::Trajectory>& ts) {
    std::vector<const spectrum::Trajectory*> out;
    for (const auto& t : ts)
        if (bem::is_open(t.kind)) out.push_back(&t);
    if (out.empty()) throw ConfigError("problems: field and husimi need open trajectories");
    return out;
}

const bem::Resonance& at_e(const spectrum::Trajectory& t, double e) {
    for (const auto& p : t.points)
        if (std::abs(p.e - e) < 1e-9) return p.resonance;
    throw GridMismatch("eccentricity not on the sweep grid");
}

void run_field(const RunConfig& c) {
    const auto ts = cached_sweep(c);
    for (const auto* t : open_trajectories(ts)) {
        for (double e : c.at) {
            const auto mesh = geometry::discretize(geometry::make_ellipse(e, c.scale), c.nodes);
            const auto grid = bem::bounding_grid(mesh.shape, c.field_resolution, c.field_margin);
            bem::FieldOptions fo;
            fo.workers = c.workers;
            const auto& r = at_e(*t, e);
            const auto map = bem::evaluate_field(mesh, t->kind, r, grid, fo);
            double max_intensity = 0.0;
            const std::string tag = "field_" + file_tag(t->mode_label, e);
            atomic_write(out_path(c, tag + ".pgm"), field_pgm(map, max_intensity));
            json sidecar = {{"mode_label", t->mode_label},
                            {"e", e},
                            {"kR", {r.k.real(), r.k.imag()}},
                            {"max_intensity", max_intensity},
                            {"scale", "linear |psi|^2, 65535 = max_intensity"},
                            {"norm_scale", map.norm_scale},
                            {"grid", {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"y_min", grid.y_min},
                                      {"y_max", grid.y_max}, {"nx", grid.nx}, {"ny", grid.ny}}}};
            atomic_write(out_path(c, tag + ".json"), sidecar.dump(2) + "\n");
            atomic_write(out_path(c, tag + ".csv"), field_csv(map));
            note("wrote " + tag);
        }
    }
}

void run_husimi(const RunConfig& c) {
    const auto ts = cached_sweep(c);
    const double p_c = c.p_c > 0.0 ? c.p_c : 1.0 / c.n;
    for (const auto* t : open_trajectories(ts)) {
        for (double e : c.at) {
            const auto mesh = geometry::discretize(geometry::make_ellipse(e, c.scale), c.nodes);
            const auto map = phase_space::husimi_incident(mesh, at_e(*t, e), c.n, c.husimi);
            const auto band = phase_space::restrict_below_critical(map, p_c);
            const std::string tag = file_tag(t->mode_label, e);
            atomic_write(out_path(c, "husimi_" + tag + ".csv"), husimi_csv(map));
            atomic_write(out_path(c, "husimi_band_" + tag + ".csv"), husimi_csv(band.map));
            note("wrote husimi_" + tag);
        }
    }
}

// ---- arc -----------------------------------------------------------------

std::vector<double> numbers(const json& a) {
    std::vector<double> out;
    for (const auto& v : a) out.push_back(v.is_number() ? v.get<double>() : std::nan(""));
    return out;
}

void run_arc(const RunConfig& c) {
    if (c.modes.size() != 2) throw ConfigError("modes: arc needs exactly two modes");
    if (!c.open || !c.closed) throw ConfigError("problems: arc needs both open and closed");
    if (c.e_grid.size() < 3) throw ConfigError("e: arc needs at least 3 grid points");

    const auto ts = cached_sweep(c);
    const Cache cache(cache_dir(c));
    const std::string key = Cache::key("arc", canonical(c, kArcKeys));
    json report;
    if (auto hit = cache.load(key)) {
        note("arc cache hit " + key.substr(0, 12));
        report = *hit;
    } else {
        pipeline::PairSweep sweep{ts[0], ts[1], ts[2], ts[3]};
        const auto result = pipeline::analyze_pair(pair_config(c), sweep, analysis_config(c),
                                                   [](std::size_t done, std::size_t total) {
                                                       note("analysis " + std::to_string(done) + "/" +
                                                            std::to_string(total));
                                                   });
        report = report_to_json(result);
        report["mode_labels"] = {ts[0].mode_label, ts[1].mode_label};
        cache.store(key, "arc", report);
    }

    atomic_write(out_path(c, "arc_report.json"), report.dump(2) + "\n");
    atomic_write(out_path(c, "trajectories.csv"), trajectories_csv(ts));
    const double e_c = report["arc"]["e_c"].get<double>();
    atomic_write(out_path(c, "trajectories.svg"), trajectory_svg(ts, {e_c}));

    const auto e = numbers(report["e"]);
    Panel overlap{"e", "overlap / d_B", {}, {e_c}};
    overlap.series.push_back({"overlap", e, numbers(report["overlap"]), kColors[0], true});
    overlap.series.push_back({"d_B", e, numbers(report["d_B"]), kColors[1], true});
    overlap.series.push_back({"|c-product|", e, numbers(report["c_product_abs"]), kColors[3], true});
    atomic_write(out_path(c, "tradeoff.svg"), line_plot("Overlap and Bhattacharyya distance", {overlap}));

    Panel lamb{"e", "kR", {}, {e_c}};
    lamb.series.push_back({"delta mu", e, numbers(report["delta_mu"]), kColors[0], true});
    lamb.series.push_back({"delta L", e, numbers(report["delta_L"]), kColors[1], true});
    atomic_write(out_path(c, "lamb.svg"), line_plot("Real-part difference and Lamb-shift difference", {lamb}));

    std::cout << "e_C = " << format_double(e_c) << ", gap = " << format_double(report["arc"]["gap_min"].get<double>())
              << '\n';
}

// ---- toy -----------------------------------------------------------------

std::complex<double> complex_of(const json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(field + ": expected a number or [re, im]");
}

void run_toy(const RunConfig& c) {
    const json& toy = c.toy;
    const json defaults = default_document()["toy"];
    const json& det = toy.contains("detuning") ? toy["detuning"] : defaults["detuning"];
    double start = 0.0, stop = 0.0;
    int steps = 0;
    try {
        start = det.at("start").get<double>();
        stop = det.at("stop").get<double>();
        steps = det.at("steps").get<int>();
    } catch (const json::exception&) {
        throw ConfigError("toy.detuning: expected {start, stop, steps}");
    }
    if (steps < 2 || steps > 1000000 || !(stop > start)) throw ConfigError("toy.detuning: need steps >= 2, stop > start");
    const auto g11 = complex_of(toy.contains("gamma11") ? toy["gamma11"] : defaults["gamma11"], "toy.gamma11");
    const auto g22 = complex_of(toy.contains("gamma22") ? toy["gamma22"] : defaults["gamma22"], "toy.gamma22");
    if (g11.imag() > 0.0 || g22.imag() > 0.0) throw ConfigError("toy: Im(gamma_jj) must be <= 0");
    const json& runs = toy.contains("runs") ? toy["runs"] : defaults["runs"];
    if (!runs.is_object() || runs.empty()) throw ConfigError("toy.runs: expected {name: gamma_prime}");

    json summary = json::object();
    for (const auto& [name, value] : runs.items()) {
        const auto gp = complex_of(value, "toy.runs." + name);
        std::string csv = "detuning,re_nu_plus,im_nu_plus,re_nu_minus,im_nu_minus,re_gap,im_gap\n";
        double min_re = INFINITY, min_im = INFINITY;
        for (int i = 0; i < steps; ++i) {
            const double x = start + (stop - start) * i / (steps - 1);
            const toymodel::ToyModel m{x / 2.0, -x / 2.0, g11, g22, gp};
            const auto s = toymodel::eigensystem(m);
            const double re_gap = std::abs(s.nu_plus.real() - s.nu_minus.real());
            const double im_gap = std::abs(s.nu_plus.imag() - s.nu_minus.imag());
            min_re = std::min(min_re, re_gap);
            min_im = std::min(min_im, im_gap);
            csv += format_double(x) + ',' + format_double(s.nu_plus.real()) + ',' + format_double(s.nu_plus.imag()) +
                   ',' + format_double(s.nu_minus.real()) + ',' + format_double(s.nu_minus.imag()) + ',' +
                   format_double(re_gap) + ',' + format_double(im_gap) + '\n';
        }
        atomic_write(out_path(c, "toy_" + name + ".csv"), csv);
        // Gaps at zero detuning, where the uncoupled levels cross.
        const auto centre = toymodel::eigensystem({0.0, 0.0, g11, g22, gp});
        std::string regime = "none";
        if (gp != 0.0) regime = toymodel::regime_name(toymodel::classify_regime(gp, 1e-9));
        summary[name] = {{"gamma_prime", {gp.real(), gp.imag()}},
                         {"regime", regime},
                         {"min_re_gap", min_re},
                         {"min_im_gap", min_im},
                         {"centre_re_gap", std::abs(centre.nu_plus.real() - centre.nu_minus.real())},
                         {"centre_im_gap", std::abs(centre.nu_plus.imag() - centre.nu_minus.imag())},
                         {"real_parts_cross", min_re < 1e-9},
                         {"imag_parts_cross", min_im < 1e-9}};
    }
    atomic_write(out_path(c, "toy_summary.json"), summary.dump(2) + "\n");
}

// ---- oracle --------------------------------------------------------------

void run_oracle(const RunConfig& c) {
    std::string csv = "branch,re_kR,im_kR,residual\n";
    for (int b = 1; b <= c.oracle_branches; ++b) {
        const auto k = bem::circle_resonance(c.n, c.oracle_m, b, c.polarization);
        const double residual = bem::circle_residual(c.n, c.oracle_m, k, c.polarization);
        csv += std::to_string(b) + ',' + format_double(k.real()) + ',' + format_double(k.imag()) + ',' +
               format_double(residual) + '\n';
    }
    std::string closed = "l,j_ml,kR\n";
    for (int l = 1; l <= c.oracle_branches; ++l) {
        const double j = specfun::bessel_j_zero(c.oracle_m, l);
        closed += std::to_string(l) + ',' + format_double(j) + ',' + format_double(j / c.n) + '\n';
    }
    const std::string m = std::to_string(c.oracle_m);
    atomic_write(out_path(c, "oracle_open_m" + m + ".csv"), csv);
    atomic_write(out_path(c, "oracle_closed_m" + m + ".csv"), closed);
    std::cout << csv;
}

}  // namespace

void execute(const std::string& command, const RunConfig& config) {
    atomic_write(out_path(config, "config.json"), config.document.dump(2) + "\n");
    if (command == "solve") run_solve(config);
    else if (command == "sweep") run_sweep(config);
    else if (command == "field") run_field(config);
    else if (command == "husimi") run_husimi(config);
    else if (command == "arc") run_arc(config);
    else if (command == "toy") run_toy(config);
    else if (command == "oracle") run_oracle(config);
    else throw ConfigError("unknown command '" + command + "'");
}

void write_error_record(const std::string& out_dir, const std::string& command, const std::string& kind,
                        const std::string& message, int exit_code) {
    const json record = {{"command", command}, {"error", kind}, {"message", message}, {"exit_code", exit_code}};
    try {
        atomic_write(fs::path(out_dir) / "error.json", record.dump(2) + "\n");
    } catch (const std::exception&) {
        // the record is best effort; the exit code still reports the failure
    }
}

}  // namespace arcspect::cli
