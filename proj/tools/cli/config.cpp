#include "config.hpp"

#include <cmath>
#include <fstream>

#include "arcspect/errors.hpp"

namespace arcspect::cli {

json default_document() {
    return json::parse(R"({
      "e": 0.0,
      "R": 1.0,
      "n": 3.3,
      "polarization": "TM",
      "sector": "eo",
      "N": 300,
      "modes": [[7, 3], [3, 4]],
      "problems": ["open", "closed"],
      "approach_step": 0.05,
      "window": {"re_min": 4.0, "re_max": 5.5, "im_min": -0.2, "im_max": 0.0},
      "scan": {"nr": 0, "ni": 0},
      "tolerances": {"acceptance": 1e-4, "tolerance": 1e-6, "initial_step": 0.005,
                     "max_evaluations": 800, "max_jump": 0.15, "min_overlap": 0.5,
                     "min_step": 1e-4},
      "husimi": {"n_s": 128, "n_p": 128, "sigma": 0.0, "p_c": 0.0},
      "field": {"resolution": 301, "margin": 0.5, "at": null},
      "fit_half_window": 0.015,
      "m": 7,
      "branches": 4,
      "toy": {"detuning": {"start": -1.0, "stop": 1.0, "steps": 201},
              "gamma11": [0.0, -0.1], "gamma22": [0.0, -0.3],
              "runs": {"toy": [0.3, 0.0]}},
      "out": "out",
      "cache_dir": ".arcspect-cache",
      "workers": 1
    })");
}

json preset_document(const std::string& name) {
    if (name == "arc-paper") {
        return json::parse(R"({
          "e": {"start": 0.70, "stop": 0.81, "step": 0.005},
          "n": 3.3,
          "polarization": "TE",
          "sector": "eo",
          "N": 300,
          "modes": [[7, 3], [3, 4]],
          "window": {"re_min": 4.7, "re_max": 5.4, "im_min": -0.2, "im_max": 0.0},
          "field": {"at": [0.78]}
        })");
    }
    if (name == "regimes") {
        return json::parse(R"({
          "toy": {"detuning": {"start": -2.0, "stop": 2.0, "steps": 401},
                  "gamma11": [0.0, -0.1], "gamma22": [0.0, -0.12],
                  "runs": {"toy": null, "real": [0.3, 0.0], "imaginary": [0.0, 0.3], "complex": [0.3, 0.3]}}
        })");
    }
    throw ConfigError("unknown preset '" + name + "'");
}

namespace {

void set_dotted(json& doc, const std::string& key, json value) {
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        json& child = (*node)[part];
        if (!child.is_object()) child = json::object();
        node = &child;
        start = dot + 1;
    }
}

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
}

double number(const json& doc, const std::string& field) {
    if (!doc.is_number()) bad(field, "expected a number");
    const double v = doc.get<double>();
    if (!std::isfinite(v)) bad(field, "must be finite");
    return v;
}

int integer(const json& doc, const std::string& field) {
    if (doc.is_number_integer()) return doc.get<int>();
    if (doc.is_number_float()) {
        const double v = doc.get<double>();
        if (v == std::floor(v) && std::abs(v) < 1e9) return static_cast<int>(v);
    }
    bad(field, "expected an integer");
}

void check_keys(const json& doc, const json& schema, const std::string& prefix) {
    if (!doc.is_object()) bad(prefix.empty() ? "config" : prefix, "expected an object");
    for (const auto& [key, value] : doc.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (!schema.contains(key)) bad(name, "unknown field");
        // objects with fixed members are checked recursively; free-form ones are not
        if (schema[key].is_object() && key != "e" && key != "runs" && key != "detuning")
            check_keys(value, schema[key], name);
    }
}

double round_grid(double x) { return std::round(x * 1e12) / 1e12; }

std::vector<double> parse_e(const json& e) {
    std::vector<double> grid;
    if (e.is_number()) {
        grid.push_back(number(e, "e"));
    } else if (e.is_array()) {
        for (const auto& v : e) grid.push_back(number(v, "e[]"));
    } else if (e.is_object()) {
        for (const char* k : {"start", "stop", "step"})
            if (!e.contains(k)) bad("e", std::string("grid needs '") + k + "'");
        for (const auto& [k, v] : e.items())
            if (k != "start" && k != "stop" && k != "step") bad("e." + k, "unknown field");
        const double start = number(e["start"], "e.start");
        const double stop = number(e["stop"], "e.stop");
        const double step = number(e["step"], "e.step");
        if (!(step > 0.0) || stop < start) bad("e", "grid needs step > 0 and stop >= start");
        const long count = std::lround((stop - start) / step) + 1;
        if (count > 100000) bad("e", "grid too large");
        for (long i = 0; i < count; ++i) grid.push_back(round_grid(start + i * step));
    } else {
        bad("e", "expected a number, an array or {start, stop, step}");
    }
    if (grid.empty()) bad("e", "empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] < 1.0)) bad("e", "eccentricities must lie in [0, 1)");
        if (i > 0 && !(grid[i] > grid[i - 1])) bad("e", "grid must increase strictly");
    }
    return grid;
}

}  // namespace

json merge_document(const std::optional<std::string>& preset, const std::optional<std::string>& path,
                    const std::vector<std::pair<std::string, std::string>>& overrides) {
    json doc = default_document();
    if (preset) doc.merge_patch(preset_document(*preset));
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot read config file '" + *path + "'");
        json file;
        try {
            file = json::parse(in);
        } catch (const json::parse_error& err) {
            throw ConfigError("config file '" + *path + "' is not valid JSON: " + err.what());
        }
        if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
        check_keys(file, default_document(), "");
        doc.merge_patch(file);
    }
    for (const auto& [key, text] : overrides) {
        json value;
        try {
            value = json::parse(text);
        } catch (const json::parse_error&) {
            value = text;
        }
        set_dotted(doc, key, std::move(value));
    }
    return doc;
}

RunConfig parse_config(const json& doc) {
    check_keys(doc, default_document(), "");
    const json defaults = default_document();
    auto get = [&](const std::string& key) -> const json& {
        return doc.contains(key) ? doc.at(key) : defaults.at(key);
    };
    auto sub = [&](const std::string& key, const std::string& member) -> const json& {
        const json& block = get(key);
        return block.contains(member) ? block.at(member) : defaults.at(key).at(member);
    };

    RunConfig c;
    c.e_grid = parse_e(get("e"));
    c.scale = number(get("R"), "R");
    if (!(c.scale > 0.0)) bad("R", "must be positive");
    c.n = number(get("n"), "n");
    if (!(c.n > 1.0)) bad("n", "must exceed 1");
    if (!get("polarization").is_string()) bad("polarization", "expected \"TM\" or \"TE\"");
    try {
        c.polarization = bem::polarization_from_name(get("polarization").get<std::string>());
        if (!get("sector").is_string()) bad("sector", "expected a parity name");
        c.sector = bem::parity_from_name(get("sector").get<std::string>());
    } catch (const DomainError& err) {
        bad("polarization/sector", err.what());
    }
    c.nodes = integer(get("N"), "N");
    if (c.nodes < 16 || c.nodes % 4 != 0) bad("N", "must be a multiple of 4, at least 16");

    if (!get("modes").is_array()) bad("modes", "expected [[m, l], ...]");
    for (const auto& mode : get("modes")) {
        if (!mode.is_array() || mode.size() != 2) bad("modes", "each mode is [m, l]");
        const int m = integer(mode[0], "modes[].m");
        const int l = integer(mode[1], "modes[].l");
        if (m < 0 || l < 1) bad("modes", "need m >= 0 and l >= 1");
        c.modes.push_back({m, l});
    }
    if (!get("problems").is_array()) bad("problems", "expected a list of \"open\"/\"closed\"");
    c.open = c.closed = false;
    for (const auto& p : get("problems")) {
        if (p == "open") c.open = true;
        else if (p == "closed") c.closed = true;
        else bad("problems", "entries must be \"open\" or \"closed\"");
    }
    c.approach_step = number(get("approach_step"), "approach_step");
    if (!(c.approach_step > 0.0 && c.approach_step <= 0.1)) bad("approach_step", "must lie in (0, 0.1]");

    c.window = {number(sub("window", "re_min"), "window.re_min"), number(sub("window", "re_max"), "window.re_max"),
                number(sub("window", "im_min"), "window.im_min"), number(sub("window", "im_max"), "window.im_max")};
    if (!(c.window.re_min >= 1.0 && c.window.re_max <= 25.0 && c.window.re_min < c.window.re_max))
        bad("window", "need 1 <= re_min < re_max <= 25");
    if (!(c.window.im_min >= -2.0 && c.window.im_max <= 0.5 && c.window.im_min < c.window.im_max))
        bad("window", "need -2 <= im_min < im_max <= 0.5");
    c.scan = {integer(sub("scan", "nr"), "scan.nr"), integer(sub("scan", "ni"), "scan.ni")};
    // 0 picks a spacing of about 0.005 in Re kR and 0.01 in Im kR, fine
    // enough to resolve the narrow minima of the singular-value ratio
    if (c.scan.nr == 0) c.scan.nr = std::max(8, static_cast<int>(std::ceil((c.window.re_max - c.window.re_min) / 0.1)));
    if (c.scan.ni == 0) c.scan.ni = std::max(8, static_cast<int>(std::ceil((c.window.im_max - c.window.im_min) / 0.05)));
    if (c.scan.nr < 8 || c.scan.ni < 8) bad("scan", "need at least 8 points per axis (0 = automatic)");

    auto& solve = c.track.solve;
    solve.acceptance = number(sub("tolerances", "acceptance"), "tolerances.acceptance");
    solve.tolerance = number(sub("tolerances", "tolerance"), "tolerances.tolerance");
    solve.initial_step = number(sub("tolerances", "initial_step"), "tolerances.initial_step");
    solve.max_evaluations = integer(sub("tolerances", "max_evaluations"), "tolerances.max_evaluations");
    c.track.max_jump = number(sub("tolerances", "max_jump"), "tolerances.max_jump");
    c.track.min_overlap = number(sub("tolerances", "min_overlap"), "tolerances.min_overlap");
    c.track.min_step = number(sub("tolerances", "min_step"), "tolerances.min_step");
    if (!(solve.acceptance > 0.0 && solve.acceptance < 1.0)) bad("tolerances.acceptance", "must lie in (0, 1)");
    if (!(solve.tolerance > 0.0)) bad("tolerances.tolerance", "must be positive");
    if (!(solve.initial_step > 0.0)) bad("tolerances.initial_step", "must be positive");
    if (solve.max_evaluations < 10) bad("tolerances.max_evaluations", "must be at least 10");
    if (!(c.track.max_jump > 0.0)) bad("tolerances.max_jump", "must be positive");
    if (!(c.track.min_overlap >= 0.0 && c.track.min_overlap < 1.0)) bad("tolerances.min_overlap", "must lie in [0, 1)");
    if (!(c.track.min_step > 0.0)) bad("tolerances.min_step", "must be positive");
    c.track.solve.sector = c.sector;

    c.husimi.n_s = integer(sub("husimi", "n_s"), "husimi.n_s");
    c.husimi.n_p = integer(sub("husimi", "n_p"), "husimi.n_p");
    c.husimi.sigma = number(sub("husimi", "sigma"), "husimi.sigma");
    c.p_c = number(sub("husimi", "p_c"), "husimi.p_c");
    if (c.husimi.n_s < 64 || c.husimi.n_p < 64) bad("husimi", "n_s and n_p must be at least 64");
    if (c.husimi.sigma < 0.0) bad("husimi.sigma", "must be >= 0 (0 selects the default)");
    if (!(c.p_c >= 0.0 && c.p_c < 1.0)) bad("husimi.p_c", "must lie in [0, 1) (0 selects 1/n)");

    c.field_resolution = integer(sub("field", "resolution"), "field.resolution");
    c.field_margin = number(sub("field", "margin"), "field.margin");
    if (c.field_resolution < 2 || c.field_resolution > 4001) bad("field.resolution", "must lie in [2, 4001]");
    if (c.field_margin < 0.0) bad("field.margin", "must be >= 0");
    const json& at = sub("field", "at");
    if (at.is_null()) {
        c.at = {c.e_grid.front()};
    } else {
        if (!at.is_array()) bad("field.at", "expected a list of eccentricities");
        for (const auto& v : at) {
            const double e = number(v, "field.at[]");
            bool found = false;
            for (double g : c.e_grid) found = found || std::abs(g - e) < 1e-9;
            if (!found) bad("field.at", "eccentricity " + v.dump() + " is not on the e grid");
            c.at.push_back(e);
        }
    }

    c.fit_half_window = number(get("fit_half_window"), "fit_half_window");
    if (!(c.fit_half_window > 0.0)) bad("fit_half_window", "must be positive");
    c.oracle_m = integer(get("m"), "m");
    c.oracle_branches = integer(get("branches"), "branches");
    if (c.oracle_m < 0) bad("m", "must be >= 0");
    if (c.oracle_branches < 1 || c.oracle_branches > 50) bad("branches", "must lie in [1, 50]");

    c.toy = get("toy");
    if (!c.toy.is_object()) bad("toy", "expected an object");

    if (!get("out").is_string()) bad("out", "expected a path");
    if (!get("cache_dir").is_string()) bad("cache_dir", "expected a path");
    c.out_dir = get("out").get<std::string>();
    c.cache_dir = get("cache_dir").get<std::string>();
    c.workers = integer(get("workers"), "workers");
    if (c.workers < 1 || c.workers > 256) bad("workers", "must lie in [1, 256]");

    // missing entries filled from the defaults; "toy" is taken as given
    c.document = doc;
    for (const auto& [key, value] : defaults.items()) {
        json& slot = c.document[key];
        if (slot.is_null()) slot = value;
        else if (key != "toy" && slot.is_object() && value.is_object())
            for (const auto& [member, v] : value.items())
                if (!slot.contains(member)) slot[member] = v;
    }
    return c;
}

namespace {

// integers and floats that compare equal hash alike
json normalize_numbers(const json& v) {
    if (v.is_number()) return json(v.get<double>());
    if (v.is_array()) {
        json out = json::array();
        for (const auto& x : v) out.push_back(normalize_numbers(x));
        return out;
    }
    if (v.is_object()) {
        json out = json::object();
        for (const auto& [k, x] : v.items()) out[k] = normalize_numbers(x);
        return out;
    }
    return v;
}

}  // namespace

std::string canonical(const RunConfig& config, const std::vector<std::string>& keys) {
    json subset = json::object();
    for (const auto& key : keys) {
        if (key == "e") subset["e"] = config.e_grid;
        else if (config.document.contains(key)) subset[key] = normalize_numbers(config.document.at(key));
    }
    return normalize_numbers(subset).dump();  // object keys are sorted
}

pipeline::PairConfig pair_config(const RunConfig& c) {
    pipeline::PairConfig p;
    p.n = c.n;
    p.polarization = c.polarization;
    p.sector = c.sector;
    p.nodes = c.nodes;
    p.scale = c.scale;
    p.e_grid = c.e_grid;
    p.approach_step = c.approach_step;
    if (!c.modes.empty()) p.first = c.modes[0];
    if (c.modes.size() > 1) p.second = c.modes[1];
    p.track = c.track;
    return p;
}

pipeline::AnalysisConfig analysis_config(const RunConfig& c) {
    pipeline::AnalysisConfig a;
    a.field_resolution = c.field_resolution;
    a.husimi = c.husimi;
    a.p_c = c.p_c;
    a.fit_half_window = c.fit_half_window;
    a.field.workers = c.workers;
    return a;
}

}  // namespace arcspect::cli
