#pragma once

// Run configuration: a JSON document with defaults, presets and
// `--key value` overrides, validated at load time.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arcspect/pipeline.hpp"

namespace arcspect::cli {

using json = nlohmann::json;

struct RunConfig {
    std::vector<double> e_grid;  // a scalar e is a one-point grid
    double scale = 1.0;
    double n = 3.3;
    bem::Polarization polarization = bem::Polarization::TM;
    bem::Parity sector = bem::Parity::eo;
    int nodes = 300;
    std::vector<spectrum::Provenance> modes;
    bool open = true;
    bool closed = true;
    double approach_step = 0.05;
    bem::Window window;
    bem::ScanGrid scan;
    spectrum::TrackOptions track;
    phase_space::HusimiOptions husimi;
    double p_c = 0.0;
    int field_resolution = 301;
    double field_margin = 0.5;
    std::vector<double> at;  // eccentricities for field/husimi output
    double fit_half_window = 0.015;
    int oracle_m = 7;
    int oracle_branches = 4;
    json toy;  // toy-model runs, interpreted by the toy command
    std::string out_dir = "out";
    std::string cache_dir = ".arcspect-cache";
    int workers = 1;

    json document;  // merged, validated document the fields were read from
};

/// Merged document: defaults <- preset <- file <- overrides. Override
/// keys may be dotted ("husimi.n_s"); values are parsed as JSON when
/// possible and taken as strings otherwise.
json merge_document(const std::optional<std::string>& preset, const std::optional<std::string>& path,
                    const std::vector<std::pair<std::string, std::string>>& overrides);

/// Validates and converts. Throws ConfigError naming the offending field.
RunConfig parse_config(const json& document);

json default_document();
/// "arc-paper" or "regimes"; ConfigError otherwise.
json preset_document(const std::string& name);

/// Subset of the document that determines a computation, serialised with
/// sorted keys, the e grid expanded and all numbers as doubles. Output,
/// cache and worker settings never enter it.
std::string canonical(const RunConfig& config, const std::vector<std::string>& keys);

pipeline::PairConfig pair_config(const RunConfig& config);
pipeline::AnalysisConfig analysis_config(const RunConfig& config);

}  // namespace arcspect::cli
