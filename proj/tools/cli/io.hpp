#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arcspect/analysis.hpp"

namespace arcspect::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// 17 significant digits, "%.17g".
std::string format_double(double v);

/// Writes through a temporary file in the same directory and renames it
/// into place; parent directories are created.
void atomic_write(const fs::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);

/// Columns e, re_kR, im_kR, Q, sigma_min, mode_label. Q is empty for
/// resonances with Im kR >= 0 (closed levels).
std::string trajectories_csv(const std::vector<spectrum::Trajectory>& trajectories);

/// Plain-text 16-bit greymap of |u|^2, top row at y_max, linearly scaled
/// so the largest value maps to 65535; `max_intensity` receives that value.
std::string field_pgm(const bem::FieldMap& map, double& max_intensity);
std::string field_csv(const bem::FieldMap& map);  // x, y, region, re, im
std::string husimi_csv(const phase_space::HusimiMap& map);  // s, p, value

json trajectory_to_json(const spectrum::Trajectory& t);
spectrum::Trajectory trajectory_from_json(const json& j);
json report_to_json(const analysis::ArcReport& r);

/// Content-addressed store of JSON payloads under `dir`.
class Cache {
public:
    static constexpr int kSchemaVersion = 1;
    explicit Cache(fs::path dir) : dir_(std::move(dir)) {}
    /// Key: SHA-256 of operation name and canonical config.
    static std::string key(const std::string& operation, const std::string& canonical_config);
    std::optional<json> load(const std::string& key) const;
    void store(const std::string& key, const std::string& operation, const json& payload) const;

private:
    fs::path dir_;
};

}  // namespace arcspect::cli
