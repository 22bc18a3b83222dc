#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cftlab/analysis.hpp"

namespace cftlab {

inline constexpr const char* kToolVersion = "cftlab 0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

struct ResultRecord {
    std::string config_hash;
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    nlohmann::json summary;  // object; may be empty
    double wall_time_s = 0.0;
};

struct RunOptions {
    unsigned threads = 1;
    std::string cache_dir;  // resolved from CFTLAB_CACHE_DIR or next to outputs
};

/// Validates a config against the experiment schema (unknown keys rejected,
/// seeds mandatory for sampling kinds) and returns the resolved form with
/// defaults filled in.
nlohmann::json resolve_config(const nlohmann::json& config);

/// 64-bit FNV-1a over the canonical dump of the resolved config.
std::string config_hash(const nlohmann::json& resolved);

/// Executes a resolved config. Throws on error; does not touch the filesystem
/// except for the spectrum cache.
ResultRecord run_experiment(const nlohmann::json& resolved, const RunOptions& opts);

/// Writes <out>.json (machine schema) and <out>.csv (flat table, 17
/// significant digits) atomically.
void write_result(const ResultRecord& record, const std::string& out_base);

/// Reads a result written by write_result back into a CI dataset; requires
/// columns n, p, ic, stderr, method.
CIDataset load_ci_dataset(const std::string& json_path);

/// Bundled desk-scale experiment configs by name: fig2x, fig2y, fig2z, fig3,
/// freefermion, renyi.
nlohmann::json bundled_config(const std::string& name);

/// Runs a bundled config and attaches its headline summary (collapse
/// exponent, size trend, or spread, depending on the bundle).
ResultRecord run_bundle(const std::string& name, const RunOptions& opts);

}  // namespace cftlab
