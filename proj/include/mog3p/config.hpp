#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mog3p/dataset.hpp"
#include "mog3p/experiment.hpp"
#include "mog3p/moea.hpp"
#include "mog3p/objectives.hpp"

namespace mog3p::config {

inline constexpr int kConfigVersion = 1;

struct DatasetConfig {
    std::string path;
    ColumnRef label_column = std::string("class");
    std::vector<std::string> exclude_columns;
    MissingPolicy missing = MissingPolicy::Drop;

    bool operator==(const DatasetConfig&) const = default;
    CsvOptions csv_options() const { return {label_column, exclude_columns, missing}; }
};

struct RunConfig {
    int version = kConfigVersion;
    DatasetConfig dataset;
    std::uint64_t seed = 42;
    moea::MoeaParams moea;
    gp::GpParams gp;
    obj::ObjectiveConfig objectives;
    experiment::NestedCvPlan cv;
    std::string output_dir = "out";

    void validate() const;
    experiment::ExperimentConfig experiment() const;
    bool operator==(const RunConfig&) const;
};

// Table-scale preset: population 400, 100 generations, archive 100,
// 10 inner folds, 10 x 10 outer cross-validation.
void apply_paper_scale(RunConfig& cfg);

// Canonical JSON text (every key present, fixed order).
std::string to_json(const RunConfig& cfg);

// Missing keys take defaults; unknown keys and a wrong `version` raise
// ConfigError.
RunConfig from_json(std::string_view text);

// Reads a config file; a relative dataset path is resolved against the
// file's directory.
RunConfig load(const std::filesystem::path& path);

// FNV-1a of the canonical JSON with output_dir blanked, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace mog3p::config
