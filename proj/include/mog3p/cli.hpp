#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mog3p/config.hpp"

namespace mog3p::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kDataError = 3;
inline constexpr int kInternal = 4;

// Flags shared by every subcommand; unset values leave the config alone.
struct CommonOptions {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    int threads = 1;
    std::optional<int> inner_folds;
    std::optional<std::string> aggregation;
    double tau = 0.005;
    bool paper_scale = false;
};

// Loads --config (or defaults) and applies the override flags.
config::RunConfig resolve_config(const CommonOptions& opts);

// "# seed=<seed> config_hash=<hash>" header line used by CSV outputs.
std::string provenance_line(std::uint64_t seed, const std::string& hash);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// report.csv, archive.json, history.csv, manifest.json.
void cmd_run(const config::RunConfig& cfg, const std::filesystem::path& out_dir, int threads);

// <method>_coords.csv, <method>_accuracy.csv, <method>.svg.
void cmd_baseline(const std::string& method, const config::RunConfig& cfg,
                  const std::filesystem::path& out_dir);

// mining.json, frontier.csv, feature_frequency.csv, classifier_summary.csv,
// feature_frequency.svg.
void cmd_mine(const std::filesystem::path& archive, double tau, const std::filesystem::path& out_dir);

// Scatter of the report model of run `run_index` applied to the whole
// (standardized) dataset: model_coords.csv and model.svg.
void cmd_plot_model(const config::RunConfig& cfg, const std::filesystem::path& archive,
                    std::size_t run_index, const std::filesystem::path& out_dir);

// Scatter from a CSV with columns x,y,label: scatter.svg.
void cmd_plot_coords(const std::filesystem::path& coords_csv, const std::filesystem::path& out_dir);

// Maps the active exception to an exit code and prints it to stderr.
int report_exception();

}  // namespace mog3p::cli
