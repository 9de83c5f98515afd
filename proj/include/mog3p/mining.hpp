#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mog3p/expression.hpp"
#include "mog3p/objectives.hpp"

namespace mog3p::mining {

struct ClassifierScore {
    std::string name;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;

    bool operator==(const ClassifierScore&) const = default;
};

struct ModelRecord {
    std::vector<std::string> expressions;
    obj::FitnessVector objectives;
    std::vector<ClassifierScore> per_classifier;
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::set<std::size_t> features_used;

    double train_error() const noexcept { return objectives.c_error; }
    // 1 - mean held-out accuracy over the classifier bank.
    double test_error() const noexcept;

    bool operator==(const ModelRecord&) const = default;
};

std::set<std::size_t> extract_features_used(const gp::ExpressionTree& tree);
std::set<std::size_t> extract_features_used(std::string_view expression,
                                            std::span<const std::string> names);

// Records within `tau` of the lowest test error, reduced to those not
// dominated in (train error, total size), ordered by (size, train error).
std::vector<ModelRecord> frontier(std::span<const ModelRecord> records, double tau = 0.005);

// Number of records using each feature (zeros included).
std::vector<std::size_t> feature_frequency(std::span<const ModelRecord> records,
                                           std::size_t n_features);

struct ClassifierSummary {
    std::string name;
    double train_mean = 0.0, train_std = 0.0;
    double test_mean = 0.0, test_std = 0.0;
};

std::vector<ClassifierSummary> classifier_summary(std::span<const ModelRecord> records);

// Sample mean and standard deviation (n - 1 denominator; 0 for n < 2).
std::pair<double, double> mean_std(std::span<const double> v);

// -------------------------------------------------------------------------
// Archive dump: {version, dataset, seed, config_hash, feature_names,
// class_names, runs: [{repeat, fold, selected, models: [...]}]}

inline constexpr int kArchiveVersion = 1;

struct RunArchive {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::size_t selected = 0;  // index of the report model in `models`
    std::vector<ModelRecord> models;

    bool operator==(const RunArchive&) const = default;
};

struct ArchiveDump {
    int version = kArchiveVersion;
    std::string dataset;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<RunArchive> runs;

    std::vector<ModelRecord> all_records() const;
    bool operator==(const ArchiveDump&) const = default;
};

std::string archive_to_json(const ArchiveDump& dump);
// Throws DataError on schema-version mismatch or malformed content; stored
// feature sets are checked against the expressions.
ArchiveDump archive_from_json(std::string_view text);

struct MiningReport {
    double tau = 0.005;
    std::vector<ModelRecord> frontier;
    std::vector<std::string> feature_names;
    std::vector<std::size_t> feature_frequency;
    std::vector<ClassifierSummary> classifier_summary;
};

MiningReport mine(const ArchiveDump& dump, double tau);

std::string report_to_json(const MiningReport& report, const ArchiveDump& dump);
std::string frontier_csv(const MiningReport& report);
std::string feature_frequency_csv(const MiningReport& report);
std::string classifier_summary_csv(const MiningReport& report);

}  // namespace mog3p::mining
