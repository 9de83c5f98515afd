#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mog3p/baselines.hpp"
#include "mog3p/classifiers.hpp"
#include "mog3p/dataset.hpp"
#include "mog3p/mining.hpp"
#include "mog3p/moea.hpp"

namespace mog3p::experiment {

struct NestedCvPlan {
    std::size_t repeats = 10;
    int outer_folds = 10;

    void validate() const;
    bool operator==(const NestedCvPlan&) const = default;
};

struct ExperimentConfig {
    moea::EvolutionConfig evolution;
    NestedCvPlan plan;
    std::uint64_t seed = 0;
};

// Stratified outer folds for one repeat; depends only on (y, k, seed, repeat).
clf::FoldPlan outer_plan(std::span<const int> y, int k, std::uint64_t seed, std::size_t repeat);

struct OuterSplit {
    Dataset train;  // standardized with its own statistics
    Dataset test;   // standardized with the training statistics
    Standardizer standardizer;
};

OuterSplit make_split(const Dataset& data, std::span<const std::size_t> train_idx,
                      std::span<const std::size_t> test_idx);

// Train each bank classifier on the projected training rows; report
// resubstitution and held-out accuracy.
std::vector<mining::ClassifierScore> score_projection(const Matrix& train_points,
                                                      std::span<const int> train_y,
                                                      const Matrix& test_points,
                                                      std::span<const int> test_y,
                                                      std::span<const clf::ClassifierSpec> bank);

// Report-model rule: lowest c_error, then smaller s_size, then smaller
// v_index, then lower index.
std::size_t select_report_model(std::span<const moea::Individual> archive);

struct RunOutcome {
    mining::RunArchive archive;
    std::vector<moea::HistoryRow> history;
};

// Evolves on the standardized outer-training rows only and scores every
// archive member on both partitions.
RunOutcome run_outer_fold(const Dataset& data, std::span<const std::size_t> train_idx,
                          std::span<const std::size_t> test_idx, const moea::EvolutionConfig& cfg,
                          std::uint64_t run_seed, std::size_t repeat, std::size_t fold,
                          int threads = 1);

struct SummaryRow {
    std::string name;
    double test_mean = 0.0, test_std = 0.0;
    double train_mean = 0.0, train_std = 0.0;
    std::size_t count = 0;
};

struct ExperimentReport {
    std::string method;
    std::vector<std::string> classifier_names;
    // scores[run][classifier] for the report model of each run.
    std::vector<std::vector<mining::ClassifierScore>> scores;
    std::vector<RunOutcome> runs;

    // One row per classifier plus a final "Avg" row pooled over every
    // (run, classifier) entry.
    std::vector<SummaryRow> summary() const;
    double mean_test_accuracy() const;
};

using ProgressFn = std::function<void(std::size_t repeat, std::size_t fold)>;

ExperimentReport run_nested_experiment(const Dataset& data, const ExperimentConfig& cfg,
                                       int threads = 1, const ProgressFn& progress = {});

// Same outer folds as the nested experiment, with a fixed representation:
// raw standardized features (nullopt), or a PCA/MDA fit on each training
// partition. MDS has no out-of-sample map, so it embeds the whole
// standardized dataset once and the folds are taken over the embedding.
ExperimentReport run_baseline_experiment(const Dataset& data,
                                         std::optional<baselines::Method> method,
                                         const NestedCvPlan& plan,
                                         std::span<const clf::ClassifierSpec> bank,
                                         std::uint64_t seed);

std::string report_csv(const ExperimentReport& report);

}  // namespace mog3p::experiment
