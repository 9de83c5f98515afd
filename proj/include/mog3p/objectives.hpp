#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mog3p/classifiers.hpp"
#include "mog3p/dataset.hpp"
#include "mog3p/expression.hpp"

namespace mog3p::obj {

// All three objectives are minimized.
struct FitnessVector {
    double c_error = 1.0;     // 1 - aggregated cross-validated accuracy
    double v_index = 0.0;     // within / between scatter ratio
    std::size_t s_size = 1;   // total expression node count

    bool operator==(const FitnessVector&) const = default;
};

inline constexpr double kSeparationSentinel = 1e12;
inline constexpr double kBetweenFloor = 1e-12;

struct SeparationStats {
    double within_ss = 0.0;
    double between_ss = 0.0;
    double index = kSeparationSentinel;
};

// Within- and between-group sums of squares of the projected points and the
// W/B index (sentinel when B <= 1e-12). Points are rescaled by one global
// factor before squaring so the ratio stays finite for any finite input.
SeparationStats separation_index(const Matrix& points, std::span<const int> labels);

enum class Aggregation { Min, Max, Mean };

std::string to_string(Aggregation a);
Aggregation aggregation_from_string(const std::string& s);

// Combines per-classifier accuracies and returns 1 - aggregate.
double aggregate_error(std::span<const double> accuracies, Aggregation mode);

// Per-classifier CV accuracies on a fixed fold plan.
std::vector<double> bank_accuracies(const Matrix& points, std::span<const int> labels,
                                    std::span<const clf::ClassifierSpec> bank,
                                    const clf::FoldPlan& plan);

double classifiability(const Matrix& points, std::span<const int> labels,
                       std::span<const clf::ClassifierSpec> bank, const clf::FoldPlan& plan,
                       Aggregation mode);

// Variant that draws a fresh stratified plan from `rng`.
double classifiability(const Matrix& points, std::span<const int> labels,
                       std::span<const clf::ClassifierSpec> bank, int folds, Aggregation mode,
                       Rng& rng);

struct ObjectiveConfig {
    Aggregation aggregation = Aggregation::Min;
    int inner_folds = 3;
    std::vector<clf::ClassifierSpec> bank = clf::default_bank();

    void validate() const;
    bool operator==(const ObjectiveConfig&) const = default;
};

// Scores models against one dataset. The inner fold plan is drawn once from
// `seed` at construction, so every model sees the same folds.
class ModelEvaluator {
public:
    ModelEvaluator(const Dataset& data, ObjectiveConfig cfg, std::uint64_t seed);

    FitnessVector evaluate(const gp::ProjectionModel& model) const;

    const clf::FoldPlan& plan() const noexcept { return plan_; }
    const ObjectiveConfig& config() const noexcept { return cfg_; }

private:
    const Dataset* data_;
    ObjectiveConfig cfg_;
    clf::FoldPlan plan_;
};

FitnessVector evaluate_model(const gp::ProjectionModel& model, const Dataset& data,
                             const ObjectiveConfig& cfg, std::uint64_t seed);

}  // namespace mog3p::obj
