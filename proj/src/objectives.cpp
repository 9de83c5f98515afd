#include "mog3p/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "mog3p/error.hpp"

namespace mog3p::obj {

SeparationStats separation_index(const Matrix& points, std::span<const int> labels) {
    const std::size_t n = points.rows();
    const std::size_t t = points.cols();
    if (labels.size() != n) throw DimensionError("separation_index: label count mismatch");
    if (n < 2) throw DataError("separation_index: need at least 2 points");
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw DataError("separation_index: negative label");
        max_label = std::max(max_label, l);
    }
    const auto g = static_cast<std::size_t>(max_label + 1);
    std::vector<std::size_t> counts(g, 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
        throw DataError("separation_index: need at least 2 classes");

    // Centroids computed from pre-divided terms so sums stay finite.
    std::vector<double> grand(t, 0.0);
    Matrix centroid(g, t);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        for (std::size_t j = 0; j < t; ++j) {
            grand[j] += points(i, j) / static_cast<double>(n);
            centroid(c, j) += points(i, j) / static_cast<double>(counts[c]);
        }
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < t; ++j) scale = std::max(scale, std::abs(points(i, j) - grand[j]));

    SeparationStats s;
    if (scale == 0.0 || !std::isfinite(scale)) {
        s.within_ss = 0.0;
        s.between_ss = 0.0;
        s.index = kSeparationSentinel;
        return s;
    }
    double w = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        for (std::size_t j = 0; j < t; ++j) {
            const double dev = (points(i, j) - centroid(c, j)) / scale;
            w += dev * dev;
        }
    }
    for (std::size_t c = 0; c < g; ++c) {
        if (counts[c] == 0) continue;
        for (std::size_t j = 0; j < t; ++j) {
            const double dev = (centroid(c, j) - grand[j]) / scale;
            b += static_cast<double>(counts[c]) * dev * dev;
        }
    }
    const double s2 = scale * scale;
    s.within_ss = w * s2;
    s.between_ss = b * s2;
    // Compare B against the floor in original units, the ratio in scaled ones.
    s.index = (s.between_ss > kBetweenFloor) ? w / b : kSeparationSentinel;
    return s;
}

std::string to_string(Aggregation a) {
    switch (a) {
        case Aggregation::Min: return "min";
        case Aggregation::Max: return "max";
        case Aggregation::Mean: return "mean";
    }
    return "?";
}

Aggregation aggregation_from_string(const std::string& s) {
    if (s == "min") return Aggregation::Min;
    if (s == "max") return Aggregation::Max;
    if (s == "mean") return Aggregation::Mean;
    throw ConfigError("unknown aggregation '" + s + "' (expected min|max|mean)");
}

double aggregate_error(std::span<const double> acc, Aggregation mode) {
    if (acc.empty()) throw ConfigError("classifier bank is empty");
    double agg = 0.0;
    switch (mode) {
        case Aggregation::Min: agg = *std::min_element(acc.begin(), acc.end()); break;
        case Aggregation::Max: agg = *std::max_element(acc.begin(), acc.end()); break;
        case Aggregation::Mean:
            for (double a : acc) agg += a;
            agg /= static_cast<double>(acc.size());
            break;
    }
    return 1.0 - agg;
}

std::vector<double> bank_accuracies(const Matrix& points, std::span<const int> labels,
                                    std::span<const clf::ClassifierSpec> bank,
                                    const clf::FoldPlan& plan) {
    std::vector<double> out;
    out.reserve(bank.size());
    for (const auto& spec : bank) out.push_back(clf::cv_accuracy(spec, points, labels, plan));
    return out;
}

double classifiability(const Matrix& points, std::span<const int> labels,
                       std::span<const clf::ClassifierSpec> bank, const clf::FoldPlan& plan,
                       Aggregation mode) {
    if (bank.empty()) throw ConfigError("classifier bank is empty");
    const auto acc = bank_accuracies(points, labels, bank, plan);
    return aggregate_error(acc, mode);
}

double classifiability(const Matrix& points, std::span<const int> labels,
                       std::span<const clf::ClassifierSpec> bank, int folds, Aggregation mode,
                       Rng& rng) {
    const auto plan = clf::stratified_folds(labels, folds, rng);
    return classifiability(points, labels, bank, plan, mode);
}

void ObjectiveConfig::validate() const {
    if (inner_folds < 2) throw ConfigError("inner_folds must be >= 2");
    if (bank.empty()) throw ConfigError("classifier bank is empty");
    for (const auto& spec : bank) clf::validate(spec);
}

ModelEvaluator::ModelEvaluator(const Dataset& data, ObjectiveConfig cfg, std::uint64_t seed)
    : data_(&data), cfg_(std::move(cfg)) {
    cfg_.validate();
    Rng rng(derive_seed(seed, 0x1f01d5));
    plan_ = clf::stratified_folds(data.y, cfg_.inner_folds, rng);
}

FitnessVector ModelEvaluator::evaluate(const gp::ProjectionModel& model) const {
    const Matrix points = gp::project(model, data_->x);
    FitnessVector f;
    f.c_error = classifiability(points, data_->y, cfg_.bank, plan_, cfg_.aggregation);
    f.v_index = separation_index(points, data_->y).index;
    f.s_size = model.total_size();
    return f;
}

FitnessVector evaluate_model(const gp::ProjectionModel& model, const Dataset& data,
                             const ObjectiveConfig& cfg, std::uint64_t seed) {
    return ModelEvaluator(data, cfg, seed).evaluate(model);
}

}  // namespace mog3p::obj
