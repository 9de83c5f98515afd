#include "mog3p/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mog3p/error.hpp"

namespace mog3p::experiment {

void NestedCvPlan::validate() const {
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (outer_folds < 2) throw ConfigError("outer_folds must be >= 2");
}

clf::FoldPlan outer_plan(std::span<const int> y, int k, std::uint64_t seed, std::size_t repeat) {
    Rng rng(derive_seed(seed, 0x07e5, repeat));
    return clf::stratified_folds(y, k, rng);
}

OuterSplit make_split(const Dataset& data, std::span<const std::size_t> train_idx,
                      std::span<const std::size_t> test_idx) {
    OuterSplit s;
    auto [standardizer, train] = standardize_fit_transform(data.subset(train_idx));
    s.standardizer = std::move(standardizer);
    s.train = std::move(train);
    s.test = standardize_apply(s.standardizer, data.subset(test_idx));
    return s;
}

std::vector<mining::ClassifierScore> score_projection(const Matrix& train_points,
                                                      std::span<const int> train_y,
                                                      const Matrix& test_points,
                                                      std::span<const int> test_y,
                                                      std::span<const clf::ClassifierSpec> bank) {
    std::vector<mining::ClassifierScore> out;
    for (const auto& spec : bank) {
        const auto model = clf::train(spec, train_points, train_y);
        mining::ClassifierScore s;
        s.name = clf::name(spec);
        s.train_accuracy = clf::accuracy(model.predict(train_points), train_y);
        s.test_accuracy = clf::accuracy(model.predict(test_points), test_y);
        out.push_back(std::move(s));
    }
    return out;
}

std::size_t select_report_model(std::span<const moea::Individual> archive) {
    if (archive.empty()) throw InvariantError("select_report_model: empty archive");
    std::size_t best = 0;
    for (std::size_t i = 1; i < archive.size(); ++i) {
        const auto& a = archive[i].fitness;
        const auto& b = archive[best].fitness;
        if (a.c_error < b.c_error ||
            (a.c_error == b.c_error &&
             (a.s_size < b.s_size || (a.s_size == b.s_size && a.v_index < b.v_index))))
            best = i;
    }
    return best;
}

RunOutcome run_outer_fold(const Dataset& data, std::span<const std::size_t> train_idx,
                          std::span<const std::size_t> test_idx, const moea::EvolutionConfig& cfg,
                          std::uint64_t run_seed, std::size_t repeat, std::size_t fold,
                          int threads) {
    const OuterSplit split = make_split(data, train_idx, test_idx);
    auto evo = moea::run_evolution(split.train, cfg, run_seed, threads);

    RunOutcome out;
    out.history = std::move(evo.history);
    out.archive.repeat = repeat;
    out.archive.fold = fold;
    out.archive.selected = select_report_model(evo.archive);
    for (const auto& ind : evo.archive) {
        mining::ModelRecord rec;
        for (const auto& tree : ind.model.trees) {
            rec.expressions.push_back(gp::to_infix(tree, data.feature_names));
            const auto used = tree.variables();
            rec.features_used.insert(used.begin(), used.end());
        }
        rec.objectives = ind.fitness;
        rec.repeat = repeat;
        rec.fold = fold;
        rec.per_classifier = score_projection(gp::project(ind.model, split.train.x), split.train.y,
                                              gp::project(ind.model, split.test.x), split.test.y,
                                              cfg.objectives.bank);
        out.archive.models.push_back(std::move(rec));
    }
    return out;
}

std::vector<SummaryRow> ExperimentReport::summary() const {
    std::vector<SummaryRow> rows;
    std::vector<double> all_test, all_train;
    for (std::size_t c = 0; c < classifier_names.size(); ++c) {
        std::vector<double> test, train;
        for (const auto& run : scores) {
            test.push_back(run.at(c).test_accuracy);
            train.push_back(run.at(c).train_accuracy);
        }
        all_test.insert(all_test.end(), test.begin(), test.end());
        all_train.insert(all_train.end(), train.begin(), train.end());
        SummaryRow r;
        r.name = classifier_names[c];
        std::tie(r.test_mean, r.test_std) = mining::mean_std(test);
        std::tie(r.train_mean, r.train_std) = mining::mean_std(train);
        r.count = test.size();
        rows.push_back(std::move(r));
    }
    SummaryRow avg;
    avg.name = "Avg";
    std::tie(avg.test_mean, avg.test_std) = mining::mean_std(all_test);
    std::tie(avg.train_mean, avg.train_std) = mining::mean_std(all_train);
    avg.count = all_test.size();
    rows.push_back(std::move(avg));
    return rows;
}

double ExperimentReport::mean_test_accuracy() const { return summary().back().test_mean; }

ExperimentReport run_nested_experiment(const Dataset& data, const ExperimentConfig& cfg,
                                       int threads, const ProgressFn& progress) {
    data.check();
    cfg.plan.validate();
    ExperimentReport report;
    report.method = "mog3p";
    for (const auto& spec : cfg.evolution.objectives.bank) report.classifier_names.push_back(clf::name(spec));

    for (std::size_t r = 0; r < cfg.plan.repeats; ++r) {
        const auto plan = outer_plan(data.y, cfg.plan.outer_folds, cfg.seed, r);
        for (int f = 0; f < cfg.plan.outer_folds; ++f) {
            if (progress) progress(r, static_cast<std::size_t>(f));
            const auto train_idx = plan.train_indices(f);
            const auto test_idx = plan.test_indices(f);
            auto run = run_outer_fold(data, train_idx, test_idx, cfg.evolution,
                                      derive_seed(cfg.seed, r, f), r, static_cast<std::size_t>(f),
                                      threads);
            report.scores.push_back(run.archive.models.at(run.archive.selected).per_classifier);
            report.runs.push_back(std::move(run));
        }
    }
    return report;
}

ExperimentReport run_baseline_experiment(const Dataset& data,
                                         std::optional<baselines::Method> method,
                                         const NestedCvPlan& plan,
                                         std::span<const clf::ClassifierSpec> bank,
                                         std::uint64_t seed) {
    data.check();
    plan.validate();
    ExperimentReport report;
    report.method = method ? baselines::to_string(*method) : "raw";
    for (const auto& spec : bank) report.classifier_names.push_back(clf::name(spec));

    Matrix embedding;
    if (method == baselines::Method::Mds) {
        const auto [s, full] = standardize_fit_transform(data);
        embedding = baselines::mds_fit(full.x).coords;
    }

    for (std::size_t r = 0; r < plan.repeats; ++r) {
        const auto folds = outer_plan(data.y, plan.outer_folds, seed, r);
        for (int f = 0; f < plan.outer_folds; ++f) {
            const auto train_idx = folds.train_indices(f);
            const auto test_idx = folds.test_indices(f);
            Matrix train_points, test_points;
            std::vector<int> train_y, test_y;
            for (auto i : train_idx) train_y.push_back(data.y[i]);
            for (auto i : test_idx) test_y.push_back(data.y[i]);
            if (method == baselines::Method::Mds) {
                train_points = embedding.select_rows(train_idx);
                test_points = embedding.select_rows(test_idx);
            } else {
                const auto split = make_split(data, train_idx, test_idx);
                if (!method) {
                    train_points = split.train.x;
                    test_points = split.test.x;
                } else {
                    const auto proj = *method == baselines::Method::Pca
                                          ? baselines::pca_fit(split.train.x)
                                          : baselines::mda_fit(split.train.x, split.train.y);
                    train_points = baselines::apply(proj, split.train.x);
                    test_points = baselines::apply(proj, split.test.x);
                }
            }
            report.scores.push_back(score_projection(train_points, train_y, test_points, test_y, bank));
        }
    }
    return report;
}

std::string report_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "classifier,method,test_mean,test_std,train_mean,train_std,runs\n";
    for (const auto& row : report.summary()) {
        os << row.name << ',' << report.method << ',' << row.test_mean << ',' << row.test_std << ','
           << row.train_mean << ',' << row.train_std << ',' << row.count << '\n';
    }
    return os.str();
}

}  // namespace mog3p::experiment
