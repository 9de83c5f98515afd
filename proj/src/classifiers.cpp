#include "mog3p/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mog3p/error.hpp"

namespace mog3p::clf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::size_t class_count_of(std::span<const int> y) {
    int max_label = -1;
    for (int v : y) {
        if (v < 0) throw DataError("negative class label");
        max_label = std::max(max_label, v);
    }
    return static_cast<std::size_t>(max_label + 1);
}

TrainedClassifier::NaiveBayesModel fit_nb(const Matrix& x, std::span<const int> y,
                                          std::size_t n_classes) {
    const std::size_t d = x.cols();
    TrainedClassifier::NaiveBayesModel m;
    std::vector<std::size_t> counts(n_classes, 0);
    m.mean.assign(n_classes, std::vector<double>(d, 0.0));
    m.var.assign(n_classes, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        ++counts[c];
        for (std::size_t j = 0; j < d; ++j) m.mean[c][j] += x(i, j);
    }
    for (std::size_t c = 0; c < n_classes; ++c)
        for (std::size_t j = 0; j < d; ++j)
            if (counts[c] > 0) m.mean[c][j] /= static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = x(i, j) - m.mean[c][j];
            m.var[c][j] += dev * dev;
        }
    }
    m.log_prior.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            if (counts[c] > 0) m.var[c][j] /= static_cast<double>(counts[c]);
            m.var[c][j] = std::max(m.var[c][j], kVarianceFloor);
        }
        m.log_prior[c] = counts[c] > 0
                             ? std::log(static_cast<double>(counts[c]) / static_cast<double>(x.rows()))
                             : -std::numeric_limits<double>::infinity();
    }
    return m;
}

TrainedClassifier::LogisticModel fit_logistic(const Logistic& spec, const Matrix& x,
                                              std::span<const int> y, std::size_t n_classes) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    Matrix w(n_classes, d + 1);
    Matrix grad(n_classes, d + 1);
    std::vector<double> p(n_classes);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int it = 0; it < spec.iters; ++it) {
        std::fill(grad.data().begin(), grad.data().end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = x.row(i);
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < n_classes; ++c) {
                const auto wc = w.row(c);
                double z = wc[d];
                for (std::size_t j = 0; j < d; ++j) z += wc[j] * xi[j];
                p[c] = z;
                top = std::max(top, z);
            }
            double total = 0.0;
            for (auto& v : p) {
                v = std::exp(v - top);
                total += v;
            }
            for (std::size_t c = 0; c < n_classes; ++c) {
                const double r = p[c] / total - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0);
                auto gc = grad.row(c);
                for (std::size_t j = 0; j < d; ++j) gc[j] += r * xi[j];
                gc[d] += r;
            }
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            auto wc = w.row(c);
            const auto gc = grad.row(c);
            for (std::size_t j = 0; j <= d; ++j) {
                const double reg = j < d ? spec.l2 * wc[j] : 0.0;
                wc[j] -= spec.lr * (gc[j] * inv_n + reg);
            }
        }
    }
    for (double v : w.data())
        if (!std::isfinite(v)) throw InvariantError("logistic regression diverged");
    return {std::move(w)};
}

int predict_nb(const TrainedClassifier::NaiveBayesModel& m, std::span<const double> row) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.log_prior.size(); ++c) {
        if (!std::isfinite(m.log_prior[c])) continue;
        double s = m.log_prior[c];
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double dev = row[j] - m.mean[c][j];
            s -= 0.5 * std::log(2.0 * std::numbers::pi * m.var[c][j]) + dev * dev / (2.0 * m.var[c][j]);
        }
        if (s > best_score) {
            best_score = s;
            best = static_cast<int>(c);
        }
    }
    return best;
}

int predict_knn(const TrainedClassifier::NearestModel& m, std::size_t n_classes,
                std::span<const double> row) {
    const std::size_t n = m.x.rows();
    auto dist = [&](std::size_t i) {
        const auto xi = m.x.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double dv = xi[j] - row[j];
            s += dv * dv;
        }
        return s;
    };
    if (m.k == 1) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double dd = dist(i);
            if (dd < best_d) {
                best_d = dd;
                best = i;
            }
        }
        return m.y[best];
    }
    std::vector<std::pair<double, std::size_t>> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = {dist(i), i};
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), n);
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    std::vector<int> votes(n_classes, 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(m.y[all[i].second])];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

int predict_logistic(const TrainedClassifier::LogisticModel& m, std::span<const double> row) {
    const std::size_t d = row.size();
    int best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.weights.rows(); ++c) {
        const auto wc = m.weights.row(c);
        double z = wc[d];
        for (std::size_t j = 0; j < d; ++j) z += wc[j] * row[j];
        if (z > best_z) {
            best_z = z;
            best = static_cast<int>(c);
        }
    }
    return best;
}

}  // namespace

std::string name(const ClassifierSpec& spec) {
    return std::visit(overloaded{
                          [](const GaussianNB&) { return std::string("GaussianNB"); },
                          [](const KNearest& k) { return std::to_string(k.k) + "-NN"; },
                          [](const Logistic&) { return std::string("Logistic"); },
                      },
                      spec);
}

void validate(const ClassifierSpec& spec) {
    std::visit(overloaded{
                   [](const GaussianNB&) {},
                   [](const KNearest& k) {
                       if (k.k < 1) throw ConfigError("k-NN requires k >= 1");
                   },
                   [](const Logistic& l) {
                       if (l.l2 < 0.0) throw ConfigError("logistic l2 must be >= 0");
                       if (l.iters < 0) throw ConfigError("logistic iters must be >= 0");
                       if (!(l.lr > 0.0)) throw ConfigError("logistic lr must be > 0");
                   },
               },
               spec);
}

std::vector<ClassifierSpec> default_bank() { return {GaussianNB{}, KNearest{1}, Logistic{}}; }

TrainedClassifier train(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y) {
    if (x.rows() != y.size()) throw DimensionError("train: label count does not match rows");
    if (x.rows() < 2) throw DataError("train: need at least 2 samples");
    const std::size_t n_classes = class_count_of(y);
    if (std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end())
        throw DataError("train: need at least 2 classes");
    validate(spec);

    Standardizer scaler = Standardizer::fit(x);
    Matrix z = scaler.transform(x);
    TrainedClassifier::Model model = std::visit(
        overloaded{
            [&](const GaussianNB&) -> TrainedClassifier::Model { return fit_nb(z, y, n_classes); },
            [&](const KNearest& k) -> TrainedClassifier::Model {
                return TrainedClassifier::NearestModel{k.k, std::move(z), {y.begin(), y.end()}};
            },
            [&](const Logistic& l) -> TrainedClassifier::Model {
                return fit_logistic(l, z, y, n_classes);
            },
        },
        spec);
    return TrainedClassifier(std::move(scaler), n_classes, std::move(model));
}

std::vector<int> TrainedClassifier::predict(const Matrix& x) const {
    if (x.cols() != dims())
        throw DimensionError("predict: expected " + std::to_string(dims()) + " columns, got " +
                             std::to_string(x.cols()));
    const Matrix z = scaler_.transform(x);
    std::vector<int> out(z.rows());
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const auto row = z.row(i);
        out[i] = std::visit(overloaded{
                                [&](const NaiveBayesModel& m) { return predict_nb(m, row); },
                                [&](const NearestModel& m) { return predict_knn(m, n_classes_, row); },
                                [&](const LogisticModel& m) { return predict_logistic(m, row); },
                            },
                            model_);
    }
    return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) throw DimensionError("accuracy: length mismatch");
    if (truth.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

FoldPlan stratified_folds(std::span<const int> y, int k, Rng& rng) {
    if (k < 2) throw ConfigError("stratified_folds: need k >= 2");
    const std::size_t n_classes = class_count_of(y);
    std::vector<std::vector<std::size_t>> members(n_classes);
    for (std::size_t i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(i);

    FoldPlan plan;
    plan.k = k;
    plan.fold_of.assign(y.size(), -1);
    std::size_t deal = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        auto& m = members[c];
        if (m.empty()) continue;
        if (m.size() < static_cast<std::size_t>(k))
            throw DataError("stratified_folds: class " + std::to_string(c) + " has " +
                            std::to_string(m.size()) + " members, fewer than " +
                            std::to_string(k) + " folds");
        rng.shuffle(std::span<std::size_t>(m));
        for (std::size_t i : m) plan.fold_of[i] = static_cast<int>(deal++ % static_cast<std::size_t>(k));
    }
    return plan;
}

double cv_accuracy(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y,
                   const FoldPlan& plan) {
    if (plan.fold_of.size() != x.rows() || y.size() != x.rows())
        throw DimensionError("cv_accuracy: fold plan length does not match rows");
    std::size_t correct = 0;
    std::vector<int> ytrain;
    std::vector<int> ytest;
    for (int f = 0; f < plan.k; ++f) {
        const auto test = plan.test_indices(f);
        if (test.empty()) continue;
        const auto tr = plan.train_indices(f);
        ytrain.clear();
        ytest.clear();
        for (std::size_t i : tr) ytrain.push_back(y[i]);
        for (std::size_t i : test) ytest.push_back(y[i]);
        const auto model = train(spec, x.select_rows(tr), ytrain);
        const auto pred = model.predict(x.select_rows(test));
        for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == ytest[i];
    }
    return static_cast<double>(correct) / static_cast<double>(x.rows());
}

}  // namespace mog3p::clf
