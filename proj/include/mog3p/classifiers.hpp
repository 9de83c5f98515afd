#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mog3p/dataset.hpp"
#include "mog3p/matrix.hpp"
#include "mog3p/rng.hpp"

namespace mog3p::clf {

struct GaussianNB {
    bool operator==(const GaussianNB&) const = default;
};

struct KNearest {
    int k = 1;
    bool operator==(const KNearest&) const = default;
};

struct Logistic {
    double l2 = 1e-4;
    int iters = 200;
    double lr = 0.1;
    bool operator==(const Logistic&) const = default;
};

// Classifier configuration. New classifier families are added as variant
// alternatives together with a trained-model type below.
using ClassifierSpec = std::variant<GaussianNB, KNearest, Logistic>;

std::string name(const ClassifierSpec& spec);
void validate(const ClassifierSpec& spec);
std::vector<ClassifierSpec> default_bank();

inline constexpr double kVarianceFloor = 1e-9;

class TrainedClassifier {
public:
    struct NaiveBayesModel {
        std::vector<double> log_prior;        // -inf for classes absent from training
        std::vector<std::vector<double>> mean;  // [class][dim]
        std::vector<std::vector<double>> var;   // [class][dim], >= kVarianceFloor
    };
    struct NearestModel {
        int k = 1;
        Matrix x;
        std::vector<int> y;
    };
    struct LogisticModel {
        Matrix weights;  // classes x (dims + 1); last column is the bias
    };
    using Model = std::variant<NaiveBayesModel, NearestModel, LogisticModel>;

    TrainedClassifier(Standardizer scaler, std::size_t n_classes, Model model)
        : scaler_(std::move(scaler)), n_classes_(n_classes), model_(std::move(model)) {}

    std::size_t dims() const noexcept { return scaler_.means().size(); }
    std::size_t n_classes() const noexcept { return n_classes_; }
    const Model& model() const noexcept { return model_; }

    // Throws DimensionError if x.cols() != dims().
    std::vector<int> predict(const Matrix& x) const;

private:
    Standardizer scaler_;
    std::size_t n_classes_;
    Model model_;
};

// Inputs are standardized with statistics of `x` before fitting; the stored
// scaler is reapplied in predict(). Throws DataError on fewer than 2 rows or
// a single class.
TrainedClassifier train(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

// Assignment of each row to one of k folds.
struct FoldPlan {
    std::vector<int> fold_of;
    int k = 0;

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
};

// Shuffles each class independently, then deals rows round-robin across
// folds (the deal position carries over between classes). Every class must
// have at least k members, otherwise DataError.
FoldPlan stratified_folds(std::span<const int> y, int k, Rng& rng);

// Pooled accuracy (correct / n) of train-on-complement, predict-on-fold.
double cv_accuracy(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y,
                   const FoldPlan& plan);

}  // namespace mog3p::clf
