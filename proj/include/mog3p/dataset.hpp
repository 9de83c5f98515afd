#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mog3p/matrix.hpp"

namespace mog3p {

// Feature matrix with integer class labels in [0, n_classes).
struct Dataset {
    Matrix x;
    std::vector<int> y;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;

    std::size_t n() const noexcept { return x.rows(); }
    std::size_t d() const noexcept { return x.cols(); }
    std::size_t n_classes() const noexcept { return class_names.size(); }
    std::vector<std::size_t> class_counts() const;

    // Rows `idx` in the given order; names are kept.
    Dataset subset(std::span<const std::size_t> idx) const;

    // Throws DataError unless labels, shapes, and names are consistent.
    void check() const;
};

enum class MissingPolicy { Drop, Strict };

// A column chosen by header name or by 0-based position.
using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvOptions {
    ColumnRef label_column = std::string("class");
    std::vector<std::string> exclude_columns;
    MissingPolicy missing = MissingPolicy::Drop;
};

// Cells treated as missing: empty, "NA", "?", "nan" (case-insensitive).
bool is_missing_token(std::string_view cell);

// Reads a header-first CSV. The label column is factorized in first-appearance
// order. Feature names are reduced to [A-Za-z0-9_.] so they survive the
// expression text format. Unknown label/excluded columns raise ConfigError,
// malformed content raises DataError naming the line.
Dataset read_csv(std::istream& in, const CsvOptions& options);
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

std::string sanitize_feature_name(std::string_view raw, std::size_t position);

class Standardizer {
public:
    static constexpr double kStdFloor = 1e-9;

    Standardizer() = default;
    static Standardizer fit(const Matrix& x);

    Matrix transform(const Matrix& x) const;

    const std::vector<double>& means() const noexcept { return means_; }
    const std::vector<double>& stds() const noexcept { return stds_; }

private:
    std::vector<double> means_;
    std::vector<double> stds_;
};

// Column mean and population standard deviation, robust to values near the
// double range (the deviations are rescaled before squaring).
std::pair<double, double> mean_and_std(std::span<const double> v);

std::pair<Standardizer, Dataset> standardize_fit_transform(const Dataset& train);
Dataset standardize_apply(const Standardizer& s, const Dataset& other);

}  // namespace mog3p
