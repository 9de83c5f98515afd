#include "mog3p/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>

#include "mog3p/error.hpp"

namespace mog3p {

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(n_classes(), 0);
    for (int label : y) ++counts.at(static_cast<std::size_t>(label));
    return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> idx) const {
    Dataset out;
    out.x = x.select_rows(idx);
    out.y.reserve(idx.size());
    for (std::size_t i : idx) out.y.push_back(y.at(i));
    out.feature_names = feature_names;
    out.class_names = class_names;
    return out;
}

void Dataset::check() const {
    if (y.size() != x.rows()) throw DataError("label count does not match row count");
    if (feature_names.size() != x.cols()) throw DataError("feature name count does not match columns");
    for (int label : y)
        if (label < 0 || static_cast<std::size_t>(label) >= class_names.size())
            throw DataError("label outside [0, n_classes)");
    for (double v : x.data())
        if (!std::isfinite(v)) throw DataError("non-finite feature value");
}

bool is_missing_token(std::string_view cell) {
    std::string lower;
    for (char c : cell) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower.empty() || lower == "na" || lower == "?" || lower == "nan";
}

std::string sanitize_feature_name(std::string_view raw, std::size_t position) {
    std::string out;
    for (char c : raw) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    if (out.empty()) out = "f" + std::to_string(position);
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
    cells.push_back(trim(cur));
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset read_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        header = split_csv_line(line, line_no);
        break;
    }
    if (header.empty()) throw DataError("CSV input has no header row");

    std::size_t label_col = 0;
    if (const auto* name = std::get_if<std::string>(&options.label_column)) {
        const auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) throw ConfigError("label column '" + *name + "' not found in header");
        label_col = static_cast<std::size_t>(it - header.begin());
    } else {
        label_col = std::get<std::size_t>(options.label_column);
        if (label_col >= header.size())
            throw ConfigError("label column index " + std::to_string(label_col) + " out of range");
    }

    std::vector<bool> excluded(header.size(), false);
    for (const auto& name : options.exclude_columns) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError("excluded column '" + name + "' not found in header");
        excluded[static_cast<std::size_t>(it - header.begin())] = true;
    }
    if (excluded[label_col]) throw ConfigError("label column is also excluded");

    std::vector<std::size_t> feature_cols;
    Dataset ds;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == label_col || excluded[c]) continue;
        feature_cols.push_back(c);
        ds.feature_names.push_back(sanitize_feature_name(header[c], feature_cols.size() - 1));
    }
    if (feature_cols.empty()) throw DataError("CSV has no feature columns");
    {
        auto sorted = ds.feature_names;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DataError("duplicate feature names after sanitizing");
    }

    std::map<std::string, int> class_ids;
    std::vector<double> values;
    std::vector<double> row(feature_cols.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line, line_no);
        if (cells.size() != header.size())
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(cells.size()));
        bool missing = is_missing_token(cells[label_col]);
        for (std::size_t k = 0; k < feature_cols.size() && !missing; ++k) {
            const auto& cell = cells[feature_cols[k]];
            if (is_missing_token(cell)) {
                missing = true;
            } else if (!parse_double(cell, row[k])) {
                throw DataError("line " + std::to_string(line_no) + ": non-numeric value '" + cell +
                                "' in column '" + header[feature_cols[k]] + "'");
            }
        }
        if (missing) {
            if (options.missing == MissingPolicy::Strict)
                throw DataError("line " + std::to_string(line_no) + ": missing value");
            continue;
        }
        const auto& label = cells[label_col];
        auto [it, inserted] = class_ids.try_emplace(label, static_cast<int>(ds.class_names.size()));
        if (inserted) ds.class_names.push_back(label);
        ds.y.push_back(it->second);
        values.insert(values.end(), row.begin(), row.end());
    }
    if (ds.y.empty()) throw DataError("CSV has no complete data rows");

    ds.x = Matrix(ds.y.size(), feature_cols.size());
    std::copy(values.begin(), values.end(), ds.x.data().begin());
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in, options);
}

std::pair<double, double> mean_and_std(std::span<const double> v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x / static_cast<double>(v.size());
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x - mean));
    if (scale == 0.0 || !std::isfinite(scale)) return {mean, 0.0};
    double acc = 0.0;
    for (double x : v) {
        const double z = (x - mean) / scale;
        acc += z * z;
    }
    return {mean, scale * std::sqrt(acc / static_cast<double>(v.size()))};
}

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    s.means_.resize(x.cols());
    s.stds_.resize(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const auto col = x.column(c);
        const auto [m, sd] = mean_and_std(col);
        s.means_[c] = m;
        s.stds_[c] = std::max(sd, kStdFloor);
    }
    return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != means_.size()) throw DimensionError("standardizer column count mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - means_[c]) / stds_[c];
    return out;
}

std::pair<Standardizer, Dataset> standardize_fit_transform(const Dataset& train) {
    if (train.n() == 0) throw DataError("cannot standardize an empty dataset");
    Standardizer s = Standardizer::fit(train.x);
    return {s, standardize_apply(s, train)};
}

Dataset standardize_apply(const Standardizer& s, const Dataset& other) {
    Dataset out = other;
    out.x = s.transform(other.x);
    return out;
}

}  // namespace mog3p
