#include "mog3p/mining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mog3p/error.hpp"

namespace mog3p::mining {

using nlohmann::ordered_json;

double ModelRecord::test_error() const noexcept {
    if (per_classifier.empty()) return 1.0;
    double s = 0.0;
    for (const auto& c : per_classifier) s += c.test_accuracy;
    return 1.0 - s / static_cast<double>(per_classifier.size());
}

std::set<std::size_t> extract_features_used(const gp::ExpressionTree& tree) { return tree.variables(); }

std::set<std::size_t> extract_features_used(std::string_view expression,
                                            std::span<const std::string> names) {
    return gp::parse_infix(expression, names).variables();
}

std::vector<ModelRecord> frontier(std::span<const ModelRecord> records, double tau) {
    if (records.empty()) return {};
    double best = records.front().test_error();
    for (const auto& r : records) best = std::min(best, r.test_error());
    std::vector<const ModelRecord*> pool;
    for (const auto& r : records)
        if (r.test_error() <= best + tau) pool.push_back(&r);

    // In (size, error) order a record survives iff its error is the minimum of
    // its size group and strictly below every error at smaller sizes.
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = *pool[a];
        const auto& y = *pool[b];
        if (x.objectives.s_size != y.objectives.s_size) return x.objectives.s_size < y.objectives.s_size;
        return x.train_error() < y.train_error();
    });
    std::vector<ModelRecord> out;
    double best_error_smaller_size = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < order.size()) {
        const auto size = pool[order[i]]->objectives.s_size;
        const double group_min = pool[order[i]]->train_error();
        std::size_t j = i;
        for (; j < order.size() && pool[order[j]]->objectives.s_size == size; ++j) {
            const auto& r = *pool[order[j]];
            if (r.train_error() == group_min && group_min < best_error_smaller_size) out.push_back(r);
        }
        best_error_smaller_size = std::min(best_error_smaller_size, group_min);
        i = j;
    }
    return out;
}

std::vector<std::size_t> feature_frequency(std::span<const ModelRecord> records,
                                           std::size_t n_features) {
    std::vector<std::size_t> counts(n_features, 0);
    for (const auto& r : records)
        for (std::size_t f : r.features_used) {
            if (f >= n_features) throw DimensionError("feature index beyond feature count");
            ++counts[f];
        }
    return counts;
}

std::pair<double, double> mean_std(std::span<const double> v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

std::vector<ClassifierSummary> classifier_summary(std::span<const ModelRecord> records) {
    std::vector<std::string> names;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> acc;
    for (const auto& r : records)
        for (const auto& c : r.per_classifier) {
            if (!acc.contains(c.name)) names.push_back(c.name);
            acc[c.name].first.push_back(c.train_accuracy);
            acc[c.name].second.push_back(c.test_accuracy);
        }
    std::vector<ClassifierSummary> out;
    for (const auto& n : names) {
        ClassifierSummary s;
        s.name = n;
        std::tie(s.train_mean, s.train_std) = mean_std(acc[n].first);
        std::tie(s.test_mean, s.test_std) = mean_std(acc[n].second);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ModelRecord> ArchiveDump::all_records() const {
    std::vector<ModelRecord> out;
    for (const auto& run : runs) out.insert(out.end(), run.models.begin(), run.models.end());
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json record_json(const ModelRecord& r) {
    ordered_json j;
    j["expressions"] = r.expressions;
    j["c_error"] = r.objectives.c_error;
    j["v_index"] = r.objectives.v_index;
    j["s_size"] = r.objectives.s_size;
    ordered_json cls = ordered_json::array();
    for (const auto& c : r.per_classifier)
        cls.push_back({{"name", c.name}, {"train_accuracy", c.train_accuracy}, {"test_accuracy", c.test_accuracy}});
    j["classifiers"] = std::move(cls);
    j["features_used"] = std::vector<std::size_t>(r.features_used.begin(), r.features_used.end());
    return j;
}

ModelRecord record_from_json(const ordered_json& j, std::size_t repeat, std::size_t fold,
                             std::span<const std::string> names) {
    ModelRecord r;
    r.expressions = j.at("expressions").get<std::vector<std::string>>();
    r.objectives.c_error = j.at("c_error").get<double>();
    r.objectives.v_index = j.at("v_index").get<double>();
    r.objectives.s_size = j.at("s_size").get<std::size_t>();
    for (const auto& c : j.at("classifiers"))
        r.per_classifier.push_back({c.at("name").get<std::string>(), c.at("train_accuracy").get<double>(),
                                    c.at("test_accuracy").get<double>()});
    r.repeat = repeat;
    r.fold = fold;
    for (const auto& e : r.expressions) {
        const auto used = extract_features_used(e, names);
        r.features_used.insert(used.begin(), used.end());
    }
    const auto stored = j.at("features_used").get<std::vector<std::size_t>>();
    if (std::set<std::size_t>(stored.begin(), stored.end()) != r.features_used)
        throw DataError("archive: features_used does not match the expressions");
    return r;
}

}  // namespace

std::string archive_to_json(const ArchiveDump& dump) {
    ordered_json j;
    j["version"] = dump.version;
    j["dataset"] = dump.dataset;
    j["seed"] = dump.seed;
    j["config_hash"] = dump.config_hash;
    j["feature_names"] = dump.feature_names;
    j["class_names"] = dump.class_names;
    ordered_json runs = ordered_json::array();
    for (const auto& run : dump.runs) {
        ordered_json rj;
        rj["repeat"] = run.repeat;
        rj["fold"] = run.fold;
        rj["selected"] = run.selected;
        ordered_json models = ordered_json::array();
        for (const auto& m : run.models) models.push_back(record_json(m));
        rj["models"] = std::move(models);
        runs.push_back(std::move(rj));
    }
    j["runs"] = std::move(runs);
    return j.dump(1) + "\n";
}

ArchiveDump archive_from_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw DataError(std::string("archive: invalid JSON: ") + e.what());
    }
    try {
        ArchiveDump d;
        d.version = j.at("version").get<int>();
        if (d.version != kArchiveVersion)
            throw DataError("archive: schema version " + std::to_string(d.version) + " is not supported (expected " +
                            std::to_string(kArchiveVersion) + ")");
        d.dataset = j.at("dataset").get<std::string>();
        d.seed = j.at("seed").get<std::uint64_t>();
        d.config_hash = j.at("config_hash").get<std::string>();
        d.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        d.class_names = j.at("class_names").get<std::vector<std::string>>();
        for (const auto& rj : j.at("runs")) {
            RunArchive run;
            run.repeat = rj.at("repeat").get<std::size_t>();
            run.fold = rj.at("fold").get<std::size_t>();
            run.selected = rj.at("selected").get<std::size_t>();
            for (const auto& m : rj.at("models"))
                run.models.push_back(record_from_json(m, run.repeat, run.fold, d.feature_names));
            if (!run.models.empty() && run.selected >= run.models.size())
                throw DataError("archive: selected index out of range");
            d.runs.push_back(std::move(run));
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("archive: malformed content: ") + e.what());
    }
}

MiningReport mine(const ArchiveDump& dump, double tau) {
    if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
    MiningReport rep;
    rep.tau = tau;
    const auto records = dump.all_records();
    rep.frontier = frontier(records, tau);
    rep.feature_names = dump.feature_names;
    rep.feature_frequency = feature_frequency(rep.frontier, dump.feature_names.size());
    rep.classifier_summary = classifier_summary(rep.frontier);
    return rep;
}

std::string report_to_json(const MiningReport& report, const ArchiveDump& dump) {
    ordered_json j;
    j["dataset"] = dump.dataset;
    j["seed"] = dump.seed;
    j["config_hash"] = dump.config_hash;
    j["tau"] = report.tau;
    ordered_json fr = ordered_json::array();
    for (const auto& r : report.frontier) {
        auto rj = record_json(r);
        rj["repeat"] = r.repeat;
        rj["fold"] = r.fold;
        rj["test_error"] = r.test_error();
        fr.push_back(std::move(rj));
    }
    j["frontier"] = std::move(fr);
    ordered_json freq = ordered_json::array();
    for (std::size_t f = 0; f < report.feature_names.size(); ++f)
        freq.push_back({{"feature", report.feature_names[f]}, {"count", report.feature_frequency[f]}});
    j["feature_frequency"] = std::move(freq);
    ordered_json cls = ordered_json::array();
    for (const auto& c : report.classifier_summary)
        cls.push_back({{"name", c.name},
                       {"train_mean", c.train_mean},
                       {"train_std", c.train_std},
                       {"test_mean", c.test_mean},
                       {"test_std", c.test_std}});
    j["classifier_summary"] = std::move(cls);
    return j.dump(1) + "\n";
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string frontier_csv(const MiningReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "repeat,fold,s_size,train_error,test_error,v_index,expressions\n";
    for (const auto& r : report.frontier) {
        std::string expr;
        for (std::size_t i = 0; i < r.expressions.size(); ++i) expr += (i ? " ; " : "") + r.expressions[i];
        os << r.repeat << ',' << r.fold << ',' << r.objectives.s_size << ',' << r.train_error() << ','
           << r.test_error() << ',' << r.objectives.v_index << ',' << csv_quote(expr) << '\n';
    }
    return os.str();
}

std::string feature_frequency_csv(const MiningReport& report) {
    std::ostringstream os;
    os << "feature,count\n";
    for (std::size_t f = 0; f < report.feature_names.size(); ++f)
        os << report.feature_names[f] << ',' << report.feature_frequency[f] << '\n';
    return os.str();
}

std::string classifier_summary_csv(const MiningReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "classifier,train_mean,train_std,test_mean,test_std\n";
    for (const auto& c : report.classifier_summary)
        os << c.name << ',' << c.train_mean << ',' << c.train_std << ',' << c.test_mean << ','
           << c.test_std << '\n';
    return os.str();
}

}  // namespace mog3p::mining
