#include "mog3p/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mog3p/error.hpp"

namespace mog3p::config {

using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void reject_unknown(const ordered_json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const ordered_json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

ordered_json classifier_json(const clf::ClassifierSpec& spec) {
    return std::visit(overloaded{
                          [](const clf::GaussianNB&) { return ordered_json{{"type", "gaussian_nb"}}; },
                          [](const clf::KNearest& k) { return ordered_json{{"type", "knn"}, {"k", k.k}}; },
                          [](const clf::Logistic& l) {
                              return ordered_json{{"type", "logistic"}, {"l2", l.l2}, {"iters", l.iters}, {"lr", l.lr}};
                          },
                      },
                      spec);
}

clf::ClassifierSpec classifier_from_json(const ordered_json& j) {
    const std::string where = "objectives.classifiers[]";
    if (!j.is_object() || !j.contains("type")) throw ConfigError(where + ": missing 'type'");
    std::string type;
    read(j, "type", type, where);
    if (type == "gaussian_nb") {
        reject_unknown(j, {"type"}, where);
        return clf::GaussianNB{};
    }
    if (type == "knn") {
        reject_unknown(j, {"type", "k"}, where);
        clf::KNearest k;
        read(j, "k", k.k, where);
        return k;
    }
    if (type == "logistic") {
        reject_unknown(j, {"type", "l2", "iters", "lr"}, where);
        clf::Logistic l;
        read(j, "l2", l.l2, where);
        read(j, "iters", l.iters, where);
        read(j, "lr", l.lr, where);
        return l;
    }
    throw ConfigError(where + ": unknown classifier type '" + type + "'");
}

ordered_json to_ordered(const RunConfig& cfg) {
    ordered_json j;
    j["version"] = cfg.version;
    ordered_json ds;
    ds["path"] = cfg.dataset.path;
    if (const auto* name = std::get_if<std::string>(&cfg.dataset.label_column))
        ds["label_column"] = *name;
    else
        ds["label_column"] = std::get<std::size_t>(cfg.dataset.label_column);
    ds["exclude_columns"] = cfg.dataset.exclude_columns;
    ds["missing_policy"] = cfg.dataset.missing == MissingPolicy::Drop ? "drop" : "strict";
    j["dataset"] = std::move(ds);
    j["seed"] = cfg.seed;
    j["moea"] = {{"population", cfg.moea.population},
                 {"generations", cfg.moea.generations},
                 {"archive_size", cfg.moea.archive_size},
                 {"tournament_size", cfg.moea.tournament_size}};
    j["gp"] = {{"max_depth_init", cfg.gp.max_depth_init},
               {"init_min_depth", cfg.gp.init_min_depth},
               {"max_depth", cfg.gp.max_depth},
               {"crossover_rate", cfg.gp.crossover_rate},
               {"mutation_rate", cfg.gp.mutation_rate},
               {"target_dims", cfg.gp.target_dims}};
    ordered_json bank = ordered_json::array();
    for (const auto& spec : cfg.objectives.bank) bank.push_back(classifier_json(spec));
    j["objectives"] = {{"aggregation", obj::to_string(cfg.objectives.aggregation)},
                       {"inner_folds", cfg.objectives.inner_folds},
                       {"classifiers", std::move(bank)}};
    j["cv"] = {{"repeats", cfg.cv.repeats}, {"outer_folds", cfg.cv.outer_folds}};
    j["output_dir"] = cfg.output_dir;
    return j;
}

}  // namespace

void RunConfig::validate() const {
    if (version != kConfigVersion) throw ConfigError("unsupported config version " + std::to_string(version));
    if (dataset.path.empty()) throw ConfigError("dataset.path is required");
    moea.validate();
    gp::GpParams g = gp;
    g.n_features = std::max<std::size_t>(g.n_features, 1);
    g.validate();
    objectives.validate();
    cv.validate();
}

experiment::ExperimentConfig RunConfig::experiment() const {
    experiment::ExperimentConfig e;
    e.evolution.moea = moea;
    e.evolution.gp = gp;
    e.evolution.objectives = objectives;
    e.plan = cv;
    e.seed = seed;
    return e;
}

bool RunConfig::operator==(const RunConfig& o) const { return to_json(*this) == to_json(o); }

void apply_paper_scale(RunConfig& cfg) {
    cfg.moea.population = 400;
    cfg.moea.generations = 100;
    cfg.moea.archive_size = 100;
    cfg.objectives.inner_folds = 10;
    cfg.cv.repeats = 10;
    cfg.cv.outer_folds = 10;
}

std::string to_json(const RunConfig& cfg) { return to_ordered(cfg).dump(2) + "\n"; }

RunConfig from_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown(j, {"version", "dataset", "seed", "moea", "gp", "objectives", "cv", "output_dir"}, "config");
    RunConfig cfg;
    read(j, "version", cfg.version, "config");
    if (cfg.version != kConfigVersion)
        throw ConfigError("config: unsupported version " + std::to_string(cfg.version));
    read(j, "seed", cfg.seed, "config");
    read(j, "output_dir", cfg.output_dir, "config");

    if (j.contains("dataset")) {
        const auto& d = j["dataset"];
        reject_unknown(d, {"path", "label_column", "exclude_columns", "missing_policy"}, "dataset");
        read(d, "path", cfg.dataset.path, "dataset");
        if (d.contains("label_column")) {
            const auto& lc = d["label_column"];
            if (lc.is_string())
                cfg.dataset.label_column = lc.get<std::string>();
            else if (lc.is_number_unsigned())
                cfg.dataset.label_column = lc.get<std::size_t>();
            else
                throw ConfigError("dataset.label_column: expected a name or a non-negative index");
        }
        read(d, "exclude_columns", cfg.dataset.exclude_columns, "dataset");
        std::string policy = "drop";
        read(d, "missing_policy", policy, "dataset");
        if (policy == "drop")
            cfg.dataset.missing = MissingPolicy::Drop;
        else if (policy == "strict")
            cfg.dataset.missing = MissingPolicy::Strict;
        else
            throw ConfigError("dataset.missing_policy: expected drop|strict");
    }
    if (j.contains("moea")) {
        const auto& m = j["moea"];
        reject_unknown(m, {"population", "generations", "archive_size", "tournament_size"}, "moea");
        read(m, "population", cfg.moea.population, "moea");
        read(m, "generations", cfg.moea.generations, "moea");
        read(m, "archive_size", cfg.moea.archive_size, "moea");
        read(m, "tournament_size", cfg.moea.tournament_size, "moea");
    }
    if (j.contains("gp")) {
        const auto& g = j["gp"];
        reject_unknown(g, {"max_depth_init", "init_min_depth", "max_depth", "crossover_rate", "mutation_rate", "target_dims"},
                       "gp");
        read(g, "max_depth_init", cfg.gp.max_depth_init, "gp");
        read(g, "init_min_depth", cfg.gp.init_min_depth, "gp");
        read(g, "max_depth", cfg.gp.max_depth, "gp");
        read(g, "crossover_rate", cfg.gp.crossover_rate, "gp");
        read(g, "mutation_rate", cfg.gp.mutation_rate, "gp");
        read(g, "target_dims", cfg.gp.target_dims, "gp");
    }
    if (j.contains("objectives")) {
        const auto& o = j["objectives"];
        reject_unknown(o, {"aggregation", "inner_folds", "classifiers"}, "objectives");
        std::string agg = obj::to_string(cfg.objectives.aggregation);
        read(o, "aggregation", agg, "objectives");
        cfg.objectives.aggregation = obj::aggregation_from_string(agg);
        read(o, "inner_folds", cfg.objectives.inner_folds, "objectives");
        if (o.contains("classifiers")) {
            if (!o["classifiers"].is_array()) throw ConfigError("objectives.classifiers: expected an array");
            cfg.objectives.bank.clear();
            for (const auto& c : o["classifiers"]) cfg.objectives.bank.push_back(classifier_from_json(c));
        }
    }
    if (j.contains("cv")) {
        const auto& c = j["cv"];
        reject_unknown(c, {"repeats", "outer_folds"}, "cv");
        read(c, "repeats", cfg.cv.repeats, "cv");
        read(c, "outer_folds", cfg.cv.outer_folds, "cv");
    }
    return cfg;
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg = from_json(ss.str());
    // relative paths are relative to the config file
    const auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative())
            p = (path.parent_path() / p).lexically_normal().string();
    };
    resolve(cfg.dataset.path);
    resolve(cfg.output_dir);
    return cfg;
}

std::string config_hash(const RunConfig& cfg) {
    RunConfig c = cfg;
    c.output_dir.clear();
    const std::string text = to_json(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mog3p::config
