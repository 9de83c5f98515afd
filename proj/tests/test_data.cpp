#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mog3p/config.hpp"
#include "mog3p/dataset.hpp"
#include "mog3p/error.hpp"
#include "mog3p/experiment.hpp"
#include "support.hpp"

using namespace mog3p;

namespace {

Dataset parse(const std::string& text, CsvOptions o = {}) {
    std::istringstream in(text);
    return read_csv(in, o);
}

const std::string kData = MOG3P_DATA_DIR;

}  // namespace

TEST_CASE("read_csv: three-line example") {
    CsvOptions o;
    o.label_column = std::string("label");
    const auto ds = parse("a,b,label\n1,2,x\n3,4,y\n", o);
    CHECK(ds.n() == 2);
    CHECK(ds.d() == 2);
    CHECK(ds.x(0, 0) == 1);
    CHECK(ds.x(1, 1) == 4);
    CHECK(ds.y == std::vector<int>{0, 1});
    CHECK(ds.class_names == std::vector<std::string>{"x", "y"});
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("read_csv: options and failure modes") {
    CsvOptions by_index;
    by_index.label_column = std::size_t{0};
    const auto ds = parse("lab,\"f 1\",f2\nB,1,2\nA,3,4\nB,5,6\n", by_index);
    CHECK(ds.y == std::vector<int>{0, 1, 0});
    CHECK(ds.feature_names[0] == "f_1");

    CHECK_THROWS_AS(parse("a,b\n1,2\n"), ConfigError);  // no "class" column
    CsvOptions ex;
    ex.exclude_columns = {"zz"};
    CHECK_THROWS_AS(parse("a,class\n1,x\n", ex), ConfigError);
    CHECK_THROWS_AS(parse("a,class\n1,x\nfoo,y\n"), DataError);
    CHECK_THROWS_AS(parse("a,class\n1,x\n2\n"), DataError);
    CHECK_THROWS_AS(parse(""), DataError);

    const std::string missing = "a,b,class\n1,NA,x\n2,3,y\n?,4,x\n5,6,y\n";
    CHECK(parse(missing).n() == 2);
    CsvOptions strict;
    strict.missing = MissingPolicy::Strict;
    CHECK_THROWS_AS(parse(missing, strict), DataError);
    CHECK(is_missing_token(""));
    CHECK(is_missing_token("NA"));
    CHECK(is_missing_token("?"));
    CHECK_FALSE(is_missing_token("0"));
}

TEST_CASE("bundled datasets load with the expected shapes") {
    CsvOptions o;
    o.exclude_columns = {"", "ID"};
    const auto w = load_csv(kData + "/wbc.csv", o);
    CHECK(w.n() == 683);
    CHECK(w.d() == 9);
    CHECK(w.class_counts() == std::vector<std::size_t>{444, 239});
    CHECK_THROWS_AS(load_csv(kData + "/no_such_file.csv", o), DataError);

    const auto c = load_csv(kData + "/crabs.csv", CsvOptions{});
    CHECK(c.n() == 200);
    CHECK(c.d() == 5);
    CHECK(c.class_counts() == std::vector<std::size_t>{50, 50, 50, 50});
    CHECK_NOTHROW(c.check());
}

TEST_CASE("standardizer") {
    const Matrix x{{0, 7}, {2, 7}};
    const auto s = Standardizer::fit(x);
    CHECK(s.means()[0] == 1.0);
    CHECK(s.stds()[0] == 1.0);
    const auto z = s.transform(x);
    CHECK(z(0, 0) == -1.0);
    CHECK(z(1, 0) == 1.0);
    CHECK(z(0, 1) == 0.0);  // constant column
    CHECK(z(1, 1) == 0.0);
    const auto m = s.transform(Matrix{{1, 7}});
    CHECK(m(0, 0) == 0.0);
    CHECK(m(0, 1) == 0.0);
    CHECK_THROWS_AS(s.transform(Matrix{{1}}), DimensionError);
}

TEST_CASE("outer split standardizes with training statistics only") {
    Rng rng(1);
    const auto ds = testing::blobs({{0, 0}, {4, 4}}, 10, 1.0, rng);
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < ds.n(); ++i) (i % 4 == 0 ? te : tr).push_back(i);
    const auto split = experiment::make_split(ds, tr, te);
    const auto sub = ds.subset(tr);
    const auto s = Standardizer::fit(sub.x);
    CHECK(split.standardizer.means() == s.means());
    for (std::size_t i = 0; i < te.size(); ++i)
        CHECK(split.test.x(i, 0) == (ds.x(te[i], 0) - s.means()[0]) / s.stds()[0]);
}

TEST_CASE("canary: outer test rows cannot influence the evolved archive") {
    Rng rng(5);
    const auto ds = testing::blobs({{0, 0, 0}, {2, 1, 0}}, 30, 1.0, rng);
    Rng fr(9);
    const auto plan = clf::stratified_folds(ds.y, 3, fr);
    const auto tr = plan.train_indices(0), te = plan.test_indices(0);
    auto poisoned = ds;
    for (auto i : te) {
        for (std::size_t j = 0; j < ds.d(); ++j) poisoned.x(i, j) = 1e6 + static_cast<double>(i);
        poisoned.y[i] = 1 - poisoned.y[i];
    }
    moea::EvolutionConfig cfg;
    cfg.moea = {20, 3, 20, 2};
    cfg.gp.max_depth_init = 3;
    cfg.gp.max_depth = 6;
    const auto a = experiment::run_outer_fold(ds, tr, te, cfg, 17, 0, 0);
    const auto b = experiment::run_outer_fold(poisoned, tr, te, cfg, 17, 0, 0);
    REQUIRE(a.archive.models.size() == b.archive.models.size());
    CHECK(a.archive.selected == b.archive.selected);
    for (std::size_t m = 0; m < a.archive.models.size(); ++m) {
        CHECK(a.archive.models[m].expressions == b.archive.models[m].expressions);
        CHECK(a.archive.models[m].objectives == b.archive.models[m].objectives);
        for (std::size_t c = 0; c < a.archive.models[m].per_classifier.size(); ++c)
            CHECK(a.archive.models[m].per_classifier[c].train_accuracy ==
                  b.archive.models[m].per_classifier[c].train_accuracy);
    }
}

TEST_CASE("nested experiment on separable blobs") {
    Rng rng(8);
    const auto ds = testing::blobs({{0, 0, 0}, {6, 6, 6}}, 40, 1.0, rng);
    experiment::ExperimentConfig cfg;
    cfg.evolution.moea = {30, 5, 30, 2};
    cfg.evolution.gp.max_depth_init = 3;
    cfg.evolution.gp.max_depth = 6;
    cfg.plan = {1, 2};
    cfg.seed = 4;
    const auto rep = experiment::run_nested_experiment(ds, cfg);
    REQUIRE(rep.scores.size() == 2);
    for (const auto& run : rep.scores)
        for (const auto& s : run) CHECK(s.test_accuracy >= 0.95);
    const auto again = experiment::run_nested_experiment(ds, cfg, 2);
    CHECK(experiment::report_csv(again) == experiment::report_csv(rep));
    const auto rows = rep.summary();
    REQUIRE(rows.size() == 4);
    CHECK(rows.back().name == "Avg");
    CHECK(rows.back().count == 6);
}

TEST_CASE("report model selection rule") {
    auto mk = [](double c, double v, std::size_t s) {
        moea::Individual i;
        i.fitness = {c, v, s};
        return i;
    };
    const std::vector<moea::Individual> arch{mk(0.1, 0.5, 3), mk(0.05, 0.9, 9), mk(0.05, 0.2, 7), mk(0.05, 0.1, 7)};
    CHECK(experiment::select_report_model(arch) == 3);
}

TEST_CASE("config: defaults, strictness, hashing") {
    const auto cfg = config::load(std::filesystem::path(MOG3P_DATA_DIR) / ".." / "configs" / "wbc.json");
    CHECK(cfg.moea.population == 100);
    CHECK(std::filesystem::exists(cfg.dataset.path));
    CHECK(config::from_json(config::to_json(cfg)) == cfg);

    auto other = cfg;
    other.output_dir = "elsewhere";
    CHECK(config::config_hash(other) == config::config_hash(cfg));
    other.seed = 43;
    CHECK(config::config_hash(other) != config::config_hash(cfg));

    CHECK_THROWS_AS(config::from_json(R"({"version":1,"dataset":{"path":"x"},"bogus":1})"), ConfigError);
    CHECK_THROWS_AS(config::from_json(R"({"version":2,"dataset":{"path":"x"}})"), ConfigError);
    CHECK_THROWS_AS(config::from_json("{"), ConfigError);
    const auto minimal = config::from_json(R"({"version":1,"dataset":{"path":"x.csv"}})");
    CHECK(minimal.moea == moea::MoeaParams{});
    CHECK(minimal.objectives.inner_folds == 3);

    auto big = cfg;
    config::apply_paper_scale(big);
    CHECK(big.moea.population == 400);
    CHECK(big.moea.generations == 100);
    CHECK(big.objectives.inner_folds == 10);
    CHECK(big.cv.repeats == 10);
    CHECK(big.cv.outer_folds == 10);
}
