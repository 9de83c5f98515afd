#include "mog3p/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mog3p/baselines.hpp"
#include "mog3p/error.hpp"
#include "mog3p/experiment.hpp"
#include "mog3p/mining.hpp"
#include "mog3p/svg.hpp"

namespace mog3p::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

config::RunConfig resolve_config(const CommonOptions& opts) {
    config::RunConfig cfg = opts.config_path ? config::load(*opts.config_path) : config::RunConfig{};
    if (opts.paper_scale) config::apply_paper_scale(cfg);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out_dir) cfg.output_dir = *opts.out_dir;
    if (opts.inner_folds) cfg.objectives.inner_folds = *opts.inner_folds;
    if (opts.aggregation) cfg.objectives.aggregation = obj::aggregation_from_string(*opts.aggregation);
    if (opts.threads < 1) throw ConfigError("--threads must be >= 1");
    return cfg;
}

std::string provenance_line(std::uint64_t seed, const std::string& hash) {
    return "# seed=" + std::to_string(seed) + " config_hash=" + hash + "\n";
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

Dataset load_dataset(const config::RunConfig& cfg) {
    Dataset d = load_csv(cfg.dataset.path, cfg.dataset.csv_options());
    d.check();
    return d;
}

std::string history_csv(const experiment::ExperimentReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "repeat,fold,generation,c_error_min,c_error_mean,v_index_min,v_index_mean,s_size_min,s_size_mean,"
          "archive_size\n";
    for (const auto& run : report.runs)
        for (const auto& h : run.history)
            os << run.archive.repeat << ',' << run.archive.fold << ',' << h.generation << ',' << h.c_error_min
               << ',' << h.c_error_mean << ',' << h.v_index_min << ',' << h.v_index_mean << ',' << h.s_size_min
               << ',' << h.s_size_mean << ',' << h.archive_size << '\n';
    return os.str();
}

std::string coords_csv(const Matrix& coords, const std::vector<int>& y,
                       const std::vector<std::string>& class_names) {
    std::ostringstream os;
    os.precision(17);
    os << "x,y,label\n";
    for (std::size_t i = 0; i < coords.rows(); ++i)
        os << coords(i, 0) << ',' << coords(i, 1) << ',' << class_names.at(static_cast<std::size_t>(y[i])) << '\n';
    return os.str();
}

std::string comment_for(std::uint64_t seed, const std::string& hash) {
    return "seed=" + std::to_string(seed) + " config_hash=" + hash;
}

}  // namespace

void cmd_run(const config::RunConfig& cfg, const fs::path& out_dir, int threads) {
    cfg.validate();
    const Dataset data = load_dataset(cfg);
    const std::string hash = config::config_hash(cfg);
    const auto report = experiment::run_nested_experiment(
        data, cfg.experiment(), threads, [&](std::size_t r, std::size_t f) {
            std::cerr << "run repeat " << r << " fold " << f << "\n";
        });

    mining::ArchiveDump dump;
    dump.dataset = fs::path(cfg.dataset.path).filename().string();
    dump.seed = cfg.seed;
    dump.config_hash = hash;
    dump.feature_names = data.feature_names;
    dump.class_names = data.class_names;
    for (const auto& run : report.runs) dump.runs.push_back(run.archive);

    const std::string prov = provenance_line(cfg.seed, hash);
    write_file(out_dir / "report.csv", prov + experiment::report_csv(report));
    write_file(out_dir / "archive.json", mining::archive_to_json(dump));
    write_file(out_dir / "history.csv", prov + history_csv(report));

    ordered_json manifest;
    manifest["tool"] = "mog3p";
    manifest["command"] = "run";
    manifest["seed"] = cfg.seed;
    manifest["config_hash"] = hash;
    manifest["config"] = ordered_json::parse(config::to_json(cfg));
    manifest["outputs"] = {"report.csv", "archive.json", "history.csv"};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void cmd_baseline(const std::string& method_name, const config::RunConfig& cfg, const fs::path& out_dir) {
    const auto method = baselines::method_from_string(method_name);
    if (cfg.dataset.path.empty()) throw ConfigError("baseline: no dataset given");
    cfg.objectives.validate();
    cfg.cv.validate();
    const Dataset data = load_dataset(cfg);
    const std::string hash = config::config_hash(cfg);

    const auto [standardizer, full] = standardize_fit_transform(data);
    Matrix coords;
    switch (method) {
        case baselines::Method::Pca: coords = baselines::apply(baselines::pca_fit(full.x), full.x); break;
        case baselines::Method::Mds: coords = baselines::mds_fit(full.x).coords; break;
        case baselines::Method::Mda: coords = baselines::apply(baselines::mda_fit(full.x, full.y), full.x); break;
    }
    const auto report =
        experiment::run_baseline_experiment(data, method, cfg.cv, cfg.objectives.bank, cfg.seed);

    const std::string prov = provenance_line(cfg.seed, hash);
    write_file(out_dir / (method_name + "_coords.csv"), prov + coords_csv(coords, data.y, data.class_names));
    write_file(out_dir / (method_name + "_accuracy.csv"), prov + experiment::report_csv(report));
    svg::PlotText text;
    text.title = method_name + " (2D) of " + fs::path(cfg.dataset.path).filename().string();
    text.x_label = method_name + " 1";
    text.y_label = method_name + " 2";
    text.comment = comment_for(cfg.seed, hash);
    write_file(out_dir / (method_name + ".svg"), svg::scatter(coords, data.y, data.class_names, text));
}

void cmd_mine(const fs::path& archive, double tau, const fs::path& out_dir) {
    const auto dump = mining::archive_from_json(read_file(archive));
    const auto report = mining::mine(dump, tau);
    const std::string prov = provenance_line(dump.seed, dump.config_hash);
    write_file(out_dir / "mining.json", mining::report_to_json(report, dump));
    write_file(out_dir / "frontier.csv", prov + mining::frontier_csv(report));
    write_file(out_dir / "feature_frequency.csv", prov + mining::feature_frequency_csv(report));
    write_file(out_dir / "classifier_summary.csv", prov + mining::classifier_summary_csv(report));
    svg::PlotText text;
    text.title = "Feature usage in frontier models (" + dump.dataset + ")";
    text.x_label = "feature";
    text.comment = comment_for(dump.seed, dump.config_hash);
    write_file(out_dir / "feature_frequency.svg",
               svg::bar_chart(report.feature_names, report.feature_frequency, text));
}

void cmd_plot_model(const config::RunConfig& cfg, const fs::path& archive, std::size_t run_index,
                    const fs::path& out_dir) {
    const auto dump = mining::archive_from_json(read_file(archive));
    if (run_index >= dump.runs.size())
        throw ConfigError("plot: run " + std::to_string(run_index) + " not in archive (" +
                          std::to_string(dump.runs.size()) + " runs)");
    const Dataset data = load_dataset(cfg);
    if (data.feature_names != dump.feature_names)
        throw DataError("plot: dataset features do not match the archive");
    const auto& run = dump.runs[run_index];
    const auto& record = run.models.at(run.selected);
    gp::ProjectionModel model;
    for (const auto& e : record.expressions) model.trees.push_back(gp::parse_infix(e, data.feature_names));
    if (model.dims() < 2) throw DataError("plot: model has fewer than 2 dimensions");

    const auto [standardizer, full] = standardize_fit_transform(data);
    const Matrix coords = gp::project(model, full.x);
    const std::string prov = provenance_line(dump.seed, dump.config_hash);
    write_file(out_dir / "model_coords.csv", prov + coords_csv(coords, data.y, data.class_names));
    svg::PlotText text;
    text.title = "repeat " + std::to_string(run.repeat) + " fold " + std::to_string(run.fold);
    text.x_label = record.expressions[0];
    text.y_label = record.expressions[1];
    text.comment = comment_for(dump.seed, dump.config_hash);
    write_file(out_dir / "model.svg", svg::scatter(coords, data.y, data.class_names, text));
}

void cmd_plot_coords(const fs::path& coords_path, const fs::path& out_dir) {
    std::ifstream in(coords_path);
    if (!in) throw ConfigError("cannot read " + coords_path.string());
    // Skip provenance comments written by the other subcommands.
    std::stringstream body;
    std::string line;
    std::string comment;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            if (comment.empty()) comment = line.substr(line.find_first_not_of("# "));
            continue;
        }
        body << line << '\n';
    }
    CsvOptions opts;
    opts.label_column = std::string("label");
    opts.missing = MissingPolicy::Strict;
    const Dataset pts = read_csv(body, opts);
    if (pts.d() != 2) throw DataError("plot: coordinates file must have exactly x,y,label columns");
    svg::PlotText text;
    text.title = coords_path.filename().string();
    text.x_label = pts.feature_names[0];
    text.y_label = pts.feature_names[1];
    text.comment = comment;
    write_file(out_dir / "scatter.svg", svg::scatter(pts.x, pts.y, pts.class_names, text));
}

int report_exception() {
    try {
        throw;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace mog3p::cli
