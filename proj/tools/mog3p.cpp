// mog3p: evolve 2D projections, compute baselines, and mine archives.
//
//   mog3p run --config configs/wbc.json --seed 42 --out out/wbc
//   mog3p baseline mda data/crabs.csv --label class --out out/crabs
//   mog3p mine --archive out/wbc/archive.json --tau 0.005 --out out/wbc/mining
//   mog3p plot --archive out/wbc/archive.json --config configs/wbc.json --out out/wbc

#include <iostream>

#include <CLI11.hpp>

#include "mog3p/cli.hpp"
#include "mog3p/error.hpp"

namespace {

void add_common(CLI::App* cmd, mog3p::cli::CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    cmd->add_option("--seed", o.seed, "Master random seed");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--threads", o.threads, "Evaluation threads (results do not depend on it)");
    cmd->add_option("--inner-folds", o.inner_folds, "Folds of the classifiability cross-validation");
    cmd->add_option("--aggregation", o.aggregation, "Classifier accuracy aggregation")
        ->check(CLI::IsMember({"min", "max", "mean"}));
    cmd->add_option("--tau", o.tau, "Test-error tolerance for the mined frontier");
    cmd->add_flag("--paper-scale", o.paper_scale, "Population 400, 100 generations, 10x10 CV");
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = mog3p::cli;
    CLI::App app{"Multi-objective GP projection pursuit"};
    app.require_subcommand(1);

    cli::CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Nested cross-validated MOG3P experiment");
    add_common(run, run_opts);

    cli::CommonOptions base_opts;
    std::string method;
    std::string dataset;
    std::string label;
    std::vector<std::string> exclude;
    auto* base = app.add_subcommand("baseline", "PCA / MDS / MDA projection, accuracy table and plot");
    base->add_option("method", method, "pca | mds | mda")->required();
    base->add_option("dataset", dataset, "CSV file (overrides the config's dataset)");
    base->add_option("--label", label, "Label column name");
    base->add_option("--exclude", exclude, "Columns to ignore");
    add_common(base, base_opts);

    cli::CommonOptions mine_opts;
    std::string archive;
    auto* mine = app.add_subcommand("mine", "Frontier, feature usage and classifier summary of an archive");
    mine->add_option("--archive", archive, "archive.json written by `run`")->required();
    add_common(mine, mine_opts);

    cli::CommonOptions plot_opts;
    std::string plot_archive;
    std::string coords;
    std::size_t run_index = 0;
    auto* plot = app.add_subcommand("plot", "SVG scatter of an archived model or a coordinates CSV");
    plot->add_option("--archive", plot_archive, "archive.json written by `run`");
    plot->add_option("--run", run_index, "Run index within the archive");
    plot->add_option("--coords", coords, "CSV with x,y,label columns");
    add_common(plot, plot_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kUsage;
    }

    try {
        if (*run) {
            if (!run_opts.config_path) throw mog3p::ConfigError("run: --config is required");
            const auto cfg = cli::resolve_config(run_opts);
            cli::cmd_run(cfg, cfg.output_dir, run_opts.threads);
        } else if (*base) {
            auto cfg = cli::resolve_config(base_opts);
            if (!dataset.empty()) {
                cfg.dataset.path = dataset;
                cfg.dataset.exclude_columns.clear();
            }
            if (!label.empty()) cfg.dataset.label_column = label;
            if (!exclude.empty()) cfg.dataset.exclude_columns = exclude;
            cli::cmd_baseline(method, cfg, cfg.output_dir);
        } else if (*mine) {
            const auto out = mine_opts.out_dir.value_or("mining");
            cli::cmd_mine(archive, mine_opts.tau, out);
        } else if (*plot) {
            const auto out = plot_opts.out_dir.value_or(".");
            if (!coords.empty()) {
                cli::cmd_plot_coords(coords, out);
            } else if (!plot_archive.empty()) {
                if (!plot_opts.config_path) throw mog3p::ConfigError("plot: --config is required with --archive");
                const auto cfg = cli::resolve_config(plot_opts);
                cli::cmd_plot_model(cfg, plot_archive, run_index, out);
            } else {
                throw mog3p::ConfigError("plot: give --coords or --archive");
            }
        }
    } catch (...) {
        return cli::report_exception();
    }
    return cli::kOk;
}
