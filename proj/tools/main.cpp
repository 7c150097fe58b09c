#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qd/config.hpp"
#include "qd/errors.hpp"
#include "qd/pipeline.hpp"
#include "qd/report.hpp"
#include "qd/target_model.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qd::ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw qd::ConfigError("cannot write '" + path + "'");
    out << text;
}

// A run directory reloaded for sampling and diagnostics.
struct LoadedRun {
    qd::RunConfig cfg;
    std::unique_ptr<qd::Domain> domain;
    qd::TargetModel model;
    qd::GridArchive archive;
    qd::CellPrior prior;
};

LoadedRun load_run_dir(const std::string& dir) {
    qd::RunConfig cfg = qd::load_config_file(dir + "/config.txt");
    std::unique_ptr<qd::Domain> domain = qd::make_domain(cfg);
    qd::TargetModel model = qd::model_from_string(read_file(dir + "/model.txt"));
    std::ifstream in(dir + "/archive_final.txt");
    if (!in) throw qd::ConfigError("cannot open '" + dir + "/archive_final.txt'");
    qd::GridArchive archive = qd::GridArchive::read_snapshot(in);
    std::vector<qd::FittedFeature> fits;
    for (const qd::GridDim& d : archive.dim_specs()) fits.push_back(model.by_name(d.name));
    qd::CellPrior prior = qd::build_cell_prior(fits, archive);
    return LoadedRun{std::move(cfg), std::move(domain), std::move(model), std::move(archive), std::move(prior)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage quality-diversity level generation with a sample-fitted target"};
    app.require_subcommand(1);

    // fit
    std::string fit_samples, fit_out;
    CLI::App* fit = app.add_subcommand("fit", "Fit the per-feature target model to a sample table");
    fit->add_option("--samples", fit_samples, "Delimited sample table (header + one row per sample)")
        ->required();
    fit->add_option("--out", fit_out, "Also write the serialized model here");

    // run
    std::string run_preset, run_config, run_out, run_sweep_arg;
    std::vector<std::string> run_sets;
    std::uint64_t run_seed = 0;
    bool deterministic = false;
    CLI::App* run = app.add_subcommand("run", "Run the two-stage pipeline");
    run->add_option("--preset", run_preset, "Start from a preset: gridnav, alchemy, racing, racing_misspec");
    run->add_option("--config", run_config, "key=value config file applied on top of the preset");
    run->add_option("--set", run_sets, "Single key=value override (repeatable, applied last)");
    CLI::Option* run_seed_opt = run->add_option("--seed", run_seed, "Master seed; overrides the config");
    run->add_flag("--deterministic", deterministic,
                  "Force sequential execution for bit-exact reproduction (execution is always sequential "
                  "here, so this is the default and only mode)");
    run->add_option("--out", run_out, "Directory for run outputs (config, model, archives, report)");
    run->add_option("--sweep", run_sweep_arg, "axis=v1,v2,...: one run per value, combined table");

    // sample
    std::string sample_dir;
    int sample_n = 10;
    std::uint64_t sample_seed = 0;
    CLI::App* sample = app.add_subcommand("sample", "Draw levels from a finished run via the cell prior");
    sample->add_option("--run", sample_dir, "Run directory")->required();
    sample->add_option("--n", sample_n, "Number of levels to draw");
    CLI::Option* sample_seed_opt = sample->add_option("--seed", sample_seed, "Seed for the draw stream");

    // report
    std::string report_dir;
    std::uint64_t report_seed = 0;
    CLI::App* report = app.add_subcommand("report", "Coverage and marginal diagnostics of a finished run");
    report->add_option("--run", report_dir, "Run directory")->required();
    CLI::Option* report_seed_opt = report->add_option("--seed", report_seed, "Seed for diagnostic draws");

    // heatmap
    std::string heat_dir, heat_x, heat_y, heat_out;
    CLI::App* heatmap = app.add_subcommand("heatmap", "2-D occupancy/objective heatmap of a finished run");
    heatmap->add_option("--run", heat_dir, "Run directory")->required();
    heatmap->add_option("--x", heat_x, "Feature name of the x axis (default: first archive dimension)");
    heatmap->add_option("--y", heat_y, "Feature name of the y axis (default: second archive dimension)");
    heatmap->add_option("--out", heat_out, "Output SVG path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // bad usage is a config error
    }

    try {
        if (fit->parsed()) {
            qd::FeatureSamples samples = qd::parse_sample_table(read_file(fit_samples));
            qd::TargetModel model = qd::fit_target_model(samples);
            for (const qd::FittedFeature& f : model.fits) std::cout << f.describe() << "\n";
            if (!fit_out.empty()) write_file(fit_out, qd::model_to_string(model));
        } else if (run->parsed()) {
            std::string text;
            if (!run_preset.empty()) text += "preset=" + run_preset + "\n";
            if (!run_config.empty()) text += read_file(run_config) + "\n";
            for (const std::string& kv : run_sets) text += kv + "\n";
            qd::RunConfig cfg = qd::config_from_string(text);
            if (run_seed_opt->count() > 0) cfg.seed = run_seed;
            if (!run_out.empty()) cfg.out_dir = run_out;
            if (!run_sweep_arg.empty()) {
                std::size_t eq = run_sweep_arg.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 >= run_sweep_arg.size())
                    throw qd::ConfigError("--sweep wants axis=v1,v2,...");
                std::string axis = run_sweep_arg.substr(0, eq);
                std::vector<std::string> values;
                std::stringstream vs(run_sweep_arg.substr(eq + 1));
                std::string v;
                while (std::getline(vs, v, ','))
                    if (!v.empty()) values.push_back(v);
                std::string table = qd::run_sweep(cfg, axis, values);
                std::cout << table;
                if (!cfg.out_dir.empty()) {
                    std::filesystem::create_directories(cfg.out_dir);
                    write_file(cfg.out_dir + "/sweep.tsv", table);
                }
            } else {
                qd::RunResult result = qd::run_pipeline(cfg);
                std::unique_ptr<qd::Domain> domain = qd::make_domain(cfg);
                if (!cfg.out_dir.empty()) qd::write_run_outputs(result, *domain, cfg.out_dir);
                std::cout << qd::run_report(result, *domain);
            }
        } else if (sample->parsed()) {
            LoadedRun lr = load_run_dir(sample_dir);
            std::uint64_t seed = sample_seed_opt->count() > 0 ? sample_seed : lr.cfg.seed;
            qd::Rng rng = qd::make_stream(seed, qd::kStreamDraws);
            for (int i = 0; i < sample_n; ++i)
                std::cout << qd::draw_level(lr.archive, lr.prior, *lr.domain, rng).record << "\n";
        } else if (report->parsed()) {
            LoadedRun lr = load_run_dir(report_dir);
            std::uint64_t seed = report_seed_opt->count() > 0 ? report_seed : lr.cfg.seed;
            std::cout << qd::archive_report(lr.archive, lr.prior, lr.model, *lr.domain, seed);
        } else if (heatmap->parsed()) {
            LoadedRun lr = load_run_dir(heat_dir);
            const std::vector<qd::GridDim>& dims = lr.archive.dim_specs();
            auto dim_index = [&](const std::string& name, int fallback) {
                if (name.empty()) return fallback;
                for (std::size_t d = 0; d < dims.size(); ++d)
                    if (dims[d].name == name) return static_cast<int>(d);
                throw qd::ConfigError("unknown archive dimension '" + name + "'");
            };
            int ix = dim_index(heat_x, 0);
            int iy = dim_index(heat_y, 1);
            qd::SampleMask target;
            for (const qd::GridDim& d : dims) {
                const qd::FittedFeature& f = lr.model.by_name(d.name);
                target.lower.push_back(f.lo);
                target.upper.push_back(f.hi);
            }
            std::string svg = qd::heatmap_svg(lr.archive, ix, iy, &target, nullptr);
            if (heat_out.empty())
                std::cout << svg;
            else
                write_file(heat_out, svg);
        }
    } catch (const qd::PipelineError& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return e.code == qd::PipelineError::Code::EmptyStage2 ? 3 : 1;
    } catch (const qd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
