#include "qd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "qd/errors.hpp"

namespace qd {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string interval(double lo, double hi) { return "[" + fmt(lo) + ", " + fmt(hi) + "]"; }

void lerp3(double t, int rgb[3]) {
    // Dark purple -> teal -> yellow, clamped.
    static const int stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    int a = t < 0.5 ? 0 : 1;
    double u = t < 0.5 ? t * 2.0 : t * 2.0 - 1.0;
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(stops[a][c] + (stops[a + 1][c] - stops[a][c]) * u));
}

}  // namespace

std::string archive_report(const GridArchive& archive, const CellPrior& prior, const TargetModel& model,
                           const Domain& domain, std::uint64_t seed, int n_draws) {
    std::ostringstream out;
    const std::vector<GridDim>& dims = archive.dim_specs();
    out << "archive: occupied=" << archive.occupied() << "/" << archive.num_cells() << " ("
        << fmt(100.0 * static_cast<double>(archive.occupied()) / static_cast<double>(archive.num_cells()))
        << "% coverage)\n";
    for (const GridDim& d : dims)
        out << "  dim " << d.name << ": " << d.bins << " bins over " << interval(d.lower, d.upper) << "\n";
    out << "model:\n";
    for (const FittedFeature& fit : model.fits) out << "  " << fit.describe() << "\n";

    // Per-dimension feature values of the elites (each occupied cell once).
    std::vector<std::vector<double>> elite_cols(dims.size());
    for (std::size_t flat : archive.occupied_order()) {
        const Solution& s = *archive.cell(flat);
        for (std::size_t d = 0; d < dims.size(); ++d) elite_cols[d].push_back(s.features[d]);
    }
    out << "elites vs target (KS distance):\n";
    for (std::size_t d = 0; d < dims.size(); ++d)
        out << "  " << dims[d].name << ": " << fmt(ks_statistic(elite_cols[d], model.by_name(dims[d].name)))
        << "\n";

    if (archive.occupied() > 0 && n_draws > 0) {
        Rng rng = make_stream(seed, kStreamDraws);
        std::vector<std::vector<double>> draw_cols(dims.size());
        for (int i = 0; i < n_draws; ++i) {
            const Solution& s = archive.sample_prior_weighted(prior, rng);
            for (std::size_t d = 0; d < dims.size(); ++d) draw_cols[d].push_back(s.features[d]);
        }
        out << "prior-weighted draws vs target (KS distance, n=" << n_draws << "):\n";
        for (std::size_t d = 0; d < dims.size(); ++d)
            out << "  " << dims[d].name << ": " << fmt(ks_statistic(draw_cols[d], model.by_name(dims[d].name)))
            << "\n";
        out << "draw fallbacks (zero prior mass): " << archive.prior_fallbacks() << "\n";
    }
    (void)domain;
    return out.str();
}

std::string run_report(const RunResult& result, const Domain& domain) {
    const RunStats& st = result.stats;
    std::ostringstream out;
    out << "run: domain=" << result.config.domain << " seed=" << result.config.seed << "\n";
    out << "evaluations: total=" << st.total_evals << " init=" << result.config.n_init
        << " search=" << st.n_trs << "\n";
    auto counts_line = [&](const char* label, const QdCounts& c) {
        out << label << ": evals=" << c.total() << " new_cells=" << c.new_cells << " replaced=" << c.replaced
            << " rejected_worse=" << c.rejected_worse << " invalid=" << c.invalid
            << " nonfinite=" << c.nonfinite << "\n";
    };
    counts_line("init", st.init);
    counts_line("stage1", st.stage1);
    counts_line("stage2", st.stage2);
    out << "stage1 archive: occupied=" << result.stage1.occupied() << "/" << result.stage1.num_cells() << "\n";
    out << "rebound: kept=" << st.rebound_kept << " dropped=" << st.rebound_dropped << "\n";
    if (result.config.mask_enabled) {
        out << "mask: adoptions=" << st.mask_adoptions << " rejections=" << st.mask_rejections
            << " parent_fallbacks=" << st.mask_fallbacks << "\n";
        const std::vector<GridDim>& dims1 = result.stage1.dim_specs();
        for (std::size_t d = 0; d < dims1.size(); ++d)
            out << "  final mask " << dims1[d].name << ": "
                << interval(result.final_mask.lower[d], result.final_mask.upper[d]) << "\n";
    }
    if (result.config.emitter == "es") out << "es restarts: " << st.es_restarts << "\n";
    out << "target region:\n";
    const std::vector<GridDim>& dims2 = result.stage2.dim_specs();
    for (std::size_t d = 0; d < dims2.size(); ++d)
        out << "  " << dims2[d].name << ": "
            << interval(result.target_region.lower[d], result.target_region.upper[d]) << "\n";
    out << "target-region cells occupied: " << result.stage2.occupied_in_mask(result.target_region) << "\n";
    out << archive_report(result.stage2, result.prior, result.model, domain, result.config.seed);
    return out.str();
}

std::string checkpoints_tsv(const std::vector<Checkpoint>& checkpoints) {
    std::ostringstream out;
    out << "iter\tstage\tevals\toccupied\ttarget_cells\tnew_cells\treplaced\trejected_worse\tinvalid\t"
           "nonfinite\tmask\toccupied_in_mask\tes_restarts\n";
    for (const Checkpoint& cp : checkpoints) {
        out << cp.iter << "\t" << cp.stage << "\t" << cp.evals << "\t" << cp.occupied << "\t"
            << cp.target_cells << "\t" << cp.new_cells << "\t" << cp.replaced << "\t" << cp.rejected_worse
            << "\t" << cp.invalid << "\t" << cp.nonfinite << "\t";
        if (cp.mask_active) {
            for (std::size_t d = 0; d < cp.mask_lower.size(); ++d) {
                if (d) out << ";";
                out << fmt(cp.mask_lower[d]) << ":" << fmt(cp.mask_upper[d]);
            }
        } else {
            out << "-";
        }
        out << "\t" << (cp.mask_active ? std::to_string(cp.occupied_in_mask) : "-");
        out << "\t" << cp.es_restarts << "\n";
    }
    return out.str();
}

std::string heatmap_svg(const GridArchive& archive, int dim_x, int dim_y,
                        const SampleMask* target_region, const SampleMask* mask) {
    const std::vector<GridDim>& dims = archive.dim_specs();
    if (dim_x < 0 || dim_y < 0 || dim_x >= archive.dims() || dim_y >= archive.dims() || dim_x == dim_y)
        throw ConfigError("heatmap needs two distinct archive dimensions");
    const GridDim& dx = dims[static_cast<std::size_t>(dim_x)];
    const GridDim& dy = dims[static_cast<std::size_t>(dim_y)];

    // Best objective per 2-D cell (extra dimensions marginalized by max).
    std::unordered_map<long, double> best;
    for (std::size_t flat : archive.occupied_order()) {
        std::vector<int> idx = archive.unflatten(flat);
        long key = static_cast<long>(idx[static_cast<std::size_t>(dim_x)]) * dy.bins +
                   idx[static_cast<std::size_t>(dim_y)];
        double obj = archive.cell(flat)->objective;
        auto [it, fresh] = best.emplace(key, obj);
        if (!fresh) it->second = std::max(it->second, obj);
    }
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& [key, obj] : best) {
        if (first) {
            lo = hi = obj;
            first = false;
        } else {
            lo = std::min(lo, obj);
            hi = std::max(hi, obj);
        }
    }

    const double W = 640.0, H = 640.0, M = 50.0;
    const double cw = W / dx.bins, ch = H / dy.bins;
    auto px = [&](double f) { return M + std::clamp((f - dx.lower) / (dx.upper - dx.lower), 0.0, 1.0) * W; };
    auto py = [&](double f) { return M + (1.0 - std::clamp((f - dy.lower) / (dy.upper - dy.lower), 0.0, 1.0)) * H; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + 2 * M << "\" height=\"" << H + 2 * M
        << "\" viewBox=\"0 0 " << W + 2 * M << " " << H + 2 * M << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << W + 2 * M << "\" height=\"" << H + 2 * M
        << "\" fill=\"#ffffff\"/>\n";
    out << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W << "\" height=\"" << H
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (const auto& [key, obj] : best) {
        int bx = static_cast<int>(key / dy.bins);
        int by = static_cast<int>(key % dy.bins);
        double t = hi > lo ? (obj - lo) / (hi - lo) : 0.5;
        int rgb[3];
        lerp3(t, rgb);
        out << "<rect x=\"" << fmt(M + bx * cw) << "\" y=\"" << fmt(M + (dy.bins - 1 - by) * ch)
            << "\" width=\"" << fmt(cw) << "\" height=\"" << fmt(ch) << "\" fill=\"rgb(" << rgb[0] << ","
            << rgb[1] << "," << rgb[2] << ")\"/>\n";
    }
    auto overlay = [&](const SampleMask& m, const char* color, bool dashed) {
        double x0 = px(m.lower[static_cast<std::size_t>(dim_x)]);
        double x1 = px(m.upper[static_cast<std::size_t>(dim_x)]);
        double y0 = py(m.upper[static_cast<std::size_t>(dim_y)]);
        double y1 = py(m.lower[static_cast<std::size_t>(dim_y)]);
        out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(x1 - x0)
            << "\" height=\"" << fmt(y1 - y0) << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    };
    if (target_region) overlay(*target_region, "#d62728", false);
    if (mask) overlay(*mask, "#ff7f0e", true);
    out << "<text x=\"" << M + W / 2 << "\" y=\"" << 2 * M + H - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">" << dx.name << " " << interval(dx.lower, dx.upper)
        << "</text>\n";
    out << "<text x=\"" << M << "\" y=\"" << M - 10 << "\" font-size=\"14\">" << dy.name << " "
        << interval(dy.lower, dy.upper) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string samples_to_tsv(const FeatureSamples& samples) {
    std::ostringstream out;
    for (std::size_t c = 0; c < samples.names.size(); ++c) {
        if (c) out << "\t";
        out << samples.names[c];
    }
    out << "\n";
    for (std::size_t r = 0; r < samples.rows(); ++r) {
        for (std::size_t c = 0; c < samples.columns.size(); ++c) {
            if (c) out << "\t";
            out << fmt17(samples.columns[c][r]);
        }
        out << "\n";
    }
    return out.str();
}

std::string run_sweep(const RunConfig& base, const std::string& key, const std::vector<std::string>& values) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::ostringstream out;
    out << "value\tseed\toccupied\tcoverage\ttarget_cells\trebound_kept\trebound_dropped\tes_restarts\t"
           "total_evals\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig cfg = base;
        cfg.out_dir.clear();
        cfg.archive_snapshots = false;
        set_config_key(cfg, key, values[i]);
        if (key != "seed") cfg.seed = base.seed + i;
        RunResult res = run_pipeline(cfg);
        out << values[i] << "\t" << cfg.seed << "\t" << res.stage2.occupied() << "\t"
            << fmt(static_cast<double>(res.stage2.occupied()) / static_cast<double>(res.stage2.num_cells()))
            << "\t" << res.stage2.occupied_in_mask(res.target_region) << "\t" << res.stats.rebound_kept
            << "\t" << res.stats.rebound_dropped << "\t" << res.stats.es_restarts << "\t"
            << res.stats.total_evals << "\n";
    }
    return out.str();
}

void write_run_outputs(const RunResult& result, const Domain& domain, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw ConfigError(std::string("cannot write ") + name + " under '" + dir + "'");
        out << text;
    };
    write("config.txt", config_to_string(result.config));
    write("model.txt", model_to_string(result.model));
    write("target_samples.tsv", samples_to_tsv(result.target_samples));
    write("archive_stage1.txt", result.stage1.snapshot_string());
    write("archive_final.txt", result.stage2.snapshot_string());
    write("checkpoints.tsv", checkpoints_tsv(result.checkpoints));
    write("report.txt", run_report(result, domain));
    if (result.stage2.dims() >= 2)
        write("heatmap.svg", heatmap_svg(result.stage2, 0, 1, &result.target_region,
                                         result.config.mask_enabled ? &result.final_mask : nullptr));
}

}  // namespace qd
