#pragma once

#include <string>
#include <vector>

#include "qd/pipeline.hpp"

namespace qd {

// Diagnostics of a final archive against its fitted target model: occupancy,
// coverage, target-region cell count, and per-dimension Kolmogorov-Smirnov
// distances of the elites and of prior-weighted level draws (n_draws of
// them, from the draw stream of `seed`).
std::string archive_report(const GridArchive& archive, const CellPrior& prior, const TargetModel& model,
                           const Domain& domain, std::uint64_t seed, int n_draws = 10000);

// Full plain-text summary of a finished run: evaluation accounting, stage
// tallies, mask annealing and rebound statistics, then archive diagnostics.
std::string run_report(const RunResult& result, const Domain& domain);

// Tab-separated checkpoint table (header + one row per checkpoint).
std::string checkpoints_tsv(const std::vector<Checkpoint>& checkpoints);

// Occupancy of two archive dimensions as a standalone SVG heatmap. Cell
// color encodes the objective normalized over occupied cells; extra
// dimensions are marginalized by keeping the best objective per 2-D cell.
// Optional overlays outline the target region and the sample mask.
std::string heatmap_svg(const GridArchive& archive, int dim_x, int dim_y,
                        const SampleMask* target_region = nullptr, const SampleMask* mask = nullptr);

// Tab-separated sample table (header of feature names + one row per sample).
std::string samples_to_tsv(const FeatureSamples& samples);

// One full run per value of `values` assigned to config key `key`, the i-th
// run seeded base.seed + i; returns a TSV of headline metrics per run.
// Sweep runs stay in memory (out_dir and snapshots are ignored).
std::string run_sweep(const RunConfig& base, const std::string& key, const std::vector<std::string>& values);

// Write the run directory: config.txt, model.txt, target_samples.tsv,
// archive_stage1.txt, archive_final.txt, checkpoints.tsv, report.txt, and
// heatmap.svg (first two dimensions) when the archive is at least 2-D.
void write_run_outputs(const RunResult& result, const Domain& domain, const std::string& dir);

}  // namespace qd
