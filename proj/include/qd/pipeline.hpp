#pragma once

#include <string>
#include <vector>

#include "qd/archive.hpp"
#include "qd/config.hpp"
#include "qd/domain.hpp"
#include "qd/target_model.hpp"

namespace qd {

// Insertion/rejection tallies for a block of level evaluations. Every
// evaluated candidate lands in exactly one bucket, so total() equals the
// number of evaluations in the block.
struct QdCounts {
    long new_cells = 0;
    long replaced = 0;
    long rejected_worse = 0;
    long invalid = 0;    // generator produced no valid level
    long nonfinite = 0;  // non-finite features rejected at insertion

    long total() const { return new_cells + replaced + rejected_worse + invalid + nonfinite; }
};

// One progress row. Counts are cumulative over the whole run (init batch
// included). iter 0 is the state right after the initial population.
struct Checkpoint {
    long iter = 0;
    int stage = 0;  // 0 init, 1, 2
    long evals = 0;
    long occupied = 0;
    long target_cells = 0;  // occupied cells centered inside the target region
    long new_cells = 0;
    long replaced = 0;
    long rejected_worse = 0;
    long invalid = 0;
    long nonfinite = 0;
    bool mask_active = false;
    std::vector<double> mask_lower, mask_upper;  // empty when inactive
    long occupied_in_mask = 0;
    long es_restarts = 0;
};

struct RunStats {
    long total_evals = 0;  // n_init + (n_stage1 + n_stage2) * qd_batch
    long n_trs = 0;        // total_evals minus the initial population
    QdCounts init, stage1, stage2;
    long rebound_kept = 0;
    long rebound_dropped = 0;
    long mask_adoptions = 0;   // proposals that met the occupancy floor
    long mask_rejections = 0;  // proposals that did not
    long mask_fallbacks = 0;   // masked parent draws that fell back to uniform
    long es_restarts = 0;
};

// Everything a finished run produces. stage1 is the stage-1 archive as the
// annealing left it (before re-binning); stage2 is the final archive the
// prior draws from.
struct RunResult {
    RunConfig config;
    FeatureSamples target_samples;
    TargetModel model;
    GridArchive stage1;
    GridArchive stage2;
    CellPrior prior;
    SampleMask target_region;  // fitted target bounds per archive dimension
    SampleMask final_mask;     // stage-1 mask at the stage boundary
    RunStats stats;
    std::vector<Checkpoint> checkpoints;
};

// The full two-stage pipeline:
//  1. draw target samples, fit the per-feature target model;
//  2. evaluate the initial population, size the stage-1 grid (fixed bounds
//     verbatim; data-derived bounds span population plus target, padded);
//  3. stage-1 quality-diversity loop, with the parent sample mask annealing
//     linearly from the full grid to the target bounds (a proposed mask is
//     adopted only while it still covers mask_min_cells occupied cells);
//  4. re-bin onto the stage-2 grid over the target bounds, dropping elites
//     outside them;
//  5. stage-2 quality-diversity loop (no mask, emitters reset);
//  6. discretize the fitted model into a cell prior over the final grid.
// Pure computation except that archive_snapshots + out_dir write a snapshot
// per checkpoint. Throws PipelineError when no initial level is valid or
// the stage-2 archive starts empty.
RunResult run_pipeline(const RunConfig& cfg);

// One level drawn from a finished archive via the cell prior.
struct DrawnLevel {
    std::size_t flat = 0;
    const Solution* solution = nullptr;
    std::string record;
};
DrawnLevel draw_level(const GridArchive& archive, const CellPrior& prior, const Domain& domain, Rng& rng);

// Stream tags used off the master seed (kept stable so runs with equal
// configs reproduce bit-identically): target samples 1, initial population
// 2, objectives 3, level draws 4, emitter i 10+i.
inline constexpr std::uint64_t kStreamTarget = 1;
inline constexpr std::uint64_t kStreamInit = 2;
inline constexpr std::uint64_t kStreamObjectives = 3;
inline constexpr std::uint64_t kStreamDraws = 4;
inline constexpr std::uint64_t kStreamEmitterBase = 10;

}  // namespace qd
