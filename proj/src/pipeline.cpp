#include "qd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "qd/emitters.hpp"
#include "qd/errors.hpp"
#include "qd/objectives.hpp"

namespace qd {

namespace {

std::vector<std::unique_ptr<Emitter>> make_emitters(const RunConfig& cfg, const Domain& domain) {
    std::vector<std::unique_ptr<Emitter>> out;
    for (int i = 0; i < cfg.n_emitters; ++i) {
        Rng rng = make_stream(cfg.seed, kStreamEmitterBase + static_cast<std::uint64_t>(i));
        if (cfg.emitter == "mutation")
            out.push_back(std::make_unique<MutationEmitter>(domain, cfg.mutation_p, cfg.emitter_batch, rng));
        else if (cfg.emitter == "es")
            out.push_back(std::make_unique<EsEmitter>(domain, cfg.es_sigma, cfg.emitter_batch, rng));
        else
            throw ConfigError("unknown emitter '" + cfg.emitter + "'");
    }
    return out;
}

bool finite_features(const std::vector<double>& f) {
    return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
}

// Score, insert, and tally one batch of evaluated candidates; fills the
// per-candidate outcomes the emitters learn from.
std::vector<CandidateOutcome> score_and_insert(GridArchive& archive, ObjectiveEngine& engine,
                                               const std::vector<std::vector<double>>& genes,
                                               const std::vector<LevelEval>& evals, long iter,
                                               Rng& rng_obj, QdCounts& counts) {
    engine.begin_batch(archive, rng_obj);
    std::vector<double> scores = engine.score(evals, iter, rng_obj);
    std::vector<CandidateOutcome> outcomes(evals.size());
    for (std::size_t i = 0; i < evals.size(); ++i) {
        const LevelEval& ev = evals[i];
        CandidateOutcome& oc = outcomes[i];
        if (!ev.valid) {
            oc.valid = false;
            ++counts.invalid;
            continue;
        }
        oc.objective = scores[i];
        double incumbent = 0.0;
        if (finite_features(ev.features)) {
            const Solution* cur = archive.cell(archive.flat_index(archive.cell_index(ev.features)));
            if (cur) incumbent = cur->objective;
        }
        oc.outcome = archive.insert(Solution{genes[i], ev.features, ev.aux, scores[i], iter});
        switch (oc.outcome) {
            case InsertOutcome::NewCell:
                ++counts.new_cells;
                oc.delta = scores[i];
                break;
            case InsertOutcome::Replaced:
                ++counts.replaced;
                oc.delta = scores[i] - incumbent;
                break;
            case InsertOutcome::RejectedWorse:
                ++counts.rejected_worse;
                oc.delta = scores[i] - incumbent;
                break;
            case InsertOutcome::RejectedNonFinite:
                ++counts.nonfinite;
                oc.valid = false;
                break;
        }
    }
    return outcomes;
}

void qd_iteration(long iter, GridArchive& archive, const Domain& domain,
                  std::vector<std::unique_ptr<Emitter>>& emitters, ObjectiveEngine& engine,
                  Rng& rng_obj, const SampleMask* mask, QdCounts& counts) {
    std::vector<std::vector<double>> genes;
    std::vector<std::size_t> batch_sizes;
    for (std::unique_ptr<Emitter>& em : emitters) {
        std::vector<std::vector<double>> batch = em->ask(archive, mask);
        batch_sizes.push_back(batch.size());
        for (std::vector<double>& g : batch) genes.push_back(std::move(g));
    }
    std::vector<LevelEval> evals;
    evals.reserve(genes.size());
    for (const std::vector<double>& g : genes) evals.push_back(domain.evaluate(g));

    std::vector<CandidateOutcome> outcomes =
        score_and_insert(archive, engine, genes, evals, iter, rng_obj, counts);

    std::size_t offset = 0;
    for (std::size_t e = 0; e < emitters.size(); ++e) {
        std::vector<CandidateOutcome> slice(outcomes.begin() + static_cast<std::ptrdiff_t>(offset),
                                            outcomes.begin() + static_cast<std::ptrdiff_t>(offset + batch_sizes[e]));
        emitters[e]->tell(slice, archive);
        offset += batch_sizes[e];
    }
}

QdCounts sum_counts(const RunStats& stats) {
    QdCounts s;
    for (const QdCounts* c : {&stats.init, &stats.stage1, &stats.stage2}) {
        s.new_cells += c->new_cells;
        s.replaced += c->replaced;
        s.rejected_worse += c->rejected_worse;
        s.invalid += c->invalid;
        s.nonfinite += c->nonfinite;
    }
    return s;
}

long emitter_restarts(const std::vector<std::unique_ptr<Emitter>>& emitters) {
    long n = 0;
    for (const std::unique_ptr<Emitter>& em : emitters) n += em->restarts();
    return n;
}

}  // namespace

RunResult run_pipeline(const RunConfig& cfg) {
    if (cfg.n_init < 1) throw ConfigError("n_init must be >= 1");
    if (cfg.n_stage1 < 0 || cfg.n_stage2 < 0) throw ConfigError("stage lengths must be >= 0");
    if (cfg.n_emitters < 1) throw ConfigError("n_emitters must be >= 1");
    if (cfg.emitter_batch < 1) throw ConfigError("emitter_batch must be >= 1");
    if (cfg.n_target_samples < 2) throw ConfigError("n_target_samples must be >= 2");
    if (cfg.checkpoint_interval < 1) throw ConfigError("checkpoint_interval must be >= 1");
    if (cfg.mask_enabled && cfg.mask_min_cells < 1) throw ConfigError("mask_min_cells must be >= 1");

    std::unique_ptr<Domain> domain_ptr = make_domain(cfg);
    const Domain& domain = *domain_ptr;

    Rng rng_target = make_stream(cfg.seed, kStreamTarget);
    Rng rng_init = make_stream(cfg.seed, kStreamInit);
    Rng rng_obj = make_stream(cfg.seed, kStreamObjectives);

    FeatureSamples target_samples = domain.draw_target_samples(static_cast<int>(cfg.n_target_samples), rng_target);
    TargetModel model = fit_target_model(target_samples);

    const std::vector<FeatureSpec>& specs = domain.feature_specs();
    std::vector<const FittedFeature*> dim_fits;
    for (const FeatureSpec& spec : specs) dim_fits.push_back(&model.by_name(spec.name));

    // Initial population from the unstructured generator.
    std::vector<std::vector<double>> init_genes;
    std::vector<LevelEval> init_evals;
    init_genes.reserve(static_cast<std::size_t>(cfg.n_init));
    for (long i = 0; i < cfg.n_init; ++i) {
        init_genes.push_back(domain.random_genotype(rng_init));
        init_evals.push_back(domain.evaluate(init_genes.back()));
    }
    long init_valid = static_cast<long>(
        std::count_if(init_evals.begin(), init_evals.end(), [](const LevelEval& e) { return e.valid; }));
    if (init_valid == 0)
        throw PipelineError(PipelineError::Code::NoValidLevels,
                            "no valid level in the initial population of " + std::to_string(cfg.n_init));

    // Stage-1 grid: fixed bounds verbatim, data-derived bounds from the
    // population/target hull.
    std::vector<GridDim> dims1;
    for (std::size_t d = 0; d < specs.size(); ++d) {
        const FeatureSpec& spec = specs[d];
        if (spec.fixed_bounds) {
            dims1.push_back(GridDim{spec.name, spec.lo, spec.hi, spec.bins_s1});
        } else {
            double mn = std::numeric_limits<double>::infinity();
            double mx = -std::numeric_limits<double>::infinity();
            for (const LevelEval& ev : init_evals) {
                if (!ev.valid || !std::isfinite(ev.features[d])) continue;
                mn = std::min(mn, ev.features[d]);
                mx = std::max(mx, ev.features[d]);
            }
            auto [lo, hi] = stage1_interval(mn, mx, *dim_fits[d]);
            dims1.push_back(GridDim{spec.name, lo, hi, spec.bins_s1});
        }
    }
    GridArchive archive(dims1);

    SampleMask target_region;
    for (const FittedFeature* fit : dim_fits) {
        target_region.lower.push_back(fit->lo);
        target_region.upper.push_back(fit->hi);
    }

    ObjectiveEngine engine(objective_config(cfg, domain), domain, model);
    std::vector<std::unique_ptr<Emitter>> emitters = make_emitters(cfg, domain);

    RunStats stats;
    std::vector<Checkpoint> checkpoints;
    long evals_done = 0;

    const bool write_snapshots = cfg.archive_snapshots && !cfg.out_dir.empty();
    if (write_snapshots)
        std::filesystem::create_directories(std::filesystem::path(cfg.out_dir) / "snapshots");
    auto maybe_snapshot = [&](const GridArchive& a, long iter, int stage) {
        if (!write_snapshots) return;
        std::filesystem::path p = std::filesystem::path(cfg.out_dir) / "snapshots" /
                                  ("archive_s" + std::to_string(stage) + "_i" + std::to_string(iter) + ".txt");
        std::ofstream out(p);
        a.write_snapshot(out);
    };

    auto record = [&](long iter, int stage, const GridArchive& a, bool mask_active, const SampleMask& mask) {
        Checkpoint cp;
        cp.iter = iter;
        cp.stage = stage;
        cp.evals = evals_done;
        cp.occupied = static_cast<long>(a.occupied());
        cp.target_cells = static_cast<long>(a.occupied_in_mask(target_region));
        QdCounts sum = sum_counts(stats);
        cp.new_cells = sum.new_cells;
        cp.replaced = sum.replaced;
        cp.rejected_worse = sum.rejected_worse;
        cp.invalid = sum.invalid;
        cp.nonfinite = sum.nonfinite;
        cp.mask_active = mask_active;
        if (mask_active) {
            cp.mask_lower = mask.lower;
            cp.mask_upper = mask.upper;
            cp.occupied_in_mask = static_cast<long>(a.occupied_in_mask(mask));
        }
        cp.es_restarts = emitter_restarts(emitters);
        checkpoints.push_back(std::move(cp));
        maybe_snapshot(a, iter, stage);
    };

    // The initial population is the iteration-0 batch.
    {
        std::vector<CandidateOutcome> outcomes =
            score_and_insert(archive, engine, init_genes, init_evals, 0, rng_obj, stats.init);
        (void)outcomes;  // nothing asked for these, so nothing to tell
        evals_done += cfg.n_init;
    }
    SampleMask no_mask;
    record(0, 0, archive, false, no_mask);

    // Stage 1: mask anneals linearly from the full grid to the target
    // bounds (clamped to the grid); a proposal is adopted only while at
    // least mask_min_cells occupied cells keep their centers inside it.
    SampleMask mask;
    SampleMask anneal_target;
    for (std::size_t d = 0; d < dims1.size(); ++d) {
        mask.lower.push_back(dims1[d].lower);
        mask.upper.push_back(dims1[d].upper);
        anneal_target.lower.push_back(std::max(dim_fits[d]->lo, dims1[d].lower));
        anneal_target.upper.push_back(std::min(dim_fits[d]->hi, dims1[d].upper));
    }
    const SampleMask full_mask = mask;

    for (long it = 1; it <= cfg.n_stage1; ++it) {
        if (cfg.mask_enabled) {
            double progress = static_cast<double>(it) / static_cast<double>(cfg.n_stage1);
            SampleMask prop;
            for (std::size_t d = 0; d < dims1.size(); ++d) {
                prop.lower.push_back(full_mask.lower[d] + (anneal_target.lower[d] - full_mask.lower[d]) * progress);
                prop.upper.push_back(full_mask.upper[d] + (anneal_target.upper[d] - full_mask.upper[d]) * progress);
            }
            if (static_cast<long>(archive.occupied_in_mask(prop)) >= cfg.mask_min_cells) {
                mask = std::move(prop);
                ++stats.mask_adoptions;
            } else {
                ++stats.mask_rejections;
            }
        }
        qd_iteration(it, archive, domain, emitters, engine, rng_obj,
                     cfg.mask_enabled ? &mask : nullptr, stats.stage1);
        evals_done += qd_batch(cfg);
        if (it % cfg.checkpoint_interval == 0 || it == cfg.n_stage1)
            record(it, 1, archive, cfg.mask_enabled, mask);
    }
    stats.mask_fallbacks = static_cast<long>(archive.mask_fallbacks());
    SampleMask final_mask = mask;

    // Re-bin every stage-1 elite onto the stage-2 grid over the target
    // bounds; features are recomputed from the genotype and elites outside
    // the bounds are dropped. Objective and birth iteration carry over.
    std::vector<GridDim> dims2;
    for (std::size_t d = 0; d < specs.size(); ++d) {
        const FeatureSpec& spec = specs[d];
        if (spec.fixed_bounds)
            dims2.push_back(GridDim{spec.name, spec.lo, spec.hi, spec.bins_s2});
        else
            dims2.push_back(GridDim{spec.name, dim_fits[d]->lo, dim_fits[d]->hi, spec.bins_s2});
    }
    GridArchive archive2(dims2);
    for (std::size_t flat : archive.occupied_sorted()) {
        const Solution& s = *archive.cell(flat);
        LevelEval ev = domain.evaluate(s.genotype);
        bool inside = ev.valid;
        if (inside)
            for (std::size_t d = 0; d < dims2.size(); ++d)
                if (!(ev.features[d] >= dims2[d].lower && ev.features[d] <= dims2[d].upper)) inside = false;
        if (!inside) {
            ++stats.rebound_dropped;
            continue;
        }
        ++stats.rebound_kept;
        archive2.insert(Solution{s.genotype, ev.features, ev.aux, s.objective, s.birth_iter});
    }
    if (archive2.occupied() == 0)
        throw PipelineError(PipelineError::Code::EmptyStage2,
                            "no stage-1 elite lies inside the target bounds");
    record(cfg.n_stage1, 2, archive2, false, no_mask);

    // Stage 2: fresh emitter state, no mask, global iteration numbering so
    // later candidates still outrank earlier occupants under the novelty
    // objective.
    for (std::unique_ptr<Emitter>& em : emitters) em->reset();
    for (long it = 1; it <= cfg.n_stage2; ++it) {
        long iter = cfg.n_stage1 + it;
        qd_iteration(iter, archive2, domain, emitters, engine, rng_obj, nullptr, stats.stage2);
        evals_done += qd_batch(cfg);
        if (it % cfg.checkpoint_interval == 0 || it == cfg.n_stage2)
            record(iter, 2, archive2, false, no_mask);
    }

    stats.es_restarts = emitter_restarts(emitters);
    stats.total_evals = evals_done;
    stats.n_trs = evals_done - cfg.n_init;

    std::vector<FittedFeature> dim_fit_values;
    for (const FittedFeature* fit : dim_fits) dim_fit_values.push_back(*fit);
    CellPrior prior = build_cell_prior(dim_fit_values, archive2);

    RunResult result{
        cfg,
        std::move(target_samples),
        std::move(model),
        std::move(archive),
        std::move(archive2),
        std::move(prior),
        std::move(target_region),
        std::move(final_mask),
        stats,
        std::move(checkpoints),
    };
    return result;
}

DrawnLevel draw_level(const GridArchive& archive, const CellPrior& prior, const Domain& domain, Rng& rng) {
    if (archive.occupied() == 0) throw ConfigError("cannot draw a level from an empty archive");
    const Solution& s = archive.sample_prior_weighted(prior, rng);
    DrawnLevel out;
    out.solution = &s;
    out.flat = archive.flat_index(archive.cell_index(s.features));
    out.record = domain.level_record(s.genotype);
    return out;
}

}  // namespace qd
