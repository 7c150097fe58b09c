#pragma once

#include <string>
#include <vector>

#include "qd/archive.hpp"
#include "qd/domain.hpp"
#include "qd/rng.hpp"
#include "qd/target_model.hpp"

namespace qd {

// Which objective variants are active and which features they read.
struct ObjectiveConfig {
    bool j_new = false;
    bool j_align = false;
    bool j_diverse = false;
    bool j_random = false;
    std::vector<std::string> align_features;
    std::vector<std::string> diversity_features;
    int diversity_refs = 8;

    int enabled_count() const {
        return (j_new ? 1 : 0) + (j_align ? 1 : 0) + (j_diverse ? 1 : 0) + (j_random ? 1 : 0);
    }
};

// Objective evaluation for one batch of candidates.
//
// - novelty: the current iteration index, so later candidates always beat
//   earlier occupants of the same cell.
// - alignment: -sum_i |f_i - t_i| / range_i over the alignment features,
//   where each target t_i is drawn once per batch from that feature's fitted
//   distribution and range_i is the width of its target bounds (zero-width
//   terms are omitted). Maximum 0 at perfect alignment.
// - diversity: reference solutions are drawn uniformly from the occupied
//   cells once per batch; the score is the mean over references of the mean
//   per-feature |f - ref| / range_i. 0 when the archive is empty.
// - random: one uniform [0,1) draw per candidate.
//
// With a single enabled variant the raw value is the objective (novelty must
// stay raw to keep its cross-batch monotonicity). With several, each
// variant is min-max normalized over the batch's valid candidates and the
// normalized values are summed, so no variant dominates by units.
class ObjectiveEngine {
public:
    ObjectiveEngine(ObjectiveConfig cfg, const Domain& domain, const TargetModel& model);

    // Draw batch-scoped state (alignment targets, diversity references).
    // Call once per batch before score().
    void begin_batch(const GridArchive& archive, Rng& rng);

    // Combined objective per candidate; entries for invalid candidates are 0
    // and excluded from normalization. Consumes one uniform draw per
    // candidate (valid or not) when the random variant is enabled.
    std::vector<double> score(const std::vector<LevelEval>& evals, long iter, Rng& rng) const;

    // Raw single-variant values, exposed for tests.
    double novelty(long iter) const { return static_cast<double>(iter); }
    double alignment(const LevelEval& ev) const;
    double diversity(const LevelEval& ev) const;

    const std::vector<double>& current_targets() const { return targets_; }

private:
    struct FeatureRef {
        bool is_aux = false;
        int idx = 0;
        double range = 1.0;
        const FittedFeature* fit = nullptr;
    };
    static double value_of(const LevelEval& ev, const FeatureRef& ref);

    ObjectiveConfig cfg_;
    std::vector<FeatureRef> align_refs_;
    std::vector<FeatureRef> diverse_refs_;
    std::vector<double> targets_;                   // one per alignment feature
    std::vector<std::vector<double>> ref_values_;   // reference x diversity feature
};

}  // namespace qd
