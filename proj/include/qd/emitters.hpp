#pragma once

#include <memory>
#include <optional>

#include "qd/archive.hpp"
#include "qd/cma_es.hpp"
#include "qd/domain.hpp"
#include "qd/rng.hpp"

namespace qd {

// What happened to one emitted candidate when it reached the archive.
// `delta` is candidate objective minus incumbent objective (equal to the
// objective itself for a new cell). Invalid candidates never reached the
// archive.
struct CandidateOutcome {
    bool valid = true;
    InsertOutcome outcome = InsertOutcome::RejectedWorse;
    double objective = 0.0;
    double delta = 0.0;
};

// A candidate source: proposes a fixed-size batch of genotypes each
// iteration and learns from the per-candidate archive outcomes.
class Emitter {
public:
    virtual ~Emitter() = default;
    virtual std::vector<std::vector<double>> ask(const GridArchive& archive, const SampleMask* mask) = 0;
    virtual void tell(const std::vector<CandidateOutcome>& outcomes, const GridArchive& archive) = 0;
    virtual int batch_size() const = 0;
    // Drop learned state at a stage boundary (the archive it learned on has
    // been rebuilt).
    virtual void reset() {}
    virtual long restarts() const { return 0; }
};

// Mutation emitter for discrete genotypes: each candidate copies a parent
// drawn uniformly from the occupied cells (restricted to the sample mask when
// one is active) and independently resamples each gene over its alphabet
// minus the current value with probability p.
class MutationEmitter : public Emitter {
public:
    MutationEmitter(const Domain& domain, double p, int batch, Rng rng);

    std::vector<std::vector<double>> ask(const GridArchive& archive, const SampleMask* mask) override;
    void tell(const std::vector<CandidateOutcome>&, const GridArchive&) override {}
    int batch_size() const override { return batch_; }

private:
    const Domain& domain_;
    double p_;
    int batch_;
    Rng rng_;
};

// Evolution-strategy emitter for continuous genotypes. Asks come from a
// CMA-ES whose mean starts at a uniformly drawn elite; samples are clipped
// to the unit gene box for evaluation while the optimizer keeps the raw
// steps. Candidates are ranked for the update by archive improvement: new
// cells first (by objective), then replacements (by objective gain), then
// rejections (by shortfall). The emitter restarts from a fresh elite only
// when the optimizer goes numerically unhealthy (step size collapsed below
// 1e-8, exploded, or the covariance update failed); sustained rejection is
// left to shrink the step size so the search can refine toward precise
// genotypes before the restart fires.
class EsEmitter : public Emitter {
public:
    EsEmitter(const Domain& domain, double sigma0, int batch, Rng rng);

    std::vector<std::vector<double>> ask(const GridArchive& archive, const SampleMask* mask) override;
    void tell(const std::vector<CandidateOutcome>& outcomes, const GridArchive& archive) override;
    int batch_size() const override { return batch_; }
    void reset() override;
    long restarts() const override { return restarts_; }
    // Current CMA-ES step size (sigma0 before the first ask).
    double sigma() const;

private:
    void restart_from(const GridArchive& archive);

    const Domain& domain_;
    double sigma0_;
    int batch_;
    Rng rng_;
    std::optional<CmaEs> es_;
    long restarts_ = 0;
};

// Ranking indices (best first) for an ES batch from its outcomes.
std::vector<int> improvement_ranking(const std::vector<CandidateOutcome>& outcomes);

}  // namespace qd
