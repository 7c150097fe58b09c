#include "qd/emitters.hpp"

#include <algorithm>
#include <cmath>

#include "qd/errors.hpp"

namespace qd {

MutationEmitter::MutationEmitter(const Domain& domain, double p, int batch, Rng rng)
    : domain_(domain), p_(p), batch_(batch), rng_(rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("mutation rate must be in [0, 1]");
    if (batch < 1) throw ConfigError("emitter batch size must be >= 1");
}

std::vector<std::vector<double>> MutationEmitter::ask(const GridArchive& archive, const SampleMask* mask) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(batch_));
    for (int b = 0; b < batch_; ++b) {
        const Solution& parent =
            mask ? archive.sample_uniform_masked(*mask, rng_) : archive.sample_uniform(rng_);
        std::vector<double> child = parent.genotype;
        for (int i = 0; i < static_cast<int>(child.size()); ++i)
            if (rng_.uniform() < p_) domain_.mutate_gene(child, i, rng_);
        out.push_back(std::move(child));
    }
    return out;
}

EsEmitter::EsEmitter(const Domain& domain, double sigma0, int batch, Rng rng)
    : domain_(domain), sigma0_(sigma0), batch_(batch), rng_(rng) {
    if (!(sigma0 > 0.0)) throw ConfigError("ES initial step size must be > 0");
    if (batch < 2) throw ConfigError("ES emitter batch size must be >= 2");
}

void EsEmitter::restart_from(const GridArchive& archive) {
    const Solution& elite = archive.sample_uniform(rng_);
    es_.emplace(domain_.genotype_size(), batch_, sigma0_, elite.genotype);
}

void EsEmitter::reset() { es_.reset(); }

double EsEmitter::sigma() const { return es_ ? es_->sigma() : sigma0_; }

std::vector<std::vector<double>> EsEmitter::ask(const GridArchive& archive, const SampleMask*) {
    // The sample mask constrains archive parent sampling only; ES proposals
    // come from the optimizer's own search distribution.
    if (!es_) restart_from(archive);
    std::vector<std::vector<double>> out = es_->ask(rng_);
    for (std::vector<double>& g : out)
        for (double& v : g) v = std::clamp(v, 0.0, 1.0);
    return out;
}

std::vector<int> improvement_ranking(const std::vector<CandidateOutcome>& outcomes) {
    auto tier = [](const CandidateOutcome& c) {
        if (!c.valid || c.outcome == InsertOutcome::RejectedNonFinite) return 3;
        switch (c.outcome) {
            case InsertOutcome::NewCell: return 0;
            case InsertOutcome::Replaced: return 1;
            default: return 2;
        }
    };
    auto key = [&](const CandidateOutcome& c) {
        if (!c.valid || c.outcome == InsertOutcome::RejectedNonFinite) return 0.0;
        return c.outcome == InsertOutcome::NewCell ? c.objective : c.delta;
    };
    std::vector<int> ranking(outcomes.size());
    for (std::size_t i = 0; i < ranking.size(); ++i) ranking[i] = static_cast<int>(i);
    std::stable_sort(ranking.begin(), ranking.end(), [&](int a, int b) {
        const CandidateOutcome& ca = outcomes[static_cast<std::size_t>(a)];
        const CandidateOutcome& cb = outcomes[static_cast<std::size_t>(b)];
        int ta = tier(ca), tb = tier(cb);
        if (ta != tb) return ta < tb;
        return key(ca) > key(cb);
    });
    return ranking;
}

void EsEmitter::tell(const std::vector<CandidateOutcome>& outcomes, const GridArchive& archive) {
    if (!es_) return;
    if (!es_->tell(improvement_ranking(outcomes))) {
        ++restarts_;
        restart_from(archive);
    }
}

}  // namespace qd
