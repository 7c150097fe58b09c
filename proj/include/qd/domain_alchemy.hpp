#pragma once

#include <array>

#include "qd/domain.hpp"

namespace qd {

// Alchemy-lite levels: each of 3 stones has a latent state on a vertex of the
// unit cube. A latent coordinate is 1 only when all k of its controlling
// binary genes are 1 (AND gate), which makes meaningful stone diversity rare
// under uniform random genes. Archive features are latent-state diversity
// (mean per-coordinate standard deviation across stones), mean Manhattan
// distance to the optimal vertex (1,1,1), and the first stone's coordinate
// sum as a parity measure. Stage-1 shape is [100, 300, 1] (parity collapsed),
// stage-2 shape [150, 150, 5]. The downstream target distribution places each
// stone independently uniformly on the 8 cube vertices.
class AlchemyDomain : public Domain {
public:
    explicit AlchemyDomain(int k, int n_stones = 3);

    std::string name() const override { return "alchemy"; }
    int genotype_size() const override { return n_stones_ * 3 * k_; }
    bool discrete_genotype() const override { return true; }
    const std::vector<FeatureSpec>& feature_specs() const override { return specs_; }
    const std::vector<std::string>& aux_names() const override { return aux_names_; }
    std::vector<double> random_genotype(Rng& rng) const override;
    LevelEval evaluate(const std::vector<double>& genotype) const override;
    void mutate_gene(std::vector<double>& genotype, int i, Rng& rng) const override;
    FeatureSamples draw_target_samples(int n, Rng& rng) const override;
    std::string level_record(const std::vector<double>& genotype) const override;

    int k() const { return k_; }
    int n_stones() const { return n_stones_; }
    // Latent stone states (each coordinate 0 or 1) for a genotype.
    std::vector<std::array<int, 3>> latents(const std::vector<double>& genotype) const;

private:
    int k_;
    int n_stones_;
    std::vector<FeatureSpec> specs_;
    std::vector<std::string> aux_names_;
};

// Feature extractors over latent stone states (exposed for tests and the
// downstream sampler).
double alchemy_mto(const std::vector<std::array<int, 3>>& stones);
double alchemy_lsd(const std::vector<std::array<int, 3>>& stones);
double alchemy_pfs(const std::vector<std::array<int, 3>>& stones);
double alchemy_stsd(const std::vector<std::array<int, 3>>& stones);
double alchemy_stsdv(const std::vector<std::array<int, 3>>& stones);

}  // namespace qd
