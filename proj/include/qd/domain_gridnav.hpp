#pragma once

#include <memory>

#include "qd/domain.hpp"

namespace qd {

// Grid-navigation levels on a G x G board. The genotype is one direct column
// gene theta_x in {0..G-1} plus k ternary genes in {-1,0,1}; their sum s maps
// to the goal row via y = floor((s + k) * G / (2k + 1)). Archive features are
// the integer goal coordinates (x, y) with fixed bounds [0, G) and G bins per
// axis in both stages. The downstream target distribution is uniform over all
// goal cells.
class GridNavDomain : public Domain {
public:
    GridNavDomain(int k, int grid_size);

    std::string name() const override { return "gridnav"; }
    int genotype_size() const override { return 1 + k_; }
    bool discrete_genotype() const override { return true; }
    const std::vector<FeatureSpec>& feature_specs() const override { return specs_; }
    const std::vector<std::string>& aux_names() const override { return aux_names_; }
    std::vector<double> random_genotype(Rng& rng) const override;
    LevelEval evaluate(const std::vector<double>& genotype) const override;
    void mutate_gene(std::vector<double>& genotype, int i, Rng& rng) const override;
    FeatureSamples draw_target_samples(int n, Rng& rng) const override;
    std::string level_record(const std::vector<double>& genotype) const override;

    int k() const { return k_; }
    int grid_size() const { return grid_size_; }
    // Goal coordinates for a genotype.
    std::pair<int, int> goal(const std::vector<double>& genotype) const;

private:
    int k_;
    int grid_size_;
    std::vector<FeatureSpec> specs_;
    std::vector<std::string> aux_names_;
};

// Exact distribution of the sum of k independent uniform ternary genes,
// indexed by s + k for s in [-k, k] (length 2k+1).
std::vector<double> gridnav_sum_distribution(int k);

// Exact marginal distribution of the goal row under uniform random genes:
// the sum distribution pushed through the floor map.
std::vector<double> gridnav_y_marginal(int k, int grid_size);

// Rows reachable under the floor map (those with nonzero marginal mass).
std::vector<int> gridnav_reachable_rows(int k, int grid_size);

// Exact per-cell probabilities of a uniform random genotype landing in each
// of the G*G goal cells (row-major: x * G + y).
std::vector<double> gridnav_cell_probabilities(int k, int grid_size);

// Expected number of distinct cells hit by a batch of b independent draws,
// and the exact standard deviation of that count (pairwise
// inclusion-exclusion over cells).
std::pair<double, double> gridnav_distinct_cells_moments(int k, int grid_size, long batch);

}  // namespace qd
