#include "qd/domain_alchemy.hpp"

#include <cmath>
#include <sstream>

#include "qd/errors.hpp"

namespace qd {

AlchemyDomain::AlchemyDomain(int k, int n_stones) : k_(k), n_stones_(n_stones) {
    if (k < 1) throw ConfigError("alchemy: k must be >= 1");
    if (n_stones < 2) throw ConfigError("alchemy: need at least 2 stones");
    specs_ = {
        {"LatentStateDiversity", false, 100, 150, false, 0.0, 0.5},
        {"ManhattanToOptimal", false, 300, 150, false, 0.0, 3.0},
        {"ParityFirstStone", true, 1, 5, true, 0.0, 4.0},
    };
}

std::vector<double> AlchemyDomain::random_genotype(Rng& rng) const {
    std::vector<double> g(static_cast<std::size_t>(genotype_size()));
    for (double& v : g) v = static_cast<double>(rng.below(2));
    return g;
}

std::vector<std::array<int, 3>> AlchemyDomain::latents(const std::vector<double>& genotype) const {
    std::vector<std::array<int, 3>> stones(static_cast<std::size_t>(n_stones_));
    std::size_t g = 0;
    for (int s = 0; s < n_stones_; ++s) {
        for (int c = 0; c < 3; ++c) {
            int all_on = 1;
            for (int j = 0; j < k_; ++j, ++g)
                if (genotype[g] == 0.0) all_on = 0;
            stones[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] = all_on;
        }
    }
    return stones;
}

LevelEval AlchemyDomain::evaluate(const std::vector<double>& genotype) const {
    if (static_cast<int>(genotype.size()) != genotype_size())
        throw ConfigError("alchemy: genotype length mismatch");
    std::vector<std::array<int, 3>> stones = latents(genotype);
    LevelEval ev;
    ev.features = {alchemy_lsd(stones), alchemy_mto(stones), alchemy_pfs(stones)};
    return ev;
}

void AlchemyDomain::mutate_gene(std::vector<double>& genotype, int i, Rng&) const {
    // Binary alphabet: excluding the current value forces the flip.
    genotype[static_cast<std::size_t>(i)] = 1.0 - genotype[static_cast<std::size_t>(i)];
}

FeatureSamples AlchemyDomain::draw_target_samples(int n, Rng& rng) const {
    FeatureSamples samples;
    samples.names = {"LatentStateDiversity", "ManhattanToOptimal", "ParityFirstStone"};
    samples.discrete = {0, 0, 1};
    samples.columns.resize(3);
    for (int i = 0; i < n; ++i) {
        std::vector<std::array<int, 3>> stones(static_cast<std::size_t>(n_stones_));
        for (auto& stone : stones) {
            auto vertex = rng.below(8);
            stone = {static_cast<int>(vertex & 1), static_cast<int>((vertex >> 1) & 1),
                     static_cast<int>((vertex >> 2) & 1)};
        }
        samples.columns[0].push_back(alchemy_lsd(stones));
        samples.columns[1].push_back(alchemy_mto(stones));
        samples.columns[2].push_back(alchemy_pfs(stones));
    }
    return samples;
}

std::string AlchemyDomain::level_record(const std::vector<double>& genotype) const {
    std::vector<std::array<int, 3>> stones = latents(genotype);
    std::ostringstream oss;
    oss << "stones=";
    for (std::size_t s = 0; s < stones.size(); ++s) {
        if (s) oss << ';';
        oss << stones[s][0] << stones[s][1] << stones[s][2];
    }
    return oss.str();
}

double alchemy_mto(const std::vector<std::array<int, 3>>& stones) {
    double total = 0.0;
    for (const auto& stone : stones)
        total += (1 - stone[0]) + (1 - stone[1]) + (1 - stone[2]);
    return total / static_cast<double>(stones.size());
}

double alchemy_lsd(const std::vector<std::array<int, 3>>& stones) {
    double n = static_cast<double>(stones.size());
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double mean = 0.0;
        for (const auto& stone : stones) mean += stone[static_cast<std::size_t>(c)];
        mean /= n;
        double ss = 0.0;
        for (const auto& stone : stones) {
            double d = stone[static_cast<std::size_t>(c)] - mean;
            ss += d * d;
        }
        total += std::sqrt(ss / n);
    }
    return total / 3.0;
}

double alchemy_pfs(const std::vector<std::array<int, 3>>& stones) {
    const auto& first = stones.front();
    return first[0] + first[1] + first[2];
}

double alchemy_stsd(const std::vector<std::array<int, 3>>& stones) {
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < stones.size(); ++i) {
        for (std::size_t j = i + 1; j < stones.size(); ++j) {
            double d2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                double d = stones[i][static_cast<std::size_t>(c)] - stones[j][static_cast<std::size_t>(c)];
                d2 += d * d;
            }
            total += std::sqrt(d2);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

double alchemy_stsdv(const std::vector<std::array<int, 3>>& stones) {
    std::vector<double> dists;
    for (std::size_t i = 0; i < stones.size(); ++i) {
        for (std::size_t j = i + 1; j < stones.size(); ++j) {
            double d2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                double d = stones[i][static_cast<std::size_t>(c)] - stones[j][static_cast<std::size_t>(c)];
                d2 += d * d;
            }
            dists.push_back(std::sqrt(d2));
        }
    }
    double mean = 0.0;
    for (double d : dists) mean += d;
    mean /= static_cast<double>(dists.size());
    double var = 0.0;
    for (double d : dists) var += (d - mean) * (d - mean);
    return var / static_cast<double>(dists.size());
}

}  // namespace qd
