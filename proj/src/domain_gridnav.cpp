#include "qd/domain_gridnav.hpp"

#include <cmath>
#include <sstream>

#include "qd/errors.hpp"

namespace qd {

GridNavDomain::GridNavDomain(int k, int grid_size) : k_(k), grid_size_(grid_size) {
    if (k < 1) throw ConfigError("gridnav: k must be >= 1");
    if (grid_size < 3 || grid_size % 2 == 0) throw ConfigError("gridnav: grid size must be odd and >= 3");
    double g = grid_size;
    specs_ = {
        {"XPosition", true, grid_size, grid_size, true, 0.0, g},
        {"YPosition", true, grid_size, grid_size, true, 0.0, g},
    };
}

std::vector<double> GridNavDomain::random_genotype(Rng& rng) const {
    std::vector<double> g(static_cast<std::size_t>(genotype_size()));
    g[0] = static_cast<double>(rng.below(static_cast<std::uint64_t>(grid_size_)));
    for (int j = 1; j <= k_; ++j)
        g[static_cast<std::size_t>(j)] = static_cast<double>(rng.below(3)) - 1.0;
    return g;
}

std::pair<int, int> GridNavDomain::goal(const std::vector<double>& genotype) const {
    int x = static_cast<int>(genotype[0]);
    long s = 0;
    for (int j = 1; j <= k_; ++j) s += static_cast<long>(genotype[static_cast<std::size_t>(j)]);
    int y = static_cast<int>((s + k_) * static_cast<long>(grid_size_) / (2L * k_ + 1));
    return {x, y};
}

LevelEval GridNavDomain::evaluate(const std::vector<double>& genotype) const {
    if (static_cast<int>(genotype.size()) != genotype_size())
        throw ConfigError("gridnav: genotype length mismatch");
    auto [x, y] = goal(genotype);
    LevelEval ev;
    ev.features = {static_cast<double>(x), static_cast<double>(y)};
    return ev;
}

void GridNavDomain::mutate_gene(std::vector<double>& genotype, int i, Rng& rng) const {
    if (i == 0) {
        auto cur = static_cast<std::uint64_t>(genotype[0]);
        auto r = rng.below(static_cast<std::uint64_t>(grid_size_) - 1);
        genotype[0] = static_cast<double>(r >= cur ? r + 1 : r);
    } else {
        long cur = static_cast<long>(genotype[static_cast<std::size_t>(i)]) + 1;  // 0..2
        long r = static_cast<long>(rng.below(2));
        long next = r >= cur ? r + 1 : r;
        genotype[static_cast<std::size_t>(i)] = static_cast<double>(next - 1);
    }
}

FeatureSamples GridNavDomain::draw_target_samples(int n, Rng& rng) const {
    FeatureSamples samples;
    samples.names = {"XPosition", "YPosition"};
    samples.discrete = {1, 1};
    samples.columns.resize(2);
    for (int i = 0; i < n; ++i) {
        samples.columns[0].push_back(static_cast<double>(rng.below(static_cast<std::uint64_t>(grid_size_))));
        samples.columns[1].push_back(static_cast<double>(rng.below(static_cast<std::uint64_t>(grid_size_))));
    }
    return samples;
}

std::string GridNavDomain::level_record(const std::vector<double>& genotype) const {
    auto [x, y] = goal(genotype);
    std::ostringstream oss;
    oss << "grid=" << grid_size_ << " goal_x=" << x << " goal_y=" << y;
    return oss.str();
}

std::vector<double> gridnav_sum_distribution(int k) {
    std::vector<double> dist = {1.0};
    for (int j = 0; j < k; ++j) {
        std::vector<double> next(dist.size() + 2, 0.0);
        for (std::size_t i = 0; i < dist.size(); ++i) {
            next[i] += dist[i] / 3.0;
            next[i + 1] += dist[i] / 3.0;
            next[i + 2] += dist[i] / 3.0;
        }
        dist = std::move(next);
    }
    return dist;  // index = s + k
}

std::vector<double> gridnav_y_marginal(int k, int grid_size) {
    std::vector<double> sum_dist = gridnav_sum_distribution(k);
    std::vector<double> marginal(static_cast<std::size_t>(grid_size), 0.0);
    for (std::size_t i = 0; i < sum_dist.size(); ++i) {
        auto y = static_cast<std::size_t>(static_cast<long>(i) * grid_size / (2L * k + 1));
        marginal[y] += sum_dist[i];
    }
    return marginal;
}

std::vector<int> gridnav_reachable_rows(int k, int grid_size) {
    std::vector<double> marginal = gridnav_y_marginal(k, grid_size);
    std::vector<int> rows;
    for (int y = 0; y < grid_size; ++y)
        if (marginal[static_cast<std::size_t>(y)] > 0.0) rows.push_back(y);
    return rows;
}

std::vector<double> gridnav_cell_probabilities(int k, int grid_size) {
    std::vector<double> marginal = gridnav_y_marginal(k, grid_size);
    std::vector<double> cells(static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size));
    for (int x = 0; x < grid_size; ++x)
        for (int y = 0; y < grid_size; ++y)
            cells[static_cast<std::size_t>(x * grid_size + y)] =
                marginal[static_cast<std::size_t>(y)] / grid_size;
    return cells;
}

std::pair<double, double> gridnav_distinct_cells_moments(int k, int grid_size, long batch) {
    std::vector<double> p = gridnav_cell_probabilities(k, grid_size);
    auto b = static_cast<double>(batch);
    double mean = 0.0;
    std::vector<double> q(p.size());  // P(cell untouched by the batch)
    for (std::size_t c = 0; c < p.size(); ++c) {
        q[c] = std::pow(1.0 - p[c], b);
        mean += 1.0 - q[c];
    }
    double var = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) var += q[c] * (1.0 - q[c]);
    for (std::size_t c = 0; c < p.size(); ++c) {
        for (std::size_t d = 0; d < p.size(); ++d) {
            if (c == d) continue;
            double both = 1.0 - q[c] - q[d] + std::pow(1.0 - p[c] - p[d], b);
            var += both - (1.0 - q[c]) * (1.0 - q[d]);
        }
    }
    return {mean, std::sqrt(std::max(0.0, var))};
}

}  // namespace qd
