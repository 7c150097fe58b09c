#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qd/rng.hpp"

namespace qd {

// One archive occupant: raw generator parameters, the feature values that
// place it in the grid, any extra feature values used only by objectives,
// its objective value and the iteration it was created in.
struct Solution {
    std::vector<double> genotype;
    std::vector<double> features;  // one entry per archive dimension
    std::vector<double> aux;       // extra features (alignment/diversity), may be empty
    double objective = 0.0;
    std::int64_t birth_iter = 0;
};

enum class InsertOutcome { NewCell, Replaced, RejectedWorse, RejectedNonFinite };

struct GridDim {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    int bins = 1;
};

// Per-dimension sub-interval of an archive, in feature units. Cells whose
// centers fall inside every interval are eligible for parent sampling.
struct SampleMask {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Dense nonnegative weight per flat cell index, normalized to sum to 1.
struct CellPrior {
    std::vector<double> weights;
};

// k-dimensional grid tessellation of feature space holding at most one elite
// per cell. Replacement requires a strictly greater objective (the incumbent
// wins ties), so per-cell objectives are non-decreasing and occupancy never
// shrinks. Storage is sparse; empty cells cost nothing.
class GridArchive {
public:
    explicit GridArchive(std::vector<GridDim> dims);

    int dims() const { return static_cast<int>(dims_.size()); }
    const std::vector<GridDim>& dim_specs() const { return dims_; }
    std::size_t num_cells() const { return num_cells_; }
    std::size_t occupied() const { return order_.size(); }

    // Grid coordinates of a finite feature vector; out-of-range values clamp
    // to the boundary bin, so every finite vector maps to exactly one cell.
    std::vector<int> cell_index(const std::vector<double>& features) const;
    std::size_t flat_index(const std::vector<int>& idx) const;
    std::vector<int> unflatten(std::size_t flat) const;
    // Feature-space center of a cell.
    std::vector<double> cell_center(std::size_t flat) const;
    // [lower edge, upper edge] of a cell along one dimension.
    std::pair<double, double> cell_edges(int dim, int bin) const;

    // Strict-improvement insertion. Non-finite features are rejected and
    // counted; a feature vector of the wrong length is a configuration error.
    InsertOutcome insert(Solution s);

    const Solution* cell(std::size_t flat) const;
    // Flat indices of occupied cells in first-insertion order (stable).
    const std::vector<std::size_t>& occupied_order() const { return order_; }
    // Flat indices of occupied cells sorted ascending.
    std::vector<std::size_t> occupied_sorted() const;

    std::size_t nonfinite_rejections() const { return nonfinite_rejections_; }

    // Uniform draw over all occupied cells.
    const Solution& sample_uniform(Rng& rng) const;
    // Uniform draw over occupied cells whose centers lie inside the mask
    // (inclusive edges). If the mask contains no occupied cell, falls back to
    // uniform over all occupied cells and counts the fallback.
    const Solution& sample_uniform_masked(const SampleMask& mask, Rng& rng) const;
    std::size_t mask_fallbacks() const { return mask_fallbacks_; }
    // Number of occupied cells whose centers lie inside the mask.
    std::size_t occupied_in_mask(const SampleMask& mask) const;

    // Draw a cell with probability proportional to prior weight restricted to
    // occupied cells, renormalized. If every occupied cell has zero weight,
    // falls back to a uniform draw and counts the fallback.
    const Solution& sample_prior_weighted(const CellPrior& prior, Rng& rng) const;
    std::size_t prior_fallbacks() const { return prior_fallbacks_; }

    // Line-delimited snapshot of every occupied cell, sorted by flat cell
    // index. Field order: cell, features, aux, objective, birth, genotype.
    void write_snapshot(std::ostream& out) const;
    std::string snapshot_string() const;
    // Parse a snapshot produced by write_snapshot (header line included).
    static GridArchive read_snapshot(std::istream& in);

private:
    bool center_in_mask(std::size_t flat, const SampleMask& mask) const;

    std::vector<GridDim> dims_;
    std::size_t num_cells_ = 1;
    std::unordered_map<std::size_t, Solution> cells_;
    std::vector<std::size_t> order_;  // occupied flat indices, insertion order
    std::size_t nonfinite_rejections_ = 0;
    mutable std::size_t mask_fallbacks_ = 0;
    mutable std::size_t prior_fallbacks_ = 0;

    // Cache for repeated prior-weighted draws from an unchanged archive.
    mutable const CellPrior* prior_cache_key_ = nullptr;
    mutable std::size_t prior_cache_occupied_ = 0;
    mutable std::vector<std::size_t> prior_cells_;
    mutable std::vector<double> prior_cum_;
};

}  // namespace qd
