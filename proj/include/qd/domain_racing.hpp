#pragma once

#include <array>
#include <optional>

#include "qd/domain.hpp"

namespace qd {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// One cubic Bezier span: endpoints p0/p1 with interior controls c1/c2.
struct BezierSeg {
    Vec2 p0, c1, c2, p1;
};

// A closed race track in playfield units ([0,100]^2): the ordered control
// points, the Bezier spans through them, a dense closed polyline (the last
// point connects back to the first), and per-span midpoint curvature plus
// polyline arc length.
struct TrackLevel {
    std::vector<Vec2> control_points;
    std::vector<BezierSeg> segments;
    std::vector<Vec2> polyline;
    std::vector<double> seg_curvature;
    std::vector<double> seg_length;
};

inline constexpr double kPlayfield = 100.0;
inline constexpr int kSamplesPerSegment = 40;
inline constexpr double kStdThreshold = 0.15;      // of playfield size
inline constexpr double kSignificantAngle = 0.1;   // radians
inline constexpr std::size_t kRacingFeatureCount = 14;

// Fixed order of the track features.
extern const std::array<std::string, kRacingFeatureCount> kRacingFeatureNames;
int racing_feature_index(const std::string& name);

// Closed track through the given playfield points: sort by angle around the
// centroid, merge consecutive duplicates, then run a closed centripetal
// Catmull-Rom spline through the points, one cubic Bezier span per
// consecutive pair, sampled kSamplesPerSegment points per span. Returns
// nullopt when fewer than 3 distinct points remain.
std::optional<TrackLevel> build_track(std::vector<Vec2> points);

// Assemble a TrackLevel from explicit Bezier spans (spans must already chain
// into a closed loop). Used by geometry tests with hand-built curves.
TrackLevel track_from_segments(std::vector<BezierSeg> segments);

// Wrap a bare closed polyline (no spans; the curvature features read 0).
TrackLevel track_from_polyline(std::vector<Vec2> polyline);

// The 14 features in kRacingFeatureNames order.
std::vector<double> track_features(const TrackLevel& track);

// Genotype-space central-region magnification: clamp each coordinate to the
// square of side 1/k centered at (0.5, 0.5), then scale that square up to
// the full unit square. k = 1 is the identity.
std::vector<double> project_central(const std::vector<double>& genotype, int k);

// Bezier race-track generator. The genotype is 2*n_cp reals in [0,1]; the
// generator magnifies the central 1/k-square of the unit square (collapsing
// everything else onto the border), scales to the playfield, and builds the
// closed spline track. The downstream target distribution draws control
// points uniformly over the whole playfield and rejects point sets whose
// per-axis standard deviation is below kStdThreshold of the playfield.
// Archive and aux feature lists are configurable by name.
class RacingDomain : public Domain {
public:
    RacingDomain(int n_cp, int project_k,
                 std::vector<std::string> archive_features,
                 std::vector<std::string> aux_features);

    std::string name() const override { return "racing"; }
    int genotype_size() const override { return 2 * n_cp_; }
    bool discrete_genotype() const override { return false; }
    const std::vector<FeatureSpec>& feature_specs() const override { return specs_; }
    const std::vector<std::string>& aux_names() const override { return aux_names_; }
    std::vector<double> random_genotype(Rng& rng) const override;
    LevelEval evaluate(const std::vector<double>& genotype) const override;
    FeatureSamples draw_target_samples(int n, Rng& rng) const override;
    std::string level_record(const std::vector<double>& genotype) const override;

    int n_cp() const { return n_cp_; }
    int project_k() const { return project_k_; }
    // The generated track for a genotype (after projection and scaling).
    std::optional<TrackLevel> track(const std::vector<double>& genotype) const;

private:
    int n_cp_;
    int project_k_;
    std::vector<std::string> archive_names_;
    std::vector<std::string> aux_names_;
    std::vector<int> archive_idx_;
    std::vector<int> aux_idx_;
    std::vector<FeatureSpec> specs_;
};

}  // namespace qd
