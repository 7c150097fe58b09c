#include "qd/domain_racing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qd/errors.hpp"

namespace qd {

namespace {

constexpr double kDedupEps = 1e-9;
constexpr double kKnotEps = 1e-12;

double dist(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 bezier_point(const BezierSeg& s, double u) {
    double v = 1.0 - u;
    double b0 = v * v * v, b1 = 3.0 * v * v * u, b2 = 3.0 * v * u * u, b3 = u * u * u;
    return {b0 * s.p0.x + b1 * s.c1.x + b2 * s.c2.x + b3 * s.p1.x,
            b0 * s.p0.y + b1 * s.c1.y + b2 * s.c2.y + b3 * s.p1.y};
}

double bezier_curvature(const BezierSeg& s, double u) {
    double v = 1.0 - u;
    double dx = 3.0 * v * v * (s.c1.x - s.p0.x) + 6.0 * v * u * (s.c2.x - s.c1.x) +
                3.0 * u * u * (s.p1.x - s.c2.x);
    double dy = 3.0 * v * v * (s.c1.y - s.p0.y) + 6.0 * v * u * (s.c2.y - s.c1.y) +
                3.0 * u * u * (s.p1.y - s.c2.y);
    double ddx = 6.0 * v * (s.c2.x - 2.0 * s.c1.x + s.p0.x) + 6.0 * u * (s.p1.x - 2.0 * s.c2.x + s.c1.x);
    double ddy = 6.0 * v * (s.c2.y - 2.0 * s.c1.y + s.p0.y) + 6.0 * u * (s.p1.y - 2.0 * s.c2.y + s.c1.y);
    double speed2 = dx * dx + dy * dy;
    if (speed2 < 1e-18) return 0.0;
    return std::abs(dx * ddy - dy * ddx) / std::pow(speed2, 1.5);
}

// One Catmull-Rom span through p1..p2 as a cubic Bezier, centripetal knots.
BezierSeg catmull_rom_span(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3) {
    double t0 = 0.0;
    double t1 = t0 + std::max(std::sqrt(dist(p0, p1)), kKnotEps);
    double t2 = t1 + std::max(std::sqrt(dist(p1, p2)), kKnotEps);
    double t3 = t2 + std::max(std::sqrt(dist(p2, p3)), kKnotEps);
    auto tangent1 = [&](double a0, double a1, double a2) {
        return (t2 - t1) * ((a1 - a0) / std::max(t1 - t0, kKnotEps) -
                            (a2 - a0) / std::max(t2 - t0, kKnotEps) +
                            (a2 - a1) / std::max(t2 - t1, kKnotEps));
    };
    auto tangent2 = [&](double a1, double a2, double a3) {
        return (t2 - t1) * ((a2 - a1) / std::max(t2 - t1, kKnotEps) -
                            (a3 - a1) / std::max(t3 - t1, kKnotEps) +
                            (a3 - a2) / std::max(t3 - t2, kKnotEps));
    };
    Vec2 m1{tangent1(p0.x, p1.x, p2.x), tangent1(p0.y, p1.y, p2.y)};
    Vec2 m2{tangent2(p1.x, p2.x, p3.x), tangent2(p1.y, p2.y, p3.y)};
    return {p1, {p1.x + m1.x / 3.0, p1.y + m1.y / 3.0}, {p2.x - m2.x / 3.0, p2.y - m2.y / 3.0}, p2};
}

double population_variance(std::vector<double> xs) {
    double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / n;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

const std::array<std::string, kRacingFeatureCount> kRacingFeatureNames = {
    "CurveLength",
    "EnclosedArea",
    "AreaToLengthRatio",
    "CenterOfMassX",
    "CenterOfMassY",
    "MedianX",
    "MedianY",
    "VarianceX",
    "VarianceY",
    "TotalAngleChanges",
    "SignificantAngleChanges",
    "AverageCurvature",
    "TotalCurvature",
    "CurveDistancesVariance",
};

int racing_feature_index(const std::string& name) {
    for (std::size_t i = 0; i < kRacingFeatureNames.size(); ++i)
        if (kRacingFeatureNames[i] == name) return static_cast<int>(i);
    throw ConfigError("unknown track feature '" + name + "'");
}

std::optional<TrackLevel> build_track(std::vector<Vec2> points) {
    if (points.size() < 3) return std::nullopt;
    Vec2 centroid{0.0, 0.0};
    for (const Vec2& p : points) {
        centroid.x += p.x;
        centroid.y += p.y;
    }
    centroid.x /= static_cast<double>(points.size());
    centroid.y /= static_cast<double>(points.size());
    std::stable_sort(points.begin(), points.end(), [&](const Vec2& a, const Vec2& b) {
        return std::atan2(a.y - centroid.y, a.x - centroid.x) <
               std::atan2(b.y - centroid.y, b.x - centroid.x);
    });
    // Merge consecutive duplicates (wrap included): coincident control points
    // would collapse the spline's knot spacing.
    std::vector<Vec2> distinct;
    for (const Vec2& p : points)
        if (distinct.empty() || dist(distinct.back(), p) > kDedupEps) distinct.push_back(p);
    while (distinct.size() > 1 && dist(distinct.back(), distinct.front()) <= kDedupEps)
        distinct.pop_back();
    if (distinct.size() < 3) return std::nullopt;

    std::size_t n = distinct.size();
    std::vector<BezierSeg> segments;
    segments.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p0 = distinct[(i + n - 1) % n];
        const Vec2& p1 = distinct[i];
        const Vec2& p2 = distinct[(i + 1) % n];
        const Vec2& p3 = distinct[(i + 2) % n];
        segments.push_back(catmull_rom_span(p0, p1, p2, p3));
    }
    TrackLevel track = track_from_segments(std::move(segments));
    track.control_points = std::move(distinct);
    return track;
}

TrackLevel track_from_segments(std::vector<BezierSeg> segments) {
    TrackLevel track;
    track.segments = std::move(segments);
    std::size_t n = track.segments.size();
    track.polyline.reserve(n * kSamplesPerSegment);
    for (const BezierSeg& seg : track.segments)
        for (int j = 0; j < kSamplesPerSegment; ++j)
            track.polyline.push_back(bezier_point(seg, static_cast<double>(j) / kSamplesPerSegment));
    std::size_t total = track.polyline.size();
    track.seg_curvature.resize(n);
    track.seg_length.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        track.seg_curvature[s] = bezier_curvature(track.segments[s], 0.5);
        for (int j = 0; j < kSamplesPerSegment; ++j) {
            std::size_t i = s * kSamplesPerSegment + static_cast<std::size_t>(j);
            track.seg_length[s] += dist(track.polyline[i], track.polyline[(i + 1) % total]);
        }
    }
    return track;
}

TrackLevel track_from_polyline(std::vector<Vec2> polyline) {
    TrackLevel track;
    track.polyline = std::move(polyline);
    return track;
}

std::vector<double> track_features(const TrackLevel& track) {
    const std::vector<Vec2>& pts = track.polyline;
    std::size_t n = pts.size();
    if (n < 3) throw ConfigError("track polyline needs at least 3 points");

    std::vector<double> d(n);  // consecutive distances, closed
    double length = 0.0;
    double shoelace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        d[i] = dist(a, b);
        length += d[i];
        shoelace += a.x * b.y - b.x * a.y;
    }
    double area = std::abs(shoelace) / 2.0;

    std::vector<double> xs(n), ys(n);
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pts[i].x;
        ys[i] = pts[i].y;
        cx += pts[i].x;
        cy += pts[i].y;
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);

    double tac = 0.0, sac = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Turn at vertex i: between the incoming and outgoing edges.
        const Vec2& prev = pts[(i + n - 1) % n];
        const Vec2& cur = pts[i];
        const Vec2& next = pts[(i + 1) % n];
        double v1x = cur.x - prev.x, v1y = cur.y - prev.y;
        double v2x = next.x - cur.x, v2y = next.y - cur.y;
        if (std::hypot(v1x, v1y) < 1e-12 || std::hypot(v2x, v2y) < 1e-12) continue;
        double angle = std::atan2(v1x * v2y - v1y * v2x, v1x * v2x + v1y * v2y);
        tac += std::abs(angle);
        if (std::abs(angle) > kSignificantAngle) sac += std::abs(angle);
    }

    double avg_curv = 0.0, total_curv = 0.0;
    if (!track.segments.empty()) {
        for (std::size_t s = 0; s < track.segments.size(); ++s) {
            avg_curv += track.seg_curvature[s];
            total_curv += track.seg_curvature[s] * track.seg_length[s];
        }
        avg_curv /= static_cast<double>(track.segments.size());
    }

    std::vector<double> out(kRacingFeatureCount);
    out[0] = length;
    out[1] = area;
    out[2] = length > 0.0 ? area / length : 0.0;
    out[3] = cx;
    out[4] = cy;
    out[5] = median(xs);
    out[6] = median(ys);
    out[7] = population_variance(std::move(xs));
    out[8] = population_variance(std::move(ys));
    out[9] = tac;
    out[10] = sac;
    out[11] = avg_curv;
    out[12] = total_curv;
    out[13] = population_variance(std::move(d));
    return out;
}

std::vector<double> project_central(const std::vector<double>& genotype, int k) {
    if (k < 1) throw ConfigError("racing: projection factor must be >= 1");
    double half = 0.5 / static_cast<double>(k);
    std::vector<double> out(genotype.size());
    for (std::size_t i = 0; i < genotype.size(); ++i) {
        double v = std::clamp(genotype[i], 0.5 - half, 0.5 + half);
        out[i] = (v - 0.5) * static_cast<double>(k) + 0.5;
    }
    return out;
}

RacingDomain::RacingDomain(int n_cp, int project_k,
                           std::vector<std::string> archive_features,
                           std::vector<std::string> aux_features)
    : n_cp_(n_cp),
      project_k_(project_k),
      archive_names_(std::move(archive_features)),
      aux_names_(std::move(aux_features)) {
    if (n_cp < 3) throw ConfigError("racing: need at least 3 control points");
    if (project_k < 1) throw ConfigError("racing: projection factor must be >= 1");
    if (archive_names_.empty()) throw ConfigError("racing: need at least one archive feature");
    for (const std::string& name : archive_names_) {
        archive_idx_.push_back(racing_feature_index(name));
        specs_.push_back(FeatureSpec{name, false, 500, 500, false, 0.0, 1.0});
    }
    for (const std::string& name : aux_names_) aux_idx_.push_back(racing_feature_index(name));
}

std::vector<double> RacingDomain::random_genotype(Rng& rng) const {
    std::vector<double> g(static_cast<std::size_t>(genotype_size()));
    for (double& v : g) v = rng.uniform();
    return g;
}

std::optional<TrackLevel> RacingDomain::track(const std::vector<double>& genotype) const {
    std::vector<double> projected = project_central(genotype, project_k_);
    std::vector<Vec2> pts(static_cast<std::size_t>(n_cp_));
    for (int i = 0; i < n_cp_; ++i)
        pts[static_cast<std::size_t>(i)] = {projected[static_cast<std::size_t>(2 * i)] * kPlayfield,
                                            projected[static_cast<std::size_t>(2 * i + 1)] * kPlayfield};
    return build_track(std::move(pts));
}

LevelEval RacingDomain::evaluate(const std::vector<double>& genotype) const {
    if (static_cast<int>(genotype.size()) != genotype_size())
        throw ConfigError("racing: genotype length mismatch");
    std::optional<TrackLevel> t = track(genotype);
    LevelEval ev;
    if (!t) {
        ev.valid = false;
        return ev;
    }
    std::vector<double> all = track_features(*t);
    for (int idx : archive_idx_) ev.features.push_back(all[static_cast<std::size_t>(idx)]);
    for (int idx : aux_idx_) ev.aux.push_back(all[static_cast<std::size_t>(idx)]);
    return ev;
}

FeatureSamples RacingDomain::draw_target_samples(int n, Rng& rng) const {
    FeatureSamples samples;
    for (const std::string& name : archive_names_) {
        samples.names.push_back(name);
        samples.discrete.push_back(0);
    }
    for (const std::string& name : aux_names_) {
        samples.names.push_back(name);
        samples.discrete.push_back(0);
    }
    samples.columns.resize(samples.names.size());

    long attempts = 0;
    long cap = 200L * std::max(1, n);
    int accepted = 0;
    while (accepted < n) {
        if (++attempts > cap)
            throw ConfigError("racing: downstream sampler rejection rate too high");
        std::vector<Vec2> pts(static_cast<std::size_t>(n_cp_));
        std::vector<double> xs(pts.size()), ys(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i] = {rng.uniform() * kPlayfield, rng.uniform() * kPlayfield};
            xs[i] = pts[i].x;
            ys[i] = pts[i].y;
        }
        double std_x = std::sqrt(population_variance(xs));
        double std_y = std::sqrt(population_variance(ys));
        if (std::min(std_x, std_y) < kStdThreshold * kPlayfield) continue;
        std::optional<TrackLevel> t = build_track(std::move(pts));
        if (!t) continue;
        std::vector<double> all = track_features(*t);
        std::size_t col = 0;
        for (int idx : archive_idx_) samples.columns[col++].push_back(all[static_cast<std::size_t>(idx)]);
        for (int idx : aux_idx_) samples.columns[col++].push_back(all[static_cast<std::size_t>(idx)]);
        ++accepted;
    }
    return samples;
}

std::string RacingDomain::level_record(const std::vector<double>& genotype) const {
    std::optional<TrackLevel> t = track(genotype);
    std::ostringstream oss;
    if (!t) return "invalid";
    oss << "control_points=";
    char buf[64];
    for (std::size_t i = 0; i < t->control_points.size(); ++i) {
        if (i) oss << ';';
        std::snprintf(buf, sizeof buf, "%.6g:%.6g", t->control_points[i].x, t->control_points[i].y);
        oss << buf;
    }
    return oss.str();
}

}  // namespace qd
