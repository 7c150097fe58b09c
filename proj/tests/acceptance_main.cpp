// Acceptance gate: one self-contained check per numbered criterion, each
// printing exactly one [PASS]/[FAIL] line with the measured values. Run with
// criterion numbers as arguments, or with none to run all of them.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qd/cma_es.hpp"
#include "qd/config.hpp"
#include "qd/domain_alchemy.hpp"
#include "qd/domain_gridnav.hpp"
#include "qd/domain_racing.hpp"
#include "qd/errors.hpp"
#include "qd/pipeline.hpp"
#include "qd/target_model.hpp"

using namespace qd;

namespace {

constexpr double kPi = 3.14159265358979323846;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
// GridNav coverage gap: the two-stage search fills every reachable goal cell
// at the default budget for k in {8,16,24}, while the expected coverage of an
// archive-sized random batch (exact inclusion-exclusion) stays below 40% at
// k=24. Each run must finish in under 2 minutes.
bool criterion1(std::string& detail) {
    std::ostringstream out;
    bool ok = true;
    for (int k : {8, 16, 24}) {
        Timer timer;
        RunConfig cfg = preset_config("gridnav");
        cfg.gridnav_k = k;
        cfg.seed = 1;
        const RunResult r = run_pipeline(cfg);
        const double secs = timer.seconds();
        const auto rows = gridnav_reachable_rows(k, cfg.gridnav_grid);
        const long reachable = static_cast<long>(rows.size()) * cfg.gridnav_grid;
        const long occ = static_cast<long>(r.stage2.occupied());
        const bool full = occ == reachable;
        const bool fast = secs < 120.0;
        ok = ok && full && fast;
        out << "k=" << k << " occupied=" << occ << "/" << reachable << " ("
            << fmt("%.0fs", secs) << ") ";
    }
    const auto [dr_mean, dr_sd] = gridnav_distinct_cells_moments(24, 11, 121);
    (void)dr_sd;
    const double dr_frac = dr_mean / 121.0;
    ok = ok && dr_frac < 0.40;
    out << fmt("random-batch expected coverage at k=24: %.3f (< 0.40)", dr_frac);
    detail = out.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 2
// Random-batch oracle agreement: empirical distinct-cell counts match the
// inclusion-exclusion expectation within 3 sigma of the 20-trial mean.
bool criterion2(std::string& detail) {
    const int k = 24, G = 11;
    GridNavDomain d(k, G);
    Rng rng(2024);
    std::ostringstream out;
    bool ok = true;
    for (long batch : {121L, 1000L}) {
        const auto [mean, sd] = gridnav_distinct_cells_moments(k, G, batch);
        const int trials = 20;
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::set<int> hit;
            for (long i = 0; i < batch; ++i) {
                const auto g = d.random_genotype(rng);
                const auto [x, y] = d.goal(g);
                hit.insert(x * G + y);
            }
            acc += static_cast<double>(hit.size());
        }
        const double emp = acc / trials;
        const double tol = 3.0 * sd / std::sqrt(static_cast<double>(trials));
        ok = ok && std::abs(emp - mean) <= tol;
        out << fmt("batch=%ld expected=%.2f empirical=%.2f tol=%.2f  ", batch, mean, emp, tol);
    }
    detail = out.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 3
// Alchemy mask ablation: with the stage-1 budget fixed at 20k iterations,
// mask-on target-region coverage must strictly exceed mask-off coverage at
// every 1k checkpoint after iteration 5k, on 2 seeds. The target region holds
// only a handful of grid cells, so both arms are expected to saturate it and
// tie; the strict inequality is evaluated as specified and the tie counts are
// reported.
bool criterion3(std::string& detail) {
    std::ostringstream out;
    bool ok = true;
    Timer timer;
    for (std::uint64_t seed : {1ULL, 2ULL}) {
        RunConfig cfg = preset_config("alchemy");
        cfg.n_stage1 = 20000;
        cfg.n_stage2 = 0;
        cfg.checkpoint_interval = 1000;
        cfg.seed = seed;
        cfg.mask_enabled = true;
        const RunResult on = run_pipeline(cfg);
        cfg.mask_enabled = false;
        const RunResult off = run_pipeline(cfg);

        auto coverage_at = [](const RunResult& r, long iter) {
            for (const Checkpoint& c : r.checkpoints) {
                if (c.stage == 1 && c.iter == iter) return c.target_cells;
            }
            return -1L;
        };
        int strict = 0, total = 0;
        long last_on = 0, last_off = 0;
        for (long iter = 6000; iter <= 20000; iter += 1000) {
            last_on = coverage_at(on, iter);
            last_off = coverage_at(off, iter);
            ++total;
            if (last_on > last_off) ++strict;
        }
        ok = ok && strict == total;
        out << fmt("seed=%llu strict-at %d/%d checkpoints (final on=%ld off=%ld, mask adoptions=%ld)  ",
                   static_cast<unsigned long long>(seed), strict, total, last_on, last_off,
                   on.stats.mask_adoptions);
    }
    out << fmt("(%.0fs)", timer.seconds());
    detail = out.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 4
// Alchemy distribution matching at the scaled two-stage budget: prior draws
// must center on the structured MTO mean of 1.5 and KS-match the fitted MTO
// target within 0.1; the unstructured initial population must sit above 2.9.
// The final archive's MTO support is a few dozen latent combinations, so the
// KS floor of that atomic support is expected to sit above 0.1; measured
// values are reported.
bool criterion4(std::string& detail) {
    Timer timer;
    RunConfig cfg = preset_config("alchemy");
    cfg.n_stage1 = 20000;
    cfg.n_stage2 = 10000;
    cfg.seed = 1;
    const RunResult r = run_pipeline(cfg);
    const auto domain = make_domain(cfg);

    // replay the initial-population stream: unstructured levels sit near MTO 3
    Rng init_rng = make_stream(cfg.seed, kStreamInit);
    double init_mto = 0.0;
    for (long i = 0; i < cfg.n_init; ++i) {
        const auto ev = domain->evaluate(domain->random_genotype(init_rng));
        init_mto += ev.features[1];
    }
    init_mto /= static_cast<double>(cfg.n_init);

    Rng draw_rng = make_stream(cfg.seed, kStreamDraws);
    std::vector<double> mto;
    for (int i = 0; i < 10000; ++i) {
        const DrawnLevel lvl = draw_level(r.stage2, r.prior, *domain, draw_rng);
        mto.push_back(lvl.solution->features[1]);
    }
    const double mean = std::accumulate(mto.begin(), mto.end(), 0.0) / mto.size();
    const double ks = ks_statistic(mto, r.model.by_name("ManhattanToOptimal"));

    const bool mean_ok = std::abs(mean - 1.5) <= 0.15;
    const bool ks_ok = ks <= 0.1;
    const bool init_ok = init_mto > 2.9;
    detail = fmt("draw MTO mean=%.3f (target 1.5 +/- 0.15) KS=%.3f (<= 0.1) init MTO mean=%.3f (> 2.9) (%.0fs)",
                 mean, ks, init_mto, timer.seconds());
    return mean_ok && ks_ok && init_ok;
}

// ---------------------------------------------------------------- criterion 5
// Track geometry oracles: spline through circle points recovers area, length
// and one full turn; exact circular-arc spans recover curvature; a dense
// square polyline is exact; rotating a track by one of its symmetries leaves
// all 14 features unchanged to 1e-9.
bool criterion5(std::string& detail) {
    std::ostringstream out;
    bool ok = true;
    auto circle_pts = [](int n, double r, double phase) {
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * kPi * i / n + phase;
            pts.push_back({50.0 + r * std::cos(a), 50.0 + r * std::sin(a)});
        }
        return pts;
    };
    auto rel_err = [](double got, double want) { return std::abs(got - want) / std::abs(want); };

    // circle spline
    {
        const double r = 40.0;
        const auto f = track_features(*build_track(circle_pts(12, r, 0.0)));
        const double ea = rel_err(f[racing_feature_index("EnclosedArea")], kPi * r * r);
        const double el = rel_err(f[racing_feature_index("CurveLength")], 2.0 * kPi * r);
        const double et = std::abs(f[racing_feature_index("TotalAngleChanges")] - 2.0 * kPi);
        ok = ok && ea <= 0.002 && el <= 0.002 && et <= 0.01;
        out << fmt("circle: area err %.2e length err %.2e TAC err %.2e  ", ea, el, et);
    }
    // exact arcs: curvature
    {
        const double r = 30.0;
        std::vector<BezierSeg> segs;
        const int n = 8;
        for (int i = 0; i < n; ++i) {
            const double a0 = 2.0 * kPi * i / n, a1 = 2.0 * kPi * (i + 1) / n;
            const double handle = 4.0 / 3.0 * std::tan((a1 - a0) / 4.0) * r;
            auto on = [&](double a) { return Vec2{50.0 + r * std::cos(a), 50.0 + r * std::sin(a)}; };
            BezierSeg s;
            s.p0 = on(a0);
            s.p1 = on(a1);
            s.c1 = {s.p0.x - handle * std::sin(a0), s.p0.y + handle * std::cos(a0)};
            s.c2 = {s.p1.x + handle * std::sin(a1), s.p1.y - handle * std::cos(a1)};
            segs.push_back(s);
        }
        const auto f = track_features(track_from_segments(std::move(segs)));
        const double ec = rel_err(f[racing_feature_index("AverageCurvature")], 1.0 / r);
        ok = ok && ec <= 0.01;
        out << fmt("arc curvature err %.2e  ", ec);
    }
    // square polyline
    {
        std::vector<Vec2> poly;
        for (int i = 0; i < 15; ++i) poly.push_back({20.0 + 4.0 * i, 20.0});
        for (int i = 0; i < 15; ++i) poly.push_back({80.0, 20.0 + 4.0 * i});
        for (int i = 0; i < 15; ++i) poly.push_back({80.0 - 4.0 * i, 80.0});
        for (int i = 0; i < 15; ++i) poly.push_back({20.0, 80.0 - 4.0 * i});
        const auto f = track_features(track_from_polyline(poly));
        const double ea = rel_err(f[racing_feature_index("EnclosedArea")], 3600.0);
        const double el = rel_err(f[racing_feature_index("CurveLength")], 240.0);
        const double et = std::abs(f[racing_feature_index("TotalAngleChanges")] - 2.0 * kPi);
        ok = ok && ea <= 0.002 && el <= 0.002 && et <= 0.01;
        out << fmt("square: area err %.2e length err %.2e TAC err %.2e  ", ea, el, et);
    }
    // rotation invariance (circle rotated by its 30-degree symmetry)
    {
        const auto fa = track_features(*build_track(circle_pts(12, 35.0, 0.0)));
        const auto fb = track_features(*build_track(circle_pts(12, 35.0, 2.0 * kPi / 12.0)));
        double worst = 0.0;
        for (std::size_t i = 0; i < kRacingFeatureCount; ++i) {
            worst = std::max(worst, std::abs(fa[i] - fb[i]) / std::max(1.0, std::abs(fa[i])));
        }
        ok = ok && worst <= 1e-9;
        out << fmt("rotation worst rel diff %.2e", worst);
    }
    detail = out.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 6
// Racing diversity recovery at the scaled budget: the magnified unstructured
// population starts near one full turn; after the run, at least a quarter of
// the prior draws turn more than the structured median and the archive's
// turning marginal KS-matches the fitted target within 0.15.
bool criterion6(std::string& detail) {
    Timer timer;
    RunConfig cfg = preset_config("racing");
    cfg.n_stage1 = 10000;
    cfg.n_stage2 = 40000;
    cfg.seed = 1;
    const auto domain = make_domain(cfg);

    // initial-population turning (replayed from the init stream)
    Rng init_rng = make_stream(cfg.seed, kStreamInit);
    std::vector<double> init_tac;
    for (long i = 0; i < cfg.n_init; ++i) {
        const auto ev = domain->evaluate(domain->random_genotype(init_rng));
        if (ev.valid) init_tac.push_back(ev.features[0]);
    }
    const double init_med = median(init_tac);
    const bool init_ok = init_med >= 2.0 * kPi - 0.3 && init_med <= 2.0 * kPi + 1.0;

    const RunResult r = run_pipeline(cfg);

    std::vector<double> target_tac = r.target_samples.columns[0];
    const double target_med = median(target_tac);

    Rng draw_rng = make_stream(cfg.seed, kStreamDraws);
    int above = 0;
    const int n_draws = 10000;
    for (int i = 0; i < n_draws; ++i) {
        const DrawnLevel lvl = draw_level(r.stage2, r.prior, *domain, draw_rng);
        if (lvl.solution->features[0] > target_med) ++above;
    }
    const double frac = above / static_cast<double>(n_draws);

    std::vector<double> elite_tac;
    for (auto flat : r.stage2.occupied_order()) elite_tac.push_back(r.stage2.cell(flat)->features[0]);
    const double ks = ks_statistic(elite_tac, r.model.by_name("TotalAngleChanges"));

    const double secs = timer.seconds();
    detail = fmt("init TAC median=%.3f (in [%.3f,%.3f]) draws above target median: %.1f%% (>=25%%) "
                 "archive TAC KS=%.3f (<=0.15) (%.0fs)",
                 init_med, 2.0 * kPi - 0.3, 2.0 * kPi + 1.0, 100.0 * frac, ks, secs);
    return init_ok && frac >= 0.25 && ks <= 0.15 && secs < 1800.0;
}

// ---------------------------------------------------------------- criterion 7
// Target-model family recovery and parameter-error trend.
bool criterion7(std::string& detail) {
    const int trials = 200;
    Rng rng(777);
    std::ostringstream out;
    bool ok = true;

    // recovery at n=100
    int hit_n = 0, hit_u = 0, hit_d = 0;
    for (int t = 0; t < trials; ++t) {
        {
            const double mu = rng.uniform(-5.0, 5.0), sigma = rng.uniform(0.5, 3.0);
            std::vector<double> v(100);
            for (auto& x : v) x = rng.normal(mu, sigma);
            hit_n += fit_feature(v, false).family == Family::Normal ? 1 : 0;
        }
        {
            const double a = rng.uniform(-5.0, 5.0), b = a + rng.uniform(0.5, 5.0);
            std::vector<double> v(100);
            for (auto& x : v) x = rng.uniform(a, b);
            hit_u += fit_feature(v, false).family == Family::Uniform ? 1 : 0;
        }
        {
            const long a = rng.uniform_int(-10, 10), w = rng.uniform_int(3, 20);
            std::vector<double> v(100);
            for (auto& x : v) x = static_cast<double>(a + static_cast<long>(rng.below(w)));
            hit_d += fit_feature(v, true).family == Family::DiscreteUniform ? 1 : 0;
        }
    }
    const double rn = hit_n / 2.0, ru = hit_u / 2.0, rd = hit_d / 2.0;  // percent
    ok = ok && rn >= 95.0 && ru >= 95.0 && rd >= 95.0;
    out << fmt("recovery at n=100: normal %.1f%% uniform %.1f%% integer-uniform %.1f%% (>=95%%)  ",
               rn, ru, rd);

    // parameter-error medians non-increasing in n (implied mean/sd of the fit)
    auto implied = [](const FittedFeature& f) {
        switch (f.family) {
            case Family::Normal:
                return std::pair<double, double>{f.mu, f.sigma};
            case Family::Uniform:
                return std::pair<double, double>{0.5 * (f.a + f.b), (f.b - f.a) / std::sqrt(12.0)};
            case Family::DiscreteUniform: {
                const double w = f.b - f.a + 1.0;
                return std::pair<double, double>{0.5 * (f.a + f.b), std::sqrt((w * w - 1.0) / 12.0)};
            }
        }
        return std::pair<double, double>{0.0, 0.0};
    };
    const int sizes[3] = {5, 25, 100};
    double med[3];
    for (int si = 0; si < 3; ++si) {
        std::vector<double> errs;
        Rng trend_rng(4242);  // same parameter sequence for every n
        for (int t = 0; t < trials; ++t) {
            const double mu = trend_rng.uniform(-5.0, 5.0), sigma = trend_rng.uniform(0.5, 3.0);
            std::vector<double> v(static_cast<std::size_t>(sizes[si]));
            for (auto& x : v) x = trend_rng.normal(mu, sigma);
            const auto [m, s] = implied(fit_feature(v, false));
            errs.push_back(std::abs(m - mu) + std::abs(s - sigma));
        }
        med[si] = median(errs);
    }
    ok = ok && med[0] >= med[1] - 1e-12 && med[1] >= med[2] - 1e-12;
    out << fmt("normal param-error medians n=5/25/100: %.3f / %.3f / %.3f (non-increasing)",
               med[0], med[1], med[2]);
    detail = out.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 8
// Archive and run properties: per-cell elitism, occupancy growth, insertion
// accounting, shrink-only mask annealing, and bit-exact rerun determinism of
// the default search.
bool criterion8(std::string& detail) {
    std::ostringstream out;
    bool ok = true;
    Timer timer;

    // elitism + occupancy + accounting under random insertion stress
    {
        GridArchive a({{"x", 0.0, 1.0, 5}, {"y", 0.0, 1.0, 5}});
        Rng rng(88);
        std::vector<double> best(25, -1e300);
        long new_cells = 0, replaced = 0, rejected = 0;
        bool monotone = true;
        std::size_t prev_occupied = 0;
        for (int i = 0; i < 20000; ++i) {
            Solution s;
            s.features = {rng.uniform(), rng.uniform()};
            s.objective = rng.normal();
            s.genotype = {s.objective};
            const std::size_t flat = a.flat_index(a.cell_index(s.features));
            const auto outcome = a.insert(std::move(s));
            const double obj = a.cell(flat)->objective;
            if (obj < best[flat]) monotone = false;
            best[flat] = obj;
            if (a.occupied() < prev_occupied) monotone = false;
            prev_occupied = a.occupied();
            new_cells += outcome == InsertOutcome::NewCell ? 1 : 0;
            replaced += outcome == InsertOutcome::Replaced ? 1 : 0;
            rejected += outcome == InsertOutcome::RejectedWorse ? 1 : 0;
        }
        const bool conserved = new_cells + replaced + rejected == 20000 &&
                               new_cells == static_cast<long>(a.occupied());
        ok = ok && monotone && conserved;
        out << fmt("stress: elitism %s accounting %s  ", monotone ? "ok" : "violated",
                   conserved ? "ok" : "violated");
    }

    // mask anneal never widens
    {
        RunConfig cfg = preset_config("gridnav");
        cfg.n_init = 300;
        cfg.n_stage1 = 300;
        cfg.n_stage2 = 50;
        cfg.checkpoint_interval = 1;
        cfg.mask_enabled = true;
        cfg.mask_min_cells = 5;
        cfg.seed = 8;
        const RunResult r = run_pipeline(cfg);
        bool shrink_only = true;
        std::vector<double> lo, hi;
        for (const Checkpoint& c : r.checkpoints) {
            if (c.stage != 1 || !c.mask_active) continue;
            if (!lo.empty()) {
                for (std::size_t d = 0; d < lo.size(); ++d) {
                    if (c.mask_lower[d] < lo[d] - 1e-12 || c.mask_upper[d] > hi[d] + 1e-12)
                        shrink_only = false;
                }
            }
            lo = c.mask_lower;
            hi = c.mask_upper;
        }
        ok = ok && shrink_only && !lo.empty();
        out << fmt("mask shrink-only %s  ", shrink_only ? "ok" : "violated");
    }

    // bit-exact determinism of the default search
    {
        const RunConfig cfg = preset_config("gridnav");
        const RunResult a = run_pipeline(cfg);
        const RunResult b = run_pipeline(cfg);
        const bool identical = a.stage1.snapshot_string() == b.stage1.snapshot_string() &&
                               a.stage2.snapshot_string() == b.stage2.snapshot_string() &&
                               a.prior.weights == b.prior.weights;
        ok = ok && identical;
        out << fmt("rerun determinism %s (%.0fs)", identical ? "bit-exact" : "DIVERGED",
                   timer.seconds());
    }
    detail = out.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 9
// Evaluation accounting: the default search reports exactly
// n_init + n_stage2 * batch evaluations, with the search total excluding the
// initial population; a scaled run obeys the same identity.
bool criterion9(std::string& detail) {
    std::ostringstream out;
    bool ok = true;
    {
        const RunConfig cfg = preset_config("gridnav");
        const RunResult r = run_pipeline(cfg);
        const bool exact = r.stats.total_evals == 1000 + 100000L * 40 &&
                           r.stats.n_trs == 100000L * 40;
        ok = ok && exact;
        out << fmt("default: total=%ld (= 1000 + 100000*40) search=%ld  ", r.stats.total_evals,
                   r.stats.n_trs);
    }
    {
        RunConfig cfg = preset_config("gridnav");
        cfg.n_stage2 = 500;
        cfg.n_stage1 = 250;
        const RunResult r = run_pipeline(cfg);
        const bool exact = r.stats.total_evals == 1000 + (250 + 500) * 40L &&
                           r.stats.n_trs == (250 + 500) * 40L &&
                           r.stats.init.total() == 1000 &&
                           r.stats.stage1.total() == 250 * 40L &&
                           r.stats.stage2.total() == 500 * 40L;
        ok = ok && exact;
        out << fmt("scaled: total=%ld (= 1000 + 750*40) search=%ld", r.stats.total_evals,
                   r.stats.n_trs);
    }
    detail = out.str();
    return ok;
}

// --------------------------------------------------------------- criterion 10
// Optimizer sanity: 10-d sphere to 1e-8 within 10^4 evaluations on 5/5 seeds.
bool criterion10(std::string& detail) {
    auto sphere = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    int solved = 0;
    long worst_evals = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CmaEs es(10, 10, 0.3, std::vector<double>(10, 1.0));
        Rng rng(seed);
        double best = 1e300;
        long evals = 0;
        while (best > 1e-8 && evals < 10000) {
            const auto batch = es.ask(rng);
            std::vector<int> idx(batch.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](int l, int r) {
                return sphere(batch[static_cast<std::size_t>(l)]) <
                       sphere(batch[static_cast<std::size_t>(r)]);
            });
            for (const auto& x : batch) best = std::min(best, sphere(x));
            evals += es.lambda();
            if (!es.tell(idx)) break;
        }
        solved += best <= 1e-8 ? 1 : 0;
        worst_evals = std::max(worst_evals, evals);
    }
    detail = fmt("10-d sphere below 1e-8: %d/5 seeds, worst case %ld evaluations (<= 10000)",
                 solved, worst_evals);
    return solved == 5;
}

}  // namespace

int main(int argc, char** argv) {
    const std::function<bool(std::string&)> criteria[10] = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9, criterion10};

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "usage: %s [criterion numbers 1..10]\n", argv[0]);
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty()) {
        for (int n = 1; n <= 10; ++n) selected.push_back(n);
    }

    bool all_pass = true;
    for (int n : selected) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[n - 1](detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && ok;
    }
    return all_pass ? 0 : 1;
}
