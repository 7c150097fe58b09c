#include "doctest.h"
#include "qd/objectives.hpp"
#include "qd/domain_gridnav.hpp"
#include "qd/domain_racing.hpp"
#include "qd/errors.hpp"

#include <cmath>
#include <vector>

using namespace qd;

namespace {

// XPosition: constant 2 (point mass, target range 1).
// YPosition: uniform integers 0..10 (target range 11).
TargetModel gridnav_model() {
    FeatureSamples s;
    s.names = {"XPosition", "YPosition"};
    s.discrete = {1, 1};
    s.columns.resize(2);
    for (int i = 0; i < 55; ++i) {
        s.columns[0].push_back(2.0);
        s.columns[1].push_back(static_cast<double>(i % 11));
    }
    return fit_target_model(s);
}

GridArchive gridnav_archive() {
    return GridArchive({{"XPosition", 0.0, 11.0, 11}, {"YPosition", 0.0, 11.0, 11}});
}

LevelEval eval_at(double x, double y) {
    LevelEval ev;
    ev.features = {x, y};
    return ev;
}

}  // namespace

TEST_CASE("engine configuration is validated") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();

    ObjectiveConfig none;
    CHECK_THROWS_AS(ObjectiveEngine(none, d, model), ConfigError);

    ObjectiveConfig empty_align;
    empty_align.j_align = true;
    CHECK_THROWS_AS(ObjectiveEngine(empty_align, d, model), ConfigError);

    ObjectiveConfig bad_name;
    bad_name.j_align = true;
    bad_name.align_features = {"NoSuchFeature"};
    CHECK_THROWS_AS(ObjectiveEngine(bad_name, d, model), ConfigError);

    ObjectiveConfig bad_refs;
    bad_refs.j_diverse = true;
    bad_refs.diversity_features = {"XPosition"};
    bad_refs.diversity_refs = 0;
    CHECK_THROWS_AS(ObjectiveEngine(bad_refs, d, model), ConfigError);
}

TEST_CASE("novelty alone scores every valid candidate with the iteration index") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_new = true;
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Rng rng(1);
    eng.begin_batch(archive, rng);

    std::vector<LevelEval> evals = {eval_at(1, 1), eval_at(3, 9)};
    evals.push_back(LevelEval{});
    evals.back().valid = false;

    const auto scores = eng.score(evals, 7, rng);
    REQUIRE(scores.size() == 3);
    CHECK(scores[0] == 7.0);
    CHECK(scores[1] == 7.0);
    CHECK(scores[2] == 0.0);
    CHECK(eng.novelty(41) == 41.0);
}

TEST_CASE("alignment measures scaled distance to the per-batch targets") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_align = true;
    cfg.align_features = {"XPosition"};
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Rng rng(2);
    eng.begin_batch(archive, rng);
    // the XPosition target is a point mass: the drawn target is always 2
    REQUIRE(eng.current_targets().size() == 1);
    CHECK(eng.current_targets()[0] == 2.0);

    CHECK(eng.alignment(eval_at(2, 0)) == 0.0);                       // perfect
    CHECK(eng.alignment(eval_at(4, 0)) == doctest::Approx(-2.0));     // range 1
    CHECK(eng.alignment(eval_at(1.5, 5)) == doctest::Approx(-0.5));

    // single variant: raw values pass through score()
    const auto scores = eng.score({eval_at(2, 0), eval_at(4, 0)}, 3, rng);
    CHECK(scores[0] == doctest::Approx(0.0));
    CHECK(scores[1] == doctest::Approx(-2.0));
}

TEST_CASE("two-feature alignment sums the per-feature terms") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_align = true;
    cfg.align_features = {"XPosition", "YPosition"};
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Rng rng(3);
    eng.begin_batch(archive, rng);
    const double ty = eng.current_targets()[1];
    CHECK(ty >= 0.0);
    CHECK(ty <= 10.0);

    const auto ev = eval_at(3.0, 7.0);
    CHECK(eng.alignment(ev) ==
          doctest::Approx(-(std::abs(3.0 - 2.0) / 1.0 + std::abs(7.0 - ty) / 11.0)));
}

TEST_CASE("diversity is the scaled mean distance to the reference elites") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_diverse = true;
    cfg.diversity_features = {"XPosition"};
    cfg.diversity_refs = 4;
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Rng rng(4);
    // empty archive: diversity collapses to 0
    eng.begin_batch(archive, rng);
    CHECK(eng.diversity(eval_at(9, 9)) == 0.0);

    Solution s;
    s.genotype = {0.0};
    s.features = {5.0, 5.0};
    s.objective = 1.0;
    archive.insert(std::move(s));
    eng.begin_batch(archive, rng);
    // all references are the single elite at x=5; XPosition target range is 1
    CHECK(eng.diversity(eval_at(5, 0)) == doctest::Approx(0.0));
    CHECK(eng.diversity(eval_at(3, 0)) == doctest::Approx(2.0));
    CHECK(eng.diversity(eval_at(4.25, 0)) == doctest::Approx(0.75));
}

TEST_CASE("random objective consumes one draw per candidate, invalid included") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_random = true;
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Rng rng(5);
    eng.begin_batch(archive, rng);

    std::vector<LevelEval> evals = {eval_at(1, 1), LevelEval{}, eval_at(2, 2)};
    evals[1].valid = false;

    Rng shadow = rng;
    const double u0 = shadow.uniform();
    (void)shadow.uniform();  // the invalid candidate's draw
    const double u2 = shadow.uniform();

    const auto scores = eng.score(evals, 0, rng);
    CHECK(scores[0] == u0);
    CHECK(scores[1] == 0.0);
    CHECK(scores[2] == u2);
}

TEST_CASE("multiple variants are min-max normalized over valid candidates and summed") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_align = true;
    cfg.align_features = {"XPosition"};
    cfg.j_diverse = true;
    cfg.diversity_features = {"XPosition"};
    cfg.diversity_refs = 2;
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Solution s;
    s.genotype = {0.0};
    s.features = {5.0, 5.0};
    s.objective = 1.0;
    archive.insert(std::move(s));

    Rng rng(6);
    eng.begin_batch(archive, rng);
    // alignment target: point mass at 2; diversity reference: elite at 5.
    // raw align  for x={2,4,3}: {0,-2,-1} -> normalized {1, 0, 0.5}
    // raw divers for x={2,4,3}: {3, 1, 2} -> normalized {1, 0, 0.5}
    std::vector<LevelEval> evals = {eval_at(2, 0), eval_at(4, 0), eval_at(3, 0)};
    evals.push_back(LevelEval{});
    evals.back().valid = false;

    const auto scores = eng.score(evals, 9, rng);
    REQUIRE(scores.size() == 4);
    CHECK(scores[0] == doctest::Approx(2.0));
    CHECK(scores[1] == doctest::Approx(0.0));
    CHECK(scores[2] == doctest::Approx(1.0));
    CHECK(scores[3] == 0.0);
}

TEST_CASE("a degenerate variant (all values equal) contributes zero after normalization") {
    GridNavDomain d(4, 11);
    const auto model = gridnav_model();
    ObjectiveConfig cfg;
    cfg.j_new = true;
    cfg.j_align = true;
    cfg.align_features = {"XPosition"};
    ObjectiveEngine eng(cfg, d, model);

    auto archive = gridnav_archive();
    Rng rng(7);
    eng.begin_batch(archive, rng);
    // novelty is the same for every candidate in a batch: min == max -> 0
    const auto scores = eng.score({eval_at(2, 0), eval_at(4, 0)}, 12, rng);
    CHECK(scores[0] == doctest::Approx(1.0));  // align normalized alone
    CHECK(scores[1] == doctest::Approx(0.0));
}

TEST_CASE("alignment features may live in the aux block") {
    RacingDomain d(12, 1, {"TotalAngleChanges", "CenterOfMassX"}, {"CenterOfMassY", "VarianceY"});
    Rng sample_rng(8);
    const auto samples = d.draw_target_samples(120, sample_rng);
    const auto model = fit_target_model(samples);

    ObjectiveConfig cfg;
    cfg.j_align = true;
    cfg.align_features = {"CenterOfMassY"};
    ObjectiveEngine eng(cfg, d, model);

    GridArchive archive({{"TotalAngleChanges", 0.0, 30.0, 10}, {"CenterOfMassX", 0.0, 100.0, 10}});
    Rng rng(9);
    eng.begin_batch(archive, rng);
    const double t = eng.current_targets()[0];
    const double range = model.by_name("CenterOfMassY").range();
    REQUIRE(range > 0.0);

    LevelEval ev;
    ev.features = {999.0, 999.0};  // must be ignored by this alignment
    ev.aux = {t + 0.25 * range, 0.0};
    CHECK(eng.alignment(ev) == doctest::Approx(-0.25));
    ev.aux[0] = t;
    CHECK(eng.alignment(ev) == doctest::Approx(0.0));
}
