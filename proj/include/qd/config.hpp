#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qd/domain.hpp"
#include "qd/objectives.hpp"

namespace qd {

// Flat key=value configuration of one pipeline run. preset_config() fills in
// the per-domain experiment setups; individual keys can then be overridden.
struct RunConfig {
    // Domain selection and parameters.
    std::string domain = "gridnav";
    int gridnav_k = 24;
    int gridnav_grid = 11;
    int alchemy_k = 8;
    int alchemy_stones = 3;
    int racing_control_points = 12;
    int racing_project_k = 1;
    std::vector<std::string> racing_archive_features{"TotalAngleChanges", "CenterOfMassX"};
    std::vector<std::string> racing_aux_features{"CenterOfMassY", "VarianceY"};

    // Pipeline sizes. Every iteration evaluates n_emitters * emitter_batch
    // candidate levels; total evaluations are
    // n_init + (n_stage1 + n_stage2) * n_emitters * emitter_batch.
    long n_init = 1000;
    long n_stage1 = 0;
    long n_stage2 = 100000;
    int n_emitters = 5;
    int emitter_batch = 8;
    long n_target_samples = 1000;

    // Emitter.
    std::string emitter = "mutation";  // mutation | es
    double mutation_p = 0.1;
    double es_sigma = 0.1;

    // Sample-mask annealing (stage 1 only).
    bool mask_enabled = false;
    long mask_min_cells = 10;

    // Objectives: comma-separated subset of j_new, j_align, j_diverse,
    // j_random. Empty feature lists default to the archive dimensions.
    std::string objectives = "j_new";
    std::vector<std::string> align_features;
    std::vector<std::string> diversity_features;
    int diversity_refs = 8;

    // Bookkeeping.
    std::uint64_t seed = 1;
    long checkpoint_interval = 1000;
    bool archive_snapshots = false;  // also write a full archive snapshot per checkpoint
    std::string out_dir;             // empty: keep results in memory only
};

// Named experiment setups: gridnav, alchemy, racing, racing_misspec.
RunConfig preset_config(const std::string& name);

// Set one key from its text value. Throws ConfigError on an unknown key or
// an unparsable value.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// key=value lines; '#' starts a comment; blank lines ignored. A preset=NAME
// line replaces the whole config with that preset, so it should come first.
RunConfig config_from_string(const std::string& text);
RunConfig load_config_file(const std::string& path);

// All keys except out_dir, one per line; round-trips through
// config_from_string.
std::string config_to_string(const RunConfig& cfg);

std::unique_ptr<Domain> make_domain(const RunConfig& cfg);

// Objective settings resolved against a domain (empty feature lists become
// the archive dimension names). Throws ConfigError on an unknown variant.
ObjectiveConfig objective_config(const RunConfig& cfg, const Domain& domain);

// Candidates evaluated per QD iteration.
long qd_batch(const RunConfig& cfg);

}  // namespace qd
