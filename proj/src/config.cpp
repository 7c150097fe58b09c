#include "qd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qd/domain_alchemy.hpp"
#include "qd/domain_gridnav.hpp"
#include "qd/domain_racing.hpp"
#include "qd/errors.hpp"

namespace qd {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_num(const std::string& key, const std::string& value) {
    T out{};
    std::string v = trim(value);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = trim(value);
    if (v == "1" || v == "true" || v == "on") return true;
    if (v == "0" || v == "false" || v == "off") return false;
    throw ConfigError("bad value for " + key + ": '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(value);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

}  // namespace

RunConfig preset_config(const std::string& name) {
    RunConfig cfg;
    if (name == "gridnav") {
        cfg.domain = "gridnav";
        cfg.gridnav_k = 24;
        cfg.gridnav_grid = 11;
        cfg.n_init = 1000;
        cfg.n_stage1 = 0;
        cfg.n_stage2 = 100000;
        cfg.n_emitters = 5;
        cfg.emitter_batch = 8;
        cfg.emitter = "mutation";
        cfg.mutation_p = 0.1;
        cfg.mask_enabled = false;
        cfg.objectives = "j_new";
    } else if (name == "alchemy") {
        cfg.domain = "alchemy";
        cfg.alchemy_k = 8;
        cfg.n_init = 1000;
        cfg.n_stage1 = 80000;
        cfg.n_stage2 = 30000;
        cfg.n_emitters = 5;
        cfg.emitter_batch = 5;
        cfg.emitter = "mutation";
        cfg.mutation_p = 0.02;
        cfg.mask_enabled = true;
        cfg.mask_min_cells = 10;
        cfg.objectives = "j_new";
    } else if (name == "racing" || name == "racing_misspec") {
        cfg.domain = "racing";
        cfg.racing_control_points = 12;
        cfg.racing_project_k = 32;
        cfg.n_init = 2000;
        cfg.n_stage1 = 50000;
        cfg.n_stage2 = 200000;
        cfg.n_emitters = 5;
        cfg.emitter_batch = 8;
        cfg.emitter = "es";
        cfg.es_sigma = 0.1;
        cfg.mask_enabled = false;
        if (name == "racing") {
            cfg.racing_archive_features = {"TotalAngleChanges", "CenterOfMassX"};
            cfg.racing_aux_features = {"CenterOfMassY", "VarianceY"};
            cfg.objectives = "j_align,j_random";
            cfg.align_features = {"CenterOfMassY", "VarianceY"};
        } else {
            cfg.racing_archive_features = {"TotalAngleChanges", "AreaToLengthRatio"};
            cfg.racing_aux_features = {"CenterOfMassY", "VarianceY"};
            cfg.objectives = "j_diverse";
            cfg.diversity_features = {"CenterOfMassY"};
        }
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return cfg;
}

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "domain") cfg.domain = trim(value);
    else if (key == "gridnav_k") cfg.gridnav_k = parse_num<int>(key, value);
    else if (key == "gridnav_grid") cfg.gridnav_grid = parse_num<int>(key, value);
    else if (key == "alchemy_k") cfg.alchemy_k = parse_num<int>(key, value);
    else if (key == "alchemy_stones") cfg.alchemy_stones = parse_num<int>(key, value);
    else if (key == "racing_control_points") cfg.racing_control_points = parse_num<int>(key, value);
    else if (key == "racing_project_k") cfg.racing_project_k = parse_num<int>(key, value);
    else if (key == "racing_archive_features") cfg.racing_archive_features = parse_list(value);
    else if (key == "racing_aux_features") cfg.racing_aux_features = parse_list(value);
    else if (key == "n_init") cfg.n_init = parse_num<long>(key, value);
    else if (key == "n_stage1") cfg.n_stage1 = parse_num<long>(key, value);
    else if (key == "n_stage2") cfg.n_stage2 = parse_num<long>(key, value);
    else if (key == "n_emitters") cfg.n_emitters = parse_num<int>(key, value);
    else if (key == "emitter_batch") cfg.emitter_batch = parse_num<int>(key, value);
    else if (key == "n_target_samples") cfg.n_target_samples = parse_num<long>(key, value);
    else if (key == "emitter") cfg.emitter = trim(value);
    else if (key == "mutation_p") cfg.mutation_p = parse_num<double>(key, value);
    else if (key == "es_sigma") cfg.es_sigma = parse_num<double>(key, value);
    else if (key == "mask_enabled") cfg.mask_enabled = parse_bool(key, value);
    else if (key == "mask_min_cells") cfg.mask_min_cells = parse_num<long>(key, value);
    else if (key == "objectives") cfg.objectives = trim(value);
    else if (key == "align_features") cfg.align_features = parse_list(value);
    else if (key == "diversity_features") cfg.diversity_features = parse_list(value);
    else if (key == "diversity_refs") cfg.diversity_refs = parse_num<int>(key, value);
    else if (key == "seed") cfg.seed = parse_num<std::uint64_t>(key, value);
    else if (key == "checkpoint_interval") cfg.checkpoint_interval = parse_num<long>(key, value);
    else if (key == "archive_snapshots") cfg.archive_snapshots = parse_bool(key, value);
    else if (key == "out_dir") cfg.out_dir = trim(value);
    else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig config_from_string(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key=value: '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = line.substr(eq + 1);
        if (key == "preset")
            cfg = preset_config(trim(value));
        else
            set_config_key(cfg, key, value);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_string(ss.str());
}

std::string config_to_string(const RunConfig& cfg) {
    std::ostringstream out;
    out << "domain=" << cfg.domain << "\n";
    out << "gridnav_k=" << cfg.gridnav_k << "\n";
    out << "gridnav_grid=" << cfg.gridnav_grid << "\n";
    out << "alchemy_k=" << cfg.alchemy_k << "\n";
    out << "alchemy_stones=" << cfg.alchemy_stones << "\n";
    out << "racing_control_points=" << cfg.racing_control_points << "\n";
    out << "racing_project_k=" << cfg.racing_project_k << "\n";
    out << "racing_archive_features=" << join_list(cfg.racing_archive_features) << "\n";
    out << "racing_aux_features=" << join_list(cfg.racing_aux_features) << "\n";
    out << "n_init=" << cfg.n_init << "\n";
    out << "n_stage1=" << cfg.n_stage1 << "\n";
    out << "n_stage2=" << cfg.n_stage2 << "\n";
    out << "n_emitters=" << cfg.n_emitters << "\n";
    out << "emitter_batch=" << cfg.emitter_batch << "\n";
    out << "n_target_samples=" << cfg.n_target_samples << "\n";
    out << "emitter=" << cfg.emitter << "\n";
    out << "mutation_p=" << cfg.mutation_p << "\n";
    out << "es_sigma=" << cfg.es_sigma << "\n";
    out << "mask_enabled=" << (cfg.mask_enabled ? 1 : 0) << "\n";
    out << "mask_min_cells=" << cfg.mask_min_cells << "\n";
    out << "objectives=" << cfg.objectives << "\n";
    out << "align_features=" << join_list(cfg.align_features) << "\n";
    out << "diversity_features=" << join_list(cfg.diversity_features) << "\n";
    out << "diversity_refs=" << cfg.diversity_refs << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "checkpoint_interval=" << cfg.checkpoint_interval << "\n";
    out << "archive_snapshots=" << (cfg.archive_snapshots ? 1 : 0) << "\n";
    return out.str();
}

std::unique_ptr<Domain> make_domain(const RunConfig& cfg) {
    if (cfg.domain == "gridnav") return std::make_unique<GridNavDomain>(cfg.gridnav_k, cfg.gridnav_grid);
    if (cfg.domain == "alchemy") return std::make_unique<AlchemyDomain>(cfg.alchemy_k, cfg.alchemy_stones);
    if (cfg.domain == "racing")
        return std::make_unique<RacingDomain>(cfg.racing_control_points, cfg.racing_project_k,
                                              cfg.racing_archive_features, cfg.racing_aux_features);
    throw ConfigError("unknown domain '" + cfg.domain + "'");
}

ObjectiveConfig objective_config(const RunConfig& cfg, const Domain& domain) {
    ObjectiveConfig oc;
    std::vector<std::string> variants = parse_list(cfg.objectives);
    if (variants.empty()) throw ConfigError("objectives must name at least one variant");
    for (const std::string& v : variants) {
        if (v == "j_new") oc.j_new = true;
        else if (v == "j_align") oc.j_align = true;
        else if (v == "j_diverse") oc.j_diverse = true;
        else if (v == "j_random") oc.j_random = true;
        else throw ConfigError("unknown objective variant '" + v + "'");
    }
    std::vector<std::string> archive_names;
    for (const FeatureSpec& spec : domain.feature_specs()) archive_names.push_back(spec.name);
    oc.align_features = cfg.align_features.empty() ? archive_names : cfg.align_features;
    oc.diversity_features = cfg.diversity_features.empty() ? archive_names : cfg.diversity_features;
    oc.diversity_refs = cfg.diversity_refs;
    return oc;
}

long qd_batch(const RunConfig& cfg) {
    return static_cast<long>(cfg.n_emitters) * cfg.emitter_batch;
}

}  // namespace qd
