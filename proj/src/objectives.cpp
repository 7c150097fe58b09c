#include "qd/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "qd/errors.hpp"

namespace qd {

namespace {

// Resolve a feature name against a domain's archive dimensions and aux list.
std::pair<bool, int> resolve_feature(const Domain& domain, const std::string& name) {
    const std::vector<FeatureSpec>& specs = domain.feature_specs();
    for (std::size_t i = 0; i < specs.size(); ++i)
        if (specs[i].name == name) return {false, static_cast<int>(i)};
    const std::vector<std::string>& aux = domain.aux_names();
    for (std::size_t i = 0; i < aux.size(); ++i)
        if (aux[i] == name) return {true, static_cast<int>(i)};
    throw ConfigError("objective feature '" + name + "' is not a feature of domain '" + domain.name() + "'");
}

}  // namespace

ObjectiveEngine::ObjectiveEngine(ObjectiveConfig cfg, const Domain& domain, const TargetModel& model)
    : cfg_(std::move(cfg)) {
    if (cfg_.enabled_count() == 0) throw ConfigError("at least one objective variant must be enabled");
    auto build_refs = [&](const std::vector<std::string>& names, std::vector<FeatureRef>& out) {
        for (const std::string& name : names) {
            auto [is_aux, idx] = resolve_feature(domain, name);
            const FittedFeature& fit = model.by_name(name);
            out.push_back(FeatureRef{is_aux, idx, fit.range(), &fit});
        }
    };
    if (cfg_.j_align) {
        if (cfg_.align_features.empty()) throw ConfigError("alignment objective needs alignment features");
        build_refs(cfg_.align_features, align_refs_);
    }
    if (cfg_.j_diverse) {
        if (cfg_.diversity_features.empty()) throw ConfigError("diversity objective needs diversity features");
        if (cfg_.diversity_refs < 1) throw ConfigError("diversity objective needs at least 1 reference");
        build_refs(cfg_.diversity_features, diverse_refs_);
    }
}

double ObjectiveEngine::value_of(const LevelEval& ev, const FeatureRef& ref) {
    const std::vector<double>& v = ref.is_aux ? ev.aux : ev.features;
    return v[static_cast<std::size_t>(ref.idx)];
}

void ObjectiveEngine::begin_batch(const GridArchive& archive, Rng& rng) {
    if (cfg_.j_align) {
        targets_.clear();
        for (const FeatureRef& ref : align_refs_) targets_.push_back(ref.fit->sample(rng));
    }
    if (cfg_.j_diverse) {
        ref_values_.clear();
        if (archive.occupied() > 0) {
            for (int r = 0; r < cfg_.diversity_refs; ++r) {
                const Solution& s = archive.sample_uniform(rng);
                std::vector<double> vals;
                LevelEval ev{true, s.features, s.aux};
                for (const FeatureRef& ref : diverse_refs_) vals.push_back(value_of(ev, ref));
                ref_values_.push_back(std::move(vals));
            }
        }
    }
}

double ObjectiveEngine::alignment(const LevelEval& ev) const {
    double total = 0.0;
    for (std::size_t i = 0; i < align_refs_.size(); ++i) {
        const FeatureRef& ref = align_refs_[i];
        if (!(ref.range > 0.0)) continue;  // degenerate target: term omitted
        total += std::abs(value_of(ev, ref) - targets_[i]) / ref.range;
    }
    return -total;
}

double ObjectiveEngine::diversity(const LevelEval& ev) const {
    if (ref_values_.empty()) return 0.0;
    double total = 0.0;
    for (const std::vector<double>& ref_vals : ref_values_) {
        double per_feature = 0.0;
        int counted = 0;
        for (std::size_t i = 0; i < diverse_refs_.size(); ++i) {
            const FeatureRef& ref = diverse_refs_[i];
            if (!(ref.range > 0.0)) continue;
            per_feature += std::abs(value_of(ev, ref) - ref_vals[i]) / ref.range;
            ++counted;
        }
        if (counted > 0) total += per_feature / counted;
    }
    return total / static_cast<double>(ref_values_.size());
}

std::vector<double> ObjectiveEngine::score(const std::vector<LevelEval>& evals, long iter, Rng& rng) const {
    std::size_t n = evals.size();
    std::vector<std::vector<double>> components;  // one column per enabled variant
    auto add_component = [&](auto&& value_fn) {
        std::vector<double> col(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (evals[i].valid) col[i] = value_fn(evals[i]);
        components.push_back(std::move(col));
    };

    if (cfg_.j_new) add_component([&](const LevelEval&) { return novelty(iter); });
    if (cfg_.j_align) add_component([&](const LevelEval& ev) { return alignment(ev); });
    if (cfg_.j_diverse) add_component([&](const LevelEval& ev) { return diversity(ev); });
    if (cfg_.j_random) {
        // One draw per candidate, valid or not, so the stream layout does not
        // depend on validity.
        std::vector<double> col(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double u = rng.uniform();
            if (evals[i].valid) col[i] = u;
        }
        components.push_back(std::move(col));
    }

    std::vector<double> out(n, 0.0);
    if (components.size() == 1) {
        for (std::size_t i = 0; i < n; ++i)
            if (evals[i].valid) out[i] = components[0][i];
        return out;
    }
    // Multiple variants: per-batch min-max normalization over valid
    // candidates, then sum.
    for (const std::vector<double>& col : components) {
        double lo = 0.0, hi = 0.0;
        bool seen = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!evals[i].valid) continue;
            if (!seen) {
                lo = hi = col[i];
                seen = true;
            } else {
                lo = std::min(lo, col[i]);
                hi = std::max(hi, col[i]);
            }
        }
        double range = hi - lo;
        for (std::size_t i = 0; i < n; ++i) {
            if (!evals[i].valid) continue;
            out[i] += range > 0.0 ? (col[i] - lo) / range : 0.0;
        }
    }
    return out;
}

}  // namespace qd
