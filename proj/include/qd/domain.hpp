#pragma once

#include <string>
#include <vector>

#include "qd/rng.hpp"
#include "qd/target_model.hpp"

namespace qd {

// How one archive dimension of a domain is laid out. Dimensions either carry
// fixed feature-space bounds (used verbatim in both stages) or derive their
// bounds from the data: stage 1 spans the initial population plus the target
// region, stage 2 spans the target region alone.
struct FeatureSpec {
    std::string name;
    bool discrete = false;
    int bins_s1 = 1;
    int bins_s2 = 1;
    bool fixed_bounds = false;
    double lo = 0.0;
    double hi = 1.0;
};

// Result of generating and measuring one level. `features` holds the archive
// dimensions in spec order; `aux` holds any extra features consumed only by
// objectives, in aux_names() order.
struct LevelEval {
    bool valid = true;
    std::vector<double> features;
    std::vector<double> aux;
};

// A level generator plus its feature extractors. Generation is deterministic
// per genotype; all randomness enters through random_genotype (the
// unstructured generator the search runs on) and draw_target_samples (the
// structured downstream distribution supplying the supervision).
class Domain {
public:
    virtual ~Domain() = default;

    virtual std::string name() const = 0;
    virtual int genotype_size() const = 0;
    virtual bool discrete_genotype() const = 0;
    virtual const std::vector<FeatureSpec>& feature_specs() const = 0;
    virtual const std::vector<std::string>& aux_names() const = 0;

    // One draw from the unstructured genotype distribution.
    virtual std::vector<double> random_genotype(Rng& rng) const = 0;

    // Deterministic genotype -> level -> features.
    virtual LevelEval evaluate(const std::vector<double>& genotype) const = 0;

    // Resample gene i uniformly over its alphabet excluding the current
    // value. Only meaningful for discrete genotypes.
    virtual void mutate_gene(std::vector<double>& genotype, int i, Rng& rng) const;

    // n draws from the structured downstream distribution, measured with the
    // archive features followed by the aux features.
    virtual FeatureSamples draw_target_samples(int n, Rng& rng) const = 0;

    // Human-readable one-line description of the generated level.
    virtual std::string level_record(const std::vector<double>& genotype) const = 0;
};

}  // namespace qd
