#pragma once

#include <string>
#include <vector>

#include "qd/archive.hpp"
#include "qd/rng.hpp"

namespace qd {

// Downstream feature samples: one named column per feature, n rows.
struct FeatureSamples {
    std::vector<std::string> names;
    std::vector<char> discrete;                 // per-column flag
    std::vector<std::vector<double>> columns;   // same length per column

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

enum class Family { Normal, Uniform, DiscreteUniform };

// Per-feature fitted distribution. Normal carries (mu, sigma); Uniform a
// widened continuous range [a, b]; DiscreteUniform integer endpoints a..b
// (a == b encodes a degenerate point mass, possibly non-integer). The target
// bounds [lo, hi] delimit the region of feature space the final archive
// covers. stat/p_value record the goodness-of-fit diagnostic of the selected
// family (Kolmogorov-Smirnov for continuous features, chi-squared for
// discrete ones).
struct FittedFeature {
    std::string name;
    bool discrete = false;
    Family family = Family::Normal;
    double mu = 0.0, sigma = 0.0;
    double a = 0.0, b = 0.0;
    double stat = 0.0, p_value = 1.0;
    double lo = 0.0, hi = 1.0;

    // P(X < x): the mass strictly below x, so differencing at cell edges
    // attributes each integer atom of a discrete family to the cell whose
    // interior contains it.
    double cdf_below(double x) const;
    double sample(Rng& rng) const;
    double range() const { return hi - lo; }
    std::string describe() const;
};

// Fit one feature column: Normal via sample mean / standard deviation,
// Uniform via the sample range widened by half an average inter-sample gap
// per side (integer endpoints for discrete features), then select the family
// with the higher average log-likelihood. Constant samples degenerate to a
// point mass. Throws ConfigError on fewer than 2 or non-finite samples.
FittedFeature fit_feature(const std::vector<double>& samples, bool discrete, const std::string& name = "");

// All columns of a sample table, fitted independently.
struct TargetModel {
    std::vector<FittedFeature> fits;

    const FittedFeature& by_name(const std::string& name) const;
    bool has(const std::string& name) const;
};

TargetModel fit_target_model(const FeatureSamples& samples);

// Discretize the per-dimension fitted densities over an archive's cells:
// weight(cell) = prod_d [cdf_d(upper edge) - cdf_d(lower edge)], then
// renormalize. Throws ConfigError if the archive captures less than 1e-12 of
// the target mass (target region misaligned with the grid).
CellPrior build_cell_prior(const std::vector<FittedFeature>& fits, const GridArchive& archive);

// Stage-1 interval for one dimension: the hull of the initial population's
// feature range and the target bounds, widened by 2% of that hull per side.
std::pair<double, double> stage1_interval(double pop_min, double pop_max, const FittedFeature& fit);

// Goodness-of-fit helpers (exposed for reports and tests).
double normal_cdf(double x, double mu, double sigma);
// Two-sided Kolmogorov-Smirnov statistic of sorted samples against a CDF.
double ks_statistic(std::vector<double> samples, const FittedFeature& fit);
// Asymptotic Kolmogorov p-value for statistic d at sample size n.
double ks_pvalue(double d, std::size_t n);
// Upper regularized incomplete gamma Q(a, x); chi-squared survival is
// Q(df/2, x/2).
double gamma_q(double a, double x);

// Serialization of a fitted model (one line per feature, exact %.17g values).
std::string model_to_string(const TargetModel& model);
TargetModel model_from_string(const std::string& text);

// Parse a delimited sample table: header row of feature names, one row per
// sample; separators are tabs, commas, or spaces. Columns whose values are
// all integral are flagged discrete unless overridden.
FeatureSamples parse_sample_table(const std::string& text);

}  // namespace qd
