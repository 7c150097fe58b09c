#include "qd/target_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "qd/errors.hpp"

namespace qd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Moments {
    double mean = 0.0;
    double sd_sample = 0.0;  // ddof-1
    double sd_mle = 0.0;     // ddof-0
    double min = 0.0;
    double max = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    double n = static_cast<double>(xs.size());
    double sum = 0.0;
    m.min = xs.front();
    m.max = xs.front();
    for (double x : xs) {
        sum += x;
        m.min = std::min(m.min, x);
        m.max = std::max(m.max, x);
    }
    m.mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd_mle = std::sqrt(ss / n);
    m.sd_sample = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return m;
}

// Chi-squared statistic of integer-valued samples against the selected
// family, binned per integer over the union of sample range and support.
void chi_squared_diag(const std::vector<double>& xs, FittedFeature& fit) {
    long lo = std::lround(*std::min_element(xs.begin(), xs.end()));
    long hi = std::lround(*std::max_element(xs.begin(), xs.end()));
    if (fit.family == Family::DiscreteUniform) {
        lo = std::min(lo, std::lround(fit.a));
        hi = std::max(hi, std::lround(fit.b));
    }
    long nbins = hi - lo + 1;
    std::vector<double> observed(static_cast<std::size_t>(nbins), 0.0);
    for (double x : xs) {
        long i = std::clamp(std::lround(x) - lo, 0L, nbins - 1);
        observed[static_cast<std::size_t>(i)] += 1.0;
    }
    double n = static_cast<double>(xs.size());
    double stat = 0.0;
    for (long i = 0; i < nbins; ++i) {
        long v = lo + i;
        double expected;
        if (fit.family == Family::DiscreteUniform) {
            long a = std::lround(fit.a), b = std::lround(fit.b);
            expected = (v >= a && v <= b) ? n / static_cast<double>(b - a + 1) : 0.0;
        } else {
            // Integer bin [v-0.5, v+0.5]; outer tails fold into the end bins.
            double upper = (i == nbins - 1) ? 1.0 : normal_cdf(v + 0.5, fit.mu, fit.sigma);
            double lower = (i == 0) ? 0.0 : normal_cdf(v - 0.5, fit.mu, fit.sigma);
            expected = n * (upper - lower);
        }
        double o = observed[static_cast<std::size_t>(i)];
        if (expected < 1e-12) {
            if (o > 0.0) stat += 1e12;  // observation in a zero-probability bin
            continue;
        }
        stat += (o - expected) * (o - expected) / expected;
    }
    long df = std::max(1L, nbins - 1 - 2);
    fit.stat = stat;
    fit.p_value = gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
}

}  // namespace

double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(a, x);
}

double ks_statistic(std::vector<double> samples, const FittedFeature& fit) {
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = fit.cdf_below(samples[i]);
        if (fit.family == Family::DiscreteUniform && fit.a == fit.b)
            f = samples[i] >= fit.a ? 1.0 : 0.0;  // point mass: evaluate at x inclusive
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    if (d <= 0.0) return 1.0;
    double en = std::sqrt(static_cast<double>(n));
    double lambda = (en + 0.12 + 0.11 / en) * d;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double FittedFeature::cdf_below(double x) const {
    switch (family) {
        case Family::Normal:
            return normal_cdf(x, mu, sigma);
        case Family::Uniform:
            return std::clamp((x - a) / (b - a), 0.0, 1.0);
        case Family::DiscreteUniform:
            if (a == b) return x > a ? 1.0 : 0.0;  // point mass
            return std::clamp((std::ceil(x) - a) / (b - a + 1.0), 0.0, 1.0);
    }
    return 0.0;
}

double FittedFeature::sample(Rng& rng) const {
    switch (family) {
        case Family::Normal:
            return rng.normal(mu, sigma);
        case Family::Uniform:
            return rng.uniform(a, b);
        case Family::DiscreteUniform: {
            if (a == b) return a;
            auto span = static_cast<std::uint64_t>(std::lround(b - a)) + 1;
            return a + static_cast<double>(rng.below(span));
        }
    }
    return 0.0;
}

std::string FittedFeature::describe() const {
    std::ostringstream oss;
    oss << "feature=" << name;
    oss << " kind=" << (discrete ? "discrete" : "continuous");
    oss << " family=";
    switch (family) {
        case Family::Normal: oss << "normal"; break;
        case Family::Uniform: oss << "uniform"; break;
        case Family::DiscreteUniform: oss << "discrete_uniform"; break;
    }
    oss << " mu=" << fmt_double(mu) << " sigma=" << fmt_double(sigma);
    oss << " a=" << fmt_double(a) << " b=" << fmt_double(b);
    oss << " stat=" << fmt_double(stat) << " p=" << fmt_double(p_value);
    oss << " lo=" << fmt_double(lo) << " hi=" << fmt_double(hi);
    return oss.str();
}

FittedFeature fit_feature(const std::vector<double>& samples, bool discrete, const std::string& name) {
    if (samples.size() < 2) throw ConfigError("fit_feature: need at least 2 samples for '" + name + "'");
    for (double x : samples)
        if (!std::isfinite(x)) throw ConfigError("fit_feature: non-finite sample for '" + name + "'");

    FittedFeature fit;
    fit.name = name;
    fit.discrete = discrete;
    Moments m = moments(samples);

    if (m.max == m.min) {
        // Constant samples: degenerate point mass, half-unit bounds.
        fit.family = Family::DiscreteUniform;
        fit.a = fit.b = m.min;
        fit.mu = m.min;
        fit.sigma = 0.0;
        fit.lo = m.min - 0.5;
        fit.hi = m.min + 0.5;
        fit.stat = 0.0;
        fit.p_value = 1.0;
        return fit;
    }

    double n = static_cast<double>(samples.size());
    double ll_normal = -n / 2.0 * (1.0 + std::log(kTwoPi * m.sd_mle * m.sd_mle));
    double ua, ub, ll_uniform;
    if (discrete) {
        ua = std::round(m.min);
        ub = std::round(m.max);
        ll_uniform = -n * std::log(ub - ua + 1.0);
    } else {
        double gap = (m.max - m.min) / (n - 1.0);
        ua = m.min - gap / 2.0;
        ub = m.max + gap / 2.0;
        ll_uniform = -n * std::log(ub - ua);
    }

    if (ll_normal >= ll_uniform) {
        fit.family = Family::Normal;
        fit.mu = m.mean;
        fit.sigma = m.sd_sample;
        fit.a = ua;
        fit.b = ub;
        fit.lo = fit.mu - 3.0 * fit.sigma;
        fit.hi = fit.mu + 3.0 * fit.sigma;
    } else {
        fit.family = discrete ? Family::DiscreteUniform : Family::Uniform;
        fit.mu = m.mean;
        fit.sigma = m.sd_sample;
        fit.a = ua;
        fit.b = ub;
        if (discrete) {
            fit.lo = ua - 0.5;
            fit.hi = ub + 0.5;
        } else {
            fit.lo = ua;
            fit.hi = ub;
        }
    }

    if (discrete) {
        chi_squared_diag(samples, fit);
    } else {
        fit.stat = ks_statistic(samples, fit);
        fit.p_value = ks_pvalue(fit.stat, samples.size());
    }
    return fit;
}

const FittedFeature& TargetModel::by_name(const std::string& name) const {
    for (const FittedFeature& f : fits)
        if (f.name == name) return f;
    throw ConfigError("no fitted feature named '" + name + "'");
}

bool TargetModel::has(const std::string& name) const {
    for (const FittedFeature& f : fits)
        if (f.name == name) return true;
    return false;
}

TargetModel fit_target_model(const FeatureSamples& samples) {
    if (samples.names.size() != samples.columns.size() || samples.names.size() != samples.discrete.size())
        throw ConfigError("sample table: names/columns/discrete flags disagree");
    TargetModel model;
    for (std::size_t i = 0; i < samples.names.size(); ++i)
        model.fits.push_back(fit_feature(samples.columns[i], samples.discrete[i] != 0, samples.names[i]));
    return model;
}

CellPrior build_cell_prior(const std::vector<FittedFeature>& fits, const GridArchive& archive) {
    if (static_cast<int>(fits.size()) != archive.dims())
        throw ConfigError("cell prior: fit count does not match archive dimensionality");
    // Per-dimension bin masses via CDF differences at cell edges.
    std::vector<std::vector<double>> bin_mass(fits.size());
    for (std::size_t d = 0; d < fits.size(); ++d) {
        int bins = archive.dim_specs()[d].bins;
        bin_mass[d].resize(static_cast<std::size_t>(bins));
        for (int b = 0; b < bins; ++b) {
            auto [lo, hi] = archive.cell_edges(static_cast<int>(d), b);
            bin_mass[d][static_cast<std::size_t>(b)] =
                std::max(0.0, fits[d].cdf_below(hi) - fits[d].cdf_below(lo));
        }
    }
    CellPrior prior;
    prior.weights.resize(archive.num_cells());
    double total = 0.0;
    for (std::size_t flat = 0; flat < archive.num_cells(); ++flat) {
        std::vector<int> idx = archive.unflatten(flat);
        double w = 1.0;
        for (std::size_t d = 0; d < fits.size(); ++d) w *= bin_mass[d][static_cast<std::size_t>(idx[d])];
        prior.weights[flat] = w;
        total += w;
    }
    if (total < 1e-12)
        throw ConfigError("cell prior: archive captures no target mass (target region misaligned)");
    for (double& w : prior.weights) w /= total;
    return prior;
}

std::pair<double, double> stage1_interval(double pop_min, double pop_max, const FittedFeature& fit) {
    double lo = std::min(pop_min, fit.lo);
    double hi = std::max(pop_max, fit.hi);
    double range = hi - lo;
    if (range <= 0.0) range = 1.0;
    return {lo - 0.02 * range, hi + 0.02 * range};
}

std::string model_to_string(const TargetModel& model) {
    std::ostringstream oss;
    for (const FittedFeature& f : model.fits) oss << f.describe() << '\n';
    return oss.str();
}

namespace {

std::string model_field(const std::string& line, const std::string& key) {
    std::string pat = key + "=";
    std::size_t at = line.rfind(" " + pat);
    std::size_t start;
    if (at != std::string::npos) {
        start = at + 1 + pat.size();
    } else if (line.rfind(pat, 0) == 0) {
        start = pat.size();
    } else {
        throw ConfigError("model line missing field '" + key + "'");
    }
    std::size_t end = line.find(' ', start);
    if (end == std::string::npos) end = line.size();
    return line.substr(start, end - start);
}

}  // namespace

TargetModel model_from_string(const std::string& text) {
    TargetModel model;
    std::istringstream iss(text);
    std::string line;
    while (std::getline(iss, line)) {
        if (line.empty() || line[0] == '#') continue;
        FittedFeature f;
        f.name = model_field(line, "feature");
        f.discrete = model_field(line, "kind") == "discrete";
        std::string fam = model_field(line, "family");
        if (fam == "normal") f.family = Family::Normal;
        else if (fam == "uniform") f.family = Family::Uniform;
        else if (fam == "discrete_uniform") f.family = Family::DiscreteUniform;
        else throw ConfigError("model line: unknown family '" + fam + "'");
        f.mu = std::strtod(model_field(line, "mu").c_str(), nullptr);
        f.sigma = std::strtod(model_field(line, "sigma").c_str(), nullptr);
        f.a = std::strtod(model_field(line, "a").c_str(), nullptr);
        f.b = std::strtod(model_field(line, "b").c_str(), nullptr);
        f.stat = std::strtod(model_field(line, "stat").c_str(), nullptr);
        f.p_value = std::strtod(model_field(line, "p").c_str(), nullptr);
        f.lo = std::strtod(model_field(line, "lo").c_str(), nullptr);
        f.hi = std::strtod(model_field(line, "hi").c_str(), nullptr);
        model.fits.push_back(std::move(f));
    }
    return model;
}

FeatureSamples parse_sample_table(const std::string& text) {
    FeatureSamples samples;
    std::istringstream iss(text);
    std::string line;
    bool header_done = false;
    while (std::getline(iss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> tokens;
        std::string token;
        for (char c : line) {
            if (c == '\t' || c == ',' || c == ' ') {
                if (!token.empty()) tokens.push_back(std::move(token));
                token.clear();
            } else {
                token.push_back(c);
            }
        }
        if (!token.empty()) tokens.push_back(std::move(token));
        if (tokens.empty()) continue;
        if (!header_done) {
            samples.names = tokens;
            samples.columns.resize(tokens.size());
            header_done = true;
            continue;
        }
        if (tokens.size() != samples.names.size())
            throw ConfigError("sample table row has wrong column count");
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            char* end = nullptr;
            double v = std::strtod(tokens[i].c_str(), &end);
            if (end == tokens[i].c_str()) throw ConfigError("sample table: non-numeric value '" + tokens[i] + "'");
            samples.columns[i].push_back(v);
        }
    }
    if (!header_done || samples.rows() == 0) throw ConfigError("sample table: no data rows");
    samples.discrete.resize(samples.names.size(), 0);
    for (std::size_t i = 0; i < samples.columns.size(); ++i) {
        bool all_int = true;
        for (double v : samples.columns[i])
            if (v != std::floor(v)) { all_int = false; break; }
        samples.discrete[i] = all_int ? 1 : 0;
    }
    return samples;
}

}  // namespace qd
