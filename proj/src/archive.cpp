#include "qd/archive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qd/errors.hpp"

namespace qd {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << fmt_double(v[i]);
    }
}

std::vector<double> parse_csv(const std::string& s) {
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        v.push_back(std::strtod(s.substr(pos, next - pos).c_str(), nullptr));
        pos = next + 1;
    }
    return v;
}

}  // namespace

GridArchive::GridArchive(std::vector<GridDim> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ConfigError("archive needs at least one dimension");
    num_cells_ = 1;
    for (const GridDim& d : dims_) {
        if (!(d.lower < d.upper)) throw ConfigError("archive dimension '" + d.name + "': lower must be < upper");
        if (d.bins < 1) throw ConfigError("archive dimension '" + d.name + "': bins must be >= 1");
        num_cells_ *= static_cast<std::size_t>(d.bins);
    }
}

std::vector<int> GridArchive::cell_index(const std::vector<double>& features) const {
    if (features.size() != dims_.size())
        throw ConfigError("feature vector length does not match archive dimensionality");
    std::vector<int> idx(dims_.size());
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        const GridDim& dim = dims_[d];
        double t = (features[d] - dim.lower) / (dim.upper - dim.lower) * dim.bins;
        int i = static_cast<int>(std::floor(t));
        idx[d] = std::clamp(i, 0, dim.bins - 1);
    }
    return idx;
}

std::size_t GridArchive::flat_index(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dims_.size(); ++d)
        flat = flat * static_cast<std::size_t>(dims_[d].bins) + static_cast<std::size_t>(idx[d]);
    return flat;
}

std::vector<int> GridArchive::unflatten(std::size_t flat) const {
    std::vector<int> idx(dims_.size());
    for (std::size_t d = dims_.size(); d-- > 0;) {
        auto bins = static_cast<std::size_t>(dims_[d].bins);
        idx[d] = static_cast<int>(flat % bins);
        flat /= bins;
    }
    return idx;
}

std::vector<double> GridArchive::cell_center(std::size_t flat) const {
    std::vector<int> idx = unflatten(flat);
    std::vector<double> c(dims_.size());
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        const GridDim& dim = dims_[d];
        c[d] = dim.lower + (idx[d] + 0.5) * (dim.upper - dim.lower) / dim.bins;
    }
    return c;
}

std::pair<double, double> GridArchive::cell_edges(int dim, int bin) const {
    const GridDim& d = dims_[static_cast<std::size_t>(dim)];
    double w = (d.upper - d.lower) / d.bins;
    return {d.lower + bin * w, d.lower + (bin + 1) * w};
}

InsertOutcome GridArchive::insert(Solution s) {
    if (s.features.size() != dims_.size())
        throw ConfigError("insert: feature vector length does not match archive dimensionality");
    for (double f : s.features) {
        if (!std::isfinite(f)) {
            ++nonfinite_rejections_;
            return InsertOutcome::RejectedNonFinite;
        }
    }
    std::size_t flat = flat_index(cell_index(s.features));
    auto it = cells_.find(flat);
    if (it == cells_.end()) {
        cells_.emplace(flat, std::move(s));
        order_.push_back(flat);
        return InsertOutcome::NewCell;
    }
    if (s.objective > it->second.objective) {
        it->second = std::move(s);
        return InsertOutcome::Replaced;
    }
    return InsertOutcome::RejectedWorse;
}

const Solution* GridArchive::cell(std::size_t flat) const {
    auto it = cells_.find(flat);
    return it == cells_.end() ? nullptr : &it->second;
}

std::vector<std::size_t> GridArchive::occupied_sorted() const {
    std::vector<std::size_t> v = order_;
    std::sort(v.begin(), v.end());
    return v;
}

const Solution& GridArchive::sample_uniform(Rng& rng) const {
    if (order_.empty()) throw PipelineError(PipelineError::Code::EmptyStage2, "cannot sample from an empty archive");
    std::size_t pick = static_cast<std::size_t>(rng.below(order_.size()));
    return cells_.at(order_[pick]);
}

bool GridArchive::center_in_mask(std::size_t flat, const SampleMask& mask) const {
    std::vector<double> c = cell_center(flat);
    for (std::size_t d = 0; d < c.size(); ++d)
        if (c[d] < mask.lower[d] || c[d] > mask.upper[d]) return false;
    return true;
}

std::size_t GridArchive::occupied_in_mask(const SampleMask& mask) const {
    if (mask.lower.size() != dims_.size() || mask.upper.size() != dims_.size())
        throw ConfigError("sample mask dimensionality does not match archive");
    std::size_t n = 0;
    for (std::size_t flat : order_)
        if (center_in_mask(flat, mask)) ++n;
    return n;
}

const Solution& GridArchive::sample_uniform_masked(const SampleMask& mask, Rng& rng) const {
    if (order_.empty()) throw PipelineError(PipelineError::Code::EmptyStage2, "cannot sample from an empty archive");
    if (mask.lower.size() != dims_.size() || mask.upper.size() != dims_.size())
        throw ConfigError("sample mask dimensionality does not match archive");
    std::vector<std::size_t> eligible;
    eligible.reserve(order_.size());
    for (std::size_t flat : order_)
        if (center_in_mask(flat, mask)) eligible.push_back(flat);
    if (eligible.empty()) {
        ++mask_fallbacks_;
        return sample_uniform(rng);
    }
    std::size_t pick = static_cast<std::size_t>(rng.below(eligible.size()));
    return cells_.at(eligible[pick]);
}

const Solution& GridArchive::sample_prior_weighted(const CellPrior& prior, Rng& rng) const {
    if (order_.empty()) throw PipelineError(PipelineError::Code::EmptyStage2, "cannot sample from an empty archive");
    if (prior.weights.size() != num_cells_)
        throw ConfigError("cell prior size does not match archive cell count");
    if (prior_cache_key_ != &prior || prior_cache_occupied_ != order_.size()) {
        prior_cells_ = occupied_sorted();
        prior_cum_.resize(prior_cells_.size());
        double total = 0.0;
        for (std::size_t i = 0; i < prior_cells_.size(); ++i) {
            total += prior.weights[prior_cells_[i]];
            prior_cum_[i] = total;
        }
        prior_cache_key_ = &prior;
        prior_cache_occupied_ = order_.size();
    }
    double total = prior_cum_.empty() ? 0.0 : prior_cum_.back();
    if (total <= 0.0) {
        ++prior_fallbacks_;
        return sample_uniform(rng);
    }
    double u = rng.uniform() * total;
    auto it = std::upper_bound(prior_cum_.begin(), prior_cum_.end(), u);
    std::size_t i = std::min(static_cast<std::size_t>(it - prior_cum_.begin()), prior_cells_.size() - 1);
    return cells_.at(prior_cells_[i]);
}

void GridArchive::write_snapshot(std::ostream& out) const {
    out << "# grid dims=" << dims_.size() << " occupied=" << order_.size();
    out << " names=";
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        if (d) out << ',';
        out << dims_[d].name;
    }
    out << " bins=";
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        if (d) out << ',';
        out << dims_[d].bins;
    }
    out << " lower=";
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        if (d) out << ',';
        out << fmt_double(dims_[d].lower);
    }
    out << " upper=";
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        if (d) out << ',';
        out << fmt_double(dims_[d].upper);
    }
    out << '\n';
    for (std::size_t flat : occupied_sorted()) {
        const Solution& s = cells_.at(flat);
        std::vector<int> idx = unflatten(flat);
        out << "cell=";
        for (std::size_t d = 0; d < idx.size(); ++d) {
            if (d) out << ',';
            out << idx[d];
        }
        out << " features=";
        write_csv(out, s.features);
        out << " aux=";
        write_csv(out, s.aux);
        out << " objective=" << fmt_double(s.objective);
        out << " birth=" << s.birth_iter;
        out << " genotype=";
        write_csv(out, s.genotype);
        out << '\n';
    }
}

std::string GridArchive::snapshot_string() const {
    std::ostringstream oss;
    write_snapshot(oss);
    return oss.str();
}

namespace {

// Pull "key=value" (value = run of non-space chars) out of a snapshot line.
std::string field(const std::string& line, const std::string& key) {
    std::string pat = key + "=";
    std::size_t at = line.find(pat);
    if (at == std::string::npos) throw ConfigError("snapshot line missing field '" + key + "'");
    // Require the match to start the line or follow a space so e.g. "aux=" never matches inside "max=".
    if (at != 0 && line[at - 1] != ' ') {
        at = line.find(" " + pat);
        if (at == std::string::npos) throw ConfigError("snapshot line missing field '" + key + "'");
        ++at;
    }
    std::size_t start = at + pat.size();
    std::size_t end = line.find(' ', start);
    if (end == std::string::npos) end = line.size();
    return line.substr(start, end - start);
}

}  // namespace

GridArchive GridArchive::read_snapshot(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# grid ", 0) != 0)
        throw ConfigError("snapshot missing grid header line");
    std::vector<double> lowers = parse_csv(field(header, "lower"));
    std::vector<double> uppers = parse_csv(field(header, "upper"));
    std::vector<double> bins = parse_csv(field(header, "bins"));
    std::string names_csv = field(header, "names");
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (pos <= names_csv.size()) {
        std::size_t next = names_csv.find(',', pos);
        if (next == std::string::npos) next = names_csv.size();
        names.push_back(names_csv.substr(pos, next - pos));
        pos = next + 1;
    }
    if (lowers.size() != uppers.size() || lowers.size() != bins.size() || lowers.size() != names.size())
        throw ConfigError("snapshot header fields disagree on dimensionality");
    std::vector<GridDim> dims(lowers.size());
    for (std::size_t d = 0; d < dims.size(); ++d)
        dims[d] = GridDim{names[d], lowers[d], uppers[d], static_cast<int>(bins[d])};
    GridArchive archive(std::move(dims));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        Solution s;
        s.features = parse_csv(field(line, "features"));
        s.aux = parse_csv(field(line, "aux"));
        s.objective = std::strtod(field(line, "objective").c_str(), nullptr);
        s.birth_iter = std::strtoll(field(line, "birth").c_str(), nullptr, 10);
        s.genotype = parse_csv(field(line, "genotype"));
        archive.insert(std::move(s));
    }
    return archive;
}

}  // namespace qd
