#include "perc/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perc/rng.hpp"

namespace perc {

namespace {
constexpr std::uint64_t kSiteStream = 0;

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside [0,1]");
}
}  // namespace

ParamField ParamField::homogeneous(double p) {
    check_prob(p, "homogeneous field");
    ParamField f;
    f.default_p_ = p;
    return f;
}

ParamField ParamField::per_site(std::optional<double> default_p,
                                std::vector<std::pair<Site, double>> overrides) {
    if (default_p) check_prob(*default_p, "per-site field default");
    for (const auto& [v, p] : overrides) check_prob(p, "per-site field entry");
    std::sort(overrides.begin(), overrides.end(), [](const auto& x, const auto& y) {
        return x.first.b != y.first.b ? x.first.b < y.first.b : x.first.a < y.first.a;
    });
    ParamField f;
    f.default_p_ = default_p;
    f.overrides_ = std::move(overrides);
    return f;
}

double ParamField::prob_at(Site v) const {
    for (const auto& [w, p] : overrides_)
        if (w == v) return p;
    if (!default_p_)
        throw std::invalid_argument("field does not cover site (" + std::to_string(v.a) + "," +
                                    std::to_string(v.b) + ")");
    return *default_p_;
}

void ParamField::declare_band(Band band) {
    if (!(band.p_low >= 0.0 && band.p_low <= band.p_high && band.p_high <= 1.0))
        throw std::invalid_argument("band: requires 0 <= p_low <= p_high <= 1");
    if (std::abs((1.0 - band.p_low) - band.p_high) > 1e-12)
        throw std::invalid_argument("band: requires p_high = 1 - p_low");
    band_ = band;
}

std::string ParamField::summary() const {
    std::ostringstream os;
    if (is_homogeneous()) {
        os << "p=" << default_p();
    } else {
        os << "per-site(" << overrides_.size() << " overrides";
        if (default_p_) os << ", default=" << *default_p_;
        os << ")";
    }
    if (band_) os << " band[" << band_->p_low << "," << band_->p_high << "]";
    return os.str();
}

Config::Config(std::shared_ptr<const SiteIndexer> indexer, std::vector<std::uint8_t> colors,
               Provenance prov)
    : indexer_(std::move(indexer)), colors_(std::move(colors)), prov_(std::move(prov)) {
    if (colors_.size() != indexer_->size()) throw std::invalid_argument("config: size mismatch");
}

Color Config::at(Site v) const {
    int idx = indexer_->index(v);
    if (idx < 0)
        throw std::out_of_range("config: site (" + std::to_string(v.a) + "," +
                                std::to_string(v.b) + ") outside region");
    return at_index(idx);
}

Config Config::with_site(Site v, Color c) const {
    int idx = indexer_->index(v);
    if (idx < 0) throw std::out_of_range("with_site: site outside region");
    std::vector<std::uint8_t> colors = colors_;
    colors[idx] = static_cast<std::uint8_t>(c);
    return Config(indexer_, std::move(colors), prov_);
}

Config swap_colors(const Config& cfg) {
    std::vector<std::uint8_t> colors(cfg.colors_.size());
    for (std::size_t i = 0; i < colors.size(); ++i) colors[i] = 1 - cfg.colors_[i];
    return Config(cfg.indexer_, std::move(colors), cfg.prov_);
}

Config sample(std::shared_ptr<const SiteIndexer> indexer, const ParamField& field,
              std::uint64_t seed) {
    const std::size_t n = indexer->size();
    std::vector<std::uint8_t> colors(n);
    if (field.is_homogeneous()) {
        const double p = field.prob_at(Site{0, 0});
        for (std::size_t i = 0; i < n; ++i)
            colors[i] = rng_uniform53(seed, kSiteStream, i) <= p;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            colors[i] = rng_uniform53(seed, kSiteStream, i) <= field.prob_at(indexer->site(static_cast<int>(i)));
    }
    return Config(std::move(indexer), std::move(colors), Provenance{seed, field.summary()});
}

Config sample(const Region& region, const ParamField& field, std::uint64_t seed) {
    return sample(std::make_shared<SiteIndexer>(region), field, seed);
}

ThresholdField::ThresholdField(std::shared_ptr<const SiteIndexer> indexer, std::uint64_t seed)
    : indexer_(std::move(indexer)), seed_(seed) {
    u_.resize(indexer_->size());
    for (std::size_t i = 0; i < u_.size(); ++i) u_[i] = rng_uniform53(seed, kSiteStream, i);
}

Config ThresholdField::realize(double p) const {
    check_prob(p, "realize");
    std::vector<std::uint8_t> colors(u_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) colors[i] = u_[i] <= p;
    return Config(indexer_, std::move(colors), Provenance{seed_, "p=" + std::to_string(p)});
}

ThresholdField ThresholdField::complemented() const {
    ThresholdField out(indexer_, seed_);
    for (std::size_t i = 0; i < out.u_.size(); ++i) out.u_[i] = 1.0 - u_[i];
    return out;
}

ThresholdField threshold_field(const Region& region, std::uint64_t seed) {
    return ThresholdField(std::make_shared<SiteIndexer>(region), seed);
}

Config realize(const ThresholdField& tf, double p) { return tf.realize(p); }

void write_grid(std::ostream& os, const Config& cfg) {
    const auto& sites = cfg.indexer().sites();
    if (sites.empty()) return;
    int bmin = sites.front().b, bmax = sites.back().b;
    for (int b = bmax; b >= bmin; --b) {
        std::string row;
        for (std::size_t i = 0; i < sites.size(); ++i)
            if (sites[i].b == b) row += color_char(cfg.at_index(static_cast<int>(i)));
        os << row << '\n';
    }
}

void write_csv(std::ostream& os, const Config& cfg) {
    os << "a,b,color\n";
    const auto& sites = cfg.indexer().sites();
    for (std::size_t i = 0; i < sites.size(); ++i)
        os << sites[i].a << ',' << sites[i].b << ','
           << color_char(cfg.at_index(static_cast<int>(i))) << '\n';
}

}  // namespace perc
