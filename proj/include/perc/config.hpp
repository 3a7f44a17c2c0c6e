#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

enum class Color : std::uint8_t { White = 0, Black = 1 };

inline Color opposite(Color c) { return c == Color::Black ? Color::White : Color::Black; }
inline char color_char(Color c) { return c == Color::Black ? 'B' : 'W'; }

// Declares that every site parameter lies in [p_low, p_high] with
// p_high = 1 - p_low ("between P_p and P_{1-p}").
struct Band {
    double p_low = 0.0;
    double p_high = 1.0;
};

// Site-dependent Bernoulli parameters: homogeneous p, or sparse per-site
// overrides on top of an optional homogeneous default.
class ParamField {
  public:
    static ParamField homogeneous(double p);
    static ParamField per_site(std::optional<double> default_p,
                               std::vector<std::pair<Site, double>> overrides);

    bool is_homogeneous() const { return overrides_.empty(); }
    double default_p() const { return default_p_.value_or(0.0); }
    // Throws, naming the site, if the field does not cover it.
    double prob_at(Site v) const;

    void declare_band(Band band);
    const std::optional<Band>& band() const { return band_; }

    std::string summary() const;

  private:
    std::optional<double> default_p_;
    std::vector<std::pair<Site, double>> overrides_;  // site -> p, sorted canonical
    std::optional<Band> band_;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::string field;
};

// A black/white assignment over a region, immutable once built.
class Config {
  public:
    Config(std::shared_ptr<const SiteIndexer> indexer, std::vector<std::uint8_t> colors,
           Provenance prov);

    const Region& region() const { return indexer_->region(); }
    const SiteIndexer& indexer() const { return *indexer_; }
    std::shared_ptr<const SiteIndexer> indexer_ptr() const { return indexer_; }
    const Provenance& provenance() const { return prov_; }
    std::size_t size() const { return colors_.size(); }

    Color at_index(int idx) const { return static_cast<Color>(colors_[idx]); }
    Color at(Site v) const;
    bool is(Site v, Color c) const { return at(v) == c; }

    Config with_site(Site v, Color c) const;  // copy with one site recolored

    friend Config swap_colors(const Config& cfg);

  private:
    std::shared_ptr<const SiteIndexer> indexer_;
    std::vector<std::uint8_t> colors_;
    Provenance prov_;
};

Config swap_colors(const Config& cfg);

// Per-site independent colors, Black with probability p_hat_v, deterministic
// in (region, field, seed).
Config sample(const Region& region, const ParamField& field, std::uint64_t seed);
Config sample(std::shared_ptr<const SiteIndexer> indexer, const ParamField& field,
              std::uint64_t seed);

// The standard monotone coupling: one uniform per site; realize(p) colors a
// site Black iff u_v <= p.
class ThresholdField {
  public:
    ThresholdField(std::shared_ptr<const SiteIndexer> indexer, std::uint64_t seed);

    const SiteIndexer& indexer() const { return *indexer_; }
    std::shared_ptr<const SiteIndexer> indexer_ptr() const { return indexer_; }
    double u(int idx) const { return u_[idx]; }
    std::uint64_t seed() const { return seed_; }

    Config realize(double p) const;
    // The field with u -> 1-u; realize(1-p) on it is the color swap of
    // realize(p) on the original (when no u equals p exactly).
    ThresholdField complemented() const;

  private:
    std::shared_ptr<const SiteIndexer> indexer_;
    std::vector<double> u_;
    std::uint64_t seed_;
};

ThresholdField threshold_field(const Region& region, std::uint64_t seed);
Config realize(const ThresholdField& tf, double p);

// Plain-text exports: grid (one row per b-line, top row = largest b) and
// CSV (a,b,color).
void write_grid(std::ostream& os, const Config& cfg);
void write_csv(std::ostream& os, const Config& cfg);

}  // namespace perc
