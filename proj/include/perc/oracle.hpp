#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "perc/arms.hpp"
#include "perc/config.hpp"
#include "perc/lattice.hpp"

namespace perc {

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact event polynomial from exhaustive enumeration: counts[k] is the number
// of configurations with exactly k Black free sites satisfying the event, so
// prob(p) = sum_k counts[k] p^k (1-p)^(m-k).
class EventPoly {
  public:
    EventPoly(int m, std::vector<std::int64_t> counts);

    int m() const { return m_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    double prob(double p) const;
    // exact integer coefficients of the standard power basis p^0..p^m
    std::vector<std::int64_t> power_coeffs() const;
    std::string to_json() const;

  private:
    int m_;
    std::vector<std::int64_t> counts_;
};

using EventPred = std::function<bool(const Config&)>;

inline constexpr int kEnumCap = 25;  // at most 2^25 configurations

// Enumerates the 2^m colorings of free_sites over the frozen base.
EventPoly exact_polynomial(const Config& base, const std::vector<Site>& free_sites,
                           const EventPred& event);
// All sites free, all-White base.
EventPoly exact_polynomial(const Region& region, const EventPred& event);

// The strictly interior sites, the only ones a crossing event can read.
std::vector<Site> interior_sites(const Region& par);

struct RussoResult {
    std::vector<std::int64_t> derivative;   // power coefficients, degree m-1
    std::vector<std::int64_t> pivotal_sum;  // sum over sites of pivotal polynomials
    bool equal = false;
};

// Exact Russo identity check; requires an increasing event (verified
// exhaustively, throws domain_error otherwise).
RussoResult exact_russo(const Config& base, const std::vector<Site>& free_sites,
                        const EventPred& event);

struct ColorSwitchResult {
    std::int64_t count_sigma = 0;
    std::int64_t count_sigma_prime = 0;
    int m = 0;
    double prob_sigma = 0.0;
    double prob_sigma_prime = 0.0;
    bool equal = false;
};

// Exact half-plane arm probabilities at p = 1/2 for two color sequences of
// equal length, by exhaustive enumeration of the open half-annulus.
ColorSwitchResult exact_color_switch_halfplane(int n, int N, const ColorSeq& sigma,
                                               const ColorSeq& sigma_prime);

// Ground-truth arm detection by exhaustive backtracking over vertex-disjoint
// path systems; cyclic color order verified per found system.
bool brute_force_arms(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                      int defects);
bool brute_force_halfplane_arms(const Config& cfg, const Region& half_annulus,
                                const ColorSeq& sigma, int defects);

}  // namespace perc
