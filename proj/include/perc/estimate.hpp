#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perc/arms.hpp"
#include "perc/config.hpp"
#include "perc/connectivity.hpp"
#include "perc/stats.hpp"

namespace perc {

struct EstimateRecord {
    std::string query;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

struct LengthResult {
    double p = 0.0;
    double epsilon = 0.0;
    std::optional<int> length;  // nullopt: infinite (p = 1/2) or search truncated
    bool low_confidence = false;
    bool truncated = false;  // search hit the size cap
    std::vector<std::pair<int, EstimateRecord>> evidence;
};

struct ExponentFit {
    std::vector<std::pair<double, double>> points;  // as fitted (already transformed)
    double slope = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
};

// Deterministic parallel Monte Carlo: per-sample integer statistics merged by
// exact summation, so results are identical for every thread count.
void parallel_samples(std::int64_t samples, std::uint64_t stream_seed, int threads,
                      std::size_t counters,
                      const std::function<void(std::int64_t, std::uint64_t, std::int64_t*)>& body,
                      std::vector<std::int64_t>& totals);

// frequency of the Black horizontal crossing of [0,n] x [0,m]
EstimateRecord crossing_prob(double p, int n, int m, std::int64_t samples, std::uint64_t seed,
                             int threads = 0);

// one-sweep crossing curve: per threshold field, sites are inserted in
// increasing u order and the crossing indicator is read off at every grid p
std::vector<std::pair<double, EstimateRecord>> crossing_curve(int n, std::vector<double> p_grid,
                                                              std::int64_t fields,
                                                              std::uint64_t seed,
                                                              int threads = 0);

// finite-size scaling length L_eps(p) by doubling + bisection with a
// sequential Wilson decision rule (budget doubles up to 16x, then the point
// estimate decides and the result is flagged low-confidence)
LengthResult estimate_L(double p, double epsilon, std::int64_t samples_per_n, std::uint64_t seed,
                        int threads = 0, int n_cap = 8192);

// frequency of A_{j,sigma}(n,N) under P_p or a general product field
EstimateRecord estimate_pi(double p, const ColorSeq& sigma, int n, int N, std::int64_t samples,
                           std::uint64_t seed, int threads = 0);
EstimateRecord estimate_pi(const ParamField& field, const ColorSeq& sigma, int n, int N,
                           std::int64_t samples, std::uint64_t seed, int threads = 0);

// frequency of the half-plane event B_{j,sigma}(n,N) at parameter p
EstimateRecord estimate_halfplane_pi(double p, const ColorSeq& sigma, int n, int N,
                                     std::int64_t samples, std::uint64_t seed, int threads = 0);

// P_p(0 ~> boundary of S_R) for each R in radii; requires p > 1/2
std::vector<std::pair<int, EstimateRecord>> estimate_theta(double p, std::vector<int> radii,
                                                           std::int64_t samples,
                                                           std::uint64_t seed, int threads = 0);

struct ChiXiResult {
    EstimateRecord chi;
    EstimateRecord xi;
    double boundary_touch_fraction = 0.0;
};

// finite-cluster mean size and quadratic mean radius inside a window;
// boundary-touching clusters count as possibly infinite and are excluded
ChiXiResult estimate_chi_xi(double p, int window, std::int64_t samples, std::uint64_t seed,
                            int threads = 0);

// max point-to-point connection probability over 8 representative boundary
// directions, for each distance
std::vector<std::pair<int, EstimateRecord>> estimate_tau(double p, std::vector<int> distances,
                                                         std::int64_t samples, std::uint64_t seed,
                                                         int threads = 0);

// inverse decay rate from -log tau_n against n (semi-log least squares)
ExponentFit fit_xi_tilde(const std::vector<std::pair<int, EstimateRecord>>& records);

struct RussoCheckResult {
    EstimateRecord lhs;  // finite difference of crossing probabilities over delta
    EstimateRecord rhs;  // pivotal-site count at the midpoint parameter
    double ratio = 0.0;
};

RussoCheckResult russo_check(double p, double delta_p, const Region& par, std::int64_t samples,
                             std::uint64_t seed, int threads = 0);

struct ScalingRow {
    double p = 0.0;
    LengthResult length;
    EstimateRecord pi4;
    double product = 0.0;  // |p-1/2| * L^2 * pi4(L)
};

std::vector<ScalingRow> scaling_relation_check(const std::vector<double>& p_list, double epsilon,
                                               std::int64_t samples, std::uint64_t seed,
                                               int threads = 0);

// unweighted least squares of log(value) against log(scale)
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct DecayCheckResult {
    LengthResult length;
    std::vector<std::pair<int, EstimateRecord>> records;  // (n, crossing estimate)
    ExponentFit fit;                                      // log P against n/L
};

// exponential decay of square crossing probabilities measured in units of L
DecayCheckResult exponential_decay_check(double p, double epsilon,
                                         const std::vector<int>& multipliers,
                                         std::int64_t samples, std::uint64_t seed,
                                         int threads = 0);

}  // namespace perc
