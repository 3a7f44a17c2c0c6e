#include "perc/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "perc/rng.hpp"

namespace perc {

namespace {

constexpr std::uint64_t kSampleStream = 1;

int effective_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

EstimateRecord freq_record(std::string query, std::int64_t hits, std::int64_t n,
                           std::uint64_t seed) {
    auto ci = wilson(hits, n);
    EstimateRecord r;
    r.query = std::move(query);
    r.value = static_cast<double>(hits) / static_cast<double>(n);
    r.ci_low = ci.lo;
    r.ci_high = ci.hi;
    r.samples = n;
    r.seed = seed;
    return r;
}

}  // namespace

void parallel_samples(std::int64_t samples, std::uint64_t stream_seed, int threads,
                      std::size_t counters,
                      const std::function<void(std::int64_t, std::uint64_t, std::int64_t*)>& body,
                      std::vector<std::int64_t>& totals) {
    if (samples < 1) throw std::invalid_argument("parallel_samples: samples >= 1 required");
    const int nt = static_cast<int>(
        std::max<std::int64_t>(1, std::min<std::int64_t>(effective_threads(threads), samples)));
    std::vector<std::vector<std::int64_t>> partial(nt, std::vector<std::int64_t>(counters, 0));
    std::vector<std::thread> pool;
    const std::int64_t chunk = (samples + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(samples, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] {
            auto* acc = partial[t].data();
            for (std::int64_t i = lo; i < hi; ++i)
                body(i, derive_seed(stream_seed, kSampleStream, static_cast<std::uint64_t>(i)),
                     acc);
        });
    }
    for (auto& th : pool) th.join();
    totals.assign(counters, 0);
    for (const auto& acc : partial)
        for (std::size_t c = 0; c < counters; ++c) totals[c] += acc[c];
}

// ------------------------------------------------------------ crossing_prob

EstimateRecord crossing_prob(double p, int n, int m, std::int64_t samples, std::uint64_t seed,
                             int threads) {
    Region par = Region::parallelogram(0, n, 0, m);
    auto indexer = std::make_shared<SiteIndexer>(par);
    ParamField field = ParamField::homogeneous(p);
    std::vector<std::int64_t> totals;
    parallel_samples(
        samples, seed, threads, 1,
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            Config cfg = sample(indexer, field, s);
            acc[0] += has_crossing(cfg, par, Dir::Horizontal, Color::Black);
        },
        totals);
    std::ostringstream q;
    q << "crossing p=" << p << " " << n << "x" << m;
    return freq_record(q.str(), totals[0], samples, seed);
}

// ----------------------------------------------------------- crossing_curve

std::vector<std::pair<double, EstimateRecord>> crossing_curve(int n, std::vector<double> p_grid,
                                                              std::int64_t fields,
                                                              std::uint64_t seed, int threads) {
    if (!std::is_sorted(p_grid.begin(), p_grid.end()))
        throw std::invalid_argument("crossing_curve: p grid must be sorted");
    Region par = Region::parallelogram(0, n, 0, n);
    auto indexer = std::make_shared<SiteIndexer>(par);

    // interior sites in canonical order; the boundary never matters
    std::vector<std::int32_t> interior;
    for (std::size_t i = 0; i < indexer->size(); ++i) {
        Site v = indexer->site(static_cast<int>(i));
        if (v.a > 0 && v.a < n && v.b > 0 && v.b < n) interior.push_back(static_cast<std::int32_t>(i));
    }

    const std::size_t g = p_grid.size();
    std::vector<std::int64_t> totals;
    parallel_samples(
        fields, seed, threads, g,
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            // u-values of the interior in canonical order, then insert as
            // Black in increasing u order until the crossing closes
            std::vector<std::pair<double, std::int32_t>> order(interior.size());
            for (std::size_t k = 0; k < interior.size(); ++k)
                order[k] = {rng_uniform53(s, 0, interior[k]), interior[k]};
            std::sort(order.begin(), order.end());

            DisjointSet dsu(indexer->size() + 2);
            const int kFrom = static_cast<int>(indexer->size()), kTo = kFrom + 1;
            std::vector<std::uint8_t> black(indexer->size(), 0);
            std::int64_t closed_at = -1;
            if (n <= 1) closed_at = 0;  // degenerate: always crossing
            for (std::size_t step = 0; step < order.size() && closed_at < 0; ++step) {
                int idx = order[step].second;
                Site v = indexer->site(idx);
                black[idx] = 1;
                for (Site d : kNeighborOffsets) {
                    Site w = v + d;
                    if (w.a < 0 || w.a > n || w.b < 0 || w.b > n) continue;
                    if (w.a == 0)
                        dsu.unite(kFrom, idx);
                    else if (w.a == n)
                        dsu.unite(kTo, idx);
                    else if (w.b > 0 && w.b < n) {
                        int jdx = indexer->index(w);
                        if (jdx >= 0 && black[jdx]) dsu.unite(idx, jdx);
                    }
                }
                if (dsu.connected(kFrom, kTo)) closed_at = static_cast<std::int64_t>(step) + 1;
            }
            // k(p) = number of u-values <= p, read off the sorted list
            for (std::size_t gi = 0; gi < g; ++gi) {
                if (closed_at < 0) continue;
                auto it = std::upper_bound(
                    order.begin(), order.end(), p_grid[gi],
                    [](double p, const auto& e) { return p < e.first; });
                std::int64_t inserted = it - order.begin();
                acc[gi] += inserted >= closed_at;
            }
        },
        totals);

    std::vector<std::pair<double, EstimateRecord>> out;
    for (std::size_t gi = 0; gi < g; ++gi) {
        std::ostringstream q;
        q << "curve p=" << p_grid[gi] << " " << n << "x" << n;
        out.push_back({p_grid[gi], freq_record(q.str(), totals[gi], fields, seed)});
    }
    return out;
}

// --------------------------------------------------------------- estimate_L

namespace {

struct Decision {
    bool below = false;  // estimate decided <= epsilon
    bool low_confidence = false;
    EstimateRecord record;
};

// sequential decision of "P(crossing of [0,n]^2) <= eps" with doubling budget
Decision decide_at(double p, int n, double eps, std::int64_t base_samples, std::uint64_t seed_n,
                   int threads) {
    std::int64_t budget = base_samples;
    std::int64_t done = 0, hits = 0;
    Region par = Region::parallelogram(0, n, 0, n);
    auto indexer = std::make_shared<SiteIndexer>(par);
    ParamField field = ParamField::homogeneous(p);
    const std::int64_t cap = base_samples * 16;
    for (;;) {
        std::int64_t batch = budget - done;
        std::vector<std::int64_t> totals;
        parallel_samples(
            batch, derive_seed(seed_n, 7, static_cast<std::uint64_t>(done)), threads, 1,
            [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
                Config cfg = sample(indexer, field, s);
                acc[0] += has_crossing(cfg, par, Dir::Horizontal, Color::Black);
            },
            totals);
        hits += totals[0];
        done = budget;
        auto ci = wilson(hits, done);
        Decision d;
        d.record = freq_record("L-probe n=" + std::to_string(n), hits, done, seed_n);
        if (ci.hi < eps) {
            d.below = true;
            return d;
        }
        if (ci.lo > eps) {
            d.below = false;
            return d;
        }
        if (budget >= cap) {
            d.below = d.record.value <= eps;
            d.low_confidence = true;
            return d;
        }
        budget *= 2;
    }
}

}  // namespace

LengthResult estimate_L(double p, double epsilon, std::int64_t samples_per_n, std::uint64_t seed,
                        int threads, int n_cap) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("estimate_L: epsilon must lie in (0, 1/2)");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("estimate_L: p outside [0,1]");
    LengthResult res;
    res.p = p;
    res.epsilon = epsilon;
    if (p == 0.5) return res;  // infinite by convention

    // by color symmetry the easy-crossing probability at p equals the Black
    // crossing probability at min(p, 1-p)
    const double q = std::min(p, 1.0 - p);

    auto probe = [&](int n) {
        Decision d = decide_at(q, n, epsilon, samples_per_n,
                               derive_seed(seed, 3, static_cast<std::uint64_t>(n)), threads);
        res.low_confidence |= d.low_confidence;
        res.evidence.push_back({n, d.record});
        return d.below;
    };

    int hi = 1;
    while (!probe(hi)) {
        if (hi >= n_cap) {
            res.truncated = true;
            res.low_confidence = true;
            return res;
        }
        hi *= 2;
    }
    int lo = hi / 2;  // crossing stays above eps at lo (or lo == 0)
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        if (probe(mid))
            hi = mid;
        else
            lo = mid;
    }
    res.length = hi;
    return res;
}

// -------------------------------------------------------------- arm events

namespace {

struct ArmSetup {
    Region region;
    ArmDomain domain;
    std::vector<std::int32_t> canon;  // core id -> canonical region index
    std::vector<double> probs;        // per core site

    ArmSetup(Region reg, ArmDomain dom, const ParamField& field)
        : region(reg), domain(std::move(dom)) {
        SiteIndexer ix(region);
        canon.resize(domain.core().size());
        probs.resize(domain.core().size());
        for (std::size_t i = 0; i < domain.core().size(); ++i) {
            canon[i] = ix.index(domain.core()[i]);
            probs[i] = field.prob_at(domain.core()[i]);
        }
    }
};

EstimateRecord run_arm_estimate(const ArmSetup& setup, const ColorSeq& sigma,
                                std::int64_t samples, std::uint64_t seed, int threads,
                                std::string query) {
    std::vector<std::int64_t> totals;
    parallel_samples(
        samples, seed, threads, 1,
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            auto colors = [&](int i) {
                return rng_uniform53(s, 0, setup.canon[i]) <= setup.probs[i] ? Color::Black
                                                                             : Color::White;
            };
            acc[0] += setup.domain.detect(colors, sigma, nullptr, nullptr, 0, nullptr);
        },
        totals);
    return freq_record(std::move(query), totals[0], samples, seed);
}

}  // namespace

EstimateRecord estimate_pi(const ParamField& field, const ColorSeq& sigma, int n, int N,
                           std::int64_t samples, std::uint64_t seed, int threads) {
    if (n < n0(sigma.size()))
        throw std::domain_error("estimate_pi: combinatorial obstruction, n < n0(j)");
    if (n > N) throw std::invalid_argument("estimate_pi: n <= N required");
    ArmSetup setup(Region::annulus({0, 0}, n, N), ArmDomain::concentric({0, 0}, n, N), field);
    std::ostringstream q;
    q << "pi sigma=" << sigma.str() << " n=" << n << " N=" << N << " " << field.summary();
    return run_arm_estimate(setup, sigma, samples, seed, threads, q.str());
}

EstimateRecord estimate_pi(double p, const ColorSeq& sigma, int n, int N, std::int64_t samples,
                           std::uint64_t seed, int threads) {
    return estimate_pi(ParamField::homogeneous(p), sigma, n, N, samples, seed, threads);
}

EstimateRecord estimate_halfplane_pi(double p, const ColorSeq& sigma, int n, int N,
                                     std::int64_t samples, std::uint64_t seed, int threads) {
    if (n > N) throw std::invalid_argument("estimate_halfplane_pi: n <= N required");
    ArmSetup setup(Region::halfplane_annulus(n, N), ArmDomain::halfplane(n, N),
                   ParamField::homogeneous(p));
    std::ostringstream q;
    q << "beta sigma=" << sigma.str() << " n=" << n << " N=" << N << " p=" << p;
    return run_arm_estimate(setup, sigma, samples, seed, threads, q.str());
}

// ------------------------------------------------------- cluster estimators

namespace {

// lazy BFS of the Black cluster of the origin inside the window S_R
struct ClusterProbe {
    std::int64_t size = 0;
    int radius = -1;  // -1: origin White
    std::int64_t sum_norm2 = 0;
};

ClusterProbe probe_cluster(std::uint64_t seed, double p, int R,
                           const std::vector<std::int32_t>* target_slots = nullptr,
                           std::uint64_t* target_mask = nullptr) {
    const int side = 2 * R + 1;
    auto canon = [&](int a, int b) { return (b + R) * side + (a + R); };
    auto black = [&](int a, int b) { return rng_uniform53(seed, 0, canon(a, b)) <= p; };

    ClusterProbe out;
    if (!black(0, 0)) return out;
    std::vector<std::uint8_t> state(static_cast<std::size_t>(side) * side, 0);  // 1 = queued
    std::vector<std::pair<int, int>> stack = {{0, 0}};
    state[canon(0, 0)] = 1;
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        ++out.size;
        int r = std::max(std::abs(a), std::abs(b));
        out.radius = std::max(out.radius, r);
        out.sum_norm2 += static_cast<std::int64_t>(r) * r;
        if (target_slots && target_mask) {
            std::int32_t slot = (*target_slots)[canon(a, b)];
            if (slot >= 0) *target_mask |= 1ull << slot;
        }
        for (Site d : kNeighborOffsets) {
            int na = a + d.a, nb = b + d.b;
            if (std::max(std::abs(na), std::abs(nb)) > R) continue;
            auto& st = state[canon(na, nb)];
            if (!st) {
                st = 1;
                if (black(na, nb)) stack.push_back({na, nb});
                // a probed White site stays marked so it is not re-sampled
            }
        }
    }
    return out;
}

}  // namespace

std::vector<std::pair<int, EstimateRecord>> estimate_theta(double p, std::vector<int> radii,
                                                           std::int64_t samples,
                                                           std::uint64_t seed, int threads) {
    if (!(p > 0.5)) throw std::domain_error("estimate_theta: requires p > 1/2");
    if (radii.empty()) throw std::invalid_argument("estimate_theta: no radii");
    std::sort(radii.begin(), radii.end());
    const int R = radii.back();
    std::vector<std::int64_t> totals;
    parallel_samples(
        samples, seed, threads, radii.size(),
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            ClusterProbe pr = probe_cluster(s, p, R);
            for (std::size_t i = 0; i < radii.size(); ++i) acc[i] += pr.radius >= radii[i];
        },
        totals);
    std::vector<std::pair<int, EstimateRecord>> out;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::ostringstream q;
        q << "theta p=" << p << " R=" << radii[i];
        out.push_back({radii[i], freq_record(q.str(), totals[i], samples, seed)});
    }
    return out;
}

ChiXiResult estimate_chi_xi(double p, int window, std::int64_t samples, std::uint64_t seed,
                            int threads) {
    if (window < 1) throw std::invalid_argument("estimate_chi_xi: window >= 1 required");
    // counters: finite size sum, finite size sumsq, finite norm2 sum,
    // finite norm2 sumsq (rescaled by 2^16 against overflow), touching count
    std::vector<std::int64_t> totals;
    parallel_samples(
        samples, seed, threads, 5,
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            ClusterProbe pr = probe_cluster(s, p, window);
            if (pr.radius >= window) {
                acc[4] += 1;  // possibly infinite
                return;
            }
            acc[0] += pr.size;
            acc[1] += pr.size * pr.size;
            acc[2] += pr.sum_norm2;
            unsigned __int128 sq =
                static_cast<unsigned __int128>(pr.sum_norm2) * static_cast<unsigned __int128>(pr.sum_norm2);
            acc[3] += static_cast<std::int64_t>(sq >> 16);
        },
        totals);

    ChiXiResult out;
    out.boundary_touch_fraction = static_cast<double>(totals[4]) / samples;

    auto chi_ci = normal_mean(static_cast<double>(totals[0]), static_cast<double>(totals[1]),
                              samples);
    std::ostringstream qc;
    qc << "chi p=" << p << " window=" << window;
    out.chi = {qc.str(), static_cast<double>(totals[0]) / samples, chi_ci.lo, chi_ci.hi, samples,
               seed};

    auto num_ci = normal_mean(static_cast<double>(totals[2]),
                              static_cast<double>(totals[3]) * 65536.0, samples);
    const double num = static_cast<double>(totals[2]) / samples;
    const double den = out.chi.value;
    std::ostringstream qx;
    qx << "xi p=" << p << " window=" << window;
    out.xi.query = qx.str();
    out.xi.samples = samples;
    out.xi.seed = seed;
    if (den > 0 && num > 0) {
        out.xi.value = std::sqrt(num / den);
        // conservative interval from the component intervals
        double lo = (out.chi.ci_high > 0) ? std::max(0.0, num_ci.lo) / out.chi.ci_high : 0.0;
        double hi = (out.chi.ci_low > 0) ? std::max(0.0, num_ci.hi) / out.chi.ci_low
                                         : out.xi.value * out.xi.value * 4;
        out.xi.ci_low = std::sqrt(std::max(0.0, lo));
        out.xi.ci_high = std::sqrt(hi);
    }
    return out;
}

std::vector<std::pair<int, EstimateRecord>> estimate_tau(double p, std::vector<int> distances,
                                                         std::int64_t samples, std::uint64_t seed,
                                                         int threads) {
    if (distances.empty()) throw std::invalid_argument("estimate_tau: no distances");
    std::sort(distances.begin(), distances.end());
    const bool star = p > 0.5;  // white connections via the color swap
    const double q = star ? 1.0 - p : p;
    const int maxd = distances.back();
    const int R = maxd + maxd / 2 + 8;  // window margin for wandering paths
    const int side = 2 * R + 1;

    // 8 representative targets per distance: 4 corners + 4 side midpoints
    std::vector<std::int32_t> slots(static_cast<std::size_t>(side) * side, -1);
    const int per = 8;
    for (std::size_t di = 0; di < distances.size(); ++di) {
        int d = distances[di];
        const Site targets[per] = {{d, 0}, {0, d}, {-d, 0}, {0, -d},
                                   {d, d}, {-d, d}, {-d, -d}, {d, -d}};
        for (int t = 0; t < per; ++t)
            slots[(targets[t].b + R) * side + (targets[t].a + R)] =
                static_cast<std::int32_t>(di * per + t);
    }
    if (distances.size() * per > 63)
        throw std::invalid_argument("estimate_tau: too many distances (cap 7)");

    std::vector<std::int64_t> totals;
    parallel_samples(
        samples, seed, threads, distances.size() * per,
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            std::uint64_t mask = 0;
            probe_cluster(s, q, R, &slots, &mask);
            while (mask) {
                int bit = std::countr_zero(mask);
                mask &= mask - 1;
                acc[bit] += 1;
            }
        },
        totals);

    std::vector<std::pair<int, EstimateRecord>> out;
    for (std::size_t di = 0; di < distances.size(); ++di) {
        std::int64_t best = 0;
        for (int t = 0; t < per; ++t) best = std::max(best, totals[di * per + t]);
        std::ostringstream q2;
        q2 << "tau p=" << p << " n=" << distances[di] << (star ? " (white)" : "");
        out.push_back({distances[di], freq_record(q2.str(), best, samples, seed)});
    }
    return out;
}

ExponentFit fit_xi_tilde(const std::vector<std::pair<int, EstimateRecord>>& records) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, rec] : records)
        if (rec.value > 0) pts.push_back({static_cast<double>(n), -std::log(rec.value)});
    if (pts.size() < 2) throw std::invalid_argument("fit_xi_tilde: need two positive estimates");
    auto fit = least_squares(pts);
    ExponentFit out;
    out.points = pts;
    out.slope = fit.slope;  // 1/xi_tilde
    out.stderr_slope = fit.stderr_slope;
    out.r2 = fit.r2;
    return out;
}

// -------------------------------------------------------------- russo_check

RussoCheckResult russo_check(double p, double delta_p, const Region& par, std::int64_t samples,
                             std::uint64_t seed, int threads) {
    if (!(p > 0 && p + delta_p < 1) || delta_p <= 0)
        throw std::invalid_argument("russo_check: need 0 < p < p+delta < 1");
    auto indexer = std::make_shared<SiteIndexer>(par);

    // lhs: coupled realizations at p and p+delta from one threshold field
    std::vector<std::int64_t> totals;
    parallel_samples(
        samples, seed, threads, 3,
        [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
            ThresholdField tf(indexer, s);
            bool low = has_crossing(tf.realize(p), par, Dir::Horizontal, Color::Black);
            bool high = has_crossing(tf.realize(p + delta_p), par, Dir::Horizontal, Color::Black);
            acc[0] += (high && !low);  // monotone coupling: never low && !high
            Config mid = sample(indexer, ParamField::homogeneous(p + delta_p / 2),
                                derive_seed(s, 11, 0));
            auto piv = pivotal_sites(mid, par, Dir::Horizontal, Color::Black);
            acc[1] += static_cast<std::int64_t>(piv.size());
            acc[2] += static_cast<std::int64_t>(piv.size()) * static_cast<std::int64_t>(piv.size());
        },
        totals);

    RussoCheckResult out;
    auto diff_ci = wilson(totals[0], samples);
    out.lhs.query = "russo lhs (finite difference)";
    out.lhs.value = static_cast<double>(totals[0]) / samples / delta_p;
    out.lhs.ci_low = diff_ci.lo / delta_p;
    out.lhs.ci_high = diff_ci.hi / delta_p;
    out.lhs.samples = samples;
    out.lhs.seed = seed;

    auto piv_ci = normal_mean(static_cast<double>(totals[1]), static_cast<double>(totals[2]),
                              samples);
    out.rhs.query = "russo rhs (pivotal count at midpoint)";
    out.rhs.value = static_cast<double>(totals[1]) / samples;
    out.rhs.ci_low = piv_ci.lo;
    out.rhs.ci_high = piv_ci.hi;
    out.rhs.samples = samples;
    out.rhs.seed = seed;

    out.ratio = out.rhs.value > 0 ? out.lhs.value / out.rhs.value : 0.0;
    return out;
}

// ---------------------------------------------------------- scaling / decay

std::vector<ScalingRow> scaling_relation_check(const std::vector<double>& p_list, double epsilon,
                                               std::int64_t samples, std::uint64_t seed,
                                               int threads) {
    std::vector<ScalingRow> rows;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        ScalingRow row;
        row.p = p_list[i];
        row.length = estimate_L(p_list[i], epsilon, samples, derive_seed(seed, 21, i), threads);
        if (!row.length.length) {
            rows.push_back(std::move(row));
            continue;
        }
        const int L = *row.length.length;
        row.pi4 = estimate_pi(0.5, ColorSeq::parse("BWBW"), 0, L, samples,
                              derive_seed(seed, 22, i), threads);
        row.product = std::abs(p_list[i] - 0.5) * static_cast<double>(L) * L * row.pi4.value;
        rows.push_back(std::move(row));
    }
    return rows;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 points");
    std::vector<std::pair<double, double>> logs;
    for (auto [x, y] : points) {
        if (!(x > 0) || !(y > 0))
            throw std::invalid_argument("fit_exponent: scales and values must be positive");
        logs.push_back({std::log(x), std::log(y)});
    }
    auto fit = least_squares(logs);
    ExponentFit out;
    out.points = logs;
    out.slope = fit.slope;
    out.stderr_slope = fit.stderr_slope;
    out.r2 = fit.r2;
    return out;
}

DecayCheckResult exponential_decay_check(double p, double epsilon,
                                         const std::vector<int>& multipliers,
                                         std::int64_t samples, std::uint64_t seed, int threads) {
    if (!(p < 0.5)) throw std::domain_error("exponential_decay_check: requires p < 1/2");
    DecayCheckResult out;
    out.length = estimate_L(p, epsilon, samples, derive_seed(seed, 31, 0), threads);
    if (!out.length.length) return out;
    const int L = *out.length.length;

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        const int n = multipliers[i] * L;
        Region par = Region::parallelogram(0, n, 0, n);
        auto indexer = std::make_shared<SiteIndexer>(par);
        ParamField field = ParamField::homogeneous(p);
        // grow the budget until the estimate has some support
        std::int64_t done = 0, hits = 0, batch = samples;
        std::uint64_t sd = derive_seed(seed, 32, i);
        while (true) {
            std::vector<std::int64_t> totals;
            parallel_samples(
                batch, derive_seed(sd, 33, static_cast<std::uint64_t>(done)), threads, 1,
                [&](std::int64_t, std::uint64_t s, std::int64_t* acc) {
                    Config cfg = sample(indexer, field, s);
                    acc[0] += has_crossing(cfg, par, Dir::Horizontal, Color::Black);
                },
                totals);
            hits += totals[0];
            done += batch;
            if (hits >= 30 || done >= samples * 8) break;
            batch = done;
        }
        auto rec = freq_record("decay n=" + std::to_string(n), hits, done, sd);
        out.records.push_back({n, rec});
        if (rec.value > 0)
            pts.push_back({static_cast<double>(multipliers[i]), std::log(rec.value)});
    }
    if (pts.size() >= 2) {
        auto fit = least_squares(pts);
        out.fit.points = pts;
        out.fit.slope = fit.slope;
        out.fit.stderr_slope = fit.stderr_slope;
        out.fit.r2 = fit.r2;
    }
    return out;
}

}  // namespace perc
