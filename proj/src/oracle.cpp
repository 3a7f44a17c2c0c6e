#include "perc/oracle.hpp"

#include <algorithm>
#include <bit>

#include <json.hpp>

namespace perc {

namespace {

std::vector<std::vector<std::int64_t>> binomials(int n) {
    std::vector<std::vector<std::int64_t>> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1);
        for (int k = 1; k < i; ++k) c[i][k] = c[i - 1][k - 1] + c[i - 1][k];
    }
    return c;
}

// power-basis coefficients of sum_k counts[k] p^k (1-p)^(m-k)
std::vector<std::int64_t> to_power_basis(int m, const std::vector<std::int64_t>& counts) {
    auto C = binomials(m);
    std::vector<std::int64_t> out(m + 1, 0);
    for (int k = 0; k <= m; ++k) {
        if (counts[k] == 0) continue;
        for (int j = k; j <= m; ++j) {
            std::int64_t term = counts[k] * C[m - k][j - k];
            out[j] += ((j - k) % 2 == 0) ? term : -term;
        }
    }
    return out;
}

}  // namespace

EventPoly::EventPoly(int m, std::vector<std::int64_t> counts) : m_(m), counts_(std::move(counts)) {
    if (static_cast<int>(counts_.size()) != m_ + 1)
        throw std::invalid_argument("event polynomial: need m+1 counts");
}

double EventPoly::prob(double p) const {
    // evaluate sum_k N_k p^k (1-p)^(m-k) stably via running powers
    double total = 0.0;
    for (int k = 0; k <= m_; ++k) {
        if (counts_[k] == 0) continue;
        double term = static_cast<double>(counts_[k]);
        for (int i = 0; i < k; ++i) term *= p;
        for (int i = 0; i < m_ - k; ++i) term *= (1.0 - p);
        total += term;
    }
    return total;
}

std::vector<std::int64_t> EventPoly::power_coeffs() const { return to_power_basis(m_, counts_); }

std::string EventPoly::to_json() const {
    nlohmann::json j;
    j["m"] = m_;
    j["counts"] = counts_;
    return j.dump();
}

std::vector<Site> interior_sites(const Region& par) {
    if (par.kind() != RegionKind::Parallelogram && par.kind() != RegionKind::Box)
        throw std::invalid_argument("interior_sites: parallelogram or box required");
    std::vector<Site> out;
    for (int b = par.b1() + 1; b <= par.b2() - 1; ++b)
        for (int a = par.a1() + 1; a <= par.a2() - 1; ++a) out.push_back({a, b});
    return out;
}

namespace {

struct EnumTable {
    int m = 0;
    std::vector<int> free_idx;            // config index per free site
    std::vector<std::uint64_t> sat;       // event bit per mask
    bool bit(std::uint64_t mask) const { return (sat[mask >> 6] >> (mask & 63)) & 1u; }
};

EnumTable enumerate_event(const Config& base, const std::vector<Site>& free_sites,
                          const EventPred& event) {
    EnumTable t;
    t.m = static_cast<int>(free_sites.size());
    if (t.m > kEnumCap)
        throw CapExceeded("enumeration cap exceeded: " + std::to_string(t.m) + " free sites, cap " +
                          std::to_string(kEnumCap));
    for (Site v : free_sites) {
        int idx = base.indexer().index(v);
        if (idx < 0) throw std::invalid_argument("enumeration: free site outside region");
        t.free_idx.push_back(idx);
    }
    const std::uint64_t total = 1ull << t.m;
    t.sat.assign((total + 63) / 64, 0);

    std::vector<std::uint8_t> colors(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        colors[i] = static_cast<std::uint8_t>(base.at_index(static_cast<int>(i)));
    auto indexer = base.indexer_ptr();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < t.m; ++i) colors[t.free_idx[i]] = (mask >> i) & 1u;
        Config cfg(indexer, colors, Provenance{0, "enum"});
        if (event(cfg)) t.sat[mask >> 6] |= 1ull << (mask & 63);
    }
    return t;
}

}  // namespace

EventPoly exact_polynomial(const Config& base, const std::vector<Site>& free_sites,
                           const EventPred& event) {
    EnumTable t = enumerate_event(base, free_sites, event);
    std::vector<std::int64_t> counts(t.m + 1, 0);
    const std::uint64_t total = 1ull << t.m;
    for (std::uint64_t mask = 0; mask < total; ++mask)
        if (t.bit(mask)) ++counts[std::popcount(mask)];
    return EventPoly(t.m, std::move(counts));
}

EventPoly exact_polynomial(const Region& region, const EventPred& event) {
    auto indexer = std::make_shared<SiteIndexer>(region);
    Config base(indexer, std::vector<std::uint8_t>(indexer->size(), 0), Provenance{});
    return exact_polynomial(base, region.sites(), event);
}

RussoResult exact_russo(const Config& base, const std::vector<Site>& free_sites,
                        const EventPred& event) {
    EnumTable t = enumerate_event(base, free_sites, event);
    const std::uint64_t total = 1ull << t.m;

    // the identity as stated requires monotonicity; verify it exhaustively
    for (std::uint64_t mask = 0; mask < total; ++mask)
        for (int v = 0; v < t.m; ++v)
            if (!((mask >> v) & 1u) && t.bit(mask) && !t.bit(mask | (1ull << v)))
                throw std::domain_error("exact_russo: event is not increasing");

    std::vector<std::int64_t> counts(t.m + 1, 0);
    for (std::uint64_t mask = 0; mask < total; ++mask)
        if (t.bit(mask)) ++counts[std::popcount(mask)];

    // derivative of the event polynomial in the power basis
    auto c = to_power_basis(t.m, counts);
    RussoResult out;
    out.derivative.assign(t.m, 0);
    for (int j = 0; j + 1 <= t.m; ++j) out.derivative[j] = (j + 1) * c[j + 1];

    // pivotal-count polynomial summed over sites: for each site v, count
    // configurations of the others (v frozen White) where flipping v toggles
    std::vector<std::int64_t> pivotal_counts(t.m, 0);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int v = 0; v < t.m; ++v) {
            if ((mask >> v) & 1u) continue;
            if (t.bit(mask | (1ull << v)) && !t.bit(mask))
                ++pivotal_counts[std::popcount(mask)];
        }
    }
    out.pivotal_sum = to_power_basis(t.m - 1, pivotal_counts);
    out.equal = (out.derivative == out.pivotal_sum);
    return out;
}

ColorSwitchResult exact_color_switch_halfplane(int n, int N, const ColorSeq& sigma,
                                               const ColorSeq& sigma_prime) {
    if (sigma.size() != sigma_prime.size())
        throw std::invalid_argument("color switch: sequences must have equal length");
    ArmDomain dom = ArmDomain::halfplane(n, N);
    const int m = static_cast<int>(dom.core().size());
    if (m > kEnumCap)
        throw CapExceeded("color switch cap exceeded: " + std::to_string(m) + " core sites, cap " +
                          std::to_string(kEnumCap));

    ColorSwitchResult out;
    out.m = m;
    const std::uint64_t total = 1ull << m;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        auto colors = [&](int i) {
            return ((mask >> i) & 1u) ? Color::Black : Color::White;
        };
        if (dom.detect(colors, sigma, nullptr, nullptr, 0, nullptr)) ++out.count_sigma;
        if (dom.detect(colors, sigma_prime, nullptr, nullptr, 0, nullptr))
            ++out.count_sigma_prime;
    }
    out.prob_sigma = static_cast<double>(out.count_sigma) / static_cast<double>(total);
    out.prob_sigma_prime = static_cast<double>(out.count_sigma_prime) / static_cast<double>(total);
    out.equal = (out.count_sigma == out.count_sigma_prime);
    return out;
}

// ------------------------------------------------------- backtracking oracle

namespace {

struct BruteDomain {
    std::vector<Site> core;
    std::vector<std::vector<int>> adj;
    std::vector<std::uint8_t> inner, outer;
    std::vector<int> end_pos;  // position of outer-layer sites along the order walk
    int walk_len = 0;
    bool cyclic = true;

    int find(Site v) const {
        for (std::size_t i = 0; i < core.size(); ++i)
            if (core[i] == v) return static_cast<int>(i);
        return -1;
    }
};

BruteDomain brute_domain(const Region& annulus, bool halfplane) {
    const Site z = halfplane ? Site{0, 0} : annulus.center();
    const int n = annulus.inner_radius(), N = annulus.outer_radius();
    BruteDomain d;
    d.cyclic = !halfplane;
    for (int b = z.b - N + 1; b <= z.b + N - 1; ++b)
        for (int a = z.a - N + 1; a <= z.a + N - 1; ++a) {
            Site v{a, b};
            if (halfplane && v.b < 0) continue;
            int r = norm_inf(v - z);
            if (r > n && r < N) d.core.push_back(v);
        }
    if (d.core.size() > 64) throw CapExceeded("brute_force_arms: annulus too large (cap 64 core sites)");
    const int m = static_cast<int>(d.core.size());
    d.adj.assign(m, {});
    d.inner.assign(m, 0);
    d.outer.assign(m, 0);
    for (int i = 0; i < m; ++i)
        for (Site off : kNeighborOffsets) {
            Site w = d.core[i] + off;
            if (halfplane && w.b < 0) continue;
            int r = norm_inf(w - z);
            if (r <= n) d.inner[i] = 1;
            if (r >= N) d.outer[i] = 1;
            int k = d.find(w);
            if (k >= 0) d.adj[i].push_back(k);
        }
    auto walk = halfplane ? halfplane_ring_walk(N - 1) : ring_walk(z, N - 1);
    d.walk_len = static_cast<int>(walk.size());
    d.end_pos.assign(m, -1);
    for (int p = 0; p < d.walk_len; ++p) {
        int i = d.find(walk[p]);
        if (i >= 0) d.end_pos[i] = p;
    }
    return d;
}

struct BruteSearch {
    const BruteDomain& d;
    const Config& cfg;
    std::vector<Color> sigma;
    int defects;
    std::vector<std::uint8_t> used;
    std::vector<int> ends;  // outer endpoint core id per placed arm

    BruteSearch(const BruteDomain& dom, const Config& c, std::vector<Color> s, int def)
        : d(dom), cfg(c), sigma(std::move(s)), defects(def), used(dom.core.size(), 0) {}

    Color color(int i) const { return cfg.at(d.core[i]); }

    bool order_matches() const {
        const int j = static_cast<int>(sigma.size());
        std::vector<std::pair<int, int>> byp(j);
        for (int i = 0; i < j; ++i) byp[i] = {d.end_pos[ends[i]], i};
        std::sort(byp.begin(), byp.end());
        std::vector<Color> word(j);
        for (int i = 0; i < j; ++i) word[i] = sigma[byp[i].second];
        if (!d.cyclic) return word == sigma;
        return ColorSeq(word) == ColorSeq(sigma);  // cyclic identification
    }

    bool arms_done() { return order_matches(); }

    bool grow(int slot, int site, int spent) {
        if (d.outer[site]) {
            ends.push_back(site);
            bool ok = (slot + 1 == static_cast<int>(sigma.size())) ? arms_done()
                                                                   : place(slot + 1);
            ends.pop_back();
            if (ok) return true;
        }
        for (int w : d.adj[site]) {
            if (used[w]) continue;
            int cost = spent + (color(w) == sigma[slot] ? 0 : 1);
            if (cost > defects) continue;
            used[w] = 1;
            if (grow(slot, w, cost)) {
                used[w] = 0;
                return true;
            }
            used[w] = 0;
        }
        return false;
    }

    bool place(int slot) {
        for (std::size_t s = 0; s < d.core.size(); ++s) {
            if (used[s] || !d.inner[s]) continue;
            int cost = color(static_cast<int>(s)) == sigma[slot] ? 0 : 1;
            if (cost > defects) continue;
            used[s] = 1;
            if (grow(slot, static_cast<int>(s), cost)) {
                used[s] = 0;
                return true;
            }
            used[s] = 0;
        }
        return false;
    }
};

int brute_degenerate_cap(const Region& annulus, bool halfplane) {
    const int n = annulus.inner_radius(), N = annulus.outer_radius();
    if (n == N) return N == 0 ? 1 : (halfplane ? 4 * N + 1 : 8 * N);
    int cnt = 0;
    auto walk = halfplane ? halfplane_ring_walk(n + 1) : ring_walk(annulus.center(), n + 1);
    const Site z = halfplane ? Site{0, 0} : annulus.center();
    for (Site v : walk)
        for (Site off : kNeighborOffsets) {
            Site w = v + off;
            if (halfplane && w.b < 0) continue;
            if (norm_inf(w - z) <= n) {
                ++cnt;
                break;
            }
        }
    return cnt;
}

bool brute_force_impl(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                      int defects, bool halfplane) {
    const int j = sigma.size();
    if (j > 5) throw CapExceeded("brute_force_arms: j <= 5 required");
    if (annulus.outer_radius() - annulus.inner_radius() <= 1)
        return j <= brute_degenerate_cap(annulus, halfplane);
    BruteDomain dom = brute_domain(annulus, halfplane);
    BruteSearch search(dom, cfg, sigma.word(), defects);
    return search.place(0);
}

}  // namespace

bool brute_force_arms(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                      int defects) {
    if (annulus.kind() != RegionKind::Annulus)
        throw std::invalid_argument("brute_force_arms: annulus required");
    return brute_force_impl(cfg, annulus, sigma, defects, false);
}

bool brute_force_halfplane_arms(const Config& cfg, const Region& half_annulus,
                                const ColorSeq& sigma, int defects) {
    if (half_annulus.kind() != RegionKind::HalfPlaneAnnulus)
        throw std::invalid_argument("brute_force_halfplane_arms: half-plane annulus required");
    return brute_force_impl(cfg, half_annulus, sigma, defects, true);
}

}  // namespace perc
