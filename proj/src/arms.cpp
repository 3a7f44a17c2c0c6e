#include "perc/arms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace perc {

// ---------------------------------------------------------------- ColorSeq

ColorSeq::ColorSeq(std::vector<Color> word) : word_(std::move(word)) {
    if (word_.empty()) throw std::invalid_argument("color sequence: empty word");
}

ColorSeq ColorSeq::parse(std::string_view s) {
    std::vector<Color> w;
    for (char ch : s) {
        if (ch == 'B' || ch == 'b')
            w.push_back(Color::Black);
        else if (ch == 'W' || ch == 'w')
            w.push_back(Color::White);
        else
            throw std::invalid_argument("color sequence: characters must be B or W");
    }
    return ColorSeq(std::move(w));
}

ColorSeq ColorSeq::rotated(int r) const {
    int j = size();
    std::vector<Color> w(j);
    for (int i = 0; i < j; ++i) w[i] = word_[(i + r) % j];
    return ColorSeq(std::move(w));
}

ColorSeq ColorSeq::canonical() const {
    ColorSeq best = *this;
    for (int r = 1; r < size(); ++r) {
        ColorSeq cand = rotated(r);
        if (cand.str() < best.str()) best = cand;
    }
    return best;
}

ColorSeq ColorSeq::inverted() const {
    std::vector<Color> w(word_);
    for (auto& c : w) c = opposite(c);
    return ColorSeq(std::move(w));
}

bool ColorSeq::is_constant() const {
    for (Color c : word_)
        if (c != word_[0]) return false;
    return true;
}

std::string ColorSeq::str() const {
    std::string s;
    for (Color c : word_) s += color_char(c);
    return s;
}

// -------------------------------------------------------------- LandingSeq

LandingSeq LandingSeq::make(std::vector<Arc> arcs, int walk_len) {
    if (walk_len <= 0) throw std::invalid_argument("landing: empty boundary walk");
    std::vector<int> owner(walk_len, -1);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const auto& a = arcs[i];
        if (a.length < 1 || a.length > walk_len || a.start < 0 || a.start >= walk_len)
            throw std::invalid_argument("landing: arc out of range");
        for (int k = 0; k < a.length; ++k) {
            int p = (a.start + k) % walk_len;
            if (owner[p] != -1) throw std::invalid_argument("landing: overlapping arcs");
            owner[p] = static_cast<int>(i);
        }
    }
    // counterclockwise cyclic order: arc indices sorted by start position
    // must form a rotation of 0,1,...,k-1
    if (arcs.size() > 1) {
        std::vector<std::pair<int, int>> starts;
        for (std::size_t i = 0; i < arcs.size(); ++i)
            starts.push_back({arcs[i].start, static_cast<int>(i)});
        std::sort(starts.begin(), starts.end());
        const int k = static_cast<int>(arcs.size());
        int pos0 = 0;
        while (starts[pos0].second != 0) ++pos0;
        for (int t = 0; t < k; ++t)
            if (starts[(pos0 + t) % k].second != t)
                throw std::invalid_argument("landing: arcs not in counterclockwise order");
    }
    LandingSeq out;
    out.arcs = std::move(arcs);
    out.walk_len = walk_len;
    return out;
}

LandingSeq LandingSeq::box_sides(int n) {
    if (n < 1) throw std::invalid_argument("box_sides: n >= 1 required");
    return make({{0, 2 * n}, {2 * n, 2 * n}, {4 * n, 2 * n}, {6 * n, 2 * n}}, 8 * n);
}

bool LandingSeq::arc_contains(int arc, int pos) const {
    const auto& a = arcs[arc];
    int rel = pos - a.start;
    if (rel < 0) rel += walk_len;
    return rel < a.length;
}

void write_witness_csv(std::ostream& os, const ArmWitness& w) {
    os << "arm,a,b,color\n";
    for (std::size_t i = 0; i < w.arms.size(); ++i) {
        const auto& arm = w.arms[i];
        os << i << ',' << arm.inner_end.a << ',' << arm.inner_end.b << ','
           << color_char(arm.color) << '\n';
        for (Site v : arm.path)
            os << i << ',' << v.a << ',' << v.b << ',' << color_char(arm.color) << '\n';
        os << i << ',' << arm.outer_end.a << ',' << arm.outer_end.b << ','
           << color_char(arm.color) << '\n';
    }
}

// ------------------------------------------------------------------- n0(j)

namespace {

// sites of the ring of S_{n+1} touching S_n
int contact_count(int n) {
    int cnt = 0;
    for (Site v : ring_walk(Site{0, 0}, n + 1)) {
        for (Site d : kNeighborOffsets)
            if (norm_inf(v + d) <= n) {
                ++cnt;
                break;
            }
    }
    return cnt;
}

int hp_contact_count(int n) {
    int cnt = 0;
    for (Site v : halfplane_ring_walk(n + 1)) {
        for (Site d : kNeighborOffsets) {
            Site w = v + d;
            if (w.b >= 0 && norm_inf(w) <= n) {
                ++cnt;
                break;
            }
        }
    }
    return cnt;
}

}  // namespace

int n0(int j) {
    if (j < 1) throw std::invalid_argument("n0: j >= 1 required");
    for (int n = 0;; ++n)
        if (contact_count(n) >= j) return n;
}

int n0_halfplane(int j) {
    if (j < 1) throw std::invalid_argument("n0_halfplane: j >= 1 required");
    for (int n = 0;; ++n)
        if (hp_contact_count(n) >= j) return n;
}

// ----------------------------------------------------------------- MaxFlow

namespace {

// unit-capacity Dinic
struct MaxFlow {
    struct Edge {
        std::int32_t to, cap;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::int32_t>> g;
    std::vector<std::int32_t> level, iter;

    explicit MaxFlow(int n) : g(n), level(n), iter(n) {}

    void add(int u, int v, int cap) {
        g[u].push_back(static_cast<std::int32_t>(edges.size()));
        edges.push_back({static_cast<std::int32_t>(v), static_cast<std::int32_t>(cap)});
        g[v].push_back(static_cast<std::int32_t>(edges.size()));
        edges.push_back({static_cast<std::int32_t>(u), 0});
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::vector<int> q = {s};
        level[s] = 0;
        for (std::size_t h = 0; h < q.size(); ++h) {
            int u = q[h];
            for (int e : g[u])
                if (edges[e].cap > 0 && level[edges[e].to] < 0) {
                    level[edges[e].to] = level[u] + 1;
                    q.push_back(edges[e].to);
                }
        }
        return level[t] >= 0;
    }

    int dfs(int u, int t) {
        if (u == t) return 1;
        for (std::int32_t& i = iter[u]; i < static_cast<std::int32_t>(g[u].size()); ++i) {
            int e = g[u][i];
            if (edges[e].cap > 0 && level[edges[e].to] == level[u] + 1 && dfs(edges[e].to, t)) {
                --edges[e].cap;
                ++edges[e ^ 1].cap;
                return 1;
            }
        }
        return 0;
    }

    int run(int s, int t, int limit) {
        int flow = 0;
        while (flow < limit && bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (flow < limit && dfs(s, t)) ++flow;
        }
        return flow;
    }
};

}  // namespace

// ----------------------------------------------------------------- domains

namespace {

struct FlatIndex {
    int amin = 0, bmin = 0, w = 0, h = 0;
    std::vector<std::int32_t> lut;

    void build(const std::vector<Site>& sites) {
        if (sites.empty()) return;
        int amax = sites[0].a, bmax = sites[0].b;
        amin = sites[0].a;
        bmin = sites[0].b;
        for (Site v : sites) {
            amin = std::min(amin, v.a);
            amax = std::max(amax, v.a);
            bmin = std::min(bmin, v.b);
            bmax = std::max(bmax, v.b);
        }
        w = amax - amin + 1;
        h = bmax - bmin + 1;
        lut.assign(static_cast<std::size_t>(w) * h, -1);
        for (std::size_t i = 0; i < sites.size(); ++i)
            lut[static_cast<std::size_t>(sites[i].b - bmin) * w + (sites[i].a - amin)] =
                static_cast<std::int32_t>(i);
    }
    int at(Site v) const {
        if (lut.empty() || v.a < amin || v.b < bmin) return -1;
        int col = v.a - amin, row = v.b - bmin;
        if (col >= w || row >= h) return -1;
        return lut[static_cast<std::size_t>(row) * w + col];
    }
};

}  // namespace

void ArmDomain::finish(const std::vector<Site>& inner_walk, const std::vector<Site>& outer_walk,
                       const std::vector<Site>& order_walk) {
    const int n = static_cast<int>(sites_.size());
    FlatIndex fx;
    fx.build(sites_);

    adj_off_.assign(n + 1, 0);
    std::vector<std::int32_t> tmp;
    tmp.reserve(static_cast<std::size_t>(n) * 6);
    for (int i = 0; i < n; ++i) {
        for (Site d : kNeighborOffsets) {
            int j = fx.at(sites_[i] + d);
            if (j >= 0) {
                tmp.push_back(j);
                ++adj_off_[i + 1];
            }
        }
    }
    for (int i = 0; i < n; ++i) adj_off_[i + 1] += adj_off_[i];
    adj_ = std::move(tmp);

    order_len_ = static_cast<int>(order_walk.size());
    order_core_.assign(order_len_, -1);
    order_pos_.assign(n, -1);
    for (int p = 0; p < order_len_; ++p) {
        int i = fx.at(order_walk[p]);
        order_core_[p] = i;
        if (i >= 0) order_pos_[i] = p;
    }

    inner_land_len_ = static_cast<int>(inner_walk.size());
    outer_land_len_ = static_cast<int>(outer_walk.size());
    land_inner_.assign(n, {});
    land_outer_.assign(n, {});
    inner_ring_of_.assign(n, Site{});
    outer_ring_of_.assign(n, Site{});
    has_inner_ring_.assign(n, 0);
    has_outer_ring_.assign(n, 0);
    for (int p = 0; p < inner_land_len_; ++p)
        for (Site d : kNeighborOffsets) {
            int i = fx.at(inner_walk[p] + d);
            if (i >= 0) {
                land_inner_[i].push_back(p);
                if (!has_inner_ring_[i]) {
                    inner_ring_of_[i] = inner_walk[p];
                    has_inner_ring_[i] = 1;
                }
            }
        }
    for (int p = 0; p < outer_land_len_; ++p)
        for (Site d : kNeighborOffsets) {
            int i = fx.at(outer_walk[p] + d);
            if (i >= 0) {
                land_outer_[i].push_back(p);
                if (!has_outer_ring_[i]) {
                    outer_ring_of_[i] = outer_walk[p];
                    has_outer_ring_[i] = 1;
                }
            }
        }
}

ArmDomain ArmDomain::concentric(Site z, int n, int N) {
    if (n < 0 || n > N) throw std::invalid_argument("arm domain: requires 0 <= n <= N");
    ArmDomain d;
    d.cyclic_ = true;
    if (N - n <= 1) {
        d.degenerate_ = true;
        d.degenerate_cap_ = (N == n) ? (N == 0 ? 1 : 8 * N) : contact_count(n);
        d.inner_land_len_ = static_cast<int>(ring_walk(z, n).size());
        d.outer_land_len_ = static_cast<int>(ring_walk(z, N).size());
        return d;
    }
    for (int b = z.b - N + 1; b <= z.b + N - 1; ++b)
        for (int a = z.a - N + 1; a <= z.a + N - 1; ++a) {
            int r = norm_inf(Site{a, b} - z);
            if (r > n && r < N) d.sites_.push_back({a, b});
        }
    const int m = static_cast<int>(d.sites_.size());
    d.inner_contact_.assign(m, 0);
    d.outer_contact_.assign(m, 0);
    for (int i = 0; i < m; ++i)
        for (Site off : kNeighborOffsets) {
            int r = norm_inf(d.sites_[i] + off - z);
            if (r <= n) d.inner_contact_[i] = 1;
            if (r >= N) d.outer_contact_[i] = 1;
        }
    d.finish(ring_walk(z, n), ring_walk(z, N), ring_walk(z, N - 1));
    return d;
}

ArmDomain ArmDomain::halfplane(int n, int N) {
    if (n < 0 || n > N) throw std::invalid_argument("arm domain: requires 0 <= n <= N");
    ArmDomain d;
    d.cyclic_ = false;
    if (N - n <= 1) {
        d.degenerate_ = true;
        d.degenerate_cap_ = (N == n) ? (N == 0 ? 1 : 4 * N + 1) : hp_contact_count(n);
        d.inner_land_len_ = static_cast<int>(halfplane_ring_walk(n).size());
        d.outer_land_len_ = static_cast<int>(halfplane_ring_walk(N).size());
        return d;
    }
    for (int b = 0; b <= N - 1; ++b)
        for (int a = -N + 1; a <= N - 1; ++a) {
            int r = norm_inf(Site{a, b});
            if (r > n && r < N) d.sites_.push_back({a, b});
        }
    const int m = static_cast<int>(d.sites_.size());
    d.inner_contact_.assign(m, 0);
    d.outer_contact_.assign(m, 0);
    for (int i = 0; i < m; ++i)
        for (Site off : kNeighborOffsets) {
            Site w = d.sites_[i] + off;
            if (w.b < 0) continue;
            int r = norm_inf(w);
            if (r <= n) d.inner_contact_[i] = 1;
            if (r >= N) d.outer_contact_[i] = 1;
        }
    d.finish(halfplane_ring_walk(n), halfplane_ring_walk(N), halfplane_ring_walk(N - 1));
    return d;
}

ArmDomain ArmDomain::box_minus_site(const Region& par, Site v) {
    if (par.kind() != RegionKind::Parallelogram && par.kind() != RegionKind::Box)
        throw std::invalid_argument("arm domain: parallelogram or box required");
    const int a1 = par.a1(), a2 = par.a2(), b1 = par.b1(), b2 = par.b2();
    if (!(v.a > a1 && v.a < a2 && v.b > b1 && v.b < b2))
        throw std::invalid_argument("arm domain: site not strictly interior");
    ArmDomain d;
    d.cyclic_ = true;
    if (a2 - a1 == 2 && b2 - b1 == 2) {  // interior is {v}: no core layer
        d.degenerate_ = true;
        int cap = 0;
        for (Site off : kNeighborOffsets)
            if (par.contains(v + off)) ++cap;
        d.degenerate_cap_ = cap;
        d.inner_land_len_ = 1;
        d.outer_land_len_ = static_cast<int>(ring_walk(a1, a2, b1, b2).size());
        d.degenerate_center_ = v;
        d.degenerate_region_ = par;
        return d;
    }
    for (int b = b1 + 1; b <= b2 - 1; ++b)
        for (int a = a1 + 1; a <= a2 - 1; ++a)
            if (Site{a, b} != v) d.sites_.push_back({a, b});
    const int m = static_cast<int>(d.sites_.size());
    d.inner_contact_.assign(m, 0);
    d.outer_contact_.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        Site s = d.sites_[i];
        for (Site off : kNeighborOffsets) {
            Site w = s + off;
            if (w == v) d.inner_contact_[i] = 1;
            if (w.a == a1 || w.a == a2 || w.b == b1 || w.b == b2)
                if (w.a >= a1 && w.a <= a2 && w.b >= b1 && w.b <= b2) d.outer_contact_[i] = 1;
        }
    }
    d.finish({v}, ring_walk(a1, a2, b1, b2), ring_walk(a1 + 1, a2 - 1, b1 + 1, b2 - 1));
    return d;
}

// --------------------------------------------------------------- detection

namespace {

struct ColorCache {
    ArmDomain::ColorFn fn;
    std::vector<std::uint8_t> memo;

    ColorCache(ArmDomain::ColorFn f, std::size_t n) : fn(f), memo(n, 0) {}
    Color get(int i) {
        if (!memo[i]) memo[i] = static_cast<std::uint8_t>(fn(i)) + 1;
        return static_cast<Color>(memo[i] - 1);
    }
};

struct Pair {
    Color color;
    int arc_in = -1;   // index into inner landing arcs, -1 unconstrained
    int arc_out = -1;
};

struct Cluster {
    Color color = Color::Black;
    bool crossing = false;
    std::vector<std::int32_t> sites;
    int cap = -1;  // lazily computed disjoint-arm capacity
};

}  // namespace

struct Detector {
    const ArmDomain& dom;
    ColorCache colors;
    const LandingSeq* land_in;
    const LandingSeq* land_out;
    ArmWitness* witness;

    std::vector<std::int32_t> cluster_of;
    std::vector<Cluster> clusters;
    std::vector<std::int32_t> local;  // flow scratch: core id -> local id

    Detector(const ArmDomain& d, ArmDomain::ColorFn fn, const LandingSeq* li,
             const LandingSeq* lo, ArmWitness* w)
        : dom(d),
          colors(fn, d.sites_.size()),
          land_in(li),
          land_out(lo),
          witness(w),
          cluster_of(d.sites_.size(), -1),
          local(d.sites_.size(), -1) {}

    int deg(int i) const { return dom.adj_off_[i + 1] - dom.adj_off_[i]; }
    int nbr(int i, int k) const { return dom.adj_[dom.adj_off_[i] + k]; }

    bool site_in_arc(const std::vector<std::int32_t>& positions, const LandingSeq& seq,
                     int arc) const {
        for (int p : positions)
            if (seq.arc_contains(arc, p)) return true;
        return false;
    }

    void label_from_inner() {
        std::vector<std::int32_t> stack;
        for (std::size_t s = 0; s < dom.sites_.size(); ++s) {
            if (!dom.inner_contact_[s] || cluster_of[s] >= 0) continue;
            Color c = colors.get(static_cast<int>(s));
            int id = static_cast<int>(clusters.size());
            clusters.push_back({c, false, {}, -1});
            Cluster& cl = clusters.back();
            stack.assign(1, static_cast<std::int32_t>(s));
            cluster_of[s] = id;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                cl.sites.push_back(u);
                if (dom.outer_contact_[u]) cl.crossing = true;
                for (int k = 0; k < deg(u); ++k) {
                    int w = nbr(u, k);
                    if (cluster_of[w] < 0 && colors.get(w) == c) {
                        cluster_of[w] = id;
                        stack.push_back(w);
                    }
                }
            }
        }
    }

    // Max number of vertex-disjoint crossings within the given site set,
    // optionally with one capacity-1 landing arc per requested arm.
    // `pairs_run` may be empty (no arc constraints). Extracts paths if asked.
    int disjoint_arms(const std::vector<std::int32_t>& member_sites, int limit,
                      const std::vector<Pair>* pairs_run,
                      std::vector<std::vector<int>>* out_paths) {
        const int k_arcs = pairs_run ? static_cast<int>(pairs_run->size()) : 0;
        const int nloc = static_cast<int>(member_sites.size());
        for (int i = 0; i < nloc; ++i) local[member_sites[i]] = i;

        // nodes: 0=s, 1=t, [2, 2+k) inner arc nodes, [2+k, 2+2k) outer arc
        // nodes, then in/out per member site
        const int base = 2 + 2 * k_arcs;
        MaxFlow mf(base + 2 * nloc);
        auto in_node = [&](int loc) { return base + 2 * loc; };
        auto out_node = [&](int loc) { return base + 2 * loc + 1; };

        for (int i = 0; i < nloc; ++i) {
            int u = member_sites[i];
            mf.add(in_node(i), out_node(i), 1);
            for (int k = 0; k < deg(u); ++k) {
                int w = nbr(u, k);
                int lw = local[w];
                if (lw >= 0) mf.add(out_node(i), in_node(lw), 1);
            }
            if (dom.inner_contact_[u] && !pairs_run) mf.add(0, in_node(i), 1);
        }
        if (pairs_run) {
            for (int a = 0; a < k_arcs; ++a) {
                const Pair& pr = (*pairs_run)[a];
                mf.add(0, 2 + a, 1);
                mf.add(2 + k_arcs + a, 1, 1);
                for (int i = 0; i < nloc; ++i) {
                    int u = member_sites[i];
                    if (dom.inner_contact_[u] &&
                        (pr.arc_in < 0 || site_in_arc(dom.land_inner_[u], *land_in, pr.arc_in)))
                        mf.add(2 + a, in_node(i), 1);
                    if (dom.outer_contact_[u] &&
                        (pr.arc_out < 0 || site_in_arc(dom.land_outer_[u], *land_out, pr.arc_out)))
                        mf.add(out_node(i), 2 + k_arcs + a, 1);
                }
            }
        } else {
            for (int i = 0; i < nloc; ++i)
                if (dom.outer_contact_[member_sites[i]]) mf.add(out_node(i), 1, 1);
        }

        int flow = mf.run(0, 1, limit);

        if (out_paths && flow > 0) {
            out_paths->clear();
            // follow saturated unit edges from the source
            std::vector<std::uint8_t> used_edge(mf.edges.size(), 0);
            auto next_from = [&](int node) -> int {
                for (int e : mf.g[node]) {
                    if (used_edge[e]) continue;
                    // forward edges occupy even ids; saturated means cap==0
                    if ((e & 1) == 0 && mf.edges[e].cap == 0) {
                        used_edge[e] = 1;
                        return mf.edges[e].to;
                    }
                }
                return -1;
            };
            for (int e0 : mf.g[0]) {
                if ((e0 & 1) != 0 || mf.edges[e0].cap != 0 || used_edge[e0]) continue;
                used_edge[e0] = 1;
                int node = mf.edges[e0].to;
                std::vector<int> path;
                while (node != 1 && node != -1) {
                    if (node >= base && ((node - base) & 1) == 0)
                        path.push_back(member_sites[(node - base) / 2]);
                    node = next_from(node);
                }
                if (node == 1) out_paths->push_back(std::move(path));
            }
        }
        for (int i = 0; i < nloc; ++i) local[member_sites[i]] = -1;
        return flow;
    }

    // capacity is always computed with limit jmax, so the memo stays valid
    int capacity(int cid, int jmax) {
        Cluster& cl = clusters[cid];
        if (cl.cap < 0) cl.cap = disjoint_arms(cl.sites, jmax, nullptr, nullptr);
        return cl.cap;
    }

    // crossing clusters in walk order; false if a cluster repeats non-contiguously
    bool walk_order(std::vector<int>& seq) {
        seq.clear();
        for (int p = 0; p < dom.order_len_; ++p) {
            int sid = dom.order_core_[p];
            if (sid < 0) continue;
            int cid = cluster_of[sid];
            if (cid < 0 || !clusters[cid].crossing) continue;
            if (seq.empty() || seq.back() != cid) seq.push_back(cid);
        }
        if (dom.cyclic_ && seq.size() > 1 && seq.front() == seq.back()) seq.pop_back();
        std::set<int> uniq(seq.begin(), seq.end());
        return uniq.size() == seq.size();
    }

    bool emit_witness(const std::vector<std::pair<int, std::vector<Pair>>>& assignment) {
        if (!witness) return true;
        witness->arms.clear();
        std::vector<ArmWitness::Arm> arms;
        for (const auto& [cid, run] : assignment) {
            std::vector<std::vector<int>> paths;
            int got = disjoint_arms(clusters[cid].sites, static_cast<int>(run.size()),
                                    run.empty() ? nullptr : &run, &paths);
            if (got < static_cast<int>(run.size()) ||
                paths.size() != run.size())
                return false;  // should not happen after feasibility
            // order paths along the outer walk so colors line up with the run
            std::sort(paths.begin(), paths.end(), [&](const auto& x, const auto& y) {
                return dom.order_pos_[x.back()] < dom.order_pos_[y.back()];
            });
            for (std::size_t i = 0; i < paths.size(); ++i) {
                ArmWitness::Arm arm;
                arm.color = run[i].color;
                for (int sid : paths[i]) arm.path.push_back(dom.sites_[sid]);
                arm.inner_end = dom.inner_ring_of_[paths[i].front()];
                arm.outer_end = dom.outer_ring_of_[paths[i].back()];
                arms.push_back(std::move(arm));
            }
        }
        witness->arms = std::move(arms);
        return true;
    }

    // sector matching with per-cluster capacities / landing flows
    bool match(const std::vector<Pair>& pairs0) {
        std::vector<int> seq;
        if (!walk_order(seq)) return order_search(pairs0, 0);
        const int m = static_cast<int>(seq.size());
        const int j = static_cast<int>(pairs0.size());
        if (m == 0) return false;

        const bool has_arcs = land_in || land_out;
        bool constant = true;
        for (const auto& p : pairs0) constant &= (p.color == pairs0[0].color);
        if (dom.cyclic_ && has_arcs && constant && m == 1) return order_search(pairs0, 0);

        const int nrot = dom.cyclic_ ? j : 1;
        std::vector<int> starts;
        if (dom.cyclic_)
            for (int s = 0; s < m; ++s) starts.push_back(s);
        else
            starts.push_back(0);

        for (int r = 0; r < nrot; ++r) {
            std::vector<Pair> pairs(j);
            for (int i = 0; i < j; ++i) pairs[i] = pairs0[(i + r) % j];
            for (int s : starts) {
                // dp[q][p]: first q clusters host the first p pairs
                std::vector<std::vector<std::int8_t>> dp(
                    m + 1, std::vector<std::int8_t>(j + 1, 0));
                std::vector<std::vector<int>> choice(m + 1, std::vector<int>(j + 1, -1));
                dp[0][0] = 1;
                for (int q = 0; q < m; ++q) {
                    int cid = seq[(s + q) % m];
                    for (int p = 0; p <= j; ++p) {
                        if (!dp[q][p]) continue;
                        if (!dp[q + 1][p]) {
                            dp[q + 1][p] = 1;  // empty block
                            choice[q + 1][p] = p;
                        }
                        for (int k = 1; p + k <= j; ++k) {
                            if (pairs[p + k - 1].color != clusters[cid].color) break;
                            bool ok;
                            if (has_arcs) {
                                std::vector<Pair> run(pairs.begin() + p, pairs.begin() + p + k);
                                ok = disjoint_arms(clusters[cid].sites, k, &run, nullptr) == k;
                            } else {
                                ok = capacity(cid, j) >= k;
                            }
                            if (!ok) break;
                            if (!dp[q + 1][p + k]) {
                                dp[q + 1][p + k] = 1;
                                choice[q + 1][p + k] = p;
                            }
                        }
                    }
                }
                if (dp[m][j]) {
                    if (!witness) return true;
                    // reconstruct the block assignment
                    std::vector<std::pair<int, std::vector<Pair>>> assignment;
                    int p = j;
                    for (int q = m; q >= 1; --q) {
                        int prev = choice[q][p];
                        if (prev < p) {
                            int cid = seq[(s + q - 1) % m];
                            assignment.push_back(
                                {cid, std::vector<Pair>(pairs.begin() + prev, pairs.begin() + p)});
                        }
                        p = prev;
                    }
                    std::reverse(assignment.begin(), assignment.end());
                    emit_witness(assignment);
                    return true;
                }
            }
        }
        return false;
    }

    // Exhaustive ordered search over disjoint defected arm systems. Exact for
    // every case; exponential in the worst case, used for defected mixed
    // sequences and the rare geometries the sector argument does not order.
    std::vector<std::uint8_t> used;
    std::vector<Pair> search_pairs;
    int search_d = 0;

    bool order_search(const std::vector<Pair>& pairs0, int d) {
        const int j = static_cast<int>(pairs0.size());
        const int nrot = dom.cyclic_ ? j : 1;
        used.assign(dom.sites_.size(), 0);
        search_d = d;
        for (int r = 0; r < nrot; ++r) {
            search_pairs.assign(j, Pair{Color::Black});
            for (int i = 0; i < j; ++i) search_pairs[i] = pairs0[(i + r) % j];
            if (place_arm(0, -1, -1)) return true;
        }
        return false;
    }

    bool place_arm(int slot, int base_pos, int prev_pos) {
        if (slot == static_cast<int>(search_pairs.size())) return true;
        const Pair& pr = search_pairs[slot];
        for (std::size_t s = 0; s < dom.sites_.size(); ++s) {
            if (used[s] || !dom.inner_contact_[s]) continue;
            if (pr.arc_in >= 0 && !site_in_arc(dom.land_inner_[s], *land_in, pr.arc_in)) continue;
            int cost = colors.get(static_cast<int>(s)) == pr.color ? 0 : 1;
            if (cost > search_d) continue;
            used[s] = 1;
            if (extend_path(static_cast<int>(s), cost, slot, base_pos, prev_pos)) {
                used[s] = 0;
                return true;
            }
            used[s] = 0;
        }
        return false;
    }

    bool extend_path(int u, int spent, int slot, int base_pos, int prev_pos) {
        const Pair& pr = search_pairs[slot];
        if (dom.outer_contact_[u] &&
            (pr.arc_out < 0 || site_in_arc(dom.land_outer_[u], *land_out, pr.arc_out))) {
            int pos = dom.order_pos_[u];
            bool order_ok;
            if (slot == 0)
                order_ok = true;
            else if (!dom.cyclic_)
                order_ok = pos > prev_pos;
            else {
                int rel = pos - base_pos;
                if (rel <= 0) rel += dom.order_len_;
                int prev_rel = prev_pos - base_pos;
                if (prev_rel <= 0) prev_rel += dom.order_len_;
                order_ok = (slot == 1) ? true : rel > prev_rel;
            }
            if (order_ok) {
                int nbase = slot == 0 ? pos : base_pos;
                if (place_arm(slot + 1, nbase, pos)) return true;
            }
        }
        for (int k = 0; k < deg(u); ++k) {
            int w = nbr(u, k);
            if (used[w]) continue;
            int cost = spent + (colors.get(w) == pr.color ? 0 : 1);
            if (cost > search_d) continue;
            used[w] = 1;
            if (extend_path(w, cost, slot, base_pos, prev_pos)) {
                used[w] = 0;
                return true;
            }
            used[w] = 0;
        }
        return false;
    }

    // single defected arm: BFS over (site, defects spent)
    bool layered_reach(Color c, int d) {
        const int n = static_cast<int>(dom.sites_.size());
        std::vector<std::int8_t> best(n, -1);  // min defects to reach site, -1 unseen
        std::vector<int> q;
        for (int i = 0; i < n; ++i) {
            if (!dom.inner_contact_[i]) continue;
            int cost = colors.get(i) == c ? 0 : 1;
            if (cost <= d && (best[i] < 0 || best[i] > cost)) {
                best[i] = static_cast<std::int8_t>(cost);
                q.push_back(i);
            }
        }
        for (std::size_t h = 0; h < q.size(); ++h) {
            int u = q[h];
            if (dom.outer_contact_[u]) return true;
            for (int k = 0; k < deg(u); ++k) {
                int w = nbr(u, k);
                int cost = best[u] + (colors.get(w) == c ? 0 : 1);
                if (cost <= d && (best[w] < 0 || cost < best[w])) {
                    best[w] = static_cast<std::int8_t>(cost);
                    q.push_back(w);
                }
            }
        }
        return false;
    }
};

bool ArmDomain::detect(ColorFn fn, const ColorSeq& sigma, const LandingSeq* inner_landing,
                       const LandingSeq* outer_landing, int defects, ArmWitness* witness) const {
    const int j = sigma.size();
    if (defects < 0) throw std::invalid_argument("arms: negative defect count");
    if (inner_landing && static_cast<int>(inner_landing->arcs.size()) != j)
        throw std::invalid_argument("arms: inner landing arc count must match j");
    if (outer_landing && static_cast<int>(outer_landing->arcs.size()) != j)
        throw std::invalid_argument("arms: outer landing arc count must match j");
    if (inner_landing && inner_landing->walk_len != inner_land_len_)
        throw std::invalid_argument("arms: inner landing walk length mismatch");
    if (outer_landing && outer_landing->walk_len != outer_land_len_)
        throw std::invalid_argument("arms: outer landing walk length mismatch");

    if (degenerate_) {
        if (j > degenerate_cap_) return false;
        if (outer_landing || inner_landing) {
            // arcs on a degenerate annulus: each arm needs a ring site of its
            // arc next to the inner structure; only the box-minus-site case
            // carries enough geometry here to check adjacency
            if (degenerate_center_ && outer_landing) {
                auto walk = ring_walk(degenerate_region_->a1(), degenerate_region_->a2(),
                                      degenerate_region_->b1(), degenerate_region_->b2());
                for (int arc = 0; arc < j; ++arc) {
                    bool ok = false;
                    for (int p = 0; p < outer_landing->walk_len && !ok; ++p)
                        if (outer_landing->arc_contains(arc, p)) {
                            for (Site d : kNeighborOffsets)
                                if (*degenerate_center_ + d == walk[p]) ok = true;
                        }
                    if (!ok) return false;
                }
            }
        }
        if (witness) {
            witness->arms.assign(j, ArmWitness::Arm{});
            for (int i = 0; i < j; ++i) witness->arms[i].color = sigma.at(i);
        }
        return true;
    }

    Detector det(*this, fn, inner_landing, outer_landing, witness);

    if (defects > 0) {
        if (j == 1) return det.layered_reach(sigma.at(0), defects);
        std::vector<Pair> pairs(j);
        for (int i = 0; i < j; ++i)
            pairs[i] = Pair{sigma.at(i), inner_landing ? i : -1, outer_landing ? i : -1};
        return det.order_search(pairs, defects);
    }

    det.label_from_inner();
    bool any_crossing = false;
    for (const auto& cl : det.clusters) any_crossing |= cl.crossing;
    if (!any_crossing) return false;

    if (sigma.is_constant() && !inner_landing && !outer_landing) {
        std::vector<std::int32_t> member;
        for (const auto& cl : det.clusters)
            if (cl.crossing && cl.color == sigma.at(0))
                member.insert(member.end(), cl.sites.begin(), cl.sites.end());
        if (member.empty()) return false;
        std::vector<std::vector<int>> paths;
        int flow = det.disjoint_arms(member, j, nullptr, witness ? &paths : nullptr);
        if (flow < j) return false;
        if (witness) {
            std::sort(paths.begin(), paths.end(), [&](const auto& x, const auto& y) {
                return order_pos_[x.back()] < order_pos_[y.back()];
            });
            witness->arms.clear();
            for (int i = 0; i < j; ++i) {
                ArmWitness::Arm arm;
                arm.color = sigma.at(0);
                for (int sid : paths[i]) arm.path.push_back(sites_[sid]);
                arm.inner_end = inner_ring_of_[paths[i].front()];
                arm.outer_end = outer_ring_of_[paths[i].back()];
                witness->arms.push_back(std::move(arm));
            }
        }
        return true;
    }

    std::vector<Pair> pairs(j);
    for (int i = 0; i < j; ++i)
        pairs[i] = Pair{sigma.at(i), inner_landing ? i : -1, outer_landing ? i : -1};
    return det.match(pairs);
}

int ArmDomain::count_interfaces(ColorFn fn) const {
    if (degenerate_) return 0;
    Detector det(*this, fn, nullptr, nullptr, nullptr);
    det.label_from_inner();
    int black = 0, white = 0;
    for (const auto& cl : det.clusters) {
        if (!cl.crossing) continue;
        (cl.color == Color::Black ? black : white) += 1;
    }
    if (black == 0 || white == 0) return 0;
    return black + white;
}

// ------------------------------------------------------------- public ops

namespace {

void require_annulus(const Region& r) {
    if (r.kind() != RegionKind::Annulus)
        throw std::invalid_argument("arms: region must be an annulus");
}

struct CfgColors {
    const Config& cfg;
    std::vector<std::int32_t> map;  // core id -> cfg index

    CfgColors(const Config& cfg_, const std::vector<Site>& core) : cfg(cfg_) {
        map.resize(core.size());
        for (std::size_t i = 0; i < core.size(); ++i) {
            int idx = cfg.indexer().index(core[i]);
            if (idx < 0) throw std::invalid_argument("arms: annulus not contained in region");
            map[i] = idx;
        }
    }
    Color operator()(int i) const { return cfg.at_index(map[i]); }
};

}  // namespace

std::optional<ArmWitness> has_arms(const Config& cfg, const Region& annulus,
                                   const ColorSeq& sigma) {
    require_annulus(annulus);
    if (annulus.inner_radius() < n0(sigma.size()))
        throw std::domain_error("arms: combinatorial obstruction, n < n0(j)");
    ArmDomain dom =
        ArmDomain::concentric(annulus.center(), annulus.inner_radius(), annulus.outer_radius());
    CfgColors colors(cfg, dom.core());
    ArmWitness w;
    if (!dom.detect(colors, sigma, nullptr, nullptr, 0, &w)) return std::nullopt;
    return w;
}

bool has_arms_with_landing(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                           const std::optional<LandingSeq>& inner,
                           const std::optional<LandingSeq>& outer) {
    require_annulus(annulus);
    if (annulus.inner_radius() < n0(sigma.size()))
        throw std::domain_error("arms: combinatorial obstruction, n < n0(j)");
    ArmDomain dom =
        ArmDomain::concentric(annulus.center(), annulus.inner_radius(), annulus.outer_radius());
    CfgColors colors(cfg, dom.core());
    return dom.detect(colors, sigma, inner ? &*inner : nullptr, outer ? &*outer : nullptr, 0,
                      nullptr);
}

bool has_arms_with_defects(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                           int defects) {
    require_annulus(annulus);
    if (annulus.inner_radius() < n0(sigma.size()))
        throw std::domain_error("arms: combinatorial obstruction, n < n0(j)");
    ArmDomain dom =
        ArmDomain::concentric(annulus.center(), annulus.inner_radius(), annulus.outer_radius());
    CfgColors colors(cfg, dom.core());
    return dom.detect(colors, sigma, nullptr, nullptr, defects, nullptr);
}

bool has_halfplane_arms(const Config& cfg, const Region& half_annulus, const ColorSeq& sigma) {
    if (half_annulus.kind() != RegionKind::HalfPlaneAnnulus)
        throw std::invalid_argument("arms: region must be a half-plane annulus");
    ArmDomain dom =
        ArmDomain::halfplane(half_annulus.inner_radius(), half_annulus.outer_radius());
    CfgColors colors(cfg, dom.core());
    return dom.detect(colors, sigma, nullptr, nullptr, 0, nullptr);
}

bool has_site_to_boundary_arms(const Config& cfg, const Region& par, Site v,
                               const ColorSeq& sigma, const std::optional<LandingSeq>& outer) {
    ArmDomain dom = ArmDomain::box_minus_site(par, v);
    CfgColors colors(cfg, dom.core());
    return dom.detect(colors, sigma, nullptr, outer ? &*outer : nullptr, 0, nullptr);
}

int count_interfaces(const Config& cfg, const Region& annulus) {
    require_annulus(annulus);
    ArmDomain dom =
        ArmDomain::concentric(annulus.center(), annulus.inner_radius(), annulus.outer_radius());
    CfgColors colors(cfg, dom.core());
    return dom.count_interfaces(colors);
}

std::vector<Site> pivotal_sites(const Config& cfg, const Region& par, Dir dir, Color c) {
    if (par.kind() != RegionKind::Parallelogram && par.kind() != RegionKind::Box)
        throw std::invalid_argument("pivotal: parallelogram or box required");
    const int a1 = par.a1(), a2 = par.a2(), b1 = par.b1(), b2 = par.b2();
    if (a2 - a1 <= 1 || b2 - b1 <= 1) return {};  // both crossing events are constant

    const auto& ix = cfg.indexer();
    DisjointSet dsu(ix.size());
    std::vector<Site> interior;
    for (int b = b1 + 1; b <= b2 - 1; ++b)
        for (int a = a1 + 1; a <= a2 - 1; ++a) {
            Site v{a, b};
            int i = ix.index(v);
            if (i < 0)
                throw std::invalid_argument("pivotal: parallelogram not contained in region");
            interior.push_back(v);
            for (Site d : {Site{1, 0}, Site{0, 1}, Site{-1, 1}}) {
                Site w = v + d;
                if (w.a <= a1 || w.a >= a2 || w.b <= b1 || w.b >= b2) continue;
                int jdx = ix.index(w);
                if (jdx >= 0 && cfg.at_index(jdx) == cfg.at_index(i)) dsu.unite(i, jdx);
            }
        }

    // per-root side-contact masks; bits: 0 = dir lo, 1 = dir hi, 2 = perp lo,
    // 3 = perp hi (a corner site belongs to two sides)
    const bool horiz = (dir == Dir::Horizontal);
    auto side_mask = [&](Site w) -> unsigned {
        if (w.a < a1 || w.a > a2 || w.b < b1 || w.b > b2) return 0;
        unsigned m = 0;
        if (w.a == a1) m |= horiz ? 1u : 4u;
        if (w.a == a2) m |= horiz ? 2u : 8u;
        if (w.b == b1) m |= horiz ? 4u : 1u;
        if (w.b == b2) m |= horiz ? 8u : 2u;
        return m;
    };
    std::vector<std::uint8_t> flags(ix.size(), 0);
    for (Site v : interior) {
        int i = ix.index(v);
        int root = dsu.find(i);
        unsigned m = 0;
        for (Site d : kNeighborOffsets) m |= side_mask(v + d);
        flags[root] |= static_cast<std::uint8_t>(m);
    }

    std::vector<Site> out;
    for (Site v : interior) {
        unsigned own = 0, via_same = 0, via_opp = 0;
        for (Site d : kNeighborOffsets) {
            Site w = v + d;
            own |= side_mask(w);
            if (w.a > a1 && w.a < a2 && w.b > b1 && w.b < b2) {
                int jdx = ix.index(w);
                if (jdx < 0) continue;
                unsigned f = flags[dsu.find(jdx)];
                if (cfg.at_index(jdx) == c)
                    via_same |= f;
                else
                    via_opp |= f;
            }
        }
        unsigned cross = own | via_same;  // component of v with v flipped to c
        unsigned block = own | via_opp;   // with v flipped to the opposite color
        if ((cross & 1u) && (cross & 2u) && (block & 4u) && (block & 8u)) out.push_back(v);
    }
    return out;
}

}  // namespace perc
