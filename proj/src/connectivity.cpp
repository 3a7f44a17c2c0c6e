#include "perc/connectivity.hpp"

#include <stdexcept>

namespace perc {

namespace {

bool region_covers(const Region& outer, const Region& inner) {
    auto k = outer.kind();
    if (k == RegionKind::Parallelogram || k == RegionKind::Box) {
        if (inner.kind() == RegionKind::Parallelogram || inner.kind() == RegionKind::Box)
            return outer.a1() <= inner.a1() && inner.a2() <= outer.a2() &&
                   outer.b1() <= inner.b1() && inner.b2() <= outer.b2();
    }
    for (Site v : inner.sites())
        if (!outer.contains(v)) return false;
    return true;
}

void require_par(const Region& par) {
    if (par.kind() != RegionKind::Parallelogram && par.kind() != RegionKind::Box)
        throw std::invalid_argument("crossing: region must be a parallelogram or box");
}

}  // namespace

ClusterMap::ClusterMap(const Config& cfg) : cfg_(&cfg) {
    const auto& ix = cfg.indexer();
    const int n = static_cast<int>(ix.size());
    DisjointSet dsu(ix.size());
    for (int i = 0; i < n; ++i) {
        Site v = ix.site(i);
        Color c = cfg.at_index(i);
        // forward offsets only; symmetric pairs covered once
        for (Site d : {Site{1, 0}, Site{0, 1}, Site{1, -1}}) {
            int j = ix.index(v + d);
            if (j >= 0 && cfg.at_index(j) == c) dsu.unite(i, j);
        }
    }
    root_.resize(ix.size());
    size_.assign(ix.size(), 0);
    for (int i = 0; i < n; ++i) {
        root_[i] = static_cast<std::int32_t>(dsu.find(i));
        ++size_[root_[i]];
    }
}

bool ClusterMap::same_cluster(Site x, Site y, Color c) const {
    const auto& ix = cfg_->indexer();
    int i = ix.index(x), j = ix.index(y);
    if (i < 0 || j < 0) return false;
    return cfg_->at_index(i) == c && cfg_->at_index(j) == c && root_[i] == root_[j];
}

ClusterMap build_clusters(const Config& cfg) { return ClusterMap(cfg); }

bool has_crossing(const Config& cfg, const Region& par, Dir dir, Color c) {
    require_par(par);
    if (!region_covers(cfg.region(), par))
        throw std::invalid_argument("crossing: parallelogram not contained in configuration region");

    const int a1 = par.a1(), a2 = par.a2(), b1 = par.b1(), b2 = par.b2();
    // Span between the two designated sides; the other pair bounds the interior.
    const bool horiz = (dir == Dir::Horizontal);
    const int lo = horiz ? a1 : b1, hi = horiz ? a2 : b2;
    if (hi - lo <= 1) return true;  // sides touch: both extremities, no colored interior needed

    const auto& ix = cfg.indexer();
    // two terminals appended after the site indices
    DisjointSet dsu(ix.size() + 2);
    const int kFrom = static_cast<int>(ix.size());
    const int kTo = kFrom + 1;

    for (int b = b1 + 1; b <= b2 - 1; ++b) {
        for (int a = a1 + 1; a <= a2 - 1; ++a) {
            Site v{a, b};
            int i = ix.index(v);
            if (i < 0 || cfg.at_index(i) != c) continue;
            for (Site d : kNeighborOffsets) {
                Site w = v + d;
                if (w.a < a1 || w.a > a2 || w.b < b1 || w.b > b2) continue;
                const int side = horiz ? w.a : w.b;
                if (side == lo)
                    dsu.unite(kFrom, i);
                else if (side == hi)
                    dsu.unite(kTo, i);
                else if (w.a > a1 && w.a < a2 && w.b > b1 && w.b < b2) {
                    // interior neighbor; forward direction only to halve work
                    if (d.a > 0 || (d.a == 0 && d.b > 0)) {
                        int j = ix.index(w);
                        if (j >= 0 && cfg.at_index(j) == c) dsu.unite(i, j);
                    }
                }
            }
        }
    }
    return dsu.connected(kFrom, kTo);
}

bool has_annulus_crossing(const Config& cfg, const Region& annulus, Color c) {
    if (annulus.kind() != RegionKind::Annulus)
        throw std::invalid_argument("annulus crossing: region must be an annulus");
    if (!region_covers(cfg.region(), annulus))
        throw std::invalid_argument("annulus crossing: annulus not contained in region");

    const Site z = annulus.center();
    const int n = annulus.inner_radius(), N = annulus.outer_radius();
    if (N - n <= 1) return true;  // rings adjacent or equal

    const auto& ix = cfg.indexer();
    DisjointSet dsu(ix.size() + 2);
    const int kInner = static_cast<int>(ix.size());
    const int kOuter = kInner + 1;

    for (int b = z.b - N + 1; b <= z.b + N - 1; ++b) {
        for (int a = z.a - N + 1; a <= z.a + N - 1; ++a) {
            Site v{a, b};
            int d = norm_inf(v - z);
            if (d <= n || d >= N) continue;
            int i = ix.index(v);
            if (i < 0 || cfg.at_index(i) != c) continue;
            for (Site off : kNeighborOffsets) {
                Site w = v + off;
                int dw = norm_inf(w - z);
                if (dw <= n)
                    dsu.unite(kInner, i);
                else if (dw >= N)
                    dsu.unite(kOuter, i);
                else if (off.a > 0 || (off.a == 0 && off.b > 0)) {
                    int j = ix.index(w);
                    if (j >= 0 && cfg.at_index(j) == c) dsu.unite(i, j);
                }
            }
        }
    }
    return dsu.connected(kInner, kOuter);
}

bool has_circuit(const Config& cfg, const Region& annulus, Color c) {
    return !has_annulus_crossing(cfg, annulus, opposite(c));
}

ClusterStats cluster_radius_and_size(const Config& cfg, Site origin) {
    const auto& ix = cfg.indexer();
    int start = ix.index(origin);
    if (start < 0) throw std::invalid_argument("cluster stats: origin outside region");
    ClusterStats st;
    if (cfg.at_index(start) != Color::Black) return st;  // empty cluster convention

    std::vector<std::uint8_t> seen(ix.size(), 0);
    std::vector<int> stack = {start};
    seen[start] = 1;
    const Region& reg = cfg.region();
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        Site v = ix.site(i);
        ++st.size;
        st.radius = std::max(st.radius, norm_inf(v - origin));
        for (Site d : kNeighborOffsets) {
            Site w = v + d;
            int j = ix.index(w);
            if (j < 0) {
                if (!reg.contains(w)) st.touches_boundary = true;
                continue;
            }
            if (!seen[j] && cfg.at_index(j) == Color::Black) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return st;
}

}  // namespace perc
