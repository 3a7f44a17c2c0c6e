#pragma once

#include <cstdint>
#include <vector>

#include "perc/config.hpp"
#include "perc/lattice.hpp"

namespace perc {

struct DisjointSet {
    std::vector<std::int32_t> parent;

    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];  // path halving
            x = parent[x];
        }
        return x;
    }
    void unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[y] = x;
    }
    bool connected(int x, int y) { return find(x) == find(y); }
};

// Same-color connected components (6-neighbor adjacency) of a configuration.
// Cluster ids are root site indices; a site's id refers to the component of
// its own color.
class ClusterMap {
  public:
    explicit ClusterMap(const Config& cfg);

    const Config& config() const { return *cfg_; }
    int root_of_index(int idx) const { return root_[idx]; }
    int root_of(Site v) const { return root_[cfg_->indexer().index(v)]; }
    std::int64_t size_of(int root) const { return size_[root]; }
    // Two sites lie in one cluster iff same color and same root.
    bool same_cluster(Site x, Site y, Color c) const;

  private:
    const Config* cfg_;
    std::vector<std::int32_t> root_;
    std::vector<std::int64_t> size_;
};

ClusterMap build_clusters(const Config& cfg);

enum class Dir { Horizontal, Vertical };

// Crossing of a parallelogram with the extremity-relaxed convention: the
// strictly interior vertices of the path carry the color, the two extremities
// on the sides are color-free.
bool has_crossing(const Config& cfg, const Region& par, Dir dir, Color c);

// Crossing of an annulus from the inner ring to the outer ring, extremity
// convention applied at both boundary rings.
bool has_annulus_crossing(const Config& cfg, const Region& annulus, Color c);

// Circuit of the color inside the annulus separating the inner ring from the
// outer one, detected through planar complementarity with the opposite-color
// crossing.
bool has_circuit(const Config& cfg, const Region& annulus, Color c);

struct ClusterStats {
    std::int64_t size = 0;
    int radius = 0;            // max norm_inf over C(origin), relative to origin
    bool touches_boundary = false;  // truncated by the finite window
};

// Statistics of the Black cluster of origin; size 0 if origin is White.
ClusterStats cluster_radius_and_size(const Config& cfg, Site origin);

}  // namespace perc
