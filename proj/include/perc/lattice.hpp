#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace perc {

// A site of the triangular lattice in oblique coordinates: a*1 + b*e^{i pi/3}.
struct Site {
    int a = 0;
    int b = 0;

    friend bool operator==(Site x, Site y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(Site x, Site y) { return !(x == y); }
    friend Site operator+(Site x, Site y) { return {x.a + y.a, x.b + y.b}; }
    friend Site operator-(Site x, Site y) { return {x.a - y.a, x.b - y.b}; }
};

inline int norm_inf(Site v) { return std::max(std::abs(v.a), std::abs(v.b)); }

// The six neighbor offsets of the triangular lattice in the oblique frame.
inline constexpr std::array<Site, 6> kNeighborOffsets = {
    Site{1, 0}, Site{-1, 0}, Site{0, 1}, Site{0, -1}, Site{1, -1}, Site{-1, 1}};

inline std::array<Site, 6> neighbors(Site v) {
    std::array<Site, 6> out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = v + kNeighborOffsets[i];
    return out;
}

// Euclidean embedding, used only when exporting geometry for plotting.
inline std::array<double, 2> euclid(Site v) {
    return {v.a + 0.5 * v.b, 0.8660254037844386 * v.b};
}

enum class RegionKind { Parallelogram, Box, Annulus, HalfPlaneAnnulus };

// A finite site set with geometry metadata. Box(z,N) is the rhombus of sites
// at oblique distance at most N from z; Annulus(z,n,N) = S_N(z) minus the
// interior of S_n(z); HalfPlaneAnnulus additionally restricts to b >= 0 (the
// boundary row b = 0 is included).
class Region {
  public:
    static Region parallelogram(int a1, int a2, int b1, int b2);
    static Region box(Site center, int n);
    static Region annulus(Site center, int inner, int outer);
    static Region halfplane_annulus(int inner, int outer);

    RegionKind kind() const { return kind_; }
    Site center() const { return center_; }
    int inner_radius() const { return inner_; }
    int outer_radius() const { return outer_; }

    // Parallelogram bounds; valid for Parallelogram and Box kinds.
    int a1() const { return a1_; }
    int a2() const { return a2_; }
    int b1() const { return b1_; }
    int b2() const { return b2_; }

    bool contains(Site v) const;

    // Sites in canonical row-major order (b outer, a inner), the ordering used
    // for RNG assignment and dense indexing.
    std::vector<Site> sites() const;
    std::size_t size() const;

    struct Boundary {
        std::vector<Site> sites;
        bool degenerate = false;  // empty interior: boundary is the whole region
    };
    // R \ interior(R); defined for Parallelogram and Box kinds.
    Boundary boundary() const;

    std::string describe() const;

  private:
    RegionKind kind_ = RegionKind::Box;
    Site center_{};
    int inner_ = 0, outer_ = 0;
    int a1_ = 0, a2_ = 0, b1_ = 0, b2_ = 0;

    // Bounding rows for enumeration.
    void bounds(int& amin, int& amax, int& bmin, int& bmax) const;
    friend class SiteIndexer;
};

// Boundary ring of S_N(center) in counterclockwise cyclic order (increasing
// angle in the Euclidean embedding), starting at center + (N, -N).
std::vector<Site> ring_walk(Site center, int n);

// Same for a parallelogram ring [a1,a2] x [b1,b2].
std::vector<Site> ring_walk(int a1, int a2, int b1, int b2);

// Upper-half-plane boundary arc of S_n, ordered left to right: from (-n, 0)
// over the top row to (n, 0).
std::vector<Site> halfplane_ring_walk(int n);

// The two corners of the ring of S_N(center) that touch no site of smaller
// norm (the acute corners of the rhombus): center +- (N, N).
std::array<Site, 2> acute_corners(Site center, int n);
bool is_acute_corner(Site center, int n, Site v);

// Dense bidirectional index over a region's sites in canonical order.
class SiteIndexer {
  public:
    explicit SiteIndexer(const Region& region);

    int index(Site v) const {
        if (v.a < amin_ || v.b < bmin_) return -1;
        int col = v.a - amin_, row = v.b - bmin_;
        if (col >= width_ || row >= height_) return -1;
        return lookup_[static_cast<std::size_t>(row) * width_ + col];
    }
    Site site(int idx) const { return sites_[static_cast<std::size_t>(idx)]; }
    std::size_t size() const { return sites_.size(); }
    const Region& region() const { return region_; }
    const std::vector<Site>& sites() const { return sites_; }

  private:
    Region region_;
    int amin_ = 0, bmin_ = 0, width_ = 0, height_ = 0;
    std::vector<std::int32_t> lookup_;
    std::vector<Site> sites_;
};

}  // namespace perc
