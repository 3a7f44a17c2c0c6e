#pragma once
#include <type_traits>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "perc/config.hpp"
#include "perc/connectivity.hpp"
#include "perc/lattice.hpp"

namespace perc {

// A color word over {B,W}. Whole-plane arm events read it cyclically (two
// words are the same event iff equal up to rotation); half-plane events read
// it literally left-to-right.
class ColorSeq {
  public:
    ColorSeq() = default;
    explicit ColorSeq(std::vector<Color> word);
    static ColorSeq parse(std::string_view s);

    int size() const { return static_cast<int>(word_.size()); }
    Color at(int i) const { return word_[i]; }
    const std::vector<Color>& word() const { return word_; }

    ColorSeq rotated(int r) const;
    ColorSeq canonical() const;  // lexicographically minimal rotation, B < W
    ColorSeq inverted() const;
    bool is_constant() const;
    std::string str() const;

    // cyclic identification
    friend bool operator==(const ColorSeq& x, const ColorSeq& y) {
        return x.canonical().word_ == y.canonical().word_;
    }

  private:
    std::vector<Color> word_;
};

// Disjoint boundary arcs in counterclockwise order, as (start,length) ranges
// of positions along a boundary walk.
struct LandingSeq {
    struct Arc {
        int start = 0;
        int length = 0;
    };
    std::vector<Arc> arcs;
    int walk_len = 0;

    static LandingSeq make(std::vector<Arc> arcs, int walk_len);
    // The right, top, left, bottom sides of S_N as four disjoint arcs on
    // ring_walk(0,N); each corner is assigned to the side that starts there.
    static LandingSeq box_sides(int n);

    bool arc_contains(int arc, int pos) const;
};

struct ArmWitness {
    struct Arm {
        std::vector<Site> path;  // core sites, inner to outer
        Color color = Color::Black;
        int defects = 0;
        Site inner_end{}, outer_end{};  // color-free ring extremities
    };
    std::vector<Arm> arms;
};

void write_witness_csv(std::ostream& os, const ArmWitness& w);

// Smallest inner radius at which j arms fit on the inner boundary: least n
// with at least j sites of the ring of S_{n+1} touching S_n (the two acute
// corners never do).
int n0(int j);
// Half-plane analogue, counted on the upper-half ring.
int n0_halfplane(int j);

// Reusable annular detection geometry. Estimators build one domain per
// annulus and run detection over many per-sample color fields.
class ArmDomain {
  public:
    struct ColorFn {
        void* obj;
        Color (*call)(void*, int);
        template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, ColorFn>>>
        ColorFn(F& f)
            : obj(&f), call([](void* o, int i) { return (*static_cast<F*>(o))(i); }) {}
        ColorFn(const ColorFn&) = default;
        ColorFn& operator=(const ColorFn&) = default;
        Color operator()(int i) const { return call(obj, i); }
    };

    static ArmDomain concentric(Site center, int inner, int outer);
    static ArmDomain halfplane(int inner, int outer);
    // Generalized annulus: parallelogram minus one interior site.
    static ArmDomain box_minus_site(const Region& par, Site v);

    const std::vector<Site>& core() const { return sites_; }
    bool degenerate() const { return degenerate_; }
    bool cyclic() const { return cyclic_; }
    int inner_walk_len() const { return inner_land_len_; }
    int outer_walk_len() const { return outer_land_len_; }

    bool detect(ColorFn colors, const ColorSeq& sigma, const LandingSeq* inner_landing,
                const LandingSeq* outer_landing, int defects, ArmWitness* witness) const;
    int count_interfaces(ColorFn colors) const;

  private:
    std::vector<Site> sites_;
    std::vector<std::int32_t> adj_;       // CSR neighbor lists
    std::vector<std::int32_t> adj_off_;
    std::vector<std::uint8_t> inner_contact_, outer_contact_;
    std::vector<std::int32_t> order_pos_;  // position on the outer order walk, -1 elsewhere
    std::vector<std::int32_t> order_core_;  // walk position -> core id, -1 if absent
    int order_len_ = 0;
    bool cyclic_ = true;
    bool degenerate_ = false;
    int degenerate_cap_ = 0;
    std::optional<Site> degenerate_center_;    // box-minus-site degenerate geometry
    std::optional<Region> degenerate_region_;
    // landing adjacency: positions on the inner/outer boundary walks next to
    // each core site
    std::vector<std::vector<std::int32_t>> land_inner_, land_outer_;
    int inner_land_len_ = 0, outer_land_len_ = 0;
    std::vector<Site> inner_ring_of_;  // one adjacent inner ring site per core site ({-1,-1} pattern unused)
    std::vector<Site> outer_ring_of_;
    std::vector<std::int8_t> has_inner_ring_, has_outer_ring_;

    void finish(const std::vector<Site>& inner_walk, const std::vector<Site>& outer_walk,
                const std::vector<Site>& order_walk);
    friend struct Detector;
};

// Whole-plane arm event A_{j,sigma}(n,N): j vertex-disjoint arms crossing the
// annulus, colors in counterclockwise cyclic order, extremity colors relaxed.
// Throws if n < n0(j) (combinatorial obstruction).
std::optional<ArmWitness> has_arms(const Config& cfg, const Region& annulus,
                                   const ColorSeq& sigma);

// bar-A variant: arms additionally land inside prescribed disjoint arcs on
// the inner and/or outer boundary (arc i hosts arm i).
bool has_arms_with_landing(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                           const std::optional<LandingSeq>& inner,
                           const std::optional<LandingSeq>& outer);

// A^{(d)} variant: arm i may contain up to d sites of the opposite color.
// Exact; the mixed-color search is exponential in the worst case and meant
// for moderate annuli.
bool has_arms_with_defects(const Config& cfg, const Region& annulus, const ColorSeq& sigma,
                           int defects);

// Half-plane event B_{j,sigma}(n,N): arms confined to b >= 0, literal
// left-to-right color order.
bool has_halfplane_arms(const Config& cfg, const Region& half_annulus, const ColorSeq& sigma);

// Arms from interior site v to the boundary of the parallelogram, with
// optional landing arcs on ring_walk of its bounds (the pivotal-site
// characterization uses sigma = BWBW with the four sides).
bool has_site_to_boundary_arms(const Config& cfg, const Region& par, Site v,
                               const ColorSeq& sigma, const std::optional<LandingSeq>& outer);

// Interface curves of the dual hexagonal lattice crossing the annulus;
// equals the crossing-cluster count when both colors cross, always even.
int count_interfaces(const Config& cfg, const Region& annulus);

// Sites whose flip toggles the crossing event; computed from the flip
// definition via cluster merging, with planar duality deciding the
// flip-to-opposite direction.
std::vector<Site> pivotal_sites(const Config& cfg, const Region& par, Dir dir, Color c);

}  // namespace perc
