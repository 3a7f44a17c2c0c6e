#include "perc/lattice.hpp"

#include <algorithm>

namespace perc {

Region Region::parallelogram(int a1, int a2, int b1, int b2) {
    if (a1 > a2 || b1 > b2) throw std::invalid_argument("parallelogram: empty bounds");
    Region r;
    r.kind_ = RegionKind::Parallelogram;
    r.a1_ = a1;
    r.a2_ = a2;
    r.b1_ = b1;
    r.b2_ = b2;
    return r;
}

Region Region::box(Site center, int n) {
    if (n < 0) throw std::invalid_argument("box: negative size");
    Region r;
    r.kind_ = RegionKind::Box;
    r.center_ = center;
    r.outer_ = n;
    r.a1_ = center.a - n;
    r.a2_ = center.a + n;
    r.b1_ = center.b - n;
    r.b2_ = center.b + n;
    return r;
}

Region Region::annulus(Site center, int inner, int outer) {
    if (inner < 0 || inner > outer) throw std::invalid_argument("annulus: requires 0 <= n <= N");
    Region r;
    r.kind_ = RegionKind::Annulus;
    r.center_ = center;
    r.inner_ = inner;
    r.outer_ = outer;
    return r;
}

Region Region::halfplane_annulus(int inner, int outer) {
    if (inner < 0 || inner > outer)
        throw std::invalid_argument("halfplane_annulus: requires 0 <= n <= N");
    Region r;
    r.kind_ = RegionKind::HalfPlaneAnnulus;
    r.inner_ = inner;
    r.outer_ = outer;
    return r;
}

bool Region::contains(Site v) const {
    switch (kind_) {
        case RegionKind::Parallelogram:
        case RegionKind::Box:
            return a1_ <= v.a && v.a <= a2_ && b1_ <= v.b && v.b <= b2_;
        case RegionKind::Annulus: {
            int d = norm_inf(v - center_);
            return inner_ <= d && d <= outer_;
        }
        case RegionKind::HalfPlaneAnnulus: {
            if (v.b < 0) return false;
            int d = norm_inf(v);
            return inner_ <= d && d <= outer_;
        }
    }
    return false;
}

void Region::bounds(int& amin, int& amax, int& bmin, int& bmax) const {
    amin = amax = bmin = bmax = 0;
    switch (kind_) {
        case RegionKind::Parallelogram:
        case RegionKind::Box:
            amin = a1_, amax = a2_, bmin = b1_, bmax = b2_;
            return;
        case RegionKind::Annulus:
            amin = center_.a - outer_, amax = center_.a + outer_;
            bmin = center_.b - outer_, bmax = center_.b + outer_;
            return;
        case RegionKind::HalfPlaneAnnulus:
            amin = -outer_, amax = outer_, bmin = 0, bmax = outer_;
            return;
    }
}

std::vector<Site> Region::sites() const {
    int amin, amax, bmin, bmax;
    bounds(amin, amax, bmin, bmax);
    std::vector<Site> out;
    for (int b = bmin; b <= bmax; ++b)
        for (int a = amin; a <= amax; ++a) {
            Site v{a, b};
            if (contains(v)) out.push_back(v);
        }
    return out;
}

std::size_t Region::size() const {
    switch (kind_) {
        case RegionKind::Parallelogram:
        case RegionKind::Box:
            return static_cast<std::size_t>(a2_ - a1_ + 1) * static_cast<std::size_t>(b2_ - b1_ + 1);
        default:
            return sites().size();
    }
}

Region::Boundary Region::boundary() const {
    if (kind_ != RegionKind::Parallelogram && kind_ != RegionKind::Box)
        throw std::invalid_argument("boundary: defined for parallelograms and boxes");
    Boundary out;
    out.degenerate = (a2_ - a1_ < 2) || (b2_ - b1_ < 2);
    for (int b = b1_; b <= b2_; ++b)
        for (int a = a1_; a <= a2_; ++a)
            if (a == a1_ || a == a2_ || b == b1_ || b == b2_) out.sites.push_back({a, b});
    return out;
}

std::string Region::describe() const {
    switch (kind_) {
        case RegionKind::Parallelogram:
            return "par[" + std::to_string(a1_) + "," + std::to_string(a2_) + "]x[" +
                   std::to_string(b1_) + "," + std::to_string(b2_) + "]";
        case RegionKind::Box:
            return "box(" + std::to_string(center_.a) + "," + std::to_string(center_.b) + ";" +
                   std::to_string(outer_) + ")";
        case RegionKind::Annulus:
            return "ann(" + std::to_string(center_.a) + "," + std::to_string(center_.b) + ";" +
                   std::to_string(inner_) + "," + std::to_string(outer_) + ")";
        case RegionKind::HalfPlaneAnnulus:
            return "hann(" + std::to_string(inner_) + "," + std::to_string(outer_) + ")";
    }
    return "?";
}

std::vector<Site> ring_walk(Site c, int n) {
    if (n == 0) return {c};
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(8) * n);
    for (int b = -n; b <= n - 1; ++b) out.push_back(c + Site{n, b});    // right side
    for (int a = n; a >= -n + 1; --a) out.push_back(c + Site{a, n});    // top side
    for (int b = n; b >= -n + 1; --b) out.push_back(c + Site{-n, b});   // left side
    for (int a = -n; a <= n - 1; ++a) out.push_back(c + Site{a, -n});   // bottom side
    return out;
}

std::vector<Site> ring_walk(int a1, int a2, int b1, int b2) {
    std::vector<Site> out;
    if (a1 == a2 && b1 == b2) return {Site{a1, b1}};
    if (a1 == a2) {
        for (int b = b1; b <= b2; ++b) out.push_back({a1, b});
        return out;
    }
    if (b1 == b2) {
        for (int a = a1; a <= a2; ++a) out.push_back({a, b1});
        return out;
    }
    for (int b = b1; b <= b2 - 1; ++b) out.push_back({a2, b});
    for (int a = a2; a >= a1 + 1; --a) out.push_back({a, b2});
    for (int b = b2; b >= b1 + 1; --b) out.push_back({a1, b});
    for (int a = a1; a <= a2 - 1; ++a) out.push_back({a, b1});
    return out;
}

std::vector<Site> halfplane_ring_walk(int n) {
    if (n == 0) return {Site{0, 0}};
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(4) * n + 1);
    for (int b = 0; b <= n - 1; ++b) out.push_back({-n, b});
    for (int a = -n; a <= n; ++a) out.push_back({a, n});
    for (int b = n - 1; b >= 0; --b) out.push_back({n, b});
    return out;
}

std::array<Site, 2> acute_corners(Site c, int n) {
    return {c + Site{n, n}, c + Site{-n, -n}};
}

bool is_acute_corner(Site c, int n, Site v) {
    auto corners = acute_corners(c, n);
    return v == corners[0] || v == corners[1];
}

SiteIndexer::SiteIndexer(const Region& region) : region_(region) {
    int amax, bmax;
    region.bounds(amin_, amax, bmin_, bmax);
    width_ = amax - amin_ + 1;
    height_ = bmax - bmin_ + 1;
    lookup_.assign(static_cast<std::size_t>(width_) * height_, -1);
    sites_ = region.sites();
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        int col = sites_[i].a - amin_, row = sites_[i].b - bmin_;
        lookup_[static_cast<std::size_t>(row) * width_ + col] = static_cast<std::int32_t>(i);
    }
}

}  // namespace perc
