#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "perc/lattice.hpp"

using namespace perc;

TEST_CASE("neighbors of the origin") {
    auto nb = neighbors({0, 0});
    std::set<std::pair<int, int>> got, want = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    for (Site v : nb) got.insert({v.a, v.b});
    CHECK(got == want);
    CHECK(nb.size() == 6);
}

TEST_CASE("neighbors translate") {
    Site v{3, -7};
    auto nb0 = neighbors({0, 0});
    auto nbv = neighbors(v);
    for (std::size_t i = 0; i < 6; ++i) CHECK(nbv[i] == nb0[i] + v);
}

TEST_CASE("adjacency is symmetric") {
    for (Site d : kNeighborOffsets) {
        bool found = false;
        for (Site e : kNeighborOffsets)
            if (d + e == Site{0, 0}) found = true;
        CHECK(found);
    }
}

TEST_CASE("ring sizes: |{v : norm = N}| = 8N for N <= 64") {
    for (int N = 1; N <= 64; ++N) {
        long count = 0;
        for (int b = -N; b <= N; ++b)
            for (int a = -N; a <= N; ++a)
                if (norm_inf({a, b}) == N) ++count;
        CHECK(count == 8L * N);
        CHECK(ring_walk({0, 0}, N).size() == static_cast<std::size_t>(8 * N));
    }
}

TEST_CASE("box sizes and membership") {
    for (int N : {0, 1, 5, 12}) {
        Region box = Region::box({0, 0}, N);
        CHECK(box.size() == static_cast<std::size_t>(2 * N + 1) * (2 * N + 1));
        CHECK(box.contains({N, -N}));
        CHECK(!box.contains({N + 1, 0}));
    }
    CHECK(Region::box({2, -1}, 3).contains({5, -4}));
}

TEST_CASE("boundary counts") {
    auto b1 = Region::box({0, 0}, 1).boundary();
    CHECK(b1.sites.size() == 8);
    CHECK(!b1.degenerate);
    auto b0 = Region::box({0, 0}, 0).boundary();
    CHECK(b0.sites.size() == 1);
    CHECK(b0.degenerate);
    auto p = Region::parallelogram(0, 2, 0, 2).boundary();
    CHECK(p.sites.size() == 8);
    for (int N = 1; N <= 32; ++N)
        CHECK(Region::box({0, 0}, N).boundary().sites.size() == static_cast<std::size_t>(8 * N));
}

TEST_CASE("annulus membership and decomposition") {
    Region ann = Region::annulus({0, 0}, 1, 3);
    CHECK(ann.contains({2, 0}));
    CHECK(!ann.contains({0, 0}));
    CHECK(ann.contains({1, 0}));  // inner ring included
    CHECK_THROWS_AS(Region::annulus({0, 0}, 4, 2), std::invalid_argument);

    // Box(0,N) = Annulus(0,n,N) + interior(Box(0,n)), site by site
    for (int N = 1; N <= 32; N += 3)
        for (int n = 1; n <= N; ++n) {
            Region box = Region::box({0, 0}, N);
            Region a = Region::annulus({0, 0}, n, N);
            std::size_t inner_count = 0, ann_count = 0;
            for (int b = -N; b <= N; ++b)
                for (int a2 = -N; a2 <= N; ++a2) {
                    Site v{a2, b};
                    bool in_ann = a.contains(v);
                    bool in_hole = norm_inf(v) < n;
                    CHECK(box.contains(v) == (in_ann || in_hole));
                    CHECK(!(in_ann && in_hole));
                    ann_count += in_ann;
                    inner_count += in_hole;
                }
            CHECK(ann_count + inner_count == box.size());
        }
}

TEST_CASE("half-plane annulus includes the b = 0 row") {
    Region h = Region::halfplane_annulus(1, 4);
    CHECK(h.contains({2, 0}));
    CHECK(!h.contains({2, -1}));
    CHECK(h.contains({-3, 3}));
}

TEST_CASE("ring walk is counterclockwise and complete") {
    for (int N : {1, 2, 5}) {
        auto walk = ring_walk({0, 0}, N);
        std::set<std::pair<int, int>> seen;
        double prev = -10;
        double total = 0;
        for (std::size_t i = 0; i < walk.size(); ++i) {
            CHECK(norm_inf(walk[i]) == N);
            seen.insert({walk[i].a, walk[i].b});
            auto [x, y] = euclid(walk[i]);
            double ang = std::atan2(y, x);
            if (i > 0) {
                double d = ang - prev;
                while (d < 0) d += 2 * 3.14159265358979323846;
                total += d;
                CHECK(d > 0);
                CHECK(d < 1.1);  // at most the 60 degrees between ring-1 sites
            }
            prev = ang;
        }
        CHECK(seen.size() == walk.size());
        CHECK(total < 2 * 3.2);  // one full turn
    }
}

TEST_CASE("half-plane walk runs left to right") {
    auto walk = halfplane_ring_walk(3);
    CHECK(walk.size() == 13);
    CHECK(walk.front() == Site{-3, 0});
    CHECK(walk.back() == Site{3, 0});
    for (Site v : walk) {
        CHECK(norm_inf(v) == 3);
        CHECK(v.b >= 0);
    }
    // left to right = angle decreasing from pi to 0
    for (std::size_t i = 1; i < walk.size(); ++i) {
        auto [x0, y0] = euclid(walk[i - 1]);
        auto [x1, y1] = euclid(walk[i]);
        CHECK(std::atan2(y1, x1) < std::atan2(y0, x0));
    }
}

TEST_CASE("acute corners touch no smaller ring") {
    for (int N : {1, 3, 7}) {
        for (Site corner : acute_corners({0, 0}, N)) {
            for (Site d : kNeighborOffsets) CHECK(norm_inf(corner + d) >= N);
            CHECK(is_acute_corner({0, 0}, N, corner));
        }
        // the two mixed corners do touch S_{N-1}
        for (Site corner : {Site{N, -N}, Site{-N, N}}) {
            bool touches = false;
            for (Site d : kNeighborOffsets) touches |= norm_inf(corner + d) < N;
            CHECK(touches);
            CHECK(!is_acute_corner({0, 0}, N, corner));
        }
    }
}

TEST_CASE("canonical enumeration is row-major and indexer round-trips") {
    Region ann = Region::annulus({1, -2}, 1, 4);
    SiteIndexer ix(ann);
    auto sites = ann.sites();
    CHECK(ix.size() == sites.size());
    for (std::size_t i = 1; i < sites.size(); ++i) {
        bool ordered = sites[i - 1].b < sites[i].b ||
                       (sites[i - 1].b == sites[i].b && sites[i - 1].a < sites[i].a);
        CHECK(ordered);
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        CHECK(ix.index(sites[i]) == static_cast<int>(i));
        CHECK(ix.site(static_cast<int>(i)) == sites[i]);
    }
    CHECK(ix.index({1, -2}) == -1);  // the hole is the annulus center
    CHECK(ix.index({99, 99}) == -1);
}

TEST_CASE("euclidean embedding") {
    auto [x, y] = euclid({0, 2});
    CHECK(x == doctest::Approx(1.0));
    CHECK(y == doctest::Approx(std::sqrt(3.0)));
}
