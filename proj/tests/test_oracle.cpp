#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perc/connectivity.hpp"
#include "perc/estimate.hpp"
#include "perc/oracle.hpp"
#include "test_support.hpp"

using namespace perc;

namespace {

std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("always-true event counts every configuration") {
    Region par = Region::parallelogram(0, 2, 0, 2);
    auto poly = exact_polynomial(par, [](const Config&) { return true; });
    CHECK(poly.m() == 9);
    for (int k = 0; k <= 9; ++k) CHECK(poly.counts()[k] == binom(9, k));
    for (double p : {0.1, 0.5, 0.9}) CHECK(poly.prob(p) == doctest::Approx(1.0));
}

TEST_CASE("crossing polynomial of [0,2]^2 is p") {
    Region par = Region::parallelogram(0, 2, 0, 2);
    auto ix = std::make_shared<SiteIndexer>(par);
    Config base(ix, std::vector<std::uint8_t>(ix->size(), 0), Provenance{});
    auto event = [&par](const Config& cfg) {
        return has_crossing(cfg, par, Dir::Horizontal, Color::Black);
    };
    auto poly = exact_polynomial(base, interior_sites(par), event);
    CHECK(poly.m() == 1);
    auto coeffs = poly.power_coeffs();
    REQUIRE(coeffs.size() == 2);
    CHECK(coeffs[0] == 0);
    CHECK(coeffs[1] == 1);
    CHECK(poly.to_json() == "{\"counts\":[0,1],\"m\":1}");
}

TEST_CASE("crossing probability of [0,3]^2 at p = 1/2 is exactly 1/2") {
    Region par = Region::parallelogram(0, 3, 0, 3);
    auto ix = std::make_shared<SiteIndexer>(par);
    Config base(ix, std::vector<std::uint8_t>(ix->size(), 0), Provenance{});
    auto event = [&par](const Config& cfg) {
        return has_crossing(cfg, par, Dir::Horizontal, Color::Black);
    };
    auto poly = exact_polynomial(base, interior_sites(par), event);
    CHECK(poly.m() == 4);
    std::int64_t satisfying = 0;
    for (auto c : poly.counts()) satisfying += c;
    CHECK(satisfying == 8);  // exactly half of the 16 interior colorings
}

TEST_CASE("complementarity of the polynomial pair") {
    for (int n : {2, 3}) {
        Region par = Region::parallelogram(0, n, 0, n);
        auto ix = std::make_shared<SiteIndexer>(par);
        Config base(ix, std::vector<std::uint8_t>(ix->size(), 0), Provenance{});
        auto black_h = exact_polynomial(base, interior_sites(par), [&par](const Config& c) {
            return has_crossing(c, par, Dir::Horizontal, Color::Black);
        });
        auto white_v = exact_polynomial(base, interior_sites(par), [&par](const Config& c) {
            return has_crossing(c, par, Dir::Vertical, Color::White);
        });
        const int m = black_h.m();
        for (int k = 0; k <= m; ++k)
            CHECK(black_h.counts()[k] + white_v.counts()[k] == binom(m, k));
    }
}

TEST_CASE("enumeration cap") {
    Region big = Region::box({0, 0}, 3);  // 49 sites
    CHECK_THROWS_AS(exact_polynomial(big, [](const Config&) { return true; }), CapExceeded);
}

TEST_CASE("exact Russo identity") {
    Region par2 = Region::parallelogram(0, 2, 0, 2);
    auto ix2 = std::make_shared<SiteIndexer>(par2);
    Config base2(ix2, std::vector<std::uint8_t>(ix2->size(), 0), Provenance{});
    auto ev2 = [&par2](const Config& c) {
        return has_crossing(c, par2, Dir::Horizontal, Color::Black);
    };
    auto r2 = exact_russo(base2, interior_sites(par2), ev2);
    CHECK(r2.equal);
    REQUIRE(r2.derivative.size() == 1);
    CHECK(r2.derivative[0] == 1);  // d/dp p = 1

    Region par3 = Region::parallelogram(0, 3, 0, 3);
    auto ix3 = std::make_shared<SiteIndexer>(par3);
    Config base3(ix3, std::vector<std::uint8_t>(ix3->size(), 0), Provenance{});
    auto ev3 = [&par3](const Config& c) {
        return has_crossing(c, par3, Dir::Horizontal, Color::Black);
    };
    auto r3 = exact_russo(base3, interior_sites(par3), ev3);
    CHECK(r3.equal);

    // always-true: both sides vanish
    auto rt = exact_russo(base3, interior_sites(par3), [](const Config&) { return true; });
    CHECK(rt.equal);
    for (auto c : rt.derivative) CHECK(c == 0);

    // a non-monotone event is rejected
    auto parity = [](const Config& cfg) {
        int blacks = 0;
        for (std::size_t i = 0; i < cfg.size(); ++i)
            blacks += cfg.at_index(static_cast<int>(i)) == Color::Black;
        return blacks % 2 == 0;
    };
    CHECK_THROWS_AS(exact_russo(base3, interior_sites(par3), parity), std::domain_error);
}

TEST_CASE("polynomial matches Monte Carlo at several parameters") {
    Region par = Region::parallelogram(0, 3, 0, 3);
    auto ix = std::make_shared<SiteIndexer>(par);
    Config base(ix, std::vector<std::uint8_t>(ix->size(), 0), Provenance{});
    auto event = [&par](const Config& cfg) {
        return has_crossing(cfg, par, Dir::Horizontal, Color::Black);
    };
    auto poly = exact_polynomial(base, interior_sites(par), event);
    for (double p : {0.2, 0.5, 0.8}) {
        auto rec = crossing_prob(p, 3, 3, 20000, 4242, 2);
        CHECK(poly.prob(p) >= rec.ci_low - 1e-12);
        CHECK(poly.prob(p) <= rec.ci_high + 1e-12);
    }
}

TEST_CASE("half-plane color switching at p = 1/2") {
    const std::vector<std::string> twos = {"BB", "BW", "WB", "WW"};
    for (const auto& a : twos)
        for (const auto& b : twos) {
            auto res = exact_color_switch_halfplane(0, 3, ColorSeq::parse(a), ColorSeq::parse(b));
            CHECK(res.equal);
            CHECK(res.prob_sigma == doctest::Approx(res.prob_sigma_prime));
        }
    auto one = exact_color_switch_halfplane(0, 3, ColorSeq::parse("B"), ColorSeq::parse("W"));
    CHECK(one.equal);
    auto same = exact_color_switch_halfplane(1, 4, ColorSeq::parse("BWB"), ColorSeq::parse("BWB"));
    CHECK(same.equal);
    CHECK_THROWS_AS(
        exact_color_switch_halfplane(0, 3, ColorSeq::parse("B"), ColorSeq::parse("BW")),
        std::invalid_argument);
    CHECK_THROWS_AS(
        exact_color_switch_halfplane(0, 8, ColorSeq::parse("B"), ColorSeq::parse("W")),
        CapExceeded);
}

TEST_CASE("brute force oracle sanity") {
    Region window = Region::box({0, 0}, 4);
    Region ann = Region::annulus({0, 0}, 1, 4);
    Config all_black = sample(window, ParamField::homogeneous(1.0), 1);
    CHECK(brute_force_arms(all_black, ann, ColorSeq::parse("B"), 0));
    CHECK(!brute_force_arms(all_black, ann, ColorSeq::parse("W"), 0));
    CHECK(!brute_force_arms(all_black, ann, ColorSeq::parse("BW"), 0));
    CHECK_THROWS_AS(
        brute_force_arms(all_black, Region::annulus({0, 0}, 1, 12), ColorSeq::parse("B"), 0),
        CapExceeded);
}
