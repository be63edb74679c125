#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "quadq/geometry.hpp"
#include "quadq/rng.hpp"
#include "quadq/stats.hpp"

using namespace quadq;

TEST_SUITE_BEGIN("geometry");

namespace {
constexpr double kNm = 1e-9;
}

TEST_CASE("ideal 4QD square layout") {
    auto g = make_ideal_geometry(GeometryKind::Quadrupole4QD, 20 * kNm, 20 * kNm);
    REQUIRE(g.dots.size() == 4);
    std::set<std::pair<double, double>> lateral;
    for (const auto& d : g.dots) {
        lateral.insert({d.x / kNm, d.y / kNm});
        CHECK(d.z == -20 * kNm);
    }
    std::set<std::pair<double, double>> expected = {
        {-10, 10}, {10, 10}, {10, -10}, {-10, -10}};
    CHECK(lateral == expected);

    Vec3 c = centroid(g);
    CHECK(c.x == 0.0);
    CHECK(c.y == 0.0);
    CHECK(c.z == doctest::Approx(-20 * kNm));

    // exact centroid symmetry: A + C == B + D
    Vec3 ac = g.dots[0] + g.dots[2];
    Vec3 bd = g.dots[1] + g.dots[3];
    CHECK(ac.x == bd.x);
    CHECK(ac.y == bd.y);
    CHECK(ac.z == bd.z);

    CHECK(g.occupied("0") == std::vector<int>{0, 2});
    CHECK(g.occupied("1") == std::vector<int>{1, 3});
    CHECK(g.occupied("eps0") == std::vector<int>{0, 1});
    CHECK(g.occupied("eps1") == std::vector<int>{2, 3});
}

TEST_CASE("ideal 2QD layout") {
    auto g = make_ideal_geometry(GeometryKind::Dipole2QD, 20 * kNm, 20 * kNm);
    REQUIRE(g.dots.size() == 2);
    CHECK(g.dots[0].x == -10 * kNm);
    CHECK(g.dots[1].x == 10 * kNm);
    CHECK(g.dots[0].y == 0.0);
    CHECK(g.dots[0].z == -20 * kNm);
    CHECK(g.occupied("0") == std::vector<int>{0});
    CHECK(g.occupied("1") == std::vector<int>{1});
}

TEST_CASE("state charge centroids coincide for ideal 4QD") {
    auto g = make_ideal_geometry(GeometryKind::Quadrupole4QD, 20 * kNm, 17 * kNm);
    Vec3 c = centroid(g);
    for (const char* label : {"0", "1"}) {
        Vec3 occ{};
        for (int d : g.occupied(label)) occ += g.dots[static_cast<std::size_t>(d)];
        occ = occ / 2.0;
        CHECK(occ.x == c.x);
        CHECK(occ.y == c.y);
        CHECK(occ.z == c.z);
    }
}

TEST_CASE("invalid dimensions rejected") {
    CHECK_THROWS_AS(make_ideal_geometry(GeometryKind::Dipole2QD, 0.0, 20 * kNm),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_ideal_geometry(GeometryKind::Quadrupole4QD, 20 * kNm, -1.0),
                    std::invalid_argument);
}

TEST_CASE("centroid of explicit dots") {
    QubitGeometry g;
    g.dots = {{0, 0, 0}, {2, 0, 0}};
    g.side_length = 2.0;
    Vec3 c = centroid(g);
    CHECK(c.x == 1.0);
    CHECK(c.y == 0.0);
    CHECK(c.z == 0.0);
}

TEST_CASE("trap sampling basics") {
    SampleRegion region{100 * kNm, 100 * kNm, 0.0, {}};

    SUBCASE("zero density gives empty ensemble") {
        auto e = sample_traps(region, 0.0, 2e8, 1);
        CHECK(e.traps.empty());
    }
    SUBCASE("count equals round(density * area)") {
        double density = 50.0 / region.area();
        auto e = sample_traps(region, density, 2e8, 1);
        CHECK(e.traps.size() == 50);
        // deterministic count: mean over seeds equals density * area exactly
        for (std::uint64_t s = 2; s < 10; ++s) {
            CHECK(sample_traps(region, density, 2e8, s).traps.size() == 50);
        }
    }
    SUBCASE("positions stay inside the region") {
        auto e = sample_traps(region, 2000.0 / region.area(), 2e8, 3);
        for (const auto& t : e.traps) {
            CHECK(std::abs(t.position.x) <= region.width / 2);
            CHECK(std::abs(t.position.y) <= region.height / 2);
            CHECK(t.position.z == 0.0);
        }
    }
    SUBCASE("same seed reproduces the ensemble") {
        auto a = sample_traps(region, 1e-3 / (kNm * kNm), 2e8, 77);
        auto b = sample_traps(region, 1e-3 / (kNm * kNm), 2e8, 77);
        REQUIRE(a.traps.size() == b.traps.size());
        for (std::size_t i = 0; i < a.traps.size(); ++i) {
            CHECK(a.traps[i].position.x == b.traps[i].position.x);
            CHECK(a.traps[i].position.y == b.traps[i].position.y);
        }
    }
    SUBCASE("zero area with positive density rejected") {
        SampleRegion degenerate{0.0, 1.0, 0.0, {}};
        CHECK_THROWS_AS(sample_traps(degenerate, 1.0, 2e8, 1), std::invalid_argument);
    }
}

TEST_CASE("fixed-count mode derives the window from the density") {
    double density = 1e15;
    auto g = make_ideal_geometry(GeometryKind::Quadrupole4QD, 20 * kNm, 20 * kNm);
    auto e = sample_traps_fixed(100, density, 2e8, 5, &g);
    CHECK(e.traps.size() == 100);
    double expected_side = std::sqrt(100.0 / density);
    CHECK(e.region.width == doctest::Approx(expected_side));
    CHECK(e.region.height == doctest::Approx(expected_side));
    for (const auto& t : e.traps) {
        CHECK(std::abs(t.position.x) <= expected_side / 2);
        CHECK(t.rate == 2e8);
    }
}

TEST_CASE("minimum standoff honored for in-plane dots") {
    QubitGeometry g;
    g.kind = GeometryKind::Dipole2QD;
    g.side_length = 20 * kNm;
    g.dots = {{-10 * kNm, 0, 0}, {10 * kNm, 0, 0}};  // in the trap plane
    g.occupancy = {{"0", {0}}, {"1", {1}}};
    SampleRegion region{60 * kNm, 60 * kNm, 0.0, {}};
    auto e = sample_traps(region, 400.0 / region.area(), 2e8, 11, &g, 8 * kNm);
    REQUIRE(e.traps.size() == 400);
    for (const auto& t : e.traps) {
        for (const auto& d : g.dots) {
            CHECK(t.position.distance(d) >= 8 * kNm);
        }
    }
}

TEST_CASE("perturbation statistics and determinism") {
    auto g = make_ideal_geometry(GeometryKind::Quadrupole4QD, 20 * kNm, 20 * kNm);

    SUBCASE("sigma = 0 is the identity") {
        auto p = perturb_geometry(g, 0.0, 9);
        for (std::size_t i = 0; i < g.dots.size(); ++i) {
            CHECK(p.dots[i].x == g.dots[i].x);
            CHECK(p.dots[i].y == g.dots[i].y);
            CHECK(p.dots[i].z == g.dots[i].z);
        }
    }
    SUBCASE("same seed gives the same perturbation, occupancy unchanged") {
        auto a = perturb_geometry(g, 0.1, 4);
        auto b = perturb_geometry(g, 0.1, 4);
        for (std::size_t i = 0; i < a.dots.size(); ++i) {
            CHECK(a.dots[i].x == b.dots[i].x);
            CHECK(a.dots[i].z == b.dots[i].z);
        }
        CHECK(a.occupancy == g.occupancy);
        auto c = perturb_geometry(g, 0.1, 5);
        CHECK(a.dots[0].x != c.dots[0].x);
    }
    SUBCASE("per-axis displacement std is sigma * side within 2%") {
        // sigma = 0.1 on a 20 nm array -> 2 nm per axis
        std::vector<double> dx;
        dx.reserve(100000);
        for (std::uint64_t s = 0; s < 25000; ++s) {
            auto p = perturb_geometry(g, 0.1, s);
            for (std::size_t i = 0; i < 4; ++i) {
                dx.push_back(p.dots[i].x - g.dots[i].x);
            }
        }
        double sd = sample_stddev(dx);
        CHECK(sd == doctest::Approx(2 * kNm).epsilon(0.02));
        CHECK(std::abs(mean(dx)) < 3.0 * standard_error(dx));
    }
}

TEST_SUITE_END();
