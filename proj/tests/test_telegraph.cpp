#include <doctest.h>

#include <stdexcept>

#include <algorithm>

#include <cmath>
#include <vector>

#include "quadq/stats.hpp"
#include "quadq/telegraph.hpp"

using namespace quadq;

TEST_SUITE_BEGIN("telegraph");

TEST_CASE("negligible rate produces no switches") {
    int switches = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        switches += static_cast<int>(sample_record({1e-6, 1, s}, 1.0).switch_times.size());
    }
    CHECK(switches == 0);
}

TEST_CASE("switch count matches lambda * horizon") {
    // Fig. 2 rate over a 50 ps horizon: mean count 0.01
    const double rate = 2e8, horizon = 50e-12;
    const int n = 100000;
    std::vector<double> counts;
    counts.reserve(n);
    for (std::uint64_t s = 0; s < n; ++s) {
        counts.push_back(static_cast<double>(sample_record({rate, 0, s}, horizon)
                                                 .switch_times.size()));
    }
    double expected = rate * horizon;
    CHECK(std::abs(mean(counts) - expected) < 3.0 * standard_error(counts));
}

TEST_CASE("stationary symmetric initial sign") {
    const int n = 100000;
    std::vector<double> signs;
    signs.reserve(n);
    for (std::uint64_t s = 0; s < n; ++s) {
        auto rec = sample_record({2e8, 0, s}, 10e-9);
        signs.push_back(rec.sign_at(5e-9));
    }
    CHECK(std::abs(mean(signs)) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("switch counts are Poisson: chi-square GOF at the 0.1% level") {
    const double rate = 2e8, horizon = 10e-9;  // lambda*T = 2
    const int n = 100000;
    const double lt = rate * horizon;
    std::vector<long> observed(10, 0);  // bins 0..8 and >= 9
    for (std::uint64_t s = 0; s < n; ++s) {
        auto c = sample_record({rate, 0, s}, horizon).switch_times.size();
        observed[std::min<std::size_t>(c, 9)]++;
    }
    double chi2 = 0.0;
    double pmf = std::exp(-lt);  // P(0)
    double tail = 1.0;
    for (int k = 0; k < 9; ++k) {
        double expected = n * pmf;
        chi2 += (observed[static_cast<std::size_t>(k)] - expected) *
                (observed[static_cast<std::size_t>(k)] - expected) / expected;
        tail -= pmf;
        pmf *= lt / (k + 1);
    }
    double expected_tail = n * tail;
    chi2 += (observed[9] - expected_tail) * (observed[9] - expected_tail) / expected_tail;
    // chi-square 0.999 quantile, 9 degrees of freedom
    CHECK(chi2 < 27.877);
}

TEST_CASE("autocorrelation decays as exp(-2 lambda t)") {
    const double rate = 2e8, horizon = 10e-9;
    const int n = 100000;
    for (double t : {0.5e-9, 1.25e-9, 2.5e-9}) {
        std::vector<double> prods;
        prods.reserve(n);
        for (std::uint64_t s = 0; s < n; ++s) {
            auto rec = sample_record({rate, 0, s + 7000000}, horizon);
            prods.push_back(static_cast<double>(rec.sign_at(0.0) * rec.sign_at(t)));
        }
        double expected = std::exp(-2.0 * rate * t);
        CHECK(std::abs(mean(prods) - expected) < 4.0 * standard_error(prods));
    }
}

TEST_CASE("determinism and pinned initial sign") {
    auto a = sample_record({2e8, 0, 42}, 10e-9);
    auto b = sample_record({2e8, 0, 42}, 10e-9);
    CHECK(a.initial_sign == b.initial_sign);
    CHECK(a.switch_times == b.switch_times);
    CHECK(sample_record({2e8, -1, 9}, 1e-9).initial_sign == -1);
    CHECK(sample_record({2e8, 1, 9}, 1e-9).initial_sign == 1);
}

TEST_CASE("integrate_xi exact piecewise integral") {
    SUBCASE("no switches") {
        SwitchingRecord rec{{}, 1, 10e-9};
        CHECK(integrate_xi(rec, 3e-9) == doctest::Approx(3e-9).epsilon(1e-15));
    }
    SUBCASE("single switch at t/2 cancels") {
        SwitchingRecord rec{{1.5e-9}, 1, 10e-9};
        CHECK(integrate_xi(rec, 3e-9) == doctest::Approx(0.0));
    }
    SUBCASE("t outside horizon rejected") {
        SwitchingRecord rec{{}, 1, 1e-9};
        CHECK_THROWS_AS(integrate_xi(rec, 2e-9), std::out_of_range);
    }
    SUBCASE("random record equals signed segment sum; Riemann sum agrees") {
        auto rec = sample_record({5e8, 0, 123}, 20e-9);
        REQUIRE(!rec.switch_times.empty());
        double t = 17.3e-9;

        // independent oracle: signed lengths of the switching segments
        double expected = 0.0;
        double prev = 0.0;
        int sign = rec.initial_sign;
        for (double s : rec.switch_times) {
            if (s >= t) break;
            expected += sign * (s - prev);
            prev = s;
            sign = -sign;
        }
        expected += sign * (t - prev);
        CHECK(integrate_xi(rec, t) == doctest::Approx(expected).epsilon(1e-12));

        // dense Riemann sum, accuracy limited by the bin width per switch
        const int bins = 10000;
        double dt = t / bins, riemann = 0.0;
        for (int i = 0; i < bins; ++i) riemann += rec.sign_at((i + 0.5) * dt) * dt;
        double bound = 2.0 * dt * static_cast<double>(rec.switch_times.size() + 1);
        CHECK(std::abs(riemann - integrate_xi(rec, t)) < bound);
    }
    SUBCASE("grid sweep matches pointwise evaluation") {
        auto rec = sample_record({5e8, 0, 321}, 20e-9);
        auto grid = std::vector<double>{0.0, 1e-9, 2.5e-9, 7e-9, 13e-9, 20e-9};
        auto swept = integrate_xi_grid(rec, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(swept[i] == doctest::Approx(integrate_xi(rec, grid[i])).epsilon(1e-13));
        }
    }
}

TEST_CASE("merged segments refine all partitions") {
    SUBCASE("two empty records give one segment") {
        SwitchingRecord a{{}, 1, 3e-9}, b{{}, -1, 3e-9};
        auto segs = merged_segments({a, b}, 3e-9);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].t_start == 0.0);
        CHECK(segs[0].t_end == 3e-9);
        CHECK(segs[0].signs == std::vector<int>{1, -1});
    }
    SUBCASE("interleaved switches") {
        SwitchingRecord a{{1e-9}, 1, 3e-9}, b{{2e-9}, 1, 3e-9};
        auto segs = merged_segments({a, b}, 3e-9);
        REQUIRE(segs.size() == 3);
        CHECK(segs[0].t_end == 1e-9);
        CHECK(segs[1].t_end == 2e-9);
        CHECK(segs[2].t_end == 3e-9);
        CHECK(segs[1].signs == std::vector<int>{-1, 1});
        CHECK(segs[2].signs == std::vector<int>{-1, -1});
    }
    SUBCASE("segment count and midpoint signs on random records") {
        std::vector<SwitchingRecord> records;
        std::size_t total_switches = 0;
        for (std::uint64_t s = 0; s < 5; ++s) {
            records.push_back(sample_record({3e8, 0, s + 50}, 15e-9));
            total_switches += records.back().switch_times.size();
        }
        auto segs = merged_segments(records, 15e-9);
        CHECK(segs.size() == total_switches + 1);
        for (const auto& seg : segs) {
            double mid = 0.5 * (seg.t_start + seg.t_end);
            for (std::size_t r = 0; r < records.size(); ++r) {
                CHECK(seg.signs[r] == records[r].sign_at(mid));
            }
        }
    }
    SUBCASE("short record horizon rejected") {
        SwitchingRecord a{{}, 1, 1e-9};
        CHECK_THROWS_AS(merged_segments({a}, 2e-9), std::invalid_argument);
    }
}

TEST_SUITE_END();
