#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"
#include "temple/errors.hpp"
#include "temple/profile.hpp"
#include "temple/system.hpp"

using namespace temple;

namespace {
const Box kBox{{-1.0, -1.0}, {1.0, 1.0}};
}

TEST_CASE("partition extracts the jump set of one invariant") {
    Profile constant = Profile::constant(0.0, 1.0, {0.25, 0.25});
    CHECK(constant.partition(0) == std::vector<double>{0.0, 1.0});

    Profile jump(0.0, 1.0, {0.5}, {{0.0, 0.0}, {0.0, -0.25}});
    CHECK(jump.partition(1) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(jump.partition(0) == std::vector<double>{0.0, 1.0});
}

TEST_CASE("constructor normalizes duplicate cells and checks ordering") {
    Profile p(0.0, 1.0, {0.3, 0.6}, {{0.5, 0.0}, {0.5, 0.0}, {0.25, 0.0}});
    CHECK(p.cell_count() == 2);
    CHECK(p.breakpoints() == std::vector<double>{0.6});

    CHECK_THROWS_AS(Profile(0.0, 1.0, {0.6, 0.3},
                            {{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}}),
                    Error);
    CHECK_THROWS_AS(Profile(1.0, 0.0, {}, {{0.0, 0.0}}), Error);
}

TEST_CASE("quantizer applies the floor-on-ties rounding rule") {
    GridLevel grid{2};
    Profile p(0.0, 1.0, {0.5}, {{0.0, 0.3}, {0.0, 0.1}});
    Profile q = quantize(p, grid, kBox);
    REQUIRE(q.cell_count() == 2);
    CHECK(q.values()[0][1] == 0.25);
    CHECK(q.values()[1][1] == 0.0);

    // Exact half-spacing takes the floor branch.
    Profile tie = Profile::constant(0.0, 1.0, {0.0, 0.125});
    CHECK(quantize(tie, grid, kBox).values()[0][1] == 0.0);
    Profile above = Profile::constant(0.0, 1.0, {0.0, 0.1250001});
    CHECK(quantize(above, grid, kBox).values()[0][1] == 0.25);
}

TEST_CASE("quantizer is idempotent and keeps grid profiles unchanged") {
    GridLevel grid{3};
    testgen::Rng rng(3);
    auto sys = make_diag2();
    for (int trial = 0; trial < 20; ++trial) {
        Profile p = testgen::random_grid_profile(rng, sys, grid, 0.0, 1.0, 6,
                                                 0.02);
        Profile q1 = quantize(p, grid, kBox);
        Profile q2 = quantize(q1, grid, kBox);
        CHECK(q1 == q2);
    }
}

TEST_CASE("fine ramps quantize to unit staircases") {
    GridLevel grid{2};
    // Piecewise constant sampling of a ramp from 0 to 0.5 across [0,1].
    const int cells = 64;
    std::vector<double> breaks;
    std::vector<WVec> vals;
    for (int k = 0; k < cells; ++k) {
        const double x = static_cast<double>(k) / cells;
        if (k > 0) breaks.push_back(x);
        vals.push_back({0.0, 0.5 * (x + 0.5 / cells)});
    }
    Profile ramp(0.0, 1.0, breaks, vals);
    Profile q = quantize(ramp, grid, kBox);

    for (std::size_t k = 0; k + 1 < q.cell_count(); ++k) {
        const double step = q.values()[k + 1][1] - q.values()[k][1];
        CHECK(step == 0.25);  // every jump is one upward quantum
    }
    CHECK(q.values().front()[1] == 0.0);
    CHECK(q.values().back()[1] == 0.5);
    CHECK(l1_distance(q, ramp) <= 1.0 * 2 * grid.spacing());
}

TEST_CASE("multi-quantum upward jumps split into a staircase at the jump") {
    GridLevel grid{2};
    Profile p(0.0, 1.0, {0.5}, {{0.0, 0.0}, {0.0, 0.75}});  // three quanta up
    Profile q = quantize(p, grid, kBox);
    REQUIRE(q.cell_count() == 4);
    for (std::size_t k = 0; k + 1 < q.cell_count(); ++k) {
        CHECK(q.values()[k + 1][1] - q.values()[k][1] == 0.25);
    }
    // The staircase sits inside the left cell, against the original jump.
    CHECK(q.breakpoints().back() == 0.5);
    for (double x : q.breakpoints()) {
        CHECK(x > 0.3);
        CHECK(x <= 0.5);
    }
}

TEST_CASE("quantization error obeys the per-level bound") {
    auto sys = make_diag2();
    testgen::Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        Profile p = testgen::random_downward_profile(rng, sys, 0.0, 1.0, 8);
        for (int nu = 1; nu <= 8; ++nu) {
            GridLevel grid{nu};
            Profile q = quantize(p, grid, kBox);
            CHECK(l1_distance(q, p) <= (1.0) * sys.n * grid.spacing() + 1e-12);
        }
    }
}

TEST_CASE("quantizer preserves the direction of data jumps") {
    auto sys = make_diag2();
    testgen::Rng rng(9);
    GridLevel grid{4};
    for (int trial = 0; trial < 20; ++trial) {
        Profile p = testgen::random_downward_profile(rng, sys, 0.0, 1.0, 8);
        Profile q = quantize(p, grid, kBox);
        for (std::size_t k = 0; k + 1 < q.cell_count(); ++k) {
            for (int i = 0; i < 2; ++i) {
                CHECK(q.values()[k + 1][i] <= q.values()[k][i]);
            }
        }
    }
}

TEST_CASE("quantizer keeps jump directions at surviving data breakpoints") {
    auto sys = make_diag2();
    testgen::Rng rng(27);
    for (int trial = 0; trial < 20; ++trial) {
        // Mixed-direction data off the grid.
        auto breaks = testgen::sorted_positions(rng, 0.0, 1.0,
                                                rng.integer(1, 6), 0.05);
        std::vector<WVec> vals;
        for (std::size_t k = 0; k <= breaks.size(); ++k) {
            vals.push_back({rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)});
        }
        Profile p(0.0, 1.0, breaks, vals);
        GridLevel grid{3};
        Profile q = quantize(p, grid, kBox);
        // At each original breakpoint the quantized jump never flips sign;
        // staircase splitting only inserts new breakpoints.
        for (double x : p.breakpoints()) {
            const WVec& before = p.value_at(x - 1e-12);
            const WVec& after = p.value_at(x);
            const WVec& qbefore = q.value_at(x - 1e-9);
            const WVec& qafter = q.value_at(x);
            for (int i = 0; i < 2; ++i) {
                if (after[i] > before[i]) {
                    CHECK(qafter[i] >= qbefore[i]);
                } else if (after[i] < before[i]) {
                    CHECK(qafter[i] <= qbefore[i]);
                }
            }
        }
    }
}

TEST_CASE("out-of-domain values are rejected") {
    GridLevel grid{2};
    Profile p = Profile::constant(0.0, 1.0, {1.5, 0.0});
    CHECK_THROWS_AS(quantize(p, grid, kBox), Error);
}

TEST_CASE("exact L1 distance over merged breakpoints") {
    Profile p1 = Profile::constant(0.0, 1.0, {0.0, 0.0});
    Profile p2 = Profile::constant(0.0, 1.0, {0.0, 0.5});
    CHECK(l1_distance(p1, p1) == 0.0);
    CHECK(l1_distance(p1, p2) == doctest::Approx(0.5));

    Profile p3(0.0, 1.0, {0.5}, {{0.0, 0.0}, {0.0, 0.25}});
    CHECK(l1_distance(p1, p3) == doctest::Approx(0.125));

    Profile other_interval = Profile::constant(0.0, 2.0, {0.0, 0.0});
    CHECK_THROWS_AS(l1_distance(p1, other_interval), Error);
}

TEST_CASE("total variation sums jump magnitudes per invariant") {
    Profile constant = Profile::constant(0.0, 1.0, {0.3, 0.3});
    CHECK(total_variation(constant, 0) == 0.0);

    Profile jump(0.0, 1.0, {0.5}, {{0.5, 0.0}, {0.0, 0.0}});
    CHECK(total_variation(jump, 0) == 0.5);

    // Staircase of four upward quanta at nu = 2.
    Profile stair(0.0, 1.0, {0.2, 0.4, 0.6, 0.8},
                  {{0.0, 0.0}, {0.0, 0.25}, {0.0, 0.5}, {0.0, 0.75},
                   {0.0, 1.0}});
    CHECK(total_variation(stair, 1) == doctest::Approx(1.0));
}
