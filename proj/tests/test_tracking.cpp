#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "temple/errors.hpp"
#include "temple/tracking.hpp"

using namespace temple;

namespace {
const GridLevel kGrid{2};

SimState synthetic_two_front_state() {
    // Hand-built chained field; speeds are synthetic, not RH values.
    SimState st;
    st.a = 0.0;
    st.b = 1.0;
    st.grid = kGrid;
    st.left_state = {0.0, 0.0};
    st.right_state = {0.0, 0.5};
    Front f1{1, {0.0, 0.0}, {0.0, 0.25}, 0.2, 1.0,
             FrontKind::RarefactionQuantum};
    Front f2{1, {0.0, 0.25}, {0.0, 0.5}, 0.4, 0.9,
             FrontKind::RarefactionQuantum};
    st.fronts = {f1, f2};
    st.control_a = BoundaryControl::constant({0.0, 0.0});
    st.control_b = BoundaryControl::constant({0.0, 0.5});
    return st;
}
}  // namespace

TEST_CASE("matching constant data seeds an empty field") {
    auto sys = make_diag2();
    Profile initial = Profile::constant(0.0, 1.0, {0.25, -0.5});
    auto ctl = BoundaryControl::constant({0.25, -0.5});
    SimState st = init_forward(sys, initial, ctl, ctl, kGrid);
    CHECK(st.fronts.empty());
    CHECK(st.left_state == WVec{0.25, -0.5});
    CHECK(st.right_state == WVec{0.25, -0.5});
}

TEST_CASE("initial jump seeds one shock with the averaged speed") {
    auto sys = make_diag2();
    Profile initial(0.0, 1.0, {0.5}, {{0.0, 0.0}, {0.0, -0.25}});
    auto ua = BoundaryControl::constant({0.0, 0.0});
    auto ub = BoundaryControl::constant({0.0, -0.25});
    SimState st = init_forward(sys, initial, ua, ub, kGrid);
    REQUIRE(st.fronts.size() == 1);
    CHECK(st.fronts[0].position == 0.5);
    CHECK(st.fronts[0].speed == doctest::Approx(0.96875));
    CHECK(st.fronts[0].kind == FrontKind::Shock);
}

TEST_CASE("boundary mismatch at t=0 sends one front into the domain") {
    auto sys = make_diag2();
    Profile initial = Profile::constant(0.0, 1.0, {0.0, 0.0});
    auto ua = BoundaryControl::constant({0.5, 0.25});
    auto ub = BoundaryControl::constant({0.0, 0.0});
    SimState st = init_forward(sys, initial, ua, ub, kGrid);
    REQUIRE(st.fronts.size() == 1);
    CHECK(st.fronts[0].position == 0.0);
    CHECK(st.fronts[0].family == 1);
    CHECK(st.fronts[0].speed == doctest::Approx(1.03125));
    CHECK(st.left_state == WVec{0.0, 0.25});
}

TEST_CASE("next_event picks the earliest of collision and exit") {
    auto sys = make_diag2();
    SimState st = synthetic_two_front_state();
    // Collision would happen at t = 2 (gap 0.2, closing speed 0.1) but the
    // leading front reaches x = 1 at t = (1 - 0.4) / 0.9 first.
    auto pe = next_event(sys, st, 10.0);
    REQUIRE(pe.has_value());
    CHECK(pe->kind == EventKind::BoundaryHit);
    CHECK(pe->time == doctest::Approx(0.6 / 0.9));
    CHECK(pe->position == 1.0);

    CHECK_FALSE(next_event(sys, st, 0.1).has_value());
}

TEST_CASE("next_event on a quiet field reports nothing") {
    auto sys = make_diag2();
    SimState st;
    st.a = 0.0;
    st.b = 1.0;
    st.grid = kGrid;
    st.left_state = st.right_state = {0.0, 0.0};
    st.control_a = st.control_b = BoundaryControl::constant({0.0, 0.0});
    CHECK_FALSE(next_event(sys, st, 100.0).has_value());
}

TEST_CASE("single negative front exits at the left boundary") {
    auto sys = make_diag2();
    SimState st;
    st.a = 0.0;
    st.b = 1.0;
    st.grid = kGrid;
    st.left_state = {0.25, 0.0};
    st.right_state = {0.0, 0.0};
    st.fronts = {Front{0, {0.25, 0.0}, {0.0, 0.0}, 0.5, -1.0,
                       FrontKind::Shock}};
    st.control_a = BoundaryControl::constant({0.25, 0.0});
    st.control_b = BoundaryControl::constant({0.0, 0.0});
    auto pe = next_event(sys, st, 10.0);
    REQUIRE(pe.has_value());
    CHECK(pe->kind == EventKind::BoundaryHit);
    CHECK(pe->time == doctest::Approx(0.5));
    CHECK(pe->position == 0.0);
}

TEST_CASE("constant data stays constant") {
    auto sys = make_diag2();
    Profile initial = Profile::constant(0.0, 1.0, {0.25, -0.5});
    auto ctl = BoundaryControl::constant({0.25, -0.5});
    Trajectory traj = run_forward(sys, initial, ctl, ctl, kGrid, 2.0, {1.0});
    CHECK(traj.events.empty());
    for (const auto& snap : traj.snapshots) {
        CHECK(snap.cell_count() == 1);
        CHECK(snap.values()[0] == WVec{0.25, -0.5});
    }
}

TEST_CASE("a single quantum travels at its averaged speed") {
    auto sys = make_diag2();
    Profile initial(0.0, 1.0, {0.2}, {{0.0, 0.0}, {0.0, 0.25}});
    auto ua = BoundaryControl::constant({0.0, 0.0});
    auto ub = BoundaryControl::constant({0.0, 0.25});
    Trajectory traj = run_forward(sys, initial, ua, ub, kGrid, 0.5, {0.5});
    const Profile& at_half = traj.final_profile();
    REQUIRE(at_half.breakpoints().size() == 1);
    CHECK(at_half.breakpoints()[0] == doctest::Approx(0.715625).epsilon(1e-12));
}

TEST_CASE("shock absorbs a quantum at the interaction point") {
    auto sys = make_diag2();
    // 2-shock (0.25 -> -0.25) at 0.3 runs at 1.0; the quantum
    // (-0.25 -> 0) ahead at 0.5 runs at 0.96875; they meet at t = 6.4.
    Profile initial(0.0, 10.0, {0.3, 0.5},
                    {{0.0, 0.25}, {0.0, -0.25}, {0.0, 0.0}});
    auto ua = BoundaryControl::constant({0.0, 0.25});
    auto ub = BoundaryControl::constant({0.0, 0.0});
    Trajectory traj = run_forward(sys, initial, ua, ub, kGrid, 8.0, {8.0});

    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].kind == EventKind::Interaction);
    CHECK(traj.events[0].time == doctest::Approx(6.4));
    CHECK(traj.events[0].position == doctest::Approx(0.3 + 6.4 * 1.0));
    CHECK(traj.events[0].pre_fronts == 2);
    CHECK(traj.events[0].post_fronts == 1);

    const Profile& end = traj.final_profile();
    REQUIRE(end.breakpoints().size() == 1);
    // Merged shock 0.25 -> 0 moves at 1.03125 from the interaction point.
    CHECK(end.breakpoints()[0] ==
          doctest::Approx(6.7 + 1.6 * 1.03125).epsilon(1e-12));
    CHECK(traj.wave_count_ok);
    CHECK(traj.tv_ok);
}

TEST_CASE("simultaneous three-front collision resolves as one group") {
    auto sys = make_diag2();
    // Family-2 shock (0.5 -> -0.25, speed 1.03125) catches the quantum
    // (-0.25 -> 0, speed 0.96875) at (t, x) = (4.8, 5.05); the family-1
    // shock launched from 10.0 at -1.03125 passes the same point at the
    // same instant.
    Profile initial(0.0, 20.0, {0.1, 0.4, 10.0},
                    {{0.0, 0.5}, {0.0, -0.25}, {0.0, 0.0}, {-0.25, 0.0}});
    auto ua = BoundaryControl::constant({0.0, 0.5});
    auto ub = BoundaryControl::constant({-0.25, 0.0});
    GridLevel grid{2};
    Trajectory traj = run_forward(sys, initial, ua, ub, grid, 7.0, {7.0});

    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].kind == EventKind::Interaction);
    CHECK(traj.events[0].time == doctest::Approx(4.8).epsilon(1e-12));
    CHECK(traj.events[0].pre_fronts == 3);
    CHECK(traj.events[0].post_fronts == 2);

    // Outgoing state equals the Riemann solution of the extreme states.
    const Profile& end = traj.final_profile();
    REQUIRE(end.cell_count() == 3);
    CHECK(end.values()[0] == WVec{0.0, 0.5});
    CHECK(end.values()[1] == WVec{-0.25, 0.5});
    CHECK(end.values()[2] == WVec{-0.25, 0.0});
    // 1-shock at 5.05 - 2.2 * 1.03125, 2-shock at 5.05 + 2.2 * 1.0625.
    CHECK(end.breakpoints()[0] == doctest::Approx(2.78125).epsilon(1e-12));
    CHECK(end.breakpoints()[1] == doctest::Approx(7.3875).epsilon(1e-12));

    // The brute-force reference agrees.
    Profile expect = oracle::evolve_decoupled(oracle::diag2_laws(), 0.0, 20.0,
                                              initial, {0.0, 0.5},
                                              {-0.25, 0.0}, grid.nu, 7.0);
    CHECK(l1_distance(end, expect) <= 1e-9);
}

TEST_CASE("conservation: interior change balances the boundary fluxes") {
    auto sys = make_diag2();
    testgen::Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        GridLevel grid{3};
        Profile initial =
            testgen::small_scenario_profile(rng, sys, grid, 0.0, 1.0);
        auto ua = BoundaryControl::constant(initial.values().front());
        auto ub = BoundaryControl::constant(initial.values().back());
        // An event-free window strictly before the first event.
        WaveEngine probe(sys, grid, 0.0, 1.0, +1.0);
        SimState st = init_forward(sys, initial, ua, ub, grid);
        probe.set_controls(&st.control_a, &st.control_b);
        probe.seed(st.fronts, st.left_state, st.right_state);
        auto pe = probe.peek(100.0);
        const double t2 = pe ? 0.9 * pe->time : 0.5;
        if (!(t2 > 0)) continue;
        const double t1 = 0.1 * t2;

        Trajectory traj =
            run_forward(sys, initial, ua, ub, grid, t2, {t1, t2});
        const Profile& p1 = traj.snapshots[0];
        const Profile& p2 = traj.snapshots[1];
        for (int c = 0; c < sys.n; ++c) {
            const double interior =
                testgen::integral(p2, c) - testgen::integral(p1, c);
            const WVec fl = sys.flux(p1.value_at(0.0));
            const WVec fr = sys.flux(p1.value_at(1.0));
            const double through = (fl[c] - fr[c]) * (t2 - t1);
            CHECK(std::abs(interior - through) <= 1e-9);
        }
    }
}

TEST_CASE("control jumps splice entering fronts") {
    auto sys = make_diag2();
    Profile initial = Profile::constant(0.0, 1.0, {0.0, 0.0});
    auto ua = BoundaryControl::constant({0.0, 0.0});
    ua.append(0.25, {0.0, 0.25});
    auto ub = BoundaryControl::constant({0.0, 0.0});
    Trajectory traj = run_forward(sys, initial, ua, ub, kGrid, 0.5, {0.5});

    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].kind == EventKind::ControlJumpLeft);
    const Profile& end = traj.final_profile();
    REQUIRE(end.breakpoints().size() == 1);
    CHECK(end.breakpoints()[0] == doctest::Approx(0.25 * 1.03125));
    CHECK(end.values()[0] == WVec{0.0, 0.25});
    CHECK(end.values()[1] == WVec{0.0, 0.0});
}

TEST_CASE("boundary hit coinciding with a control jump merges into one event") {
    auto sys = make_diag2();
    GridLevel grid{3};
    // The 1-shock (0.125 -> -0.125) runs at exactly -1 and exits x=0 at
    // t = 0.5, the same instant the left control jumps.
    Profile initial(0.0, 1.0, {0.5}, {{0.125, 0.0}, {-0.125, 0.0}});
    auto ua = BoundaryControl::constant({0.125, 0.0});
    ua.append(0.5, {-0.125, 0.5});
    auto ub = BoundaryControl::constant({-0.125, 0.0});

    Trajectory traj = run_forward(sys, initial, ua, ub, grid, 1.0, {1.0});
    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].kind == EventKind::ControlJumpLeft);
    CHECK(traj.events[0].time == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(traj.events[0].pre_fronts == 1);
    CHECK(traj.events[0].post_fronts == 1);
    // The new boundary value acts on the post-exit trace.
    const Profile& end = traj.final_profile();
    REQUIRE(end.cell_count() == 2);
    CHECK(end.values()[0] == WVec{-0.125, 0.5});
    CHECK(end.values()[1] == WVec{-0.125, 0.0});
    CHECK(end.breakpoints()[0] == doctest::Approx(0.53125).epsilon(1e-13));
}

TEST_CASE("event cap raises the runaway error") {
    auto sys = make_diag2();
    Profile initial = Profile::constant(0.0, 1.0, {0.0, 0.0});
    auto ua = BoundaryControl::constant({0.0, 0.0});
    for (int k = 1; k <= 100; ++k) {
        ua.append(0.02 * k, {0.0, (k % 2) ? 0.25 : 0.0});
    }
    auto ub = BoundaryControl::constant({0.0, 0.0});
    EngineOptions opts;
    opts.max_events = 20;
    try {
        run_forward(sys, initial, ua, ub, GridLevel{4}, 5.0, {}, opts);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Runaway);
    }
}

TEST_CASE("fan spread rate matches the eigenvalue slope") {
    auto sys = make_diag2();
    Profile initial(0.0, 4.0, {0.2}, {{0.0, 0.0}, {0.0, 0.5}});
    auto ua = BoundaryControl::constant({0.0, 0.0});
    auto ub = BoundaryControl::constant({0.0, 0.5});
    Trajectory traj = run_forward(sys, initial, ua, ub, kGrid, 1.0, {1.0});
    CHECK(traj.max_spread_rate == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("three-family flow matches the brute-force reference") {
    auto sys = make_diagonal_affine({-1.0, 1.0, 3.0}, {0.25, 0.25, 0.25}, 1,
                                    Box{{-1, -1, -1}, {1, 1, 1}}, "diag3");
    const std::vector<oracle::ScalarLaw> laws{
        {-1.0, 0.25, false}, {1.0, 0.25, true}, {3.0, 0.25, true}};
    testgen::Rng rng(37);
    for (int trial = 0; trial < 15; ++trial) {
        GridLevel grid{rng.integer(2, 4)};
        Profile initial =
            testgen::small_scenario_profile(rng, sys, grid, 0.0, 1.0);
        WVec ca = testgen::grid_state(rng, sys, grid);
        WVec cb = testgen::grid_state(rng, sys, grid);
        const double tau = rng.range(0.3, 2.0);
        std::vector<double> snaps{0.5 * tau, tau};
        Trajectory traj = run_forward(sys, initial,
                                      BoundaryControl::constant(ca),
                                      BoundaryControl::constant(cb), grid,
                                      tau, snaps);
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            Profile expect = oracle::evolve_decoupled(
                laws, 0.0, 1.0, initial, ca, cb, grid.nu, snaps[s]);
            CHECK(l1_distance(traj.snapshots[s], expect) <= 1e-9);
        }
        CHECK(traj.wave_count_ok);
        CHECK(traj.tv_ok);
    }
}

TEST_CASE("engine output matches the brute-force reference") {
    auto sys = make_diag2();
    testgen::Rng rng(31);
    const auto laws = oracle::diag2_laws();
    for (int trial = 0; trial < 25; ++trial) {
        GridLevel grid{rng.integer(2, 4)};
        Profile initial =
            testgen::small_scenario_profile(rng, sys, grid, 0.0, 1.0);
        WVec ca = testgen::grid_state(rng, sys, grid);
        WVec cb = testgen::grid_state(rng, sys, grid);
        auto ua = BoundaryControl::constant(ca);
        auto ub = BoundaryControl::constant(cb);
        const double tau = rng.range(0.3, 2.5);
        std::vector<double> snaps{0.25 * tau, 0.5 * tau, 0.75 * tau, tau};

        Trajectory traj =
            run_forward(sys, initial, ua, ub, grid, tau, snaps);
        for (std::size_t s = 0; s < snaps.size(); ++s) {
            Profile expect = oracle::evolve_decoupled(
                laws, 0.0, 1.0, initial, ca, cb, grid.nu, snaps[s]);
            CHECK(l1_distance(traj.snapshots[s], expect) <= 1e-9);
        }
    }
}
