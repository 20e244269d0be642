#include "swarmbench/coverage.hpp"

#include "swarmbench/errors.hpp"
#include "swarmbench/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace swarmbench;

namespace {

RobotState robot_at(Vec2 p) {
    RobotState r;
    r.position = p;
    return r;
}

// Independent oracle for the gradient law: central finite differences of
// the squared-deficit error drop over a short virtual dwell at p. The
// per-cell baseline subtraction keeps the tiny dwell increments out of the
// large constant term, so the differences stay well conditioned.
Vec2 fd_error_gradient(const CoverageGrid& grid, Vec2 pos, const CoverageParams& params,
                       double h) {
    const double tau = 1e-4;
    const auto error_drop_rate = [&](Vec2 p) {
        CoverageGrid g = grid;
        const RobotState robots[1] = {robot_at(p)};
        accrue(g, robots, tau, params);
        double delta = 0.0;
        for (int i = 0; i < g.cell_count(); ++i) {
            if (!g.is_free(i)) continue;
            const double before = grid.c_star() - grid.level(i);
            const double after = g.c_star() - g.level(i);
            delta += 0.5 * (after * after - before * before);
        }
        return delta * g.cell_area() / tau;
    };
    return {(error_drop_rate({pos.x + h, pos.y}) - error_drop_rate({pos.x - h, pos.y})) /
                (2.0 * h),
            (error_drop_rate({pos.x, pos.y + h}) - error_drop_rate({pos.x, pos.y - h})) /
                (2.0 * h)};
}

StaticMap open_map() { return load_map(MapId::empty_dense, 1.0); }

} // namespace

TEST_CASE("footprint peak, boundary, and midpoint") {
    CHECK(footprint(0.0, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(footprint(2.0, 2.0, 1.0) == 0.0);
    CHECK(footprint(5.0, 2.0, 1.0) == 0.0);
    CHECK(footprint(1.0, 2.0, 1.0) == doctest::Approx(0.5625));
    // C1 at the boundary: slope tends to zero.
    CHECK(std::abs(footprint_slope(1.999, 2.0, 1.0)) < 4e-3);
    CHECK(footprint_slope(2.0, 2.0, 1.0) == 0.0);
}

TEST_CASE("accrue: far robots leave the grid untouched, caps bind") {
    CoverageParams params;
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    const double mass0 = grid.total_mass();
    std::vector<RobotState> far{robot_at({100.0, 100.0})};
    accrue(grid, far, 0.5, params);
    CHECK(grid.total_mass() == mass0);

    std::vector<RobotState> here{robot_at({10.0, 10.0})};
    accrue(grid, here, 0.1, params);
    // Cell at the robot center accrues M * dt (cell center offset is tiny).
    const int idx = grid.index_of(40, 40);
    const double d = distance(grid.cell_center(idx), {10.0, 10.0});
    CHECK(grid.level(idx) ==
          doctest::Approx(0.1 * footprint(d, params.r_cov, params.peak_rate)));

    SUBCASE("cap holds under repeated accrual and mass never decreases") {
        double prev_mass = grid.total_mass();
        for (int i = 0; i < 300; ++i) {
            accrue(grid, here, 0.1, params);
            const double mass = grid.total_mass();
            CHECK(mass >= prev_mass);
            prev_mass = mass;
        }
        double max_level = 0.0;
        for (int i = 0; i < grid.cell_count(); ++i)
            max_level = std::max(max_level, grid.level(i));
        CHECK(max_level <= params.c_star);
        CHECK(grid.level(idx) == params.c_star); // saturated under the robot
    }
}

TEST_CASE("coverage_error closed forms") {
    CoverageParams params;
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    const double free_area = grid.free_cell_count() * grid.cell_area();
    CHECK(coverage_error(grid) == doctest::Approx(params.c_star * free_area));

    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, params.c_star);
    CHECK(coverage_error(grid) == doctest::Approx(0.0));

    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, 0.5 * params.c_star);
    CHECK(coverage_error(grid) == doctest::Approx(0.5 * params.c_star * free_area));
}

TEST_CASE("obstacle cells are excluded from error and completion") {
    CoverageParams params;
    const StaticMap map = load_map(MapId::corridor, 1.0);
    CoverageGrid grid(map, params.resolution, params.c_star);
    CHECK(grid.free_cell_count() < grid.cell_count());
    for (int i = 0; i < grid.cell_count(); ++i)
        if (grid.is_free(i)) grid.set_level(i, params.c_star);
    CHECK(coverage_complete(grid, params.c_done));
    CHECK(coverage_fraction(grid, params.c_done) == doctest::Approx(1.0));
}

TEST_CASE("idc_control: saturated neighborhood gives zero command") {
    CoverageParams params;
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, params.c_star);
    const Vec2 u = idc_control({10.0, 10.0}, grid, params, 0.5);
    CHECK(u.x == 0.0);
    CHECK(u.y == 0.0);
}

TEST_CASE("idc_control points into the uncovered half-plane") {
    CoverageParams params;
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    for (int i = 0; i < grid.cell_count(); ++i)
        if (grid.cell_center(i).x < 10.0) grid.set_level(i, params.c_star);
    const Vec2 u = idc_control({10.0, 10.0}, grid, params, 0.5);
    CHECK(u.x > 0.0);
    CHECK(std::abs(u.y) < 1e-9);
}

TEST_CASE("idc_control matches the finite-difference error gradient") {
    CoverageParams params;
    params.k_c = 1.0;
    Rng rng(314);
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, rng.uniform(0.0, 0.9));
    for (int trial = 0; trial < 20; ++trial) {
        const Vec2 pos{rng.uniform(3.0, 17.0), rng.uniform(3.0, 17.0)};
        const Vec2 u = idc_control(pos, grid, params, 1e9);
        const Vec2 g = fd_error_gradient(grid, pos, params, 1e-4);
        const Vec2 expect = -g * params.k_c;
        const double scale = std::max(1.0, expect.norm());
        CHECK(std::abs(u.x - expect.x) / scale < 1e-3);
        CHECK(std::abs(u.y - expect.y) / scale < 1e-3);
    }
}

TEST_CASE("idc_control locality: cells beyond r_cov cannot affect the output") {
    CoverageParams params;
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    Rng rng(7);
    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, rng.uniform(0.0, 1.0));
    const Vec2 pos{10.0, 10.0};
    const Vec2 before = idc_control(pos, grid, params, 0.5);
    for (int i = 0; i < grid.cell_count(); ++i)
        if (distance(grid.cell_center(i), pos) > params.r_cov) grid.set_level(i, 0.123);
    const Vec2 after = idc_control(pos, grid, params, 0.5);
    CHECK(before.x == after.x); // bit-identical
    CHECK(before.y == after.y);
}

TEST_CASE("idc_perturb picks the nearest uncovered cell with row-major ties") {
    CoverageParams params;
    CoverageGrid grid(open_map(), params.resolution, params.c_star);
    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, params.c_star);

    SUBCASE("single uncovered cell is found") {
        const int target = grid.index_of(28, 20); // center (7.125, 5.125)
        grid.set_level(target, 0.0);
        const PerturbDecision d = idc_perturb({5.0, 5.0}, grid, params);
        REQUIRE(d.waypoint.has_value());
        CHECK(d.waypoint->x == doctest::Approx(7.125));
        CHECK(d.waypoint->y == doctest::Approx(5.125));
        CHECK(!d.mission_complete);
    }
    SUBCASE("tie breaks to the lower row-major index") {
        // Robot on a cell center; two equidistant uncovered cells above/below.
        const Vec2 pos = grid.cell_center(grid.index_of(40, 40));
        grid.set_level(grid.index_of(40, 38), 0.0);
        grid.set_level(grid.index_of(40, 42), 0.0);
        const PerturbDecision d = idc_perturb(pos, grid, params);
        REQUIRE(d.waypoint.has_value());
        CHECK(d.waypoint->y == doctest::Approx(grid.cell_center(grid.index_of(40, 38)).y));
    }
    SUBCASE("fully covered map signals mission complete") {
        const PerturbDecision d = idc_perturb({5.0, 5.0}, grid, params);
        CHECK(!d.waypoint.has_value());
        CHECK(d.mission_complete);
    }
}

TEST_CASE("rendezvous rules: families and reads") {
    CoverageParams params;
    const StaticMap map = open_map();
    CoverageGrid grid(map, params.resolution, params.c_star);
    WorldState world;
    world.map = map;
    for (int i = 0; i < 4; ++i) {
        RobotState r;
        r.id = i;
        r.position = {5.0 + i, 10.0};
        world.robots.push_back(r);
    }

    SUBCASE("family1 rule reads no robot state") {
        const PerturbRule rule = family1_min_coverage_rule();
        CHECK(rule.reads.empty());
        for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, params.c_star);
        grid.set_level(grid.index_of(10, 10), 0.9);
        grid.set_level(grid.index_of(3, 3), 0.1); // strictly lowest
        const Vec2 p = evaluate_rendezvous_rule(rule, grid, world, params);
        CHECK(p.x == doctest::Approx(grid.cell_center(grid.index_of(3, 3)).x));
    }
    SUBCASE("family2 centroid rule projects to the nearest uncovered cell") {
        const PerturbRule rule = family2_centroid_rule(4);
        CHECK(rule.reads.size() == 4);
        for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, params.c_star);
        grid.set_level(grid.index_of(30, 41), 0.0);
        const Vec2 p = evaluate_rendezvous_rule(rule, grid, world, params);
        CHECK(p.x == doctest::Approx(grid.cell_center(grid.index_of(30, 41)).x));
    }
    SUBCASE("family2 with missing robot states is a protocol error") {
        PerturbRule rule = family2_centroid_rule(4);
        rule.reads.push_back(77);
        CHECK_THROWS_AS(evaluate_rendezvous_rule(rule, grid, world, params), protocol_error);
    }
}

TEST_CASE("gdc_step: trigger, broadcast count, transit, and reset") {
    CoverageParams cov;
    cov.v_slow = 0.02;
    GdcParams gdc;
    gdc.t_hold = 0.2;
    gdc.rho = 1.0;
    gdc.rule = family2_centroid_rule(4);
    const StaticMap map = open_map();
    CoverageGrid grid(map, cov.resolution, cov.c_star);
    // Leave exactly one far cell uncovered so the rule has a target.
    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, cov.c_star);
    grid.set_level(grid.index_of(60, 40), 0.0);

    WorldState world;
    world.map = map;
    for (int i = 0; i < 4; ++i) {
        RobotState r;
        r.id = i;
        r.position = {5.0 + 0.3 * i, 10.0};
        r.velocity = {0.0, 0.0}; // already slow
        world.robots.push_back(r);
    }
    MessageBus bus(0.1, 0);
    GdcState state;
    state.leader_id = 0;

    // Fast robots hold COVER mode with zero broadcast bits.
    world.robots[1].velocity = {0.4, 0.0};
    gdc_step(world, state, grid, &bus, 0, gdc, cov, 0.1, 0.5);
    CHECK(state.mode == GdcMode::cover);
    bus.collect_due(10);
    CHECK(bus.ledger().total_bits() == 0);

    // All slow for t_hold: the trigger fires and n-1 point messages go out.
    world.robots[1].velocity = {0.0, 0.0};
    int events = 0;
    for (long tick = 1; tick <= 3; ++tick) {
        const GdcStepResult r = gdc_step(world, state, grid, &bus, tick, gdc, cov, 0.1, 0.5);
        events += r.messages_sent > 0 ? 1 : 0;
    }
    CHECK(state.mode == GdcMode::rendezvous);
    CHECK(state.rendezvous_events == 1);
    bus.collect_due(10);
    CHECK(bus.ledger().message_count() == 3); // exactly n-1
    CHECK(bus.ledger().total_bits() == 3 * kPointPayloadBits);
    CHECK(events == 1);

    // All robots inside rho: mode flips back to COVER (a reset).
    const Vec2 point = *state.rendezvous_point;
    for (auto& r : world.robots) r.position = point + Vec2{0.1, 0.1};
    // Give them motion so the wedge escape does not fire first.
    for (auto& r : world.robots) r.velocity = {0.3, 0.0};
    gdc_step(world, state, grid, &bus, 4, gdc, cov, 0.1, 0.5);
    CHECK(state.mode == GdcMode::cover);
    CHECK(state.resets == 1);
    CHECK(!state.rendezvous_point.has_value());
}

TEST_CASE("gdc synchrony: one point per reset, all agents see the same point") {
    // Drive a tiny closed loop: between consecutive resets exactly one
    // rendezvous event must occur.
    CoverageParams cov;
    GdcParams gdc;
    gdc.t_hold = 0.2;
    gdc.rho = 2.0;
    gdc.rule = family2_centroid_rule(2);
    const StaticMap map = open_map();
    CoverageGrid grid(map, cov.resolution, cov.c_star);
    for (int i = 0; i < grid.cell_count(); ++i) grid.set_level(i, cov.c_star);
    grid.set_level(grid.index_of(50, 40), 0.0);

    WorldState world;
    world.map = map;
    for (int i = 0; i < 2; ++i) {
        RobotState r;
        r.id = i;
        r.position = {6.0 + i * 0.5, 10.0};
        world.robots.push_back(r);
    }
    MessageBus bus(0.1, 0);
    GdcState state;
    long last_resets = 0;
    long events_since_reset = 0;
    for (long tick = 0; tick < 400; ++tick) {
        const GdcStepResult r = gdc_step(world, state, grid, &bus, tick, gdc, cov, 0.1, 0.5);
        if (r.messages_sent > 0) ++events_since_reset;
        if (state.resets != last_resets) {
            CHECK(events_since_reset == 1);
            events_since_reset = 0;
            last_resets = state.resets;
        }
        // Integrate the commanded controls directly (no obstacles nearby).
        for (std::size_t i = 0; i < world.robots.size(); ++i) {
            world.robots[i].velocity = r.controls[i].clamped(0.5);
            world.robots[i].position += world.robots[i].velocity * 0.1;
        }
        if (state.resets >= 2) break;
    }
    CHECK(state.resets >= 1);
}

TEST_CASE("coverage snapshot matrix is dense and row-major top-down") {
    StaticMap tiny;
    tiny.id = MapId::empty_dense;
    tiny.width = 0.5;
    tiny.height = 0.5;
    tiny.spawn_region = {{0.0, 0.0}, {0.2, 0.2}};
    tiny.goal = {0.4, 0.4};
    tiny.goal_radius = 0.05;
    CoverageGrid grid(tiny, 0.25, 1.0);
    grid.set_level(grid.index_of(0, 0), 0.25);
    grid.set_level(grid.index_of(1, 1), 0.75);
    CHECK(grid.to_matrix_text() == "0.000000 0.750000\n0.250000 0.000000\n");
}
