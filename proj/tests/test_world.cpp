#include "swarmbench/world.hpp"

#include "swarmbench/errors.hpp"
#include "swarmbench/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace swarmbench;

namespace {

WorldState empty_world(int robots) {
    WorldState w;
    w.map = load_map(MapId::empty_spread, 1.0);
    for (int i = 0; i < robots; ++i) {
        RobotState r;
        r.id = i;
        r.position = {2.0 + i, 2.0};
        w.robots.push_back(r);
    }
    return w;
}

} // namespace

TEST_CASE("zero control is a fixed point; time still advances") {
    WorldState w = empty_world(3);
    const auto before = w.robots;
    const std::vector<Vec2> controls(3, Vec2{});
    step(w, controls, 0.1, 0.5);
    CHECK(w.time == doctest::Approx(0.1));
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
        CHECK(w.robots[i].position.x == before[i].position.x);
        CHECK(w.robots[i].position.y == before[i].position.y);
        CHECK(w.robots[i].distance_travelled == 0.0);
    }
}

TEST_CASE("speed clamp integrates the capped velocity") {
    WorldState w = empty_world(1);
    w.robots[0].position = {5.0, 5.0};
    const std::vector<Vec2> controls{Vec2{1.0, 0.0}};
    step(w, controls, 0.1, 0.5);
    CHECK(w.robots[0].position.x == doctest::Approx(5.05));
    CHECK(w.robots[0].position.y == doctest::Approx(5.0));
    CHECK(w.robots[0].velocity.norm() <= 0.5 + 1e-12);
    CHECK(w.robots[0].distance_travelled == doctest::Approx(0.05));
}

TEST_CASE("motion into a wall keeps only the tangential component") {
    WorldState w;
    w.map = load_map(MapId::corridor, 1.0); // wall face at x = 9
    RobotState r;
    r.id = 0;
    r.position = {9.0 - r.collision_radius - 1e-9, 5.0};
    w.robots.push_back(r);

    SUBCASE("head-on: no displacement") {
        const std::vector<Vec2> controls{Vec2{0.5, 0.0}};
        step(w, controls, 0.1, 0.5);
        CHECK(w.robots[0].position.x == doctest::Approx(9.0 - 0.1).epsilon(1e-6));
        CHECK(w.robots[0].position.y == doctest::Approx(5.0));
    }
    SUBCASE("oblique: slides along the wall") {
        const std::vector<Vec2> controls{Vec2{0.3, 0.4}};
        step(w, controls, 0.1, 0.5);
        CHECK(w.robots[0].position.x == doctest::Approx(9.0 - 0.1).epsilon(1e-6));
        CHECK(w.robots[0].position.y == doctest::Approx(5.04));
    }
}

TEST_CASE("obstacle non-penetration holds under random bashing") {
    WorldState w;
    w.map = load_map(MapId::uniform, 1.0);
    RobotState r;
    r.id = 0;
    r.position = {5.5, 5.0}; // near the first pillar column
    w.robots.push_back(r);
    Rng rng(7);
    for (int i = 0; i < 4000; ++i) {
        const std::vector<Vec2> controls{Vec2{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        step(w, controls, 0.02, 0.5);
        for (const auto& ob : w.map.obstacles) {
            CHECK(signed_distance(ob, w.robots[0].position) >=
                  w.robots[0].collision_radius - kPenetrationTol);
        }
        CHECK(w.robots[0].position.x >= w.robots[0].collision_radius - kPenetrationTol);
        CHECK(w.robots[0].position.x <= w.map.width - w.robots[0].collision_radius + kPenetrationTol);
    }
    CHECK(w.time == doctest::Approx(80.0));
}

TEST_CASE("mismatched controls length is a configuration error") {
    WorldState w = empty_world(2);
    const std::vector<Vec2> controls(1, Vec2{});
    CHECK_THROWS_AS(step(w, controls, 0.1, 0.5), config_error);
}

TEST_CASE("sense_neighbors range, ordering, and symmetry") {
    WorldState w = empty_world(0);
    for (int i = 0; i < 3; ++i) {
        RobotState r;
        r.id = i;
        r.position = {2.0 + 2.0 * i, 3.0}; // collinear, 2 m spacing
        r.sense_radius = 3.0;
        w.robots.push_back(r);
    }
    const auto mid = sense_neighbors(w, 1);
    REQUIRE(mid.size() == 2);
    CHECK(mid[0].id == 0);
    CHECK(mid[1].id == 2);
    CHECK(mid[0].rel_position.x == doctest::Approx(-2.0));
    const auto end = sense_neighbors(w, 0);
    REQUIRE(end.size() == 1);
    CHECK(end[0].id == 1);

    SUBCASE("far robots are unseen") {
        w.robots[2].position = {100.0, 3.0};
        // 100 m apart: out of range both ways.
        CHECK(sense_neighbors(w, 2).empty());
        CHECK(sense_neighbors(w, 1).size() == 1);
    }
}

TEST_CASE("sense_obstacles returns closest points in obstacle order") {
    WorldState w;
    w.map = parse_map_document(
        "name uniform\nbounds 20 20\nspawn 4 4 6 6\ngoal 17 10 3\n"
        "rect 2 0 3 2\nrect 0 14 2 15\n");
    RobotState r;
    r.id = 0;
    r.position = {1.0, 1.0};
    r.sense_radius = 3.0;
    w.robots.push_back(r);
    const auto pts = sense_obstacles(w, 0);
    REQUIRE(pts.size() == 1); // second obstacle is far away
    CHECK(pts[0].obstacle_index == 0);
    CHECK(pts[0].point.x == doctest::Approx(2.0));
    CHECK(pts[0].point.y == doctest::Approx(1.0));
    CHECK(pts[0].dist == doctest::Approx(1.0));

    SUBCASE("two obstacles in range keep index order") {
        w.robots[0].position = {1.5, 13.0};
        const auto two = sense_obstacles(w, 0);
        // rect 0 is ~11 m away now; only rect 1 in range
        REQUIRE(two.size() == 1);
        CHECK(two[0].obstacle_index == 1);
        w.robots[0].sense_radius = 30.0;
        const auto both = sense_obstacles(w, 0);
        REQUIRE(both.size() == 2);
        CHECK(both[0].obstacle_index == 0);
        CHECK(both[1].obstacle_index == 1);
    }
}

TEST_CASE("empty map yields no obstacle points") {
    WorldState w = empty_world(1);
    CHECK(sense_obstacles(w, 0).empty());
}

TEST_CASE("collision counting per sampled second") {
    WorldState w = empty_world(0);
    for (int i = 0; i < 3; ++i) {
        RobotState r;
        r.id = i;
        r.position = {5.0, 5.0}; // all mutually overlapping
        w.robots.push_back(r);
    }
    CollisionLedger ledger;
    count_collisions(w, ledger);
    CHECK(ledger.robot_robot_total == 3); // three pairs

    SUBCASE("spread out: zero increments") {
        w.robots[0].position = {1.0, 1.0};
        w.robots[1].position = {3.0, 1.0};
        w.robots[2].position = {5.0, 1.0};
        CollisionLedger fresh;
        count_collisions(w, fresh);
        CHECK(fresh.robot_robot_total == 0);
    }
    SUBCASE("five sampled seconds of overlap accumulate five counts") {
        WorldState pair = empty_world(0);
        for (int i = 0; i < 2; ++i) {
            RobotState r;
            r.id = i;
            r.position = {5.0 + 0.05 * i, 5.0};
            pair.robots.push_back(r);
        }
        CollisionLedger acc;
        for (int s = 0; s < 5; ++s) count_collisions(pair, acc);
        CHECK(acc.robot_robot_total == 5);
        CHECK(acc.samples.size() == 5);
        // Replay: totals equal the sum over samples.
        long replay = 0;
        for (const auto& s : acc.samples) replay += s.robot_robot;
        CHECK(replay == acc.robot_robot_total);
    }
}

TEST_CASE("robot-obstacle overlap counts into its own counter") {
    WorldState w;
    w.map = load_map(MapId::corridor, 1.0);
    RobotState r;
    r.id = 0;
    r.position = {9.05, 5.0}; // hand-placed inside the wall
    w.robots.push_back(r);
    CollisionLedger ledger;
    count_collisions(w, ledger);
    CHECK(ledger.robot_obstacle_total == 1);
    CHECK(ledger.robot_robot_total == 0);
}

TEST_CASE("spawn is deterministic, in-region, and spacing-respecting") {
    const StaticMap map = load_map(MapId::empty_dense, 1.0);
    SpawnConfig cfg;
    cfg.robot_count = 16;
    const auto a = spawn_robots(map, cfg, 42);
    const auto b = spawn_robots(map, cfg, 42);
    REQUIRE(a.size() == 16);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].position.y == b[i].position.y);
        CHECK(map.spawn_region.contains(a[i].position));
    }
    double min_d = 1e9;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            min_d = std::min(min_d, distance(a[i].position, a[j].position));
    CHECK(min_d >= cfg.min_spacing - 1e-9);

    SUBCASE("violation flag permits closer pairs") {
        cfg.allow_spacing_violation = true;
        double violated = 1e9;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto v = spawn_robots(map, cfg, seed);
            for (std::size_t i = 0; i < v.size(); ++i)
                for (std::size_t j = i + 1; j < v.size(); ++j)
                    violated = std::min(violated, distance(v[i].position, v[j].position));
        }
        CHECK(violated < cfg.min_spacing);
    }
}
