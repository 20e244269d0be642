#include "swarmbench/world.hpp"

#include "swarmbench/errors.hpp"
#include "swarmbench/rng.hpp"

#include <algorithm>
#include <cmath>

namespace swarmbench {

namespace {

// Push the disk center out of every obstacle and the map edge. A few sweeps
// settle corner cases where one pushout re-enters another obstacle.
Vec2 resolve_obstacles(const StaticMap& map, Vec2 p, double radius) {
    for (int pass = 0; pass < 4; ++pass) {
        bool moved = false;
        p.x = std::clamp(p.x, radius, map.width - radius);
        p.y = std::clamp(p.y, radius, map.height - radius);
        for (const auto& ob : map.obstacles) {
            const double sd = signed_distance(ob, p);
            if (sd >= radius) continue;
            const Vec2 q = closest_boundary_point(ob, p);
            Vec2 outward = p - q;
            if (sd < 0.0) outward = -outward;
            if (outward.norm_sq() == 0.0) outward = {1.0, 0.0};
            // Nudge past the exact radius so the overlap test stays false
            // under floating-point roundoff.
            p = q + outward.normalized() * (radius + 1e-9);
            moved = true;
        }
        if (!moved) break;
    }
    return p;
}

} // namespace

void step(WorldState& world, std::span<const Vec2> controls, double dt, double v_max) {
    if (controls.size() != world.robots.size())
        throw config_error("step: controls length does not match robot count");
    if (dt <= 0.0) throw config_error("step: dt must be positive");
    for (std::size_t i = 0; i < world.robots.size(); ++i) {
        RobotState& r = world.robots[i];
        r.velocity = controls[i].clamped(v_max);
        const Vec2 start = r.position;
        const Vec2 target = start + r.velocity * dt;
        r.position = resolve_obstacles(world.map, target, r.collision_radius);
        r.distance_travelled += distance(start, r.position);
    }
    world.time += dt;
}

std::vector<NeighborInfo> sense_neighbors(const WorldState& world, int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= world.robots.size())
        throw input_error("sense_neighbors: bad robot index");
    const RobotState& self = world.robots[i];
    std::vector<NeighborInfo> out;
    for (const RobotState& other : world.robots) {
        if (other.id == self.id) continue;
        const Vec2 rel = other.position - self.position;
        if (rel.norm() <= self.sense_radius)
            out.push_back({other.id, rel, other.velocity - self.velocity});
    }
    std::sort(out.begin(), out.end(),
              [](const NeighborInfo& a, const NeighborInfo& b) { return a.id < b.id; });
    return out;
}

std::vector<ObstaclePoint> sense_obstacles(const WorldState& world, int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= world.robots.size())
        throw input_error("sense_obstacles: bad robot index");
    const RobotState& self = world.robots[i];
    std::vector<ObstaclePoint> out;
    for (std::size_t k = 0; k < world.map.obstacles.size(); ++k) {
        const Vec2 q = closest_boundary_point(world.map.obstacles[k], self.position);
        const double d = distance(self.position, q);
        if (d <= self.sense_radius)
            out.push_back({static_cast<int>(k), q, d});
    }
    return out;
}

void count_collisions(const WorldState& world, CollisionLedger& ledger) {
    CollisionSample s;
    s.time = world.time;
    const auto& robots = world.robots;
    for (std::size_t i = 0; i < robots.size(); ++i) {
        for (std::size_t j = i + 1; j < robots.size(); ++j) {
            const double d = distance(robots[i].position, robots[j].position);
            if (d < robots[i].collision_radius + robots[j].collision_radius) ++s.robot_robot;
        }
        for (const auto& ob : world.map.obstacles) {
            if (signed_distance(ob, robots[i].position) < robots[i].collision_radius)
                ++s.robot_obstacle;
        }
    }
    ledger.robot_robot_total += s.robot_robot;
    ledger.robot_obstacle_total += s.robot_obstacle;
    ledger.samples.push_back(s);
}

std::vector<RobotState> spawn_robots(const StaticMap& map, const SpawnConfig& cfg,
                                     std::uint64_t seed) {
    if (cfg.robot_count <= 0) throw config_error("spawn: robot count must be positive");
    Rng rng(derive_seed(seed, 0x5fa17));
    const Rect& region = map.spawn_region;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.robot_count))));
    const int rows = (cfg.robot_count + cols - 1) / cols;
    const double cw = region.width() / cols;
    const double ch = region.height() / rows;
    double jitter = std::max(0.0, (std::min(cw, ch) - cfg.min_spacing) * 0.5);
    if (cfg.allow_spacing_violation) jitter = 0.75 * std::min(cw, ch);

    std::vector<RobotState> robots;
    robots.reserve(cfg.robot_count);
    for (int k = 0; k < cfg.robot_count; ++k) {
        const int cx = k % cols;
        const int cy = k / cols;
        Vec2 p{region.lo.x + (cx + 0.5) * cw + rng.uniform(-jitter, jitter),
               region.lo.y + (cy + 0.5) * ch + rng.uniform(-jitter, jitter)};
        p.x = std::clamp(p.x, region.lo.x + cfg.collision_radius, region.hi.x - cfg.collision_radius);
        p.y = std::clamp(p.y, region.lo.y + cfg.collision_radius, region.hi.y - cfg.collision_radius);
        RobotState r;
        r.id = k;
        r.position = p;
        r.collision_radius = cfg.collision_radius;
        r.sense_radius = cfg.sense_radius;
        robots.push_back(r);
    }
    return robots;
}

} // namespace swarmbench
