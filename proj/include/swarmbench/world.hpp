#pragma once

#include "swarmbench/map.hpp"
#include "swarmbench/vec2.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace swarmbench {

struct RobotState {
    int id = 0;
    Vec2 position;
    Vec2 velocity;
    double collision_radius = 0.1;
    double sense_radius = 3.0;
    double distance_travelled = 0.0;
};

struct WorldState {
    double time = 0.0;
    std::vector<RobotState> robots;
    StaticMap map;
    std::uint64_t rng_seed = 0;
};

// Penetration tolerance for the obstacle non-overlap guarantee.
inline constexpr double kPenetrationTol = 1e-6;

// Advance one fixed timestep. Controls are clamped to v_max and become the
// robot velocities; motion into obstacles (or the map edge) is clipped at
// the boundary so only the tangential component survives. Robots are free
// to overlap each other; that is what collision counting measures.
void step(WorldState& world, std::span<const Vec2> controls, double dt, double v_max);

struct NeighborInfo {
    int id = 0;
    Vec2 rel_position; // p_j - p_i
    Vec2 rel_velocity; // v_j - v_i
};

struct ObstaclePoint {
    int obstacle_index = 0;
    Vec2 point;    // closest point on the obstacle boundary
    double dist = 0.0;
};

// Robots j != i with |p_j - p_i| <= sense_radius of robot i, sorted by id.
std::vector<NeighborInfo> sense_neighbors(const WorldState& world, int i);

// Closest boundary point per obstacle within sense range, in obstacle order.
std::vector<ObstaclePoint> sense_obstacles(const WorldState& world, int i);

struct CollisionSample {
    double time = 0.0;
    long robot_robot = 0;
    long robot_obstacle = 0;
};

struct CollisionLedger {
    long robot_robot_total = 0;
    long robot_obstacle_total = 0;
    std::vector<CollisionSample> samples;
};

// 1 Hz sampling rule: each overlapping robot pair counts 1 per sample, and
// each robot-obstacle overlap counts 1 per sample into its own counter.
void count_collisions(const WorldState& world, CollisionLedger& ledger);

struct SpawnConfig {
    int robot_count = 4;
    double min_spacing = 0.6;
    bool allow_spacing_violation = false;
    double collision_radius = 0.1;
    double sense_radius = 3.0;
};

// Jittered grid inside the spawn region, deterministic in the seed.
std::vector<RobotState> spawn_robots(const StaticMap& map, const SpawnConfig& cfg,
                                     std::uint64_t seed);

} // namespace swarmbench
