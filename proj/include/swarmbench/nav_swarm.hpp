#pragma once

#include "swarmbench/qp2d.hpp"
#include "swarmbench/vec2.hpp"
#include "swarmbench/world.hpp"

#include <span>

namespace swarmbench {

// Potential-field gains. The repulsive term switches off beyond d0 and the
// cohesion spring engages beyond d_coh, so both must sit inside the sensor
// radius to remain functions of sensed input only.
struct PfParams {
    double k_att = 0.2;  // 1/s
    double k_rep = 0.5;  // m^3/s
    double d0 = 1.4;     // m, repulsion cutoff
    double k_coh = 0.05; // 1/s
    double d_coh = 2.5;  // m, cohesion activation distance
    double u_cap = 1.0;  // m/s
};

struct PbcParams {
    double k_p = 1.0;   // 1/s proportional gain
    double ds = 0.3;    // m safety distance
    double gamma = 2000.0; // 1/(m^4 s), class-K gain on h^3
};

// Attractive + repulsive + cohesion field, capped at u_cap. Throws
// singular_input_error when a repulsion source sits exactly on the robot.
Vec2 pf_control(const RobotState& self, std::span<const NeighborInfo> neighbors,
                std::span<const ObstaclePoint> obstacle_points, Vec2 goal,
                const PfParams& params);

struct PbcResult {
    Vec2 u;
    bool infeasible = false; // safety already violated; u is best-effort
};

// Barrier-certificate safety filter: minimally perturbs u_des so that every
// sensed neighbor and obstacle point keeps h = |dp|^2 - Ds^2 nonnegative.
// Neighbor constraints get half the class-K budget (the neighbor is
// expected to give way symmetrically); static obstacles get the full one.
PbcResult pbc_filter(Vec2 u_des, const RobotState& self,
                     std::span<const NeighborInfo> neighbors,
                     std::span<const ObstaclePoint> obstacle_points,
                     const PbcParams& params, double v_max);

// u = -k_p (p - goal), clamped to v_max.
Vec2 p_controller(Vec2 position, Vec2 goal, double k_p, double v_max);

} // namespace swarmbench
