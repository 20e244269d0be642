#pragma once

#include "swarmbench/vec2.hpp"

#include <span>
#include <vector>

namespace swarmbench {

// Halfplane constraint a.dot(u) <= b.
struct HalfPlane {
    Vec2 a;
    double b = 0.0;

    double slack(Vec2 u) const { return b - a.dot(u); }
};

struct QpResult {
    Vec2 u;
    bool feasible = false;
};

// Exact minimizer of |u - u_des|^2 over the halfplane intersection, by
// enumerating candidate active sets (none, each constraint, each pair); in
// 2D the optimum is pinned by at most two constraints. Returns
// feasible=false when the polyhedron is empty.
QpResult qp_solve_2d(Vec2 u_des, std::span<const HalfPlane> constraints);

// Best-effort point for infeasible systems: maximizes the minimum
// constraint slack over the disk |u| <= radius (bisection over the slack
// level, min-norm feasibility test per level).
Vec2 max_slack_point(std::span<const HalfPlane> constraints, double radius);

} // namespace swarmbench
