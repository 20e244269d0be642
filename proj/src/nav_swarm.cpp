#include "swarmbench/nav_swarm.hpp"

#include "swarmbench/errors.hpp"

#include <vector>

namespace swarmbench {

namespace {

Vec2 repulsion(Vec2 away, double d, const PfParams& p) {
    if (d <= 0.0) throw singular_input_error("pf_control: zero-distance repulsion source");
    if (d >= p.d0) return {};
    const double mag = p.k_rep * (1.0 / d - 1.0 / p.d0) / (d * d);
    return away.normalized() * mag;
}

} // namespace

Vec2 pf_control(const RobotState& self, std::span<const NeighborInfo> neighbors,
                std::span<const ObstaclePoint> obstacle_points, Vec2 goal,
                const PfParams& params) {
    Vec2 u = (goal - self.position) * params.k_att;
    for (const auto& nb : neighbors) {
        const double d = nb.rel_position.norm();
        u += repulsion(-nb.rel_position, d, params);
        if (d > params.d_coh)
            u += nb.rel_position.normalized() * (params.k_coh * (d - params.d_coh));
    }
    for (const auto& op : obstacle_points)
        u += repulsion(self.position - op.point, op.dist, params);
    return u.clamped(params.u_cap);
}

PbcResult pbc_filter(Vec2 u_des, const RobotState& self,
                     std::span<const NeighborInfo> neighbors,
                     std::span<const ObstaclePoint> obstacle_points,
                     const PbcParams& params, double v_max) {
    std::vector<HalfPlane> cs;
    cs.reserve(neighbors.size() + obstacle_points.size());
    const double ds_sq = params.ds * params.ds;
    // h = |dp|^2 - Ds^2 with hdot >= -alpha(h): approach speed along the
    // separation vector is budgeted by the cubic class-K term.
    for (const auto& nb : neighbors) {
        const double h = nb.rel_position.norm_sq() - ds_sq;
        cs.push_back({nb.rel_position * 2.0, 0.5 * params.gamma * h * h * h});
    }
    for (const auto& op : obstacle_points) {
        const Vec2 dp = op.point - self.position;
        const double h = dp.norm_sq() - ds_sq;
        cs.push_back({dp * 2.0, params.gamma * h * h * h});
    }
    const QpResult qp = qp_solve_2d(u_des, cs);
    if (qp.feasible) return {qp.u.clamped(v_max), false};
    return {max_slack_point(cs, v_max).clamped(v_max), true};
}

Vec2 p_controller(Vec2 position, Vec2 goal, double k_p, double v_max) {
    return ((goal - position) * k_p).clamped(v_max);
}

} // namespace swarmbench
