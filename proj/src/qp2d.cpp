#include "swarmbench/qp2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarmbench {

namespace {

constexpr double kFeasTol = 1e-9;

bool feasible_at(std::span<const HalfPlane> cs, Vec2 u, double tol) {
    for (const auto& c : cs)
        if (c.slack(u) < -tol) return false;
    return true;
}

} // namespace

QpResult qp_solve_2d(Vec2 u_des, std::span<const HalfPlane> constraints) {
    // Degenerate rows: a = 0 is either vacuous (b >= 0) or unsatisfiable.
    std::vector<HalfPlane> cs;
    cs.reserve(constraints.size());
    for (const auto& c : constraints) {
        if (c.a.norm_sq() == 0.0) {
            if (c.b < 0.0) return {Vec2{}, false};
            continue;
        }
        cs.push_back(c);
    }

    Vec2 best{};
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    const auto consider = [&](Vec2 u) {
        if (!feasible_at(cs, u, kFeasTol)) return;
        const double obj = (u - u_des).norm_sq();
        if (obj < best_obj) {
            best_obj = obj;
            best = u;
            found = true;
        }
    };

    consider(u_des);
    const std::size_t n = cs.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Projection onto the boundary line of constraint i.
        const Vec2 a = cs[i].a;
        const double viol = a.dot(u_des) - cs[i].b;
        consider(u_des - a * (viol / a.norm_sq()));
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 a2 = cs[j].a;
            const double det = a.x * a2.y - a.y * a2.x;
            if (std::abs(det) < 1e-14 * std::max(a.norm(), a2.norm())) continue;
            consider({(cs[i].b * a2.y - cs[j].b * a.y) / det,
                      (a.x * cs[j].b - a2.x * cs[i].b) / det});
        }
    }
    return {best, found};
}

Vec2 max_slack_point(std::span<const HalfPlane> constraints, double radius) {
    std::vector<HalfPlane> cs(constraints.begin(), constraints.end());
    // Feasibility of the slack-shifted system within the disk is tested via
    // the min-norm point: the polyhedron meets the disk iff its closest
    // point to the origin lies inside.
    const auto feasible_with_slack = [&](double t) -> std::pair<bool, Vec2> {
        std::vector<HalfPlane> shifted = cs;
        for (auto& c : shifted) c.b -= t * c.a.norm();
        const QpResult r = qp_solve_2d(Vec2{}, shifted);
        if (!r.feasible || r.u.norm() > radius) return {false, Vec2{}};
        return {true, r.u};
    };

    double lo = -1e9, hi = 1e9;
    Vec2 best{};
    auto at_lo = feasible_with_slack(lo);
    if (!at_lo.first) return {};
    best = at_lo.second;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto r = feasible_with_slack(mid);
        if (r.first) {
            lo = mid;
            best = r.second;
        } else {
            hi = mid;
        }
    }
    return best;
}

} // namespace swarmbench
