#include "swarmbench/coverage.hpp"

#include "swarmbench/errors.hpp"
#include "swarmbench/nav_swarm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace swarmbench {

CoverageGrid::CoverageGrid(const StaticMap& map, double resolution, double c_star)
    : res_(resolution), c_star_(c_star) {
    if (resolution <= 0.0) throw config_error("coverage grid resolution must be positive");
    nx_ = static_cast<int>(std::lround(map.width / resolution));
    ny_ = static_cast<int>(std::lround(map.height / resolution));
    levels_.assign(static_cast<std::size_t>(nx_) * ny_, 0.0);
    free_.assign(levels_.size(), 1);
    for (int i = 0; i < cell_count(); ++i) {
        const Vec2 c = cell_center(i);
        for (const auto& ob : map.obstacles) {
            if (obstacle_contains(ob, c)) {
                free_[i] = 0;
                break;
            }
        }
        if (free_[i]) ++free_cells_;
    }
}

double CoverageGrid::total_mass() const {
    double m = 0.0;
    for (int i = 0; i < cell_count(); ++i)
        if (free_[i]) m += levels_[i];
    return m;
}

std::string CoverageGrid::to_matrix_text() const {
    std::string out;
    char buf[32];
    for (int iy = ny_ - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            std::snprintf(buf, sizeof buf, "%.6f", levels_[index_of(ix, iy)]);
            if (ix) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

double footprint(double d, double r_cov, double peak_rate) {
    if (d >= r_cov) return 0.0;
    const double t = 1.0 - (d / r_cov) * (d / r_cov);
    return peak_rate * t * t;
}

double footprint_slope(double d, double r_cov, double peak_rate) {
    if (d >= r_cov) return 0.0;
    const double t = 1.0 - (d / r_cov) * (d / r_cov);
    return -4.0 * peak_rate * d * t / (r_cov * r_cov);
}

void accrue(CoverageGrid& grid, std::span<const RobotState> robots, double dt,
            const CoverageParams& params) {
    if (dt <= 0.0) throw config_error("accrue: dt must be positive");
    // Increments are nonnegative, so capping per robot equals capping the sum.
    for (const auto& r : robots) {
        const int ix0 = std::max(0, static_cast<int>((r.position.x - params.r_cov) / grid.res_));
        const int ix1 = std::min(grid.nx_ - 1,
                                 static_cast<int>((r.position.x + params.r_cov) / grid.res_));
        const int iy0 = std::max(0, static_cast<int>((r.position.y - params.r_cov) / grid.res_));
        const int iy1 = std::min(grid.ny_ - 1,
                                 static_cast<int>((r.position.y + params.r_cov) / grid.res_));
        for (int iy = iy0; iy <= iy1; ++iy) {
            for (int ix = ix0; ix <= ix1; ++ix) {
                const int idx = grid.index_of(ix, iy);
                if (!grid.free_[idx]) continue;
                const double s =
                    footprint(distance(grid.cell_center(idx), r.position), params.r_cov,
                              params.peak_rate);
                if (s <= 0.0) continue;
                grid.levels_[idx] = std::min(grid.c_star_, grid.levels_[idx] + dt * s);
            }
        }
    }
}

double coverage_error(const CoverageGrid& grid) {
    double e = 0.0;
    for (int i = 0; i < grid.cell_count(); ++i)
        if (grid.is_free(i)) e += grid.c_star() - grid.level(i);
    return e * grid.cell_area();
}

double coverage_fraction(const CoverageGrid& grid, double c_done) {
    if (grid.free_cell_count() == 0) return 1.0;
    const double threshold = c_done * grid.c_star();
    long covered = 0;
    for (int i = 0; i < grid.cell_count(); ++i)
        if (grid.is_free(i) && grid.level(i) >= threshold) ++covered;
    return static_cast<double>(covered) / static_cast<double>(grid.free_cell_count());
}

bool coverage_complete(const CoverageGrid& grid, double c_done) {
    const double threshold = c_done * grid.c_star();
    for (int i = 0; i < grid.cell_count(); ++i)
        if (grid.is_free(i) && grid.level(i) < threshold) return false;
    return true;
}

Vec2 idc_control(Vec2 position, const CoverageGrid& grid, const CoverageParams& params,
                 double v_max, const StaticMap* map) {
    Vec2 u{};
    const bool occlude = map && !map->obstacles.empty();
    const double res = grid.resolution();
    const int ix0 = std::max(0, static_cast<int>((position.x - params.r_cov) / res));
    const int ix1 = std::min(grid.nx() - 1, static_cast<int>((position.x + params.r_cov) / res));
    const int iy0 = std::max(0, static_cast<int>((position.y - params.r_cov) / res));
    const int iy1 = std::min(grid.ny() - 1, static_cast<int>((position.y + params.r_cov) / res));
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const int idx = grid.index_of(ix, iy);
            if (!grid.is_free(idx)) continue;
            const Vec2 center = grid.cell_center(idx);
            const Vec2 toward = center - position;
            const double d = toward.norm();
            if (d >= params.r_cov || d == 0.0) continue;
            const double deficit = grid.c_star() - grid.level(idx);
            if (deficit <= 0.0) continue;
            if (occlude && !cell_visible(*map, position, center)) continue;
            const double w = -footprint_slope(d, params.r_cov, params.peak_rate); // >= 0
            u += toward * (deficit * w / d);
        }
    }
    return (u * (params.k_c * grid.cell_area())).clamped(v_max);
}

PerturbDecision idc_perturb(Vec2 position, const CoverageGrid& grid,
                            const CoverageParams& params, const StaticMap* map, Rng* rng) {
    const double threshold = params.c_done * grid.c_star();
    int best = -1, best_visible = -1;
    long uncovered = 0;
    double best_d = std::numeric_limits<double>::infinity();
    double best_visible_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.cell_count(); ++i) {
        if (!grid.is_free(i) || grid.level(i) >= threshold) continue;
        ++uncovered;
        const Vec2 c = grid.cell_center(i);
        const double d = distance(c, position);
        if (d < best_d) { // strict: row-major lowest index wins ties
            best_d = d;
            best = i;
        }
        if (map && d < best_visible_d && cell_visible(*map, position, c)) {
            best_visible_d = d;
            best_visible = i;
        }
    }
    if (best < 0) return {std::nullopt, true};
    // Straight-line-reachable targets first (equivalent on empty scenes).
    if (map && best_visible >= 0) return {grid.cell_center(best_visible), false};
    // Nothing visible: a seeded random restart beats pushing at a wall.
    if (map && rng && uncovered > 0) {
        long pick = static_cast<long>(rng->below(static_cast<std::uint64_t>(uncovered)));
        for (int i = 0; i < grid.cell_count(); ++i) {
            if (!grid.is_free(i) || grid.level(i) >= threshold) continue;
            if (pick-- == 0) return {grid.cell_center(i), false};
        }
    }
    return {grid.cell_center(best), false};
}

PerturbRule family1_min_coverage_rule() {
    return {RuleFamily::family1, "min_coverage_cell", {}};
}

PerturbRule family2_centroid_rule(int robot_count) {
    PerturbRule r{RuleFamily::family2, "centroid_nearest_uncovered", {}};
    for (int i = 0; i < robot_count; ++i) r.reads.push_back(i);
    return r;
}

bool cell_visible(const StaticMap& map, Vec2 from, Vec2 to) {
    // Strict crossing test: wall-adjacent cells stay visible along the wall.
    for (const auto& ob : map.obstacles)
        if (segment_obstacle_distance(ob, from, to) <= 0.0) return false;
    return true;
}

Vec2 evaluate_rendezvous_rule(const PerturbRule& rule, const CoverageGrid& grid,
                              const WorldState& world, const CoverageParams& params,
                              Rng* rng) {
    const double threshold = params.c_done * grid.c_star();
    if (rng) {
        long uncovered = 0;
        for (int i = 0; i < grid.cell_count(); ++i)
            if (grid.is_free(i) && grid.level(i) < threshold) ++uncovered;
        if (uncovered > 0) {
            long pick = static_cast<long>(rng->below(static_cast<std::uint64_t>(uncovered)));
            for (int i = 0; i < grid.cell_count(); ++i) {
                if (!grid.is_free(i) || grid.level(i) >= threshold) continue;
                if (pick-- == 0) return grid.cell_center(i);
            }
        }
    }
    if (rule.family == RuleFamily::family1) {
        // Lowest coverage level; row-major lowest index on ties.
        int best = -1;
        double best_level = std::numeric_limits<double>::infinity();
        for (int i = 0; i < grid.cell_count(); ++i) {
            if (!grid.is_free(i)) continue;
            if (grid.level(i) < best_level) {
                best_level = grid.level(i);
                best = i;
            }
        }
        if (best < 0) throw protocol_error("rendezvous rule: no free cells");
        return grid.cell_center(best);
    }

    // Family 2: centroid of the declared robot states.
    Vec2 centroid{};
    int found = 0;
    for (int id : rule.reads) {
        bool present = false;
        for (const auto& r : world.robots) {
            if (r.id == id) {
                centroid += r.position;
                present = true;
                break;
            }
        }
        if (!present) throw protocol_error("rendezvous rule: required robot state unavailable");
        ++found;
    }
    if (found == 0) throw protocol_error("rendezvous rule: empty read set");
    centroid = centroid / static_cast<double>(found);
    // A centroid inside a wall (group split around it) anchors the
    // visibility test at the nearest free point instead.
    for (const auto& ob : world.map.obstacles) {
        if (obstacle_contains(ob, centroid)) {
            const Vec2 q = closest_boundary_point(ob, centroid);
            centroid = q + (q - centroid).normalized() * 0.2;
            break;
        }
    }

    int best_visible = -1, best_any = -1;
    double best_visible_d = std::numeric_limits<double>::infinity();
    double best_any_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.cell_count(); ++i) {
        if (!grid.is_free(i) || grid.level(i) >= threshold) continue;
        const Vec2 c = grid.cell_center(i);
        const double d = distance(c, centroid);
        if (d < best_any_d) {
            best_any_d = d;
            best_any = i;
        }
        if (d < best_visible_d && cell_visible(world.map, centroid, c)) {
            best_visible_d = d;
            best_visible = i;
        }
    }
    const int pick = best_visible >= 0 ? best_visible : best_any;
    if (pick < 0) throw protocol_error("rendezvous rule: map already covered");
    return grid.cell_center(pick);
}

GdcStepResult gdc_step(const WorldState& world, GdcState& state, const CoverageGrid& grid,
                       MessageBus* bus, long tick, const GdcParams& gdc,
                       const CoverageParams& cov, double dt_control, double v_max,
                       bool proximity_limited, double comm_radius, Rng* escape_rng) {
    GdcStepResult out;
    out.controls.resize(world.robots.size());

    bool all_slow = true;
    for (const auto& r : world.robots)
        if (r.velocity.norm() >= cov.v_slow) all_slow = false;
    state.slow_timer = all_slow ? state.slow_timer + dt_control : 0.0;

    Vec2 centroid{};
    for (const auto& r : world.robots) centroid += r.position;
    centroid = centroid / static_cast<double>(world.robots.size());
    // Coverage gradient plus a weak cohesion spring: the group works as a
    // unit inside its comm-radius installation, which is what distinguishes
    // it from the fully independent gradient coverage.
    const auto cover_control = [&](const RobotState& r) {
        Vec2 u = idc_control(r.position, grid, cov, v_max, &world.map);
        const Vec2 toward = centroid - r.position;
        const double d = toward.norm();
        if (d > gdc.group_radius)
            u += toward.normalized() * (gdc.k_group * (d - gdc.group_radius));
        return u.clamped(v_max);
    };

    if (state.mode == GdcMode::cover) {
        state.transit_timer = 0.0;
        for (std::size_t i = 0; i < world.robots.size(); ++i)
            out.controls[i] = cover_control(world.robots[i]);
        if (state.slow_timer >= gdc.t_hold && !coverage_complete(grid, cov.c_done)) {
            const Vec2 point = evaluate_rendezvous_rule(
                gdc.rule, grid, world, cov,
                state.last_leg_timed_out ? escape_rng : nullptr);
            state.last_leg_timed_out = false;
            state.rendezvous_point = point;
            state.mode = GdcMode::rendezvous;
            state.slow_timer = 0.0;
            ++state.rendezvous_events;
            if (bus) {
                Message msg;
                msg.sender = state.leader_id;
                for (const auto& r : world.robots)
                    if (r.id != state.leader_id) msg.recipients.push_back(r.id);
                msg.kind = MessageKind::point;
                msg.payload_bits = kPointPayloadBits;
                msg.send_tick = tick;
                bus->broadcast(msg, world, proximity_limited, comm_radius);
                out.messages_sent = static_cast<int>(msg.recipients.size());
            }
            for (std::size_t i = 0; i < world.robots.size(); ++i)
                out.controls[i] =
                    p_controller(world.robots[i].position, point, gdc.k_p, v_max);
        }
        return out;
    }

    // RENDEZVOUS
    state.transit_timer += dt_control;
    const Vec2 point = *state.rendezvous_point;
    bool all_close = true;
    for (const auto& r : world.robots)
        if (distance(r.position, point) > gdc.rho) all_close = false;
    const bool wedged =
        state.slow_timer >= gdc.t_hold || state.transit_timer >= gdc.transit_timeout;
    if (all_close || wedged) {
        state.last_leg_timed_out = !all_close;
        state.mode = GdcMode::cover;
        state.rendezvous_point.reset();
        state.slow_timer = 0.0;
        ++state.resets;
        for (std::size_t i = 0; i < world.robots.size(); ++i)
            out.controls[i] = cover_control(world.robots[i]);
        return out;
    }
    for (std::size_t i = 0; i < world.robots.size(); ++i)
        out.controls[i] = p_controller(world.robots[i].position, point, gdc.k_p, v_max);
    return out;
}

} // namespace swarmbench
