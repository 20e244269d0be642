#include "swarmbench/dmarrt.hpp"

#include "swarmbench/errors.hpp"
#include "swarmbench/nav_swarm.hpp"
#include "swarmbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarmbench {

Vec2 Plan::position_at(double t) const {
    if (waypoints.empty()) return {};
    if (t <= waypoints.front().t) return waypoints.front().pos;
    if (t >= waypoints.back().t) return waypoints.back().pos;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (t <= waypoints[i].t) {
            const Waypoint& a = waypoints[i - 1];
            const Waypoint& b = waypoints[i];
            const double span = b.t - a.t;
            const double f = span > 0.0 ? (t - a.t) / span : 1.0;
            return a.pos + (b.pos - a.pos) * f;
        }
    }
    return waypoints.back().pos;
}

namespace {

bool segment_clear_static(const StaticMap& map, Vec2 a, Vec2 b, double clearance) {
    if (a.x < clearance || a.x > map.width - clearance || a.y < clearance ||
        a.y > map.height - clearance)
        return false;
    if (b.x < clearance || b.x > map.width - clearance || b.y < clearance ||
        b.y > map.height - clearance)
        return false;
    for (const auto& ob : map.obstacles)
        if (segment_obstacle_distance(ob, a, b) < clearance) return false;
    return true;
}

// Separation from every broadcast plan along the edge, sampled on the
// absolute sample_dt grid (plus both endpoints) so that growth checks and
// post-hoc audits see the same instants.
bool edge_clear_dynamic(Vec2 a, double ta, Vec2 b, double tb, std::span<const Plan> others,
                        double min_sep, double sample_dt) {
    if (others.empty()) return true;
    const auto clear_at = [&](double t) {
        const double f = tb > ta ? std::clamp((t - ta) / (tb - ta), 0.0, 1.0) : 0.0;
        const Vec2 p = a + (b - a) * f;
        for (const auto& plan : others) {
            if (plan.empty()) continue;
            if (distance(p, plan.position_at(t)) < min_sep) return false;
        }
        return true;
    };
    if (!clear_at(ta) || !clear_at(tb)) return false;
    for (double t = std::ceil(ta / sample_dt) * sample_dt; t < tb; t += sample_dt)
        if (!clear_at(t)) return false;
    return true;
}

// After the plan ends its robot parks at the last waypoint; the parked
// position must stay clear of every other plan still in flight.
bool hold_clear_dynamic(Vec2 park, double t_park, std::span<const Plan> others, double min_sep,
                        double sample_dt) {
    for (const auto& plan : others) {
        if (plan.empty()) continue;
        const double t_end = plan.waypoints.back().t;
        const auto clear_at = [&](double t) {
            return distance(park, plan.position_at(t)) >= min_sep;
        };
        if (!clear_at(t_park) || !clear_at(t_end)) return false;
        for (double t = std::ceil(t_park / sample_dt) * sample_dt; t < t_end; t += sample_dt)
            if (!clear_at(t)) return false;
    }
    return true;
}

struct TreeNode {
    Vec2 pos;
    double t = 0.0;
    int parent = -1;
};

double straight_time(Vec2 from, Vec2 goal, double goal_radius, double v_nom) {
    return std::max(0.0, distance(from, goal) - goal_radius) / v_nom;
}

Plan extract_plan(const std::vector<TreeNode>& nodes, int leaf, bool reaches, Vec2 goal,
                  double goal_radius, const RrtParams& params) {
    std::vector<Waypoint> rev;
    for (int i = leaf; i >= 0; i = nodes[i].parent) rev.push_back({nodes[i].pos, nodes[i].t});
    Plan plan;
    plan.waypoints.assign(rev.rbegin(), rev.rend());
    plan.reaches_goal = reaches;
    plan.cost = plan.waypoints.back().t;
    if (!reaches)
        plan.cost += straight_time(plan.waypoints.back().pos, goal, goal_radius, params.v_nom) +
                     params.no_goal_penalty;
    return plan;
}

// Drop intermediate waypoints whenever the straight, re-timed connection
// stays clear both statically and against the other plans.
Plan shortcut_plan(Plan plan, const StaticMap& map, std::span<const Plan> others,
                   const RrtParams& params, double clearance, double min_sep) {
    if (plan.waypoints.size() < 3) return plan;
    bool changed = true;
    int guard = 0;
    while (changed && ++guard < 8) {
        changed = false;
        std::size_t i = 0;
        while (i + 2 < plan.waypoints.size()) {
            Plan trial = plan;
            trial.waypoints.erase(trial.waypoints.begin() + static_cast<long>(i) + 1);
            // Re-time from the cut point onward at cruise speed.
            for (std::size_t k = i + 1; k < trial.waypoints.size(); ++k) {
                trial.waypoints[k].t =
                    trial.waypoints[k - 1].t +
                    distance(trial.waypoints[k - 1].pos, trial.waypoints[k].pos) / params.v_nom;
            }
            bool ok = segment_clear_static(map, trial.waypoints[i].pos, trial.waypoints[i + 1].pos,
                                           clearance);
            for (std::size_t k = i; ok && k + 1 < trial.waypoints.size(); ++k) {
                ok = edge_clear_dynamic(trial.waypoints[k].pos, trial.waypoints[k].t,
                                        trial.waypoints[k + 1].pos, trial.waypoints[k + 1].t,
                                        others, min_sep, params.separation_dt);
            }
            // The shortcut arrives earlier, widening the parked interval.
            if (ok)
                ok = hold_clear_dynamic(trial.waypoints.back().pos, trial.waypoints.back().t,
                                        others, min_sep, params.separation_dt);
            if (ok) {
                plan = std::move(trial);
                changed = true;
            } else {
                ++i;
            }
        }
    }
    if (plan.reaches_goal) plan.cost = plan.waypoints.back().t;
    return plan;
}

} // namespace

Plan grow_rrt(Vec2 start, double start_time, const StaticMap& map,
              std::span<const Plan> other_plans, std::uint64_t seed, const RrtParams& params,
              double goal_radius, double collision_radius) {
    for (const auto& ob : map.obstacles)
        if (signed_distance(ob, start) < collision_radius)
            throw input_error("grow_rrt: start inside an obstacle");

    const double clearance = collision_radius + params.margin;
    const double min_sep = 2.0 * collision_radius + params.margin;
    const Vec2 goal = map.goal;

    if (distance(start, goal) <= goal_radius) {
        Plan p;
        p.waypoints.push_back({start, start_time});
        p.reaches_goal = true;
        p.cost = start_time;
        return p;
    }

    Rng rng(seed);
    std::vector<TreeNode> nodes;
    nodes.push_back({start, start_time, -1});
    int goal_leaf = -1;

    for (int iter = 0; iter < params.max_iters && goal_leaf < 0; ++iter) {
        const Vec2 sample = rng.uniform01() < params.goal_bias
                                ? goal
                                : Vec2{rng.uniform(0.0, map.width), rng.uniform(0.0, map.height)};
        int nearest = 0;
        double nearest_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double d = distance(nodes[i].pos, sample);
            if (d < nearest_d) {
                nearest_d = d;
                nearest = static_cast<int>(i);
            }
        }
        if (nearest_d == 0.0) continue;
        const Vec2 from = nodes[nearest].pos;
        const Vec2 to = nearest_d <= params.step
                            ? sample
                            : from + (sample - from) * (params.step / nearest_d);
        if (!segment_clear_static(map, from, to, clearance)) continue;
        const double t_from = nodes[nearest].t;
        const double t_to = t_from + distance(from, to) / params.v_nom;
        if (!edge_clear_dynamic(from, t_from, to, t_to, other_plans, min_sep,
                                params.separation_dt))
            continue;
        nodes.push_back({to, t_to, nearest});
        if (distance(to, goal) <= goal_radius &&
            hold_clear_dynamic(to, t_to, other_plans, min_sep, params.separation_dt))
            goal_leaf = static_cast<int>(nodes.size()) - 1;
    }

    Plan plan;
    if (goal_leaf >= 0) {
        plan = extract_plan(nodes, goal_leaf, true, goal, goal_radius, params);
    } else {
        // Best partial: closest approach to the goal.
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double d = distance(nodes[i].pos, goal);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        plan = extract_plan(nodes, best, false, goal, goal_radius, params);
    }
    plan = shortcut_plan(std::move(plan), map, other_plans, params, clearance, min_sep);
    if (static_cast<int>(plan.waypoints.size()) > params.max_waypoints) {
        plan.waypoints.resize(params.max_waypoints);
        plan.reaches_goal = false;
        plan.cost = plan.waypoints.back().t +
                    straight_time(plan.waypoints.back().pos, goal, goal_radius, params.v_nom) +
                    params.no_goal_penalty;
    }
    return plan;
}

int token_winner(std::span<const double> bids) {
    int winner = 0;
    for (std::size_t i = 1; i < bids.size(); ++i)
        if (bids[i] > bids[winner]) winner = static_cast<int>(i);
    return winner;
}

double compute_merit(const Plan& current, const Plan& candidate, bool at_goal) {
    if (at_goal) return 0.0;
    if (candidate.empty()) return 0.0;
    if (current.empty()) return std::max(0.0, 1e9 - candidate.cost);
    return std::max(0.0, current.cost - candidate.cost);
}

bool plans_separated(const Plan& a, const Plan& b, double min_separation, double sample_dt) {
    if (a.empty() || b.empty()) return true;
    // Audit window: both plans live (the later commit was grown against the
    // earlier plan; before that instant the later robot was on its previous
    // plan, which had its own audit).
    const double t0 = std::max(a.waypoints.front().t, b.waypoints.front().t);
    const double t1 = std::max(a.waypoints.back().t, b.waypoints.back().t);
    const auto apart = [&](double t) {
        return distance(a.position_at(t), b.position_at(t)) >= min_separation;
    };
    if (!apart(t0) || !apart(t1)) return false;
    for (double t = std::ceil(t0 / sample_dt) * sample_dt; t < t1; t += sample_dt)
        if (!apart(t)) return false;
    return true;
}

DmarrtCoordinator::DmarrtCoordinator(const StaticMap& map, const RrtParams& params,
                                     int robot_count, std::uint64_t seed, double goal_radius,
                                     double collision_radius, double v_max)
    : map_(map), params_(params), seed_(seed), goal_radius_(goal_radius),
      // Plans aim inside the success disk so that waypoint-capture slack
      // still leaves the robot parked within the goal radius.
      plan_goal_radius_(std::max(params.capture_radius,
                                 goal_radius - 2.5 * params.capture_radius)),
      collision_radius_(collision_radius), v_max_(v_max) {
    agents_.resize(robot_count);
    for (int i = 0; i < robot_count; ++i) {
        agents_[i].id = i;
        agents_[i].known_plans.resize(robot_count);
    }
}

double DmarrtCoordinator::bid_for(const DmarrtAgentState& agent, const WorldState& world,
                                  double now) const {
    const RobotState& robot = world.robots[agent.id];
    if (distance(robot.position, map_.goal) <= goal_radius_) return 0.0;
    // Urgency: current effective cost against an optimistic straight-line
    // candidate. Positive whenever the plan detours or fails to reach.
    const double optimistic =
        now +
        std::max(0.0, distance(robot.position, map_.goal) - plan_goal_radius_) / params_.v_nom;
    double current_cost;
    if (agent.current.empty()) {
        current_cost = optimistic + params_.no_goal_penalty;
    } else {
        current_cost = agent.current.cost;
    }
    return std::max(0.0, current_cost - optimistic);
}

Vec2 dmarrt_execute(const RobotState& robot, const Plan& plan, std::size_t& next_waypoint,
                    double capture_radius, double k_p, double v_max) {
    while (next_waypoint < plan.waypoints.size() &&
           distance(robot.position, plan.waypoints[next_waypoint].pos) <= capture_radius)
        ++next_waypoint;
    if (next_waypoint >= plan.waypoints.size()) return {};
    return p_controller(robot.position, plan.waypoints[next_waypoint].pos, k_p, v_max);
}

Vec2 DmarrtCoordinator::track_plan(DmarrtAgentState& agent, const RobotState& robot) const {
    return dmarrt_execute(robot, agent.current, agent.next_waypoint, params_.capture_radius,
                          params_.k_p, v_max_);
}

void DmarrtCoordinator::apply_due_deliveries(long tick) {
    std::vector<PendingPlan> still_pending;
    for (auto& p : pending_plans_) {
        if (p.deliver_tick <= tick) {
            for (auto& agent : agents_)
                if (agent.id != p.sender) agent.known_plans[p.sender] = p.plan;
        } else {
            still_pending.push_back(std::move(p));
        }
    }
    pending_plans_ = std::move(still_pending);
}

std::vector<Vec2> DmarrtCoordinator::round(const WorldState& world, MessageBus& bus, long tick) {
    // 1. Deliver due broadcasts: the bus charges the ledger, the pending
    //    store applies the plan contents to every constraint set.
    bus.collect_due(tick);
    apply_due_deliveries(tick);

    token_.round = tick;
    // 2. Bids.
    std::vector<double> bids(agents_.size(), 0.0);
    for (std::size_t i = 0; i < agents_.size(); ++i)
        bids[i] = bid_for(agents_[i], world, world.time);
    const int winner = token_winner(bids);
    token_.holder = winner;

    // 3. Winner regrows from its current state unless cooling down.
    DmarrtAgentState& w = agents_[winner];
    const bool needs_plan = w.current.empty() || !w.current.reaches_goal;
    const bool eligible =
        (tick - w.last_grow_round >= params_.replan_cooldown_rounds || needs_plan) &&
        bids[winner] > 0.0;
    Plan committed = w.current;
    if (eligible) {
        std::vector<Plan> others;
        for (std::size_t j = 0; j < w.known_plans.size(); ++j)
            if (static_cast<int>(j) != w.id && !w.known_plans[j].empty())
                others.push_back(w.known_plans[j]);
        const Plan candidate =
            grow_rrt(world.robots[w.id].position, world.time, map_, others,
                     derive_seed(seed_, 0x9000 + static_cast<std::uint64_t>(tick) * 64 +
                                            static_cast<std::uint64_t>(w.id)),
                     params_, plan_goal_radius_, collision_radius_);
        w.last_grow_round = tick;
        if (w.current.empty() || candidate.cost < w.current.cost) {
            committed = candidate;
        }
    }
    if (committed.empty()) {
        // Bootstrap: hold position as a (partial) plan.
        committed.waypoints.push_back({world.robots[w.id].position, world.time});
        committed.reaches_goal =
            distance(world.robots[w.id].position, map_.goal) <= plan_goal_radius_;
        committed.cost =
            world.time +
            (committed.reaches_goal
                 ? 0.0
                 : std::max(0.0, distance(world.robots[w.id].position, map_.goal) -
                                     plan_goal_radius_) /
                           params_.v_nom +
                       params_.no_goal_penalty);
    }
    if (!(committed.waypoints == w.current.waypoints)) {
        w.current = committed;
        w.next_waypoint = 0;
    }

    // 4. Broadcast the committed plan; one commit per round.
    Message msg;
    msg.sender = w.id;
    for (const auto& agent : agents_)
        if (agent.id != w.id) msg.recipients.push_back(agent.id);
    msg.kind = MessageKind::plan;
    msg.payload_bits = plan_payload_bits(static_cast<int>(committed.waypoints.size()));
    msg.send_tick = tick;
    bus.broadcast(msg, world, false, 0.0);
    commits_.push_back({tick, w.id, static_cast<int>(committed.waypoints.size()),
                        msg.payload_bits});
    pending_plans_.push_back({tick + bus.latency_ticks(), w.id, committed});
    w.known_plans[w.id] = committed; // the committer knows its own plan at once
    apply_due_deliveries(tick);      // zero-latency contents land this round

    // 5. Track.
    std::vector<Vec2> controls(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i)
        controls[i] = track_plan(agents_[i], world.robots[i]);
    return controls;
}

} // namespace swarmbench
