#pragma once

#include "swarmbench/comms.hpp"
#include "swarmbench/map.hpp"
#include "swarmbench/vec2.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace swarmbench {

struct Waypoint {
    Vec2 pos;
    double t = 0.0; // absolute simulation time of arrival

    bool operator==(const Waypoint&) const = default;
};

// Time-parameterized piecewise-linear trajectory. cost is the planned
// arrival time at the goal disk; partial plans carry the straight-line
// remainder plus a fixed penalty so that goal-reaching plans always win.
struct Plan {
    std::vector<Waypoint> waypoints;
    double cost = 0.0;
    bool reaches_goal = false;

    bool empty() const { return waypoints.empty(); }
    // Position at absolute time t; endpoints held outside the time range.
    Vec2 position_at(double t) const;
};

struct RrtParams {
    double goal_bias = 0.1;
    double step = 1.0;            // m, max extension per iteration
    int max_iters = 2000;
    double margin = 0.05;         // m, static + dynamic clearance margin
    int max_waypoints = 64;       // broadcast bound
    double v_nom = 0.5;           // m/s, plan cruise speed
    double capture_radius = 0.2;  // m, waypoint advance radius
    double separation_dt = 0.1;   // s, moving-obstacle sampling period
    double no_goal_penalty = 600.0; // s, cost penalty for partial plans
    double k_p = 2.0;             // waypoint tracking gain
    int replan_cooldown_rounds = 10;
};

// Closed-loop RRT toward the goal disk, collision-checked against static
// obstacles (swept disk) and against the other agents' broadcast plans as
// moving obstacles. Deterministic in the seed. When the iteration cap is
// hit, returns the best partial plan toward the goal.
Plan grow_rrt(Vec2 start, double start_time, const StaticMap& map,
              std::span<const Plan> other_plans, std::uint64_t seed, const RrtParams& params,
              double goal_radius, double collision_radius);

// max(0, current cost - candidate cost); zero for agents inside the goal disk.
double compute_merit(const Plan& current, const Plan& candidate, bool at_goal);

struct TokenState {
    int holder = -1;
    long round = 0;
};

// argmax with ties to the lowest id.
int token_winner(std::span<const double> bids);

// Separation audit between two plans at co-sampled times.
bool plans_separated(const Plan& a, const Plan& b, double min_separation, double sample_dt);

// Proportional waypoint tracking: advances next_waypoint inside the capture
// radius, returns the command toward the active waypoint, zero when the
// plan is exhausted or empty.
Vec2 dmarrt_execute(const RobotState& robot, const Plan& plan, std::size_t& next_waypoint,
                    double capture_radius, double k_p, double v_max);

struct DmarrtAgentState {
    int id = 0;
    Plan current;
    std::size_t next_waypoint = 0;
    // Plans received from the bus, indexed by sender id.
    std::vector<Plan> known_plans;
    long last_grow_round = -1000000;
};

struct CommitRecord {
    long round = 0;
    int agent = 0;
    int waypoint_count = 0;
    int payload_bits = 0;
};

// Merit-based token passing coordinator. Each round every agent posts a
// bid; the winner (argmax, ties to the lowest id) regrows from its current
// state, commits the better of candidate and current plan, and broadcasts
// it to everyone through the bus. A cooldown keeps an agent that just
// replanned from hogging the growth slot while its bid stays marginal.
class DmarrtCoordinator {
public:
    DmarrtCoordinator(const StaticMap& map, const RrtParams& params, int robot_count,
                      std::uint64_t seed, double goal_radius, double collision_radius,
                      double v_max);

    // Runs one token round and returns per-robot controls for this tick.
    std::vector<Vec2> round(const WorldState& world, MessageBus& bus, long tick);

    const TokenState& token() const { return token_; }
    const std::vector<CommitRecord>& commits() const { return commits_; }
    const std::vector<DmarrtAgentState>& agents() const { return agents_; }

private:
    struct PendingPlan {
        long deliver_tick = 0;
        int sender = 0;
        Plan plan;
    };

    double bid_for(const DmarrtAgentState& agent, const WorldState& world, double now) const;
    Vec2 track_plan(DmarrtAgentState& agent, const RobotState& robot) const;
    void apply_due_deliveries(long tick);

    StaticMap map_;
    RrtParams params_;
    std::uint64_t seed_;
    double goal_radius_;
    double plan_goal_radius_;
    double collision_radius_;
    double v_max_;
    TokenState token_;
    std::vector<DmarrtAgentState> agents_;
    std::vector<CommitRecord> commits_;
    std::vector<PendingPlan> pending_plans_;
};

} // namespace swarmbench
