#include "swarmbench/scenario.hpp"

#include "swarmbench/errors.hpp"
#include "swarmbench/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace swarmbench {

using nlohmann::json;

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::pf: return "pf";
        case Algorithm::pbc: return "pbc";
        case Algorithm::dmarrt: return "dmarrt";
        case Algorithm::idc: return "idc";
        case Algorithm::gdc: return "gdc";
    }
    return "?";
}

Algorithm algorithm_from_name(std::string_view name) {
    for (Algorithm a : {Algorithm::pf, Algorithm::pbc, Algorithm::dmarrt, Algorithm::idc,
                        Algorithm::gdc})
        if (name == algorithm_name(a)) return a;
    throw config_error("unknown algorithm: " + std::string(name));
}

bool is_coverage_algorithm(Algorithm a) {
    return a == Algorithm::idc || a == Algorithm::gdc;
}

bool is_swarm_algorithm(Algorithm a) {
    return a == Algorithm::pf || a == Algorithm::pbc || a == Algorithm::idc;
}

namespace {

json params_json(const ScenarioConfig& c) {
    json j;
    j["pf"] = {{"k_att", c.pf.k_att}, {"k_rep", c.pf.k_rep}, {"d0", c.pf.d0},
               {"k_coh", c.pf.k_coh}, {"d_coh", c.pf.d_coh}, {"u_cap", c.pf.u_cap}};
    j["pbc"] = {{"k_p", c.pbc.k_p}, {"ds", c.pbc.ds}, {"gamma", c.pbc.gamma}};
    j["rrt"] = {{"goal_bias", c.rrt.goal_bias}, {"step", c.rrt.step},
                {"max_iters", c.rrt.max_iters}, {"margin", c.rrt.margin},
                {"max_waypoints", c.rrt.max_waypoints}, {"v_nom", c.rrt.v_nom},
                {"capture_radius", c.rrt.capture_radius},
                {"separation_dt", c.rrt.separation_dt},
                {"no_goal_penalty", c.rrt.no_goal_penalty}, {"k_p", c.rrt.k_p},
                {"replan_cooldown_rounds", c.rrt.replan_cooldown_rounds}};
    j["cov"] = {{"resolution", c.cov.resolution}, {"c_star", c.cov.c_star},
                {"peak_rate", c.cov.peak_rate}, {"r_cov", c.cov.r_cov}, {"k_c", c.cov.k_c},
                {"c_done", c.cov.c_done}, {"v_slow", c.cov.v_slow},
                {"t_stuck", c.cov.t_stuck}};
    j["gdc"] = {{"t_hold", c.gdc.t_hold}, {"rho", c.gdc.rho},
                {"transit_timeout", c.gdc.transit_timeout}, {"k_p", c.gdc.k_p},
                {"k_group", c.gdc.k_group}, {"group_radius", c.gdc.group_radius},
                {"rule", c.gdc.rule.rule_id},
                {"rule_family", c.gdc.rule.family == RuleFamily::family1 ? 1 : 2},
                {"rule_reads", c.gdc.rule.reads}};
    return j;
}

} // namespace

std::string config_to_json(const ScenarioConfig& c) {
    json j;
    j["map"] = map_name(c.map);
    j["scale"] = c.scale;
    j["robots"] = c.robots;
    j["algorithm"] = algorithm_name(c.algorithm);
    j["seed"] = c.seed;
    j["cutoff"] = c.cutoff;
    j["control_period"] = c.control_period;
    j["dt"] = c.dt;
    j["v_max"] = c.v_max;
    j["sense_radius"] = c.sense_radius;
    j["collision_radius"] = c.collision_radius;
    j["spawn_spacing"] = c.spawn_spacing;
    j["spawn_allow_violation"] = c.spawn_allow_violation;
    j["latency_rounds"] = c.latency_rounds;
    j["proximity_limited"] = c.proximity_limited;
    j["comm_radius"] = c.comm_radius;
    j["sensing_as_communication"] = c.sensing_as_communication;
    j["stall_detector"] = c.stall_detector;
    j["task"] = c.task;
    j["export_message_log"] = c.export_message_log;
    j["params"] = params_json(c);
    j["artifact_version"] = 1;
    return j.dump();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string s = config_to_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void apply_tuned_params(ScenarioConfig& cfg) {
    const bool obstacle_map =
        cfg.map == MapId::uniform || cfg.map == MapId::corridor || cfg.map == MapId::concave;
    switch (cfg.algorithm) {
        case Algorithm::pf:
            cfg.pf = PfParams{};
            // Strong repulsion reproduces the obstacle-map deadlocks; the
            // soft setting converges on the empty maps without contact.
            cfg.pf.k_rep = obstacle_map ? 15.0 : 0.5;
            break;
        case Algorithm::pbc:
            cfg.pbc = PbcParams{};
            break;
        case Algorithm::dmarrt:
            cfg.rrt = RrtParams{};
            cfg.rrt.v_nom = cfg.v_max;
            break;
        case Algorithm::idc:
            cfg.cov = CoverageParams{};
            cfg.cov.peak_rate = 4.0;
            cfg.pbc = PbcParams{};
            cfg.pbc.ds = 0.35;
            break;
        case Algorithm::gdc:
            cfg.cov = CoverageParams{};
            cfg.cov.peak_rate = 4.0;
            cfg.pbc = PbcParams{};
            cfg.pbc.ds = 0.35;
            cfg.gdc = GdcParams{};
            if (obstacle_map) {
                // Walls split tight groups and stretch the transit legs: a
                // loose herd with patient, roomy rendezvous still converges
                // while the rendezvous cadence keeps the group synchronized.
                cfg.gdc.k_group = 0.2;
                cfg.gdc.group_radius = 10.0;
                cfg.gdc.rho = 2.5;
                cfg.gdc.transit_timeout = 60.0;
            }
            cfg.gdc.rule = family2_centroid_rule(cfg.robots);
            break;
    }
}

ScenarioConfig make_config(Algorithm algorithm, MapId map, int robots, std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.algorithm = algorithm;
    cfg.map = map;
    cfg.robots = robots;
    cfg.seed = seed;
    apply_tuned_params(cfg);
    return cfg;
}

namespace {

// Per-tick control production for one algorithm.
class AlgorithmDriver {
public:
    virtual ~AlgorithmDriver() = default;
    virtual std::vector<Vec2> tick(const WorldState& world, CoverageGrid& grid, long round) = 0;
    virtual bool safety_flag() const { return false; }
    virtual long rendezvous_events() const { return 0; }
};

class PfDriver final : public AlgorithmDriver {
public:
    PfDriver(const ScenarioConfig& cfg, Vec2 goal) : cfg_(cfg), goal_(goal) {}

    std::vector<Vec2> tick(const WorldState& world, CoverageGrid&, long) override {
        std::vector<Vec2> controls(world.robots.size());
        for (std::size_t i = 0; i < world.robots.size(); ++i) {
            const auto neighbors = sense_neighbors(world, static_cast<int>(i));
            const auto obstacles = sense_obstacles(world, static_cast<int>(i));
            try {
                controls[i] = pf_control(world.robots[i], neighbors, obstacles, goal_, cfg_.pf);
            } catch (const singular_input_error&) {
                controls[i] = {}; // collision state: hold position
            }
        }
        return controls;
    }

private:
    ScenarioConfig cfg_;
    Vec2 goal_;
};

class PbcDriver final : public AlgorithmDriver {
public:
    PbcDriver(const ScenarioConfig& cfg, Vec2 goal) : cfg_(cfg), goal_(goal) {}

    std::vector<Vec2> tick(const WorldState& world, CoverageGrid&, long) override {
        std::vector<Vec2> controls(world.robots.size());
        for (std::size_t i = 0; i < world.robots.size(); ++i) {
            const auto& robot = world.robots[i];
            const Vec2 u_des = p_controller(robot.position, goal_, cfg_.pbc.k_p, cfg_.v_max);
            const auto neighbors = sense_neighbors(world, static_cast<int>(i));
            const auto obstacles = sense_obstacles(world, static_cast<int>(i));
            const PbcResult r =
                pbc_filter(u_des, robot, neighbors, obstacles, cfg_.pbc, cfg_.v_max);
            controls[i] = r.u;
            if (r.infeasible) infeasible_seen_ = true;
        }
        return controls;
    }

    bool safety_flag() const override { return infeasible_seen_; }

private:
    ScenarioConfig cfg_;
    Vec2 goal_;
    bool infeasible_seen_ = false;
};

class DmarrtDriver final : public AlgorithmDriver {
public:
    DmarrtDriver(const ScenarioConfig& cfg, const StaticMap& map, MessageBus& bus)
        : bus_(bus),
          coordinator_(map, cfg.rrt, cfg.robots, cfg.seed, map.goal_radius,
                       cfg.collision_radius, cfg.v_max) {}

    std::vector<Vec2> tick(const WorldState& world, CoverageGrid&, long round) override {
        return coordinator_.round(world, bus_, round);
    }

private:
    MessageBus& bus_;
    DmarrtCoordinator coordinator_;
};

class IdcDriver final : public AlgorithmDriver {
public:
    explicit IdcDriver(const ScenarioConfig& cfg) : cfg_(cfg) {
        states_.resize(cfg.robots);
        for (int i = 0; i < cfg.robots; ++i)
            states_[i].rng = Rng(derive_seed(cfg.seed, 0xb00 + static_cast<std::uint64_t>(i)));
    }

    std::vector<Vec2> tick(const WorldState& world, CoverageGrid& grid, long) override {
        std::vector<Vec2> controls(world.robots.size());
        for (std::size_t i = 0; i < world.robots.size(); ++i) {
            const auto& robot = world.robots[i];
            PerRobot& st = states_[i];
            if (robot.velocity.norm() < cfg_.cov.v_slow) {
                st.slow_timer += cfg_.control_period;
            } else {
                st.slow_timer = 0.0;
            }
            if (st.waypoint &&
                distance(robot.position, *st.waypoint) <= cfg_.rrt.capture_radius) {
                st.waypoint.reset();
                st.slow_timer = 0.0;
            }
            if (st.slow_timer >= cfg_.cov.t_stuck) {
                const PerturbDecision d =
                    idc_perturb(robot.position, grid, cfg_.cov, &world.map, &st.rng);
                st.slow_timer = 0.0;
                st.waypoint = d.waypoint; // none when the mission is complete
            }
            Vec2 u_des;
            if (st.waypoint) {
                u_des = p_controller(robot.position, *st.waypoint, cfg_.pbc.k_p, cfg_.v_max);
            } else {
                u_des = idc_control(robot.position, grid, cfg_.cov, cfg_.v_max, &world.map);
            }
            const auto neighbors = sense_neighbors(world, static_cast<int>(i));
            const auto obstacles = sense_obstacles(world, static_cast<int>(i));
            const PbcResult r =
                pbc_filter(u_des, robot, neighbors, obstacles, cfg_.pbc, cfg_.v_max);
            controls[i] = r.u;
            if (r.infeasible) infeasible_seen_ = true;
        }
        return controls;
    }

    bool safety_flag() const override { return infeasible_seen_; }

private:
    struct PerRobot {
        double slow_timer = 0.0;
        std::optional<Vec2> waypoint;
        Rng rng;
    };
    ScenarioConfig cfg_;
    std::vector<PerRobot> states_;
    bool infeasible_seen_ = false;
};

class GdcDriver final : public AlgorithmDriver {
public:
    GdcDriver(const ScenarioConfig& cfg, MessageBus& bus)
        : cfg_(cfg), bus_(bus), escape_rng_(derive_seed(cfg.seed, 0x6dc)) {
        state_.leader_id = 0; // lowest id leads
    }

    std::vector<Vec2> tick(const WorldState& world, CoverageGrid& grid, long round) override {
        bus_.collect_due(round);
        const GdcStepResult step = gdc_step(world, state_, grid, &bus_, round, cfg_.gdc,
                                            cfg_.cov, cfg_.control_period, cfg_.v_max,
                                            cfg_.proximity_limited, cfg_.comm_radius,
                                            &escape_rng_);
        std::vector<Vec2> controls(world.robots.size());
        for (std::size_t i = 0; i < world.robots.size(); ++i) {
            const auto neighbors = sense_neighbors(world, static_cast<int>(i));
            const auto obstacles = sense_obstacles(world, static_cast<int>(i));
            const PbcResult r = pbc_filter(step.controls[i], world.robots[i], neighbors,
                                           obstacles, cfg_.pbc, cfg_.v_max);
            controls[i] = r.u;
            if (r.infeasible) infeasible_seen_ = true;
        }
        return controls;
    }

    bool safety_flag() const override { return infeasible_seen_; }
    long rendezvous_events() const override { return state_.rendezvous_events; }

private:
    ScenarioConfig cfg_;
    MessageBus& bus_;
    GdcState state_;
    Rng escape_rng_;
    bool infeasible_seen_ = false;
};

std::unique_ptr<AlgorithmDriver> make_driver(const ScenarioConfig& cfg, const StaticMap& map,
                                             MessageBus& bus) {
    switch (cfg.algorithm) {
        case Algorithm::pf: return std::make_unique<PfDriver>(cfg, map.goal);
        case Algorithm::pbc: return std::make_unique<PbcDriver>(cfg, map.goal);
        case Algorithm::dmarrt: return std::make_unique<DmarrtDriver>(cfg, map, bus);
        case Algorithm::idc: return std::make_unique<IdcDriver>(cfg);
        case Algorithm::gdc: return std::make_unique<GdcDriver>(cfg, bus);
    }
    throw config_error("unknown algorithm");
}

} // namespace

TrialResult run_trial(const ScenarioConfig& cfg, CoverageGrid* final_grid,
                      const SampleObserver& on_sample) {
    if (cfg.control_period <= 0.0 || cfg.dt <= 0.0)
        throw config_error("control_period and dt must be positive");
    const char* own_task = is_coverage_algorithm(cfg.algorithm) ? "coverage" : "navigation";
    if (cfg.task != "auto" && cfg.task != own_task)
        throw config_error(std::string("task '") + cfg.task + "' does not fit algorithm " +
                           algorithm_name(cfg.algorithm));
    const double ratio = cfg.control_period / cfg.dt;
    const int substeps = static_cast<int>(std::lround(ratio));
    if (substeps < 1 || std::abs(ratio - substeps) > 1e-9)
        throw config_error("control_period must be an integer multiple of dt");
    const int ticks_per_second =
        std::max(1, static_cast<int>(std::lround(1.0 / cfg.control_period)));

    WorldState world;
    world.map = load_map(cfg.map, cfg.scale);
    world.rng_seed = cfg.seed;
    SpawnConfig spawn;
    spawn.robot_count = cfg.robots;
    spawn.min_spacing = cfg.spawn_spacing;
    spawn.allow_spacing_violation = cfg.spawn_allow_violation;
    spawn.collision_radius = cfg.collision_radius;
    spawn.sense_radius = cfg.sense_radius;
    world.robots = spawn_robots(world.map, spawn, cfg.seed);

    CoverageGrid grid(world.map, cfg.cov.resolution, cfg.cov.c_star);
    MessageBus bus(cfg.control_period, cfg.latency_rounds);
    auto driver = make_driver(cfg, world.map, bus);

    const double goal_radius = world.map.goal_radius; // load_map applied the scale
    const bool coverage_task = is_coverage_algorithm(cfg.algorithm);

    CollisionLedger collisions;
    bool success = false;
    double convergence_time = 0.0;
    bool stalled = false;
    std::vector<std::vector<Vec2>> position_history; // 1 Hz, stall detection

    long round = 0;
    while (world.time < cfg.cutoff - 1e-12) {
        const std::vector<Vec2> controls = driver->tick(world, grid, round);
        if (cfg.sensing_as_communication) {
            // Charge one state report per sensed neighbor per control tick.
            auto& ledger = bus.ledger_mutable();
            for (std::size_t i = 0; i < world.robots.size(); ++i)
                for (const auto& nb : sense_neighbors(world, static_cast<int>(i)))
                    ledger.record_delivery(round, nb.id, static_cast<int>(i),
                                           MessageKind::state, kStatePayloadBits);
        }
        for (int s = 0; s < substeps; ++s) {
            step(world, controls, cfg.dt, cfg.v_max);
            accrue(grid, world.robots, cfg.dt, cfg.cov);
        }
        ++round;
        if (round % ticks_per_second == 0) {
            count_collisions(world, collisions);
            if (on_sample) on_sample(world, grid);
            if (cfg.stall_detector) {
                std::vector<Vec2> snapshot;
                for (const auto& r : world.robots) snapshot.push_back(r.position);
                position_history.push_back(std::move(snapshot));
                const std::size_t lag = 30;
                if (position_history.size() > lag) {
                    const auto& old = position_history[position_history.size() - 1 - lag];
                    double max_move = 0.0;
                    for (std::size_t i = 0; i < world.robots.size(); ++i)
                        max_move =
                            std::max(max_move, distance(world.robots[i].position, old[i]));
                    if (max_move < 0.05) stalled = true;
                }
            }
        }
        if (coverage_task) {
            success = coverage_complete(grid, cfg.cov.c_done);
        } else {
            success = true;
            for (const auto& r : world.robots)
                if (distance(r.position, world.map.goal) > goal_radius) success = false;
        }
        if (success) {
            convergence_time = world.time;
            break;
        }
    }
    // Flush in-flight messages so the ledger covers the whole trial.
    bus.collect_due(round + cfg.latency_rounds + 1);

    TrialResult result;
    result.algorithm = algorithm_name(cfg.algorithm);
    result.map = map_name(cfg.map);
    result.robots = cfg.robots;
    result.seed = cfg.seed;
    result.config_hash = config_hash(cfg);
    result.success = success;
    if (success) result.convergence_time = convergence_time;
    for (const auto& r : world.robots) result.total_distance += r.distance_travelled;
    result.collisions_rr = collisions.robot_robot_total;
    result.collisions_ro = collisions.robot_obstacle_total;
    result.coverage_fraction = coverage_fraction(grid, cfg.cov.c_done);
    result.bandwidth = bandwidth_summary(bus.ledger(), std::max(world.time, cfg.dt));
    result.message_count = bus.ledger().message_count();
    result.dropped_count = static_cast<long>(bus.ledger().dropped().size());
    for (const auto& rec : bus.ledger().log())
        result.max_message_bits = std::max(result.max_message_bits,
                                           static_cast<long>(rec.payload_bits));
    result.ledger_replay_ok = bus.ledger().replay_edge_totals() == bus.ledger().edge_totals();
    if (cfg.export_message_log) result.message_log = bus.ledger().export_log();
    result.rendezvous_events = driver->rendezvous_events();
    result.safety_filter_infeasible = driver->safety_flag();
    result.stalled = stalled;
    if (final_grid) *final_grid = grid;
    return result;
}

std::string TrialResult::to_json() const {
    json j;
    j["algorithm"] = algorithm;
    j["map"] = map;
    j["robots"] = robots;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["success"] = success;
    if (convergence_time) {
        j["convergence_time_s"] = *convergence_time;
    } else {
        j["convergence_time_s"] = nullptr;
    }
    j["distance_m"] = total_distance;
    j["collisions_rr"] = collisions_rr;
    j["collisions_ro"] = collisions_ro;
    j["coverage_fraction"] = coverage_fraction;
    j["bandwidth"] = {{"total_bits", bandwidth.total_bits},
                      {"average_total_bps", bandwidth.average_total_bps},
                      {"peak_edge_bps", bandwidth.peak_edge_bps}};
    j["message_count"] = message_count;
    j["dropped_count"] = dropped_count;
    j["rendezvous_events"] = rendezvous_events;
    j["safety_filter_infeasible"] = safety_filter_infeasible;
    j["stalled"] = stalled;
    j["artifact_version"] = 1;
    return j.dump(2);
}

const char* suite_verdict_name(SuiteVerdict v) {
    switch (v) {
        case SuiteVerdict::completed: return "completed";
        case SuiteVerdict::intractable: return "intractable";
        case SuiteVerdict::exhausted: return "exhausted";
    }
    return "?";
}

namespace {

MetricStats stats_of(const std::vector<double>& xs) {
    MetricStats s;
    s.n = static_cast<int>(xs.size());
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.stddev = xs.size() > 1 ? std::sqrt(var / (xs.size() - 1)) : 0.0;
    return s;
}

} // namespace

SuiteResult run_suite(const ScenarioConfig& cfg_template, const SuiteProtocol& protocol) {
    return run_suite(cfg_template, protocol,
                     [](const ScenarioConfig& cfg) { return run_trial(cfg); });
}

SuiteResult run_suite(const ScenarioConfig& cfg_template, const SuiteProtocol& protocol,
                      const TrialFn& trial_fn) {
    if (protocol.success_quota < 1 || protocol.intractable_streak < 1)
        throw config_error("suite protocol counts must be positive");
    SuiteResult suite;
    int index = 0;
    while (true) {
        ScenarioConfig cfg = cfg_template;
        cfg.seed = derive_seed(cfg_template.seed, static_cast<std::uint64_t>(index));
        const TrialResult r = trial_fn(cfg);
        suite.trials.push_back(r);
        if (r.success) {
            ++suite.successes;
        } else {
            ++suite.failures;
        }
        ++index;
        if (suite.successes == 0 && suite.failures >= protocol.intractable_streak) {
            suite.verdict = SuiteVerdict::intractable;
            break;
        }
        if (suite.successes >= protocol.success_quota) {
            suite.verdict = SuiteVerdict::completed;
            break;
        }
        if (index >= protocol.max_trials) {
            suite.verdict = SuiteVerdict::exhausted;
            break;
        }
    }
    std::vector<double> times, dists, cols;
    for (const auto& t : suite.trials) {
        if (!t.success) continue;
        times.push_back(t.convergence_time.value_or(0.0));
        dists.push_back(t.total_distance);
        cols.push_back(static_cast<double>(t.collisions_rr + t.collisions_ro));
    }
    suite.convergence_time = stats_of(times);
    suite.total_distance = stats_of(dists);
    suite.collisions = stats_of(cols);
    return suite;
}

std::string SuiteResult::to_json() const {
    json j;
    j["verdict"] = suite_verdict_name(verdict);
    j["successes"] = successes;
    j["failures"] = failures;
    j["mean_convergence_time_s"] = convergence_time.mean;
    j["stddev_convergence_time_s"] = convergence_time.stddev;
    j["mean_distance_m"] = total_distance.mean;
    j["stddev_distance_m"] = total_distance.stddev;
    j["mean_collisions"] = collisions.mean;
    j["trials"] = json::array();
    for (const auto& t : trials) j["trials"].push_back(json::parse(t.to_json()));
    return j.dump(2);
}

} // namespace swarmbench
