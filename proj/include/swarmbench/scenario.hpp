#pragma once

#include "swarmbench/comms.hpp"
#include "swarmbench/coverage.hpp"
#include "swarmbench/dmarrt.hpp"
#include "swarmbench/map.hpp"
#include "swarmbench/nav_swarm.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace swarmbench {

enum class Algorithm { pf, pbc, dmarrt, idc, gdc };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);

bool is_coverage_algorithm(Algorithm a);
bool is_swarm_algorithm(Algorithm a); // sensing-only: never touches the bus

struct ScenarioConfig {
    MapId map = MapId::empty_spread;
    double scale = 1.0;
    int robots = 4;
    Algorithm algorithm = Algorithm::pf;
    std::uint64_t seed = 1;
    double cutoff = 600.0;        // s
    double control_period = 0.1;  // s
    double dt = 0.02;             // s physics step
    double v_max = 0.5;           // m/s
    double sense_radius = 3.0;    // m
    double collision_radius = 0.1; // m
    double spawn_spacing = 0.6;   // m
    bool spawn_allow_violation = false;
    int latency_rounds = 1;       // bus latency in control ticks
    bool proximity_limited = false;
    double comm_radius = 1e9;     // m
    bool sensing_as_communication = false;
    bool stall_detector = false;
    // auto | navigation | coverage; anything but the algorithm's own task
    // class is a configuration error.
    std::string task = "auto";
    bool export_message_log = false; // line-delimited records in the result

    PfParams pf;
    PbcParams pbc;
    RrtParams rrt;
    CoverageParams cov;
    GdcParams gdc;
};

// Canonical JSON (sorted keys, round-trip floats); the config hash is
// FNV-1a 64 over this string.
std::string config_to_json(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

// Tuned parameter block per (algorithm, map); the same block serves every
// robot count. Overrides the parameter sections, leaves the rest alone.
void apply_tuned_params(ScenarioConfig& cfg);
ScenarioConfig make_config(Algorithm algorithm, MapId map, int robots, std::uint64_t seed);

struct TrialResult {
    std::string algorithm;
    std::string map;
    int robots = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    bool success = false;
    std::optional<double> convergence_time; // unset on failure
    double total_distance = 0.0;
    long collisions_rr = 0;
    long collisions_ro = 0;
    double coverage_fraction = 0.0;
    BandwidthSummary bandwidth;
    long message_count = 0;
    long dropped_count = 0;
    long rendezvous_events = 0;
    long max_message_bits = 0;  // largest single delivered payload
    bool ledger_replay_ok = true; // log replay reproduced the edge totals
    bool safety_filter_infeasible = false;
    bool stalled = false;
    std::string message_log; // filled when cfg.export_message_log is set

    std::string to_json() const;
};

// Called at each 1 Hz metric sample.
using SampleObserver = std::function<void(const WorldState&, const CoverageGrid&)>;

// final_grid, when given, receives the end-of-trial coverage field;
// on_sample, when given, observes the world at every 1 Hz sample.
TrialResult run_trial(const ScenarioConfig& cfg, CoverageGrid* final_grid = nullptr,
                      const SampleObserver& on_sample = {});

enum class SuiteVerdict { completed, intractable, exhausted };

const char* suite_verdict_name(SuiteVerdict v);

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;
    int n = 0;
};

struct SuiteResult {
    SuiteVerdict verdict = SuiteVerdict::completed;
    std::vector<TrialResult> trials; // every trial, success or failure
    int successes = 0;
    int failures = 0;
    MetricStats convergence_time; // over successful trials
    MetricStats total_distance;
    MetricStats collisions;

    std::string to_json() const;
};

struct SuiteProtocol {
    int success_quota = 5;
    int intractable_streak = 5; // straight failures from trial one
    int max_trials = 100;       // safety stop, distinct verdict
};

using TrialFn = std::function<TrialResult(const ScenarioConfig&)>;

// Benchmark protocol: if the first intractable_streak trials all fail the
// scenario is intractable; otherwise trials continue (deterministic seed
// stream) until success_quota successes, keeping every failure on record.
SuiteResult run_suite(const ScenarioConfig& cfg_template, const SuiteProtocol& protocol,
                      const TrialFn& trial_fn);
SuiteResult run_suite(const ScenarioConfig& cfg_template, const SuiteProtocol& protocol);

} // namespace swarmbench
