#pragma once

#include "swarmbench/coverage.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace swarmbench {

enum class EdgeKind { internal, external };

struct CircuitEdge {
    int u = 0;
    int v = 0;
    EdgeKind kind = EdgeKind::external;
    double bits_per_s = 0.0;
};

// Sensor-system model: one vertex per robot, edges are sensing or explicit
// communication pathways. output_bits_per_s is the per-robot state report
// treated as a rate (one report per second).
struct CircuitGraph {
    std::vector<int> vertices;
    std::vector<CircuitEdge> edges;
    double output_bits_per_s = 0.0;
};

// Greater of the internal bandwidth, external bandwidth, and output size.
double max_bandwidth(const CircuitGraph& graph);

// Circuit with measured edge rates: every communicating edge carries its
// ledger peak (1 s windows), vertices are the robots.
CircuitGraph measured_circuit(const BandwidthSummary& bandwidth, int robot_count,
                              double output_bits_per_s = 128.0);

// Closed calibration vocabulary. Extending it is a breaking change.
enum class AtomKind {
    all_within_comm_radius,    // stricter = smaller radius
    min_obstacle_clearance,    // stricter = larger clearance
    min_pairwise_spawn_spacing, // stricter = larger spacing
    initially_connected,       // stricter = smaller radius
    rule_programmed,           // parameterless; rule ids must match
};

const char* atom_name(AtomKind kind);

struct CalibrationAtom {
    AtomKind kind = AtomKind::all_within_comm_radius;
    double param = 0.0;
    std::string rule_id; // rule_programmed only

    bool at_least_as_strict_as(const CalibrationAtom& other) const;
};

enum class TaskClass { navigation, coverage };

struct SystemDescriptor {
    std::string id;        // descriptor name, e.g. "idc+wires"
    std::string algorithm; // runnable algorithm behind it, e.g. "idc"
    TaskClass task = TaskClass::navigation;
    std::vector<CalibrationAtom> calibration;
    std::optional<PerturbRule> rule;
    double comm_edge_bits_per_s = 0.0; // the protocol's own edges, declared peak
    int wire_count = 0;                // added state-communication pathways
    double wire_bits_per_s = 0.0;

    // Declared design circuit for n robots (worst-case edge rates from the
    // documented encodings).
    CircuitGraph build_circuit(int robot_count) const;
};

// Builtin descriptors for the five algorithms.
SystemDescriptor descriptor_pf();
SystemDescriptor descriptor_pbc();
SystemDescriptor descriptor_dmarrt(int max_waypoints = 64, double rounds_per_s = 10.0);
SystemDescriptor descriptor_idc();
SystemDescriptor descriptor_gdc(int robot_count);

// S + sum_{i in N} k * comm(q_i): adds |N| * k state wires plus the
// comm-radius and rule-programming calibrations those wires need.
SystemDescriptor augment_with_wires(const SystemDescriptor& base, const PerturbRule& rule,
                                    int robot_count, double comm_radius);

struct DominanceResult {
    bool holds = false;
    std::string witness; // first failing atom, empty when holds
};

// A dominates B: B's requirement atoms are a subset of A's, and shared
// atoms carry parameters at least as strict on A's side.
DominanceResult dominates_calibration(const SystemDescriptor& a, const SystemDescriptor& b);

struct InvariantScenario {
    std::string label;
    MapId map = MapId::empty_dense;
    int robot_count = 4;
    std::uint64_t seed = 1;
};

// Runs one algorithm on one scenario; true on task success before cutoff.
using TrialOracle = std::function<bool(const std::string& algorithm, const InvariantScenario&)>;

struct ScenarioOutcome {
    std::string label;
    bool a_success = false;
    bool b_success = false;
};

struct SimulatesResult {
    bool holds = false;
    std::vector<ScenarioOutcome> evidence;
};

// Empirical surrogate of limit-set equality: task outcomes agree on every
// scenario (tolerance = allowed fraction of disagreements, default 0).
SimulatesResult simulates(const SystemDescriptor& a, const SystemDescriptor& b,
                          std::span<const InvariantScenario> scenarios, const TrialOracle& oracle,
                          double tol = 0.0);

struct ReductionReport {
    std::string j_id, q_id;
    int robot_count = 0;
    bool condition1_simulates = false;
    std::vector<ScenarioOutcome> simulates_evidence;
    bool condition2_calibration = false;
    std::string calibration_witness;
    bool condition3_bandwidth = false;
    double mb_j = 0.0;
    double mb_q = 0.0;
    bool verdict = false;

    std::string to_json() const;
};

// J <= Q per the three-part reduction: Q simulates J empirically, J
// dominates Q in calibration, and mb(Q) <= mb(J) on the declared circuits.
ReductionReport check_reduction(const SystemDescriptor& j, const SystemDescriptor& q,
                                int robot_count, std::span<const InvariantScenario> scenarios,
                                const TrialOracle& oracle);

// Saturated-region construction: accrues the field for two robot placements
// inside a fully covered disk and reports whether the fields stay
// bit-identical (the robot state cannot be deduced from coverage levels).
// Throws input_error unless region_radius > footprint_radius.
bool information_loss_demo(double map_size, double region_radius, double footprint_radius,
                           Vec2 offset_a, Vec2 offset_b, double resolution = 0.25);

} // namespace swarmbench
