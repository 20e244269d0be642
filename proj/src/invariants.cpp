#include "swarmbench/invariants.hpp"

#include "swarmbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace swarmbench {

double max_bandwidth(const CircuitGraph& graph) {
    double mb = graph.output_bits_per_s;
    for (const auto& e : graph.edges) mb = std::max(mb, e.bits_per_s);
    return mb;
}

CircuitGraph measured_circuit(const BandwidthSummary& bandwidth, int robot_count,
                              double output_bits_per_s) {
    CircuitGraph g;
    for (int i = 0; i < robot_count; ++i) g.vertices.push_back(i);
    g.output_bits_per_s = output_bits_per_s;
    for (const auto& eb : bandwidth.edges)
        g.edges.push_back({eb.edge.first, eb.edge.second, EdgeKind::external, eb.peak_bps});
    return g;
}

const char* atom_name(AtomKind kind) {
    switch (kind) {
        case AtomKind::all_within_comm_radius: return "all_within_comm_radius";
        case AtomKind::min_obstacle_clearance: return "min_obstacle_clearance";
        case AtomKind::min_pairwise_spawn_spacing: return "min_pairwise_spawn_spacing";
        case AtomKind::initially_connected: return "initially_connected";
        case AtomKind::rule_programmed: return "rule_programmed";
    }
    throw vocabulary_error("unknown calibration atom");
}

bool CalibrationAtom::at_least_as_strict_as(const CalibrationAtom& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case AtomKind::all_within_comm_radius:
        case AtomKind::initially_connected:
            return param <= other.param;
        case AtomKind::min_obstacle_clearance:
        case AtomKind::min_pairwise_spawn_spacing:
            return param >= other.param;
        case AtomKind::rule_programmed:
            return rule_id == other.rule_id;
    }
    throw vocabulary_error("unknown calibration atom");
}

namespace {

constexpr double kStateReportBps = 2.0 * kFloatBits; // 128: one state report per second

std::vector<int> robot_vertices(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

} // namespace

CircuitGraph SystemDescriptor::build_circuit(int robot_count) const {
    CircuitGraph g;
    g.vertices = robot_vertices(robot_count);
    g.output_bits_per_s = kStateReportBps;
    if (algorithm == "gdc") {
        // Leader point broadcast: at most one 160-bit message per edge per
        // second (consecutive rendezvous events are separated by the hold
        // and transit phases).
        for (int i = 1; i < robot_count; ++i)
            g.edges.push_back({0, i, EdgeKind::external, comm_edge_bits_per_s});
    } else if (algorithm == "dmarrt") {
        // Any holder may broadcast a full plan every token round.
        for (int i = 0; i < robot_count; ++i)
            for (int j = 0; j < robot_count; ++j)
                if (i != j) g.edges.push_back({i, j, EdgeKind::external, comm_edge_bits_per_s});
    }
    // Added wires: every robot in N reports its state to the k others.
    if (wire_count > 0 && rule) {
        for (int sender : rule->reads) {
            for (int j = 0; j < robot_count; ++j)
                if (j != sender)
                    g.edges.push_back({sender, j, EdgeKind::external, wire_bits_per_s});
        }
    }
    return g;
}

SystemDescriptor descriptor_pf() {
    SystemDescriptor d;
    d.id = "pf";
    d.algorithm = "pf";
    d.task = TaskClass::navigation;
    d.calibration.push_back({AtomKind::initially_connected, 3.0, {}});
    return d;
}

SystemDescriptor descriptor_pbc() {
    SystemDescriptor d;
    d.id = "pbc";
    d.algorithm = "pbc";
    d.task = TaskClass::navigation;
    d.calibration.push_back({AtomKind::min_obstacle_clearance, 0.3, {}});
    d.calibration.push_back({AtomKind::min_pairwise_spawn_spacing, 0.3, {}});
    return d;
}

SystemDescriptor descriptor_dmarrt(int max_waypoints, double rounds_per_s) {
    SystemDescriptor d;
    d.id = "dmarrt";
    d.algorithm = "dmarrt";
    d.task = TaskClass::navigation;
    d.comm_edge_bits_per_s = rounds_per_s * plan_payload_bits(max_waypoints);
    return d;
}

SystemDescriptor descriptor_idc() {
    SystemDescriptor d;
    d.id = "idc";
    d.algorithm = "idc";
    d.task = TaskClass::coverage;
    return d;
}

SystemDescriptor descriptor_gdc(int robot_count) {
    SystemDescriptor d;
    d.id = "gdc";
    d.algorithm = "gdc";
    d.task = TaskClass::coverage;
    d.rule = family2_centroid_rule(robot_count);
    d.comm_edge_bits_per_s = kPointPayloadBits;
    d.calibration.push_back({AtomKind::all_within_comm_radius, 1e9, {}});
    d.calibration.push_back({AtomKind::rule_programmed, 0.0, d.rule->rule_id});
    return d;
}

SystemDescriptor augment_with_wires(const SystemDescriptor& base, const PerturbRule& rule,
                                    int robot_count, double comm_radius) {
    SystemDescriptor d = base;
    d.rule = rule;
    const int n_reads = static_cast<int>(rule.reads.size());
    const int k = robot_count - 1;
    d.wire_count = n_reads * k;
    d.wire_bits_per_s = kStatePayloadBits; // one state message per event second
    d.id = base.id + "+wires";
    if (d.wire_count > 0) {
        // The wires only work once the group is installed inside comm range
        // and every agent is programmed with the point-selection rule.
        d.calibration.push_back({AtomKind::all_within_comm_radius, comm_radius, {}});
        d.calibration.push_back({AtomKind::rule_programmed, 0.0, rule.rule_id});
    }
    return d;
}

DominanceResult dominates_calibration(const SystemDescriptor& a, const SystemDescriptor& b) {
    for (const auto& need : b.calibration) {
        bool matched = false;
        for (const auto& have : a.calibration) {
            if (have.at_least_as_strict_as(need)) {
                matched = true;
                break;
            }
        }
        if (!matched) {
            DominanceResult r;
            r.holds = false;
            r.witness = std::string(atom_name(need.kind));
            if (need.kind == AtomKind::rule_programmed) r.witness += "(" + need.rule_id + ")";
            return r;
        }
    }
    return {true, {}};
}

SimulatesResult simulates(const SystemDescriptor& a, const SystemDescriptor& b,
                          std::span<const InvariantScenario> scenarios, const TrialOracle& oracle,
                          double tol) {
    if (a.task != b.task) throw input_error("simulates: mixed task classes");
    SimulatesResult result;
    int disagreements = 0;
    for (const auto& sc : scenarios) {
        ScenarioOutcome o;
        o.label = sc.label;
        o.a_success = oracle(a.algorithm, sc);
        o.b_success = (a.algorithm == b.algorithm) ? o.a_success : oracle(b.algorithm, sc);
        if (o.a_success != o.b_success) ++disagreements;
        result.evidence.push_back(o);
    }
    const double frac =
        scenarios.empty() ? 0.0 : static_cast<double>(disagreements) / scenarios.size();
    result.holds = frac <= tol;
    return result;
}

ReductionReport check_reduction(const SystemDescriptor& j, const SystemDescriptor& q,
                                int robot_count, std::span<const InvariantScenario> scenarios,
                                const TrialOracle& oracle) {
    ReductionReport rep;
    rep.j_id = j.id;
    rep.q_id = q.id;
    rep.robot_count = robot_count;

    const SimulatesResult sim = simulates(j, q, scenarios, oracle);
    rep.condition1_simulates = sim.holds;
    rep.simulates_evidence = sim.evidence;

    const DominanceResult dom = dominates_calibration(j, q);
    rep.condition2_calibration = dom.holds;
    rep.calibration_witness = dom.witness;

    rep.mb_j = max_bandwidth(j.build_circuit(robot_count));
    rep.mb_q = max_bandwidth(q.build_circuit(robot_count));
    rep.condition3_bandwidth = rep.mb_q <= rep.mb_j;

    rep.verdict = rep.condition1_simulates && rep.condition2_calibration &&
                  rep.condition3_bandwidth;
    return rep;
}

std::string ReductionReport::to_json() const {
    char buf[256];
    std::string out = "{\n";
    out += "  \"j\": \"" + j_id + "\",\n";
    out += "  \"q\": \"" + q_id + "\",\n";
    std::snprintf(buf, sizeof buf, "  \"robot_count\": %d,\n", robot_count);
    out += buf;
    out += std::string("  \"condition1_simulates\": ") +
           (condition1_simulates ? "true" : "false") + ",\n";
    out += "  \"simulates_evidence\": [";
    for (std::size_t i = 0; i < simulates_evidence.size(); ++i) {
        const auto& e = simulates_evidence[i];
        out += std::string(i ? ", " : "") + "{\"scenario\": \"" + e.label + "\", \"j\": " +
               (e.a_success ? "true" : "false") + ", \"q\": " +
               (e.b_success ? "true" : "false") + "}";
    }
    out += "],\n";
    out += std::string("  \"condition2_calibration\": ") +
           (condition2_calibration ? "true" : "false") + ",\n";
    out += "  \"calibration_witness\": \"" + calibration_witness + "\",\n";
    std::snprintf(buf, sizeof buf,
                  "  \"condition3_bandwidth\": %s,\n  \"mb_j_bps\": %.6g,\n  \"mb_q_bps\": %.6g,\n",
                  condition3_bandwidth ? "true" : "false", mb_j, mb_q);
    out += buf;
    out += std::string("  \"verdict\": ") + (verdict ? "true" : "false") + "\n}\n";
    return out;
}

bool information_loss_demo(double map_size, double region_radius, double footprint_radius,
                           Vec2 offset_a, Vec2 offset_b, double resolution) {
    if (region_radius <= footprint_radius)
        throw input_error(
            "information_loss_demo: saturated region must exceed the footprint radius");
    StaticMap map;
    map.id = MapId::empty_dense;
    map.width = map_size;
    map.height = map_size;
    map.spawn_region = {{0.0, 0.0}, {1.0, 1.0}};
    map.goal = {map_size - 1.0, map_size - 1.0};
    map.goal_radius = 0.5;

    CoverageParams params;
    params.resolution = resolution;
    params.r_cov = footprint_radius;

    CoverageGrid base(map, resolution, params.c_star);
    const Vec2 center{map_size / 2.0, map_size / 2.0};
    for (int i = 0; i < base.cell_count(); ++i)
        if (distance(base.cell_center(i), center) <= region_radius)
            base.set_level(i, params.c_star);

    const auto field_after = [&](Vec2 offset) {
        CoverageGrid g = base;
        RobotState r;
        r.position = center + offset;
        const RobotState robots[1] = {r};
        accrue(g, robots, 0.5, params);
        return g;
    };
    return field_after(offset_a) == field_after(offset_b);
}

} // namespace swarmbench
