// swarmbench command line: run single trials, run benchmark suites, run
// reduction analyses, render charts, and export map layouts.

#include "swarmbench/errors.hpp"
#include "swarmbench/invariants.hpp"
#include "swarmbench/report.hpp"
#include "swarmbench/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

namespace fs = std::filesystem;
using namespace swarmbench;

namespace {

fs::path output_dir() {
    if (const char* env = std::getenv("SWARMBENCH_OUT")) return fs::path(env);
    return fs::path("out");
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
    std::cout << path.string() << "\n";
}

char hash_buf[32];
const char* hash_hex(std::uint64_t h) {
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx", static_cast<unsigned long long>(h));
    return hash_buf;
}

struct CommonOpts {
    std::string map = "empty_spread";
    std::string algo = "pf";
    int robots = 4;
    std::uint64_t seed = 1;
    double cutoff = 600.0;
    double scale = 1.0;
    bool spawn_violation = false;
    int latency = 1;
    bool sensing_as_comm = false;
    bool stall_detector = false;
};

ScenarioConfig build_config(const CommonOpts& o) {
    ScenarioConfig cfg = make_config(algorithm_from_name(o.algo), map_id_from_name(o.map),
                                     o.robots, o.seed);
    cfg.cutoff = o.cutoff;
    cfg.scale = o.scale;
    cfg.spawn_allow_violation = o.spawn_violation;
    cfg.latency_rounds = o.latency;
    cfg.sensing_as_communication = o.sensing_as_comm;
    cfg.stall_detector = o.stall_detector;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--map", o.map, "map id (empty_dense, empty_spread, uniform, corridor, concave)");
    cmd->add_option("--algo", o.algo, "algorithm (pf, pbc, dmarrt, idc, gdc)");
    cmd->add_option("--robots", o.robots, "robot count");
    cmd->add_option("--seed", o.seed, "trial seed");
    cmd->add_option("--cutoff", o.cutoff, "cutoff in simulated seconds");
    cmd->add_option("--scale", o.scale, "uniform map scale");
    cmd->add_flag("--spawn-violation", o.spawn_violation, "allow spawn spacing violations");
    cmd->add_option("--latency", o.latency, "message latency in control ticks");
    cmd->add_flag("--sensing-as-comm", o.sensing_as_comm, "charge sensing as communication");
    cmd->add_flag("--stall-detector", o.stall_detector, "flag stalled trials (advisory)");
}

int cmd_run(const CommonOpts& o, const std::string& coverage_dump,
            const std::string& message_dump) {
    ScenarioConfig cfg = build_config(o);
    cfg.export_message_log = !message_dump.empty();
    CoverageGrid grid;
    const TrialResult result = run_trial(cfg, coverage_dump.empty() ? nullptr : &grid);
    const fs::path dir = output_dir();
    const std::string stem = std::string("trial_") + result.algorithm + "_" + result.map + "_" +
                             std::to_string(result.robots) + "_" + std::to_string(result.seed);
    write_file(dir / (stem + ".json"), result.to_json() + "\n");
    write_file(dir / (stem + "_config.json"), config_to_json(cfg) + "\n");
    const TrialResult rows[1] = {result};
    write_file(dir / (stem + ".csv"), emit_csv(rows));
    if (!coverage_dump.empty()) write_file(fs::path(coverage_dump), grid.to_matrix_text());
    if (!message_dump.empty()) write_file(fs::path(message_dump), result.message_log);
    std::cout << "config_hash " << hash_hex(result.config_hash) << "\n";
    std::cout << (result.success ? "success" : "failure") << "\n";
    return 0;
}

int cmd_suite(const CommonOpts& o, int quota, int streak, int max_trials, bool full_protocol) {
    ScenarioConfig cfg = build_config(o);
    SuiteProtocol protocol;
    if (full_protocol) {
        protocol.success_quota = 20;
        protocol.intractable_streak = 20;
        protocol.max_trials = 400;
    }
    if (quota > 0) protocol.success_quota = quota;
    if (streak > 0) protocol.intractable_streak = streak;
    if (max_trials > 0) protocol.max_trials = max_trials;
    const SuiteResult suite = run_suite(cfg, protocol);
    const fs::path dir = output_dir();
    const std::string stem = std::string("suite_") + o.algo + "_" + o.map + "_" +
                             std::to_string(o.robots);
    write_file(dir / (stem + ".json"), suite.to_json() + "\n");
    write_file(dir / (stem + ".csv"), emit_csv(suite.trials));
    std::cout << "verdict " << suite_verdict_name(suite.verdict) << "\n";
    return 0;
}

TrialOracle make_oracle(double cutoff) {
    return [cutoff](const std::string& algorithm, const InvariantScenario& sc) {
        ScenarioConfig cfg = make_config(algorithm_from_name(algorithm), sc.map,
                                         sc.robot_count, sc.seed);
        cfg.cutoff = cutoff;
        return run_trial(cfg).success;
    };
}

SystemDescriptor descriptor_by_name(const std::string& name, int robots) {
    if (name == "pf") return descriptor_pf();
    if (name == "pbc") return descriptor_pbc();
    if (name == "dmarrt") return descriptor_dmarrt();
    if (name == "idc") return descriptor_idc();
    if (name == "gdc") return descriptor_gdc(robots);
    if (name == "idc+wires")
        return augment_with_wires(descriptor_idc(), family2_centroid_rule(robots), robots, 1e9);
    throw config_error("unknown system descriptor: " + name);
}

int cmd_reduce(const std::string& j_name, const std::string& q_name, int robots,
               const std::string& maps_csv, int seeds, double cutoff) {
    const SystemDescriptor j = descriptor_by_name(j_name, robots);
    const SystemDescriptor q = descriptor_by_name(q_name, robots);
    std::vector<InvariantScenario> scenarios;
    std::string maps = maps_csv;
    std::replace(maps.begin(), maps.end(), ',', ' ');
    std::istringstream ms(maps);
    std::string map_name_s;
    while (ms >> map_name_s) {
        for (int s = 0; s < seeds; ++s) {
            InvariantScenario sc;
            sc.map = map_id_from_name(map_name_s);
            sc.robot_count = robots;
            sc.seed = 100 + static_cast<std::uint64_t>(s);
            sc.label = map_name_s + "/n" + std::to_string(robots) + "/s" + std::to_string(s);
            scenarios.push_back(sc);
        }
    }
    const ReductionReport rep = check_reduction(j, q, robots, scenarios, make_oracle(cutoff));
    const fs::path dir = output_dir();
    write_file(dir / ("reduction_" + j_name + "_vs_" + q_name + "_" + std::to_string(robots) +
                      ".json"),
               rep.to_json());
    std::cout << "verdict " << (rep.verdict ? "true" : "false") << "\n";
    return 0;
}

int cmd_plot(const std::string& csv_path) {
    std::ifstream f(csv_path);
    if (!f) {
        std::cerr << "cannot read " << csv_path << "\n";
        return 1;
    }
    // Aggregate mean convergence time by (algorithm, map) and by robot count.
    std::string line;
    std::getline(f, line); // header
    struct Key {
        std::string algo, map;
        int robots;
        bool operator<(const Key& o) const {
            return std::tie(algo, map, robots) < std::tie(o.algo, o.map, o.robots);
        }
    };
    std::map<Key, std::pair<double, int>> sums;
    while (std::getline(f, line)) {
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() < 12 || fields[5] != "1" || fields[6].empty()) continue;
        Key k{fields[2], fields[3], std::stoi(fields[4])};
        auto& [sum, n] = sums[k];
        sum += std::stod(fields[6]);
        ++n;
    }
    std::map<std::string, Series> by_algo;
    std::map<std::string, std::map<std::string, double>> bars; // map -> algo -> mean
    for (const auto& [k, v] : sums) {
        const double mean = v.first / v.second;
        by_algo[k.algo].label = k.algo;
        by_algo[k.algo].points.push_back({static_cast<double>(k.robots), mean});
        bars[k.map][k.algo] = mean;
    }
    std::vector<Series> series;
    for (auto& [name, s] : by_algo) {
        std::sort(s.points.begin(), s.points.end(),
                  [](const SeriesPoint& a, const SeriesPoint& b) { return a.x < b.x; });
        series.push_back(s);
    }
    std::vector<std::string> algo_labels;
    for (const auto& [name, s] : by_algo) algo_labels.push_back(name);
    std::vector<BarGroup> groups;
    for (const auto& [map_name_s, per_algo] : bars) {
        BarGroup g;
        g.label = map_name_s;
        for (const auto& a : algo_labels) {
            const auto it = per_algo.find(a);
            g.values.push_back(it == per_algo.end() ? 0.0 : it->second);
        }
        groups.push_back(g);
    }
    const fs::path dir = output_dir();
    write_file(dir / "scaling.svg",
               svg_line_chart("Mean convergence time vs robot count", "robots", "seconds",
                              series));
    write_file(dir / "bars.svg",
               svg_bar_chart("Mean convergence time per map", "seconds", algo_labels, groups));
    return 0;
}

int cmd_maps(bool do_export, const std::string& dir_arg) {
    for (MapId id : {MapId::empty_dense, MapId::empty_spread, MapId::uniform, MapId::corridor,
                     MapId::concave}) {
        std::cout << map_name(id) << "\n";
        if (do_export) {
            const fs::path dir = dir_arg.empty() ? output_dir() / "maps" : fs::path(dir_arg);
            write_file(dir / (std::string(map_name(id)) + ".map"),
                       std::string(builtin_map_document(id)));
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"swarmbench: deterministic multi-robot navigation/coverage benchmark"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string coverage_dump, message_dump;
    auto* run = app.add_subcommand("run", "run a single trial");
    add_common(run, run_opts);
    run->add_option("--dump-coverage", coverage_dump, "write a coverage snapshot matrix");
    run->add_option("--dump-messages", message_dump, "write the delivered-message log");

    CommonOpts suite_opts;
    int quota = 0, streak = 0, max_trials = 0;
    bool full_protocol = false;
    auto* suite = app.add_subcommand("suite", "run the trial suite protocol");
    add_common(suite, suite_opts);
    suite->add_option("--quota", quota, "success quota (default 5)");
    suite->add_option("--streak", streak, "intractability failure streak (default 5)");
    suite->add_option("--max-trials", max_trials, "safety cap on total trials");
    suite->add_flag("--full-protocol", full_protocol, "20-success/20-failure protocol");

    std::string j_name = "gdc", q_name = "idc+wires", reduce_maps = "empty_spread";
    int reduce_robots = 4, reduce_seeds = 2;
    double reduce_cutoff = 600.0;
    auto* reduce = app.add_subcommand("reduce", "run a wire-reduction check");
    reduce->add_option("--J", j_name, "reducing system (pf, pbc, dmarrt, idc, gdc)");
    reduce->add_option("--Q", q_name, "target system; idc+wires adds the rule wires");
    reduce->add_option("--robots", reduce_robots, "robot count");
    reduce->add_option("--maps", reduce_maps, "comma-separated map ids for evidence");
    reduce->add_option("--seeds", reduce_seeds, "seeds per map");
    reduce->add_option("--cutoff", reduce_cutoff, "evidence trial cutoff seconds");

    std::string plot_csv;
    auto* plot = app.add_subcommand("plot", "render charts from a results CSV");
    plot->add_option("csv", plot_csv, "input CSV path")->required();

    bool maps_export = false;
    std::string maps_dir;
    auto* maps = app.add_subcommand("maps", "list or export map layouts");
    maps->add_flag("--export", maps_export, "write layout documents");
    maps->add_option("--dir", maps_dir, "export directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts, coverage_dump, message_dump);
        if (suite->parsed()) return cmd_suite(suite_opts, quota, streak, max_trials, full_protocol);
        if (reduce->parsed())
            return cmd_reduce(j_name, q_name, reduce_robots, reduce_maps, reduce_seeds,
                              reduce_cutoff);
        if (plot->parsed()) return cmd_plot(plot_csv);
        if (maps->parsed()) return cmd_maps(maps_export, maps_dir);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
