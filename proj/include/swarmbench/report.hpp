#pragma once

#include "swarmbench/scenario.hpp"

#include <span>
#include <string>
#include <vector>

namespace swarmbench {

// One row per trial; byte-stable for identical inputs. Columns:
// config_hash,seed,algorithm,map,robots,success,convergence_time_s,
// distance_m,collisions_rr,collisions_ro,coverage_frac,peak_edge_bw_bps
std::string emit_csv(std::span<const TrialResult> results);

struct SeriesPoint {
    double x = 0.0;
    double y = 0.0;
};

struct Series {
    std::string label;
    std::vector<SeriesPoint> points;
};

struct BarGroup {
    std::string label;            // e.g. a map name
    std::vector<double> values;   // one per series label
};

// Self-contained SVG documents, byte-stable for identical inputs.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const Series> series);

std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                          std::span<const std::string> series_labels,
                          std::span<const BarGroup> groups);

} // namespace swarmbench
