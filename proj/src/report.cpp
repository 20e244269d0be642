#include "swarmbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace swarmbench {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

constexpr const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                    "#66ccee", "#aa3377", "#bbbbbb"};

} // namespace

std::string emit_csv(std::span<const TrialResult> results) {
    std::string out =
        "config_hash,seed,algorithm,map,robots,success,convergence_time_s,distance_m,"
        "collisions_rr,collisions_ro,coverage_frac,peak_edge_bw_bps\n";
    for (const auto& r : results) {
        out += hex64(r.config_hash) + ",";
        out += std::to_string(r.seed) + ",";
        out += r.algorithm + ",";
        out += r.map + ",";
        out += std::to_string(r.robots) + ",";
        out += r.success ? "1," : "0,";
        out += (r.convergence_time ? num(*r.convergence_time) : "") + std::string(",");
        out += num(r.total_distance) + ",";
        out += std::to_string(r.collisions_rr) + ",";
        out += std::to_string(r.collisions_ro) + ",";
        out += num(r.coverage_fraction) + ",";
        out += num(r.bandwidth.peak_edge_bps) + "\n";
    }
    return out;
}

namespace {

constexpr double kW = 640.0, kH = 420.0;
constexpr double kMarginL = 70.0, kMarginR = 150.0, kMarginT = 40.0, kMarginB = 50.0;

std::string svg_header(const std::string& title) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" +
         num(kH) + "\" viewBox=\"0 0 " + num(kW) + " " + num(kH) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kW / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
    return s;
}

std::string axis_lines() {
    std::string s;
    s += "<line x1=\"" + num(kMarginL) + "\" y1=\"" + num(kH - kMarginB) + "\" x2=\"" +
         num(kW - kMarginR) + "\" y2=\"" + num(kH - kMarginB) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    s += "<line x1=\"" + num(kMarginL) + "\" y1=\"" + num(kMarginT) + "\" x2=\"" +
         num(kMarginL) + "\" y2=\"" + num(kH - kMarginB) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    return s;
}

std::string legend(std::span<const std::string> labels) {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double y = kMarginT + 18.0 * static_cast<double>(i);
        s += "<rect x=\"" + num(kW - kMarginR + 12) + "\" y=\"" + num(y) +
             "\" width=\"12\" height=\"12\" fill=\"" +
             kPalette[i % std::size(kPalette)] + "\"/>\n";
        s += "<text x=\"" + num(kW - kMarginR + 30) + "\" y=\"" + num(y + 10) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + labels[i] + "</text>\n";
    }
    return s;
}

} // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const Series> series) {
    double xmin = 0.0, xmax = 1.0, ymax = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (first) {
                xmin = xmax = p.x;
                first = false;
            }
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymax = std::max(ymax, p.y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax <= 0.0) ymax = 1.0;
    const auto px = [&](double x) {
        return kMarginL + (x - xmin) / (xmax - xmin) * (kW - kMarginL - kMarginR);
    };
    const auto py = [&](double y) {
        return kH - kMarginB - y / ymax * (kH - kMarginT - kMarginB);
    };

    std::string out = svg_header(title);
    out += axis_lines();
    for (int g = 0; g <= 4; ++g) {
        const double y = ymax * g / 4.0;
        out += "<text x=\"" + num(kMarginL - 8) + "\" y=\"" + num(py(y) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(y) +
               "</text>\n";
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        labels.push_back(s.label);
        std::string pts;
        for (const auto& p : s.points) pts += num(px(p.x)) + "," + num(py(p.y)) + " ";
        out += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[i % std::size(kPalette)]) +
               "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        for (const auto& p : s.points) {
            out += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) +
                   "\" r=\"3\" fill=\"" + kPalette[i % std::size(kPalette)] + "\"/>\n";
            out += "<text x=\"" + num(px(p.x)) + "\" y=\"" + num(kH - kMarginB + 16) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                   num(p.x) + "</text>\n";
        }
    }
    out += legend(labels);
    out += "<text x=\"" + num((kMarginL + kW - kMarginR) / 2) + "\" y=\"" + num(kH - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + num(kH / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " + num(kH / 2) + ")\">" + y_label + "</text>\n";
    out += "</svg>\n";
    return out;
}

std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                          std::span<const std::string> series_labels,
                          std::span<const BarGroup> groups) {
    double ymax = 1.0;
    for (const auto& g : groups)
        for (double v : g.values) ymax = std::max(ymax, v);
    const double plot_w = kW - kMarginL - kMarginR;
    const double group_w = groups.empty() ? plot_w : plot_w / groups.size();
    const double bar_w =
        series_labels.empty() ? group_w : group_w * 0.8 / series_labels.size();
    const auto py = [&](double y) {
        return kH - kMarginB - y / ymax * (kH - kMarginT - kMarginB);
    };

    std::string out = svg_header(title);
    out += axis_lines();
    for (int g = 0; g <= 4; ++g) {
        const double y = ymax * g / 4.0;
        out += "<text x=\"" + num(kMarginL - 8) + "\" y=\"" + num(py(y) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(y) +
               "</text>\n";
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        const double gx = kMarginL + group_w * static_cast<double>(gi) + group_w * 0.1;
        for (std::size_t si = 0; si < g.values.size(); ++si) {
            const double v = g.values[si];
            const double x = gx + bar_w * static_cast<double>(si);
            out += "<rect x=\"" + num(x) + "\" y=\"" + num(py(v)) + "\" width=\"" +
                   num(bar_w * 0.9) + "\" height=\"" + num(kH - kMarginB - py(v)) +
                   "\" fill=\"" + kPalette[si % std::size(kPalette)] + "\"/>\n";
        }
        out += "<text x=\"" + num(gx + group_w * 0.4) + "\" y=\"" + num(kH - kMarginB + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               g.label + "</text>\n";
    }
    out += legend(series_labels);
    out += "<text x=\"16\" y=\"" + num(kH / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " + num(kH / 2) + ")\">" + y_label + "</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace swarmbench
