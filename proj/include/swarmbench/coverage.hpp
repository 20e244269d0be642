#pragma once

#include "swarmbench/comms.hpp"
#include "swarmbench/map.hpp"
#include "swarmbench/rng.hpp"
#include "swarmbench/vec2.hpp"
#include "swarmbench/world.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace swarmbench {

struct CoverageParams {
    double resolution = 0.25; // m per cell
    double c_star = 1.0;      // coverage cap
    double peak_rate = 1.0;   // 1/s, footprint peak
    double r_cov = 2.0;       // m, footprint radius
    double k_c = 1.0;         // gradient gain
    double c_done = 0.999;    // completion fraction of c_star
    double v_slow = 0.02;     // m/s, stuck threshold
    double t_stuck = 5.0;     // s, emergency timer
};

// Capped coverage field over the free cells of a map. Cells whose center
// falls inside an obstacle are masked out of the error and completion
// accounting. Row-major indexing: index = iy * nx + ix.
class CoverageGrid {
public:
    CoverageGrid() = default;
    CoverageGrid(const StaticMap& map, double resolution, double c_star);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double resolution() const { return res_; }
    double c_star() const { return c_star_; }
    double cell_area() const { return res_ * res_; }
    int cell_count() const { return nx_ * ny_; }

    int index_of(int ix, int iy) const { return iy * nx_ + ix; }
    Vec2 cell_center(int index) const {
        return {(index % nx_ + 0.5) * res_, (index / nx_ + 0.5) * res_};
    }
    bool is_free(int index) const { return free_[index] != 0; }
    double level(int index) const { return levels_[index]; }
    void set_level(int index, double v) { levels_[index] = v; }

    long free_cell_count() const { return free_cells_; }
    double total_mass() const; // sum of levels over free cells

    bool operator==(const CoverageGrid& other) const {
        return nx_ == other.nx_ && ny_ == other.ny_ && levels_ == other.levels_;
    }

    // Dense plain-text matrix (row per line, top row = highest y), for plots.
    std::string to_matrix_text() const;

    friend void accrue(CoverageGrid& grid, std::span<const RobotState> robots, double dt,
                       const CoverageParams& params);

private:
    int nx_ = 0, ny_ = 0;
    double res_ = 0.25;
    double c_star_ = 1.0;
    long free_cells_ = 0;
    std::vector<double> levels_;
    std::vector<std::uint8_t> free_;
};

// Sensor footprint s(d) = M (1 - (d/r)^2)^2 for d <= r, else 0. C1 at d=r.
double footprint(double d, double r_cov, double peak_rate);
// ds/dd; <= 0 everywhere.
double footprint_slope(double d, double r_cov, double peak_rate);

// C(q) <- min(C*, C(q) + dt * sum_i s(|q - p_i|)) over free cells.
void accrue(CoverageGrid& grid, std::span<const RobotState> robots, double dt,
            const CoverageParams& params);

// e = sum over free cells of (C* - C(q)) * cell_area.
double coverage_error(const CoverageGrid& grid);

// Fraction of free cells at or above c_done * C*.
double coverage_fraction(const CoverageGrid& grid, double c_done);
bool coverage_complete(const CoverageGrid& grid, double c_done);

// Deficit-weighted footprint gradient ascent, clamped to v_max. Reads only
// cells within r_cov of the robot; with a map, cells hidden behind an
// obstacle contribute nothing (the sensor is line-of-sight limited).
Vec2 idc_control(Vec2 position, const CoverageGrid& grid, const CoverageParams& params,
                 double v_max, const StaticMap* map = nullptr);

struct PerturbDecision {
    std::optional<Vec2> waypoint;
    bool mission_complete = false;
};

// True when the straight segment keeps wall clearance (used by the
// visibility-preferring point selection rules).
bool cell_visible(const StaticMap& map, Vec2 from, Vec2 to);

// Emergency-timer rule: nearest cell below the completion threshold
// (row-major lowest index on ties). With a map, cells visible from the
// robot are preferred so the transit controller can actually get there;
// on obstacle-free scenes the two notions coincide.
// The rng drives the pseudorandom restart used when no uncovered cell is
// visible at all.
PerturbDecision idc_perturb(Vec2 position, const CoverageGrid& grid,
                            const CoverageParams& params, const StaticMap* map = nullptr,
                            Rng* rng = nullptr);

enum class RuleFamily { family1, family2 };

// Rendezvous-point selection rule. Family 1 reads only coverage levels;
// Family 2 additionally reads the declared set of robot states.
struct PerturbRule {
    RuleFamily family = RuleFamily::family2;
    std::string rule_id = "centroid_nearest_uncovered";
    std::vector<int> reads; // robot ids a Family 2 rule consumes
};

PerturbRule family1_min_coverage_rule();
PerturbRule family2_centroid_rule(int robot_count);

// Evaluates the rendezvous rule. Family 2 centroid: nearest uncovered cell
// to the agent centroid, preferring cells the centroid can see (straight
// line clear of obstacles) so the point stays approachable by the plain
// proportional transit controller. Family 1: lowest-coverage cell. When
// rng is given, a pseudorandom uncovered cell is returned instead (the
// escape move after a failed rendezvous leg).
Vec2 evaluate_rendezvous_rule(const PerturbRule& rule, const CoverageGrid& grid,
                              const WorldState& world, const CoverageParams& params,
                              Rng* rng = nullptr);

enum class GdcMode { cover, rendezvous };

struct GdcState {
    GdcMode mode = GdcMode::cover;
    int leader_id = 0;
    std::optional<Vec2> rendezvous_point;
    double slow_timer = 0.0;    // consecutive seconds with every agent slow
    double transit_timer = 0.0; // seconds spent in the current rendezvous leg
    bool last_leg_timed_out = false;
    long resets = 0;            // rendezvous -> cover transitions
    long rendezvous_events = 0;
};

struct GdcParams {
    double t_hold = 0.5;           // s of group slowness before perturbing
    double rho = 1.5;              // m, rendezvous arrival radius
    double transit_timeout = 18.0; // s, give-up bound on one rendezvous leg
    double k_p = 1.0;
    double k_group = 0.45;     // 1/s, cohesion spring toward the centroid
    double group_radius = 6.0; // m, slack radius before the spring engages
    PerturbRule rule = family2_centroid_rule(0);
};

struct GdcStepResult {
    std::vector<Vec2> controls; // desired velocities, pre safety filter
    int messages_sent = 0;
};

// One control tick of the group state machine. In COVER mode every agent
// follows the coverage gradient; once the whole group stays slow for
// t_hold the leader evaluates the rule and broadcasts the point (n-1
// messages through the bus). In RENDEZVOUS mode agents track the point and
// the machine resets when all are within rho. A group that goes slow while
// in RENDEZVOUS (wedged against an obstacle) or overruns the transit
// timeout resets without a broadcast and re-triggers through the normal
// COVER path.
GdcStepResult gdc_step(const WorldState& world, GdcState& state, const CoverageGrid& grid,
                       MessageBus* bus, long tick, const GdcParams& gdc,
                       const CoverageParams& cov, double dt_control, double v_max,
                       bool proximity_limited = false, double comm_radius = 1e18,
                       Rng* escape_rng = nullptr);

} // namespace swarmbench
