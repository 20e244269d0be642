#include "swarmbench/map.hpp"

#include "swarmbench/errors.hpp"

#include <cstdio>
#include <sstream>

namespace swarmbench {

namespace {

// Layout documents, version 1. The obstacle courses approximate the
// benchmark's published pictures: uniform is a 3x3 pillar grid, corridor a
// 2 m passage between two walls, concave a C-shaped trap that opens toward
// the spawn side (1 m gaps at the inner corners keep every free cell
// reachable for the coverage task).
constexpr std::string_view kEmptyDense =
    "# swarmbench map layout v1\n"
    "name empty_dense\n"
    "bounds 20 20\n"
    "spawn 1 1 6 8\n"
    "goal 17 10 3\n";

constexpr std::string_view kEmptySpread =
    "# swarmbench map layout v1\n"
    "name empty_spread\n"
    "bounds 20 20\n"
    "spawn 1 1 6 19\n"
    "goal 17 10 3\n";

constexpr std::string_view kUniform =
    "# swarmbench map layout v1\n"
    "name uniform\n"
    "bounds 20 20\n"
    "spawn 1 1 6 19\n"
    "goal 17 10 3\n"
    "rect 6.25 4.25 7.75 5.75\n"
    "rect 6.25 9.25 7.75 10.75\n"
    "rect 6.25 14.25 7.75 15.75\n"
    "rect 9.25 4.25 10.75 5.75\n"
    "rect 9.25 9.25 10.75 10.75\n"
    "rect 9.25 14.25 10.75 15.75\n"
    "rect 12.25 4.25 13.75 5.75\n"
    "rect 12.25 9.25 13.75 10.75\n"
    "rect 12.25 14.25 13.75 15.75\n";

constexpr std::string_view kCorridor =
    "# swarmbench map layout v1\n"
    "name corridor\n"
    "bounds 20 20\n"
    "spawn 1 1 6 19\n"
    "goal 17 10 3\n"
    "rect 9 1.5 10.5 9\n"
    "rect 9 11 10.5 18.5\n";

constexpr std::string_view kConcave =
    "# swarmbench map layout v1\n"
    "name concave\n"
    "bounds 20 20\n"
    "spawn 1 1 6 19\n"
    "goal 17 10 3\n"
    "rect 12 7 12.5 13\n"
    "rect 8 14 12.5 14.5\n"
    "rect 8 5.5 12.5 6\n";

struct NamedMap {
    MapId id;
    const char* name;
    std::string_view doc;
};

constexpr NamedMap kMaps[] = {
    {MapId::empty_dense, "empty_dense", kEmptyDense},
    {MapId::empty_spread, "empty_spread", kEmptySpread},
    {MapId::uniform, "uniform", kUniform},
    {MapId::corridor, "corridor", kCorridor},
    {MapId::concave, "concave", kConcave},
};

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

const char* map_name(MapId id) {
    for (const auto& m : kMaps)
        if (m.id == id) return m.name;
    return "?";
}

MapId map_id_from_name(std::string_view name) {
    for (const auto& m : kMaps)
        if (name == m.name) return m.id;
    throw config_error("unknown map id: " + std::string(name));
}

std::string_view builtin_map_document(MapId id) {
    for (const auto& m : kMaps)
        if (m.id == id) return m.doc;
    throw config_error("unknown map id");
}

void validate_map(const StaticMap& map) {
    if (map.width <= 0.0 || map.height <= 0.0) throw config_error("map bounds must be positive");
    const Rect bounds{{0.0, 0.0}, {map.width, map.height}};
    if (!bounds.contains(map.spawn_region.lo) || !bounds.contains(map.spawn_region.hi))
        throw config_error("spawn region outside map bounds");
    for (const auto& ob : map.obstacles) {
        const Rect box = bounding_box(ob);
        if (!bounds.contains(box.lo) || !bounds.contains(box.hi))
            throw config_error("obstacle outside map bounds");
        // Spawn region and goal disk must stay clear of every obstacle.
        // Bounding boxes make this check conservative for polygons.
        const Rect& s = map.spawn_region;
        const bool overlap = !(box.hi.x < s.lo.x || box.lo.x > s.hi.x || box.hi.y < s.lo.y ||
                               box.lo.y > s.hi.y);
        if (overlap) throw config_error("obstacle intersects spawn region");
        if (signed_distance(ob, map.goal) < map.goal_radius)
            throw config_error("obstacle intersects goal disk");
    }
}

StaticMap parse_map_document(std::string_view text) {
    StaticMap map;
    bool have_name = false, have_bounds = false, have_spawn = false, have_goal = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        const auto bad = [&](const char* msg) {
            throw config_error("map document line " + std::to_string(lineno) + ": " + msg);
        };
        if (kw == "name") {
            std::string n;
            if (!(ls >> n)) bad("missing name");
            map.id = map_id_from_name(n);
            have_name = true;
        } else if (kw == "bounds") {
            if (!(ls >> map.width >> map.height)) bad("bounds needs w h");
            have_bounds = true;
        } else if (kw == "spawn") {
            Rect r;
            if (!(ls >> r.lo.x >> r.lo.y >> r.hi.x >> r.hi.y)) bad("spawn needs 4 numbers");
            map.spawn_region = r;
            have_spawn = true;
        } else if (kw == "goal") {
            if (!(ls >> map.goal.x >> map.goal.y >> map.goal_radius)) bad("goal needs cx cy r");
            have_goal = true;
        } else if (kw == "rect") {
            Rect r;
            if (!(ls >> r.lo.x >> r.lo.y >> r.hi.x >> r.hi.y)) bad("rect needs 4 numbers");
            if (r.lo.x > r.hi.x || r.lo.y > r.hi.y) bad("rect corners out of order");
            map.obstacles.push_back(Obstacle{r});
        } else if (kw == "poly") {
            ConvexPoly poly;
            double x, y;
            while (ls >> x >> y) poly.pts.push_back({x, y});
            if (poly.pts.size() < 3) bad("poly needs at least 3 vertices");
            map.obstacles.push_back(Obstacle{poly});
        } else {
            bad("unknown directive");
        }
    }
    if (!have_name || !have_bounds || !have_spawn || !have_goal)
        throw config_error("map document missing name/bounds/spawn/goal");
    validate_map(map);
    return map;
}

std::string serialize_map_document(const StaticMap& map) {
    std::string out = "# swarmbench map layout v1\n";
    out += "name " + std::string(map_name(map.id)) + "\n";
    out += "bounds " + fmt_num(map.width) + " " + fmt_num(map.height) + "\n";
    out += "spawn " + fmt_num(map.spawn_region.lo.x) + " " + fmt_num(map.spawn_region.lo.y) +
           " " + fmt_num(map.spawn_region.hi.x) + " " + fmt_num(map.spawn_region.hi.y) + "\n";
    out += "goal " + fmt_num(map.goal.x) + " " + fmt_num(map.goal.y) + " " +
           fmt_num(map.goal_radius) + "\n";
    for (const auto& ob : map.obstacles) {
        if (const auto* r = std::get_if<Rect>(&ob.shape)) {
            out += "rect " + fmt_num(r->lo.x) + " " + fmt_num(r->lo.y) + " " + fmt_num(r->hi.x) +
                   " " + fmt_num(r->hi.y) + "\n";
        } else {
            out += "poly";
            for (const Vec2 p : std::get<ConvexPoly>(ob.shape).pts)
                out += " " + fmt_num(p.x) + " " + fmt_num(p.y);
            out += "\n";
        }
    }
    return out;
}

StaticMap load_map(MapId id, double scale) {
    if (scale <= 0.0) throw config_error("map scale must be positive");
    StaticMap map = parse_map_document(builtin_map_document(id));
    if (scale != 1.0) {
        const auto s = [scale](Vec2 v) { return v * scale; };
        map.width *= scale;
        map.height *= scale;
        map.spawn_region.lo = s(map.spawn_region.lo);
        map.spawn_region.hi = s(map.spawn_region.hi);
        map.goal = s(map.goal);
        map.goal_radius *= scale;
        for (auto& ob : map.obstacles) {
            if (auto* r = std::get_if<Rect>(&ob.shape)) {
                r->lo = s(r->lo);
                r->hi = s(r->hi);
            } else {
                for (auto& p : std::get<ConvexPoly>(ob.shape).pts) p = s(p);
            }
        }
    }
    return map;
}

} // namespace swarmbench
