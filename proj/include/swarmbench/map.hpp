#pragma once

#include "swarmbench/geometry.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace swarmbench {

enum class MapId { empty_dense, empty_spread, uniform, corridor, concave };

const char* map_name(MapId id);
MapId map_id_from_name(std::string_view name); // throws config_error on unknown names

struct StaticMap {
    MapId id = MapId::empty_dense;
    double width = 20.0;
    double height = 20.0;
    std::vector<Obstacle> obstacles;
    Rect spawn_region;
    Vec2 goal;
    double goal_radius = 3.0;
};

// Canonical layout at the given uniform scale (1.0 = 20x20 m).
StaticMap load_map(MapId id, double scale = 1.0);

// Layout document format, one directive per line:
//   name <map-id>
//   bounds <w> <h>
//   spawn <xmin> <ymin> <xmax> <ymax>
//   goal <cx> <cy> <radius>
//   rect <xmin> <ymin> <xmax> <ymax>
//   poly <x1> <y1> <x2> <y2> <x3> <y3> ...   (convex, ccw)
// '#' starts a comment. Parsing validates the map invariants.
StaticMap parse_map_document(std::string_view text);
std::string serialize_map_document(const StaticMap& map);

// The shipped source document for a builtin layout (scale 1.0).
std::string_view builtin_map_document(MapId id);

// Throws config_error when obstacles leave the bounds or touch spawn/goal.
void validate_map(const StaticMap& map);

} // namespace swarmbench
