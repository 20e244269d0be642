#pragma once

#include "swarmbench/vec2.hpp"

#include <variant>
#include <vector>

namespace swarmbench {

// Axis-aligned rectangle, lo <= hi componentwise.
struct Rect {
    Vec2 lo;
    Vec2 hi;

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    Vec2 center() const { return (lo + hi) * 0.5; }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

// Convex polygon, counter-clockwise winding.
struct ConvexPoly {
    std::vector<Vec2> pts;

    bool contains(Vec2 p) const;
};

using ObstacleShape = std::variant<Rect, ConvexPoly>;

struct Obstacle {
    ObstacleShape shape;
};

// Closest point of segment [a,b] to p.
Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p);

// Minimum distance between segments [a,b] and [c,d]; 0 when they intersect.
double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

bool obstacle_contains(const Obstacle& o, Vec2 p);

// Closest point on the shape boundary (well-defined for interior points too).
Vec2 closest_boundary_point(const Obstacle& o, Vec2 p);

// Distance to the solid region: negative inside, zero on the boundary.
double signed_distance(const Obstacle& o, Vec2 p);

// Minimum distance from segment [a,b] to the solid region (0 on overlap).
double segment_obstacle_distance(const Obstacle& o, Vec2 a, Vec2 b);

// Encloses the shape; used for map-bounds validation.
Rect bounding_box(const Obstacle& o);

} // namespace swarmbench
