#include "swarmbench/geometry.hpp"

#include <algorithm>
#include <limits>

namespace swarmbench {

bool ConvexPoly::contains(Vec2 p) const {
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = pts[i];
        const Vec2 b = pts[(i + 1) % n];
        if ((b - a).cross(p - a) < 0.0) return false;
    }
    return true;
}

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
    return a + ab * t;
}

namespace {

bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        const double v = (q - p).cross(r - p);
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

Vec2 rect_closest_boundary(const Rect& r, Vec2 p) {
    if (!r.contains(p)) {
        return {std::clamp(p.x, r.lo.x, r.hi.x), std::clamp(p.y, r.lo.y, r.hi.y)};
    }
    // Interior: project to the nearest face.
    const double dl = p.x - r.lo.x;
    const double dr = r.hi.x - p.x;
    const double db = p.y - r.lo.y;
    const double dt = r.hi.y - p.y;
    const double m = std::min({dl, dr, db, dt});
    if (m == dl) return {r.lo.x, p.y};
    if (m == dr) return {r.hi.x, p.y};
    if (m == db) return {p.x, r.lo.y};
    return {p.x, r.hi.y};
}

Vec2 poly_closest_boundary(const ConvexPoly& poly, Vec2 p) {
    Vec2 best{};
    double best_d = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 q = closest_point_on_segment(poly.pts[i], poly.pts[(i + 1) % n], p);
        const double d = distance(p, q);
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

} // namespace

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    if (segments_properly_intersect(a, b, c, d)) return 0.0;
    double m = distance(a, closest_point_on_segment(c, d, a));
    m = std::min(m, distance(b, closest_point_on_segment(c, d, b)));
    m = std::min(m, distance(c, closest_point_on_segment(a, b, c)));
    m = std::min(m, distance(d, closest_point_on_segment(a, b, d)));
    return m;
}

bool obstacle_contains(const Obstacle& o, Vec2 p) {
    return std::visit([&](const auto& s) { return s.contains(p); }, o.shape);
}

Vec2 closest_boundary_point(const Obstacle& o, Vec2 p) {
    if (const auto* r = std::get_if<Rect>(&o.shape)) return rect_closest_boundary(*r, p);
    return poly_closest_boundary(std::get<ConvexPoly>(o.shape), p);
}

double signed_distance(const Obstacle& o, Vec2 p) {
    const double d = distance(p, closest_boundary_point(o, p));
    return obstacle_contains(o, p) ? -d : d;
}

double segment_obstacle_distance(const Obstacle& o, Vec2 a, Vec2 b) {
    if (obstacle_contains(o, a) || obstacle_contains(o, b)) return 0.0;
    if (const auto* r = std::get_if<Rect>(&o.shape)) {
        const Vec2 c0 = r->lo;
        const Vec2 c1{r->hi.x, r->lo.y};
        const Vec2 c2 = r->hi;
        const Vec2 c3{r->lo.x, r->hi.y};
        double m = segment_segment_distance(a, b, c0, c1);
        m = std::min(m, segment_segment_distance(a, b, c1, c2));
        m = std::min(m, segment_segment_distance(a, b, c2, c3));
        m = std::min(m, segment_segment_distance(a, b, c3, c0));
        // Segment fully inside would have been caught by the endpoint test.
        return m;
    }
    const auto& poly = std::get<ConvexPoly>(o.shape);
    double m = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        m = std::min(m, segment_segment_distance(a, b, poly.pts[i], poly.pts[(i + 1) % n]));
    }
    return m;
}

Rect bounding_box(const Obstacle& o) {
    if (const auto* r = std::get_if<Rect>(&o.shape)) return *r;
    const auto& poly = std::get<ConvexPoly>(o.shape);
    Rect box{poly.pts.front(), poly.pts.front()};
    for (const Vec2 p : poly.pts) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

} // namespace swarmbench
