#include "swarmbench/geometry.hpp"

#include <doctest.h>

using namespace swarmbench;

TEST_CASE("rect closest boundary point and signed distance") {
    const Obstacle ob{Rect{{2.0, 0.0}, {3.0, 2.0}}};

    SUBCASE("outside point projects to the face") {
        const Vec2 q = closest_boundary_point(ob, {1.0, 1.0});
        CHECK(q.x == doctest::Approx(2.0));
        CHECK(q.y == doctest::Approx(1.0));
        CHECK(signed_distance(ob, {1.0, 1.0}) == doctest::Approx(1.0));
    }
    SUBCASE("corner region projects to the corner") {
        const Vec2 q = closest_boundary_point(ob, {4.0, 3.0});
        CHECK(q.x == doctest::Approx(3.0));
        CHECK(q.y == doctest::Approx(2.0));
    }
    SUBCASE("interior point has negative signed distance") {
        CHECK(signed_distance(ob, {2.5, 1.0}) == doctest::Approx(-0.5));
        const Vec2 q = closest_boundary_point(ob, {2.1, 1.0});
        CHECK(q.x == doctest::Approx(2.0));
    }
}

TEST_CASE("convex polygon containment and distance") {
    ConvexPoly tri;
    tri.pts = {{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}}; // ccw right triangle
    const Obstacle ob{tri};
    CHECK(obstacle_contains(ob, {1.0, 1.0}));
    CHECK(!obstacle_contains(ob, {3.0, 3.0}));
    CHECK(signed_distance(ob, {-1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(signed_distance(ob, {1.0, 1.0}) < 0.0);
}

TEST_CASE("segment to segment distance") {
    CHECK(segment_segment_distance({0, 0}, {2, 0}, {1, -1}, {1, 1}) == doctest::Approx(0.0));
    CHECK(segment_segment_distance({0, 0}, {2, 0}, {0, 1}, {2, 1}) == doctest::Approx(1.0));
    CHECK(segment_segment_distance({0, 0}, {1, 0}, {3, 0}, {4, 0}) == doctest::Approx(2.0));
}

TEST_CASE("segment to obstacle distance hits zero on crossings") {
    const Obstacle ob{Rect{{2.0, 0.0}, {3.0, 2.0}}};
    CHECK(segment_obstacle_distance(ob, {0.0, 1.0}, {5.0, 1.0}) == doctest::Approx(0.0));
    CHECK(segment_obstacle_distance(ob, {0.0, 3.0}, {5.0, 3.0}) == doctest::Approx(1.0));
    // Endpoint inside counts as contact.
    CHECK(segment_obstacle_distance(ob, {2.5, 1.0}, {5.0, 1.0}) == doctest::Approx(0.0));
}
