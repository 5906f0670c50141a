#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cellforce/geometry.hpp"

using namespace cellforce;

TEST(Geometry, TriangleOrientationAndArea) {
  EXPECT_DOUBLE_EQ(signed_triangle_area({0, 0}, {1, 0}, {0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(signed_triangle_area({0, 0}, {0, 1}, {1, 0}), -0.5);
  EXPECT_DOUBLE_EQ(orient2d({0, 0}, {1, 1}, {2, 2}), 0.0);
}

TEST(Geometry, PolygonAreaAndCentroid) {
  const std::vector<Point2> sq{{1, 1}, {3, 1}, {3, 3}, {1, 3}};
  EXPECT_DOUBLE_EQ(signed_polygon_area(sq), 4.0);
  const Point2 c = polygon_centroid(sq);
  EXPECT_NEAR(c.x, 2.0, 1e-15);
  EXPECT_NEAR(c.y, 2.0, 1e-15);
  const std::vector<Point2> cw(sq.rbegin(), sq.rend());
  EXPECT_DOUBLE_EQ(signed_polygon_area(cw), -4.0);
}

TEST(Geometry, PointInPolygon) {
  const std::vector<Point2> l{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  EXPECT_TRUE(point_in_polygon(l, {0.5, 1.5}));
  EXPECT_TRUE(point_in_polygon(l, {1.5, 0.5}));
  EXPECT_FALSE(point_in_polygon(l, {1.5, 1.5}));
  EXPECT_FALSE(point_in_polygon(l, {-0.1, 0.5}));
}

TEST(Geometry, SegmentDistance) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0.5, 2}, {0, 0}, {1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({4, 4}, {0, 0}, {1, 0}), 5.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({0.3, 0}, {0, 0}, {1, 0}), 0.0);
}

TEST(Geometry, MinAngle) {
  EXPECT_NEAR(min_angle({0, 0}, {1, 0}, {0, 1}), std::numbers::pi / 4, 1e-14);
  EXPECT_NEAR(min_angle({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}), std::numbers::pi / 3, 1e-14);
}
