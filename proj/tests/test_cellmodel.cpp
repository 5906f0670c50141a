#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cellforce/cellmodel.hpp"
#include "cellforce/errors.hpp"

using namespace cellforce;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Polygonize, EqualAreaSquare) {
  const PolygonApprox p = polygonize({{0, 0}, 0.1}, 4, true);
  EXPECT_NEAR(p.circumradius, 0.1 * std::sqrt(kPi / 2), 1e-15);
  EXPECT_NEAR(p.circumradius, 0.12533, 1e-5);
  EXPECT_NEAR(p.area(), kPi * 0.01, 1e-12 * kPi * 0.01);
}

TEST(Polygonize, EqualAreaAllDegrees) {
  for (int n = 3; n <= 8; ++n) {
    const PolygonApprox p = polygonize({{1.5, -2}, 0.1}, n, true, 0.3);
    EXPECT_EQ(p.degree(), n);
    EXPECT_NEAR(p.area(), kPi * 0.01, 1e-12 * kPi * 0.01) << n;
    for (const Point2& v : p.vertices) EXPECT_NEAR(distance(v, {1.5, -2}), p.circumradius, 1e-14);
  }
  const PolygonApprox many = polygonize({{0, 0}, 1}, 720, true);
  EXPECT_LE(many.circumradius - 1.0, 1e-5);
  EXPECT_GT(many.circumradius, 1.0);
}

TEST(Polygonize, InscribedVerticesOnCircle) {
  const PolygonApprox p = polygonize({{0, 0}, 3}, 8, false);
  EXPECT_DOUBLE_EQ(p.circumradius, 3.0);
  EXPECT_NEAR(p.area(), 25.455844122715710, 1e-12);
  EXPECT_NEAR(p.vertices[0].x, 3.0, 1e-15);
  EXPECT_NEAR(p.vertices[0].y, 0.0, 1e-15);
  EXPECT_GT(signed_polygon_area(p.vertices), 0.0);
}

TEST(ForceSegments, ClosedAndInward) {
  for (int n = 3; n <= 12; ++n) {
    const PolygonApprox p = polygonize({{0.4, 0.2}, 0.7}, n, n % 2 == 0, 0.1 * n);
    const auto segs = force_segments(p, 2.5, false);
    ASSERT_EQ(segs.size(), static_cast<std::size_t>(n));
    Vec2 sum{};
    double len = 0.0;
    for (const ForceSegment& s : segs) {
      EXPECT_NEAR(norm(s.normal), 1.0, 1e-14);
      EXPECT_GT(dot(s.normal, p.center - s.midpoint), 0.0);
      sum += s.load().force;
      len += s.length;
      EXPECT_DOUBLE_EQ(s.magnitude, 2.5);
    }
    EXPECT_LT(norm(sum), 1e-12 * 2.5 * p.perimeter());
    EXPECT_NEAR(len, p.perimeter(), 1e-12 * p.perimeter());
  }
}

TEST(ForceSegments, ConservedTotal) {
  const double P = 10.0, R = 0.1;
  for (int n = 3; n <= 8; ++n) {
    const auto segs = force_segments(polygonize({{0, 0}, R}, n, true), P, true);
    double total = 0.0;
    for (const ForceSegment& s : segs) total += s.magnitude * s.length;
    EXPECT_NEAR(total, P * 2 * kPi * R, 1e-12 * P * 2 * kPi * R);
  }
}

TEST(ForceSegments, RotatedSquareNormals) {
  // Vertices on the axes: the edges face the diagonals.
  const auto segs = force_segments(polygonize({{0, 0}, 1}, 4, false), 1.0, false);
  const double r = std::sqrt(2.0) / 2;
  for (const ForceSegment& s : segs) {
    EXPECT_NEAR(std::abs(s.normal.x), r, 1e-15);
    EXPECT_NEAR(std::abs(s.normal.y), r, 1e-15);
    EXPECT_LT(dot(s.normal, s.midpoint), 0.0);
  }
}

TEST(LoopSegments, MatchPolygonSegments) {
  const PolygonApprox p = polygonize({{0, 0}, 3}, 6, false);
  const auto a = force_segments(p, 1.0, false);
  const auto b = loop_segments(p.vertices, p.center, 1.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(distance(a[k].midpoint, b[k].midpoint), 0.0, 1e-15);
    EXPECT_NEAR(distance(a[k].normal, b[k].normal), 0.0, 1e-15);
    EXPECT_NEAR(a[k].length, b[k].length, 1e-15);
  }
}

TEST(SampleCells, DeterministicAndSeparated) {
  const SubdomainSpec w = SubdomainSpec::square({0, 0}, 5);
  const auto a = sample_cells(10, 15, 0.1, 42, w);
  const auto b = sample_cells(10, 15, 0.1, 42, w);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].center, b[i].center);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto cells = sample_cells(10, 15, 0.1, seed, w);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Point2 c = cells[i].center;
      EXPECT_LE(std::abs(c.x), 5 - 0.1);
      EXPECT_LE(std::abs(c.y), 5 - 0.1);
      for (std::size_t j = 0; j < i; ++j) EXPECT_GE(distance(c, cells[j].center), 0.2);
    }
  }
}

TEST(SampleCells, PoissonMeanCount) {
  // Mean of 10^4 Poisson(15) counts: 15 ± 3·sqrt(15/10^4) = 15 ± 0.116; the bracket is wider.
  const SubdomainSpec w = SubdomainSpec::square({0, 0}, 5);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) total += static_cast<double>(sample_cells(10, 15, 0.1, seed, w).size());
  const double mean = total / 10000;
  EXPECT_GE(mean, 14.7);
  EXPECT_LE(mean, 15.3);
}

TEST(SampleCells, CrowdedRegionFails) {
  const SubdomainSpec tiny = SubdomainSpec::square({0, 0}, 0.5);
  EXPECT_THROW(sample_cells(10, 200, 0.2, 1, tiny), GeometryError);
}

TEST(CellsIO, RoundTrip) {
  const auto cells = sample_cells(10, 15, 0.1, 3, SubdomainSpec::square({0, 0}, 5));
  std::ostringstream out;
  write_cells(out, cells);
  std::istringstream in(out.str());
  const auto back = read_cells(in);
  ASSERT_EQ(back.size(), cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(back[i].center, cells[i].center);
    EXPECT_EQ(back[i].radius, cells[i].radius);
  }
  std::istringstream bad("CELLS 2\n0 0 1\n");
  EXPECT_THROW(read_cells(bad), FormatError);
}
