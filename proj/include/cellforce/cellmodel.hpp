#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cellforce/elasticity.hpp"
#include "cellforce/mesh.hpp"

namespace cellforce {

struct CellSpec {
  Point2 center;
  double radius = 0.0;  // µm
};

/// Regular n-gon standing in for a circular cell.
struct PolygonApprox {
  Point2 center;
  double cell_radius = 0.0;   // R of the circle being approximated
  double circumradius = 0.0;  // ρ, distance from center to each vertex
  bool equal_area = false;
  std::vector<Point2> vertices;  // counterclockwise

  int degree() const { return static_cast<int>(vertices.size()); }
  double perimeter() const;
  double area() const;
};

/// One boundary segment with an inward point force at its midpoint.
struct ForceSegment {
  Point2 midpoint;
  Vec2 normal;  // unit, towards the cell center
  double length = 0.0;
  double magnitude = 0.0;  // force per length

  PointLoad load() const { return {midpoint, magnitude * length * normal}; }
};

/// Vertices at angles phase + 2πk/n. With equal_area the circumradius is
/// R·sqrt(2π / (n·sin(2π/n))) so the polygon area equals πR²; otherwise the
/// vertices lie on the circle.
PolygonApprox polygonize(const CellSpec& cell, int n, bool equal_area, double phase = 0.0);

/// One segment per polygon edge. With conserve_total the magnitude is scaled
/// to P·2πR / perimeter, so the total scalar force P·2πR does not depend on n.
std::vector<ForceSegment> force_segments(const PolygonApprox& poly, double P, bool conserve_total);

/// Segments along a closed loop of points (e.g. the cell loop of a mesh),
/// inward normals taken towards `center`.
std::vector<ForceSegment> loop_segments(std::span<const Point2> loop, const Point2& center, double P);

/// Segments of the Hole or Interface loop of a cell mesh, one per mesh edge.
std::vector<ForceSegment> mesh_cell_segments(const Mesh& mesh, EdgeTag tag, double P);

std::vector<PointLoad> to_point_loads(std::span<const ForceSegment> segments);

/// Poisson point process of cell centers inside `region`. The count is drawn
/// from Poisson(lambda); each center is uniform in the region and resampled
/// until it keeps distance >= 2R from every accepted center and >= R from
/// the region boundary. Deterministic for a given seed.
/// Throws GeometryError after 10^4 failed attempts for a single cell.
std::vector<CellSpec> sample_cells(double half_length, double lambda, double radius, std::uint64_t seed,
                                   const SubdomainSpec& region);

// Text format: "CELLS <n>" then "cx cy R" per line, 17 significant digits.
void write_cells(std::ostream& out, std::span<const CellSpec> cells);
std::vector<CellSpec> read_cells(std::istream& in);

}  // namespace cellforce
