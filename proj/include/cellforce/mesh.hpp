#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cellforce/geometry.hpp"

namespace cellforce {

enum class EdgeTag : std::uint8_t {
  Outer = 0,      // outer boundary of the square domain
  Hole = 1,       // cell boundary of a hole mesh (true boundary)
  Interface = 2,  // cell boundary inside a cell-conforming mesh (interior edges)
};

enum class Region : std::uint8_t {
  Exterior = 0,
  CellInterior = 1,
};

struct Triangle {
  std::array<int, 3> nodes{};  // counterclockwise
  Region region = Region::Exterior;
};

/// Directed edge; the meshed exterior region lies to the left of (a -> b).
struct TaggedEdge {
  int a = 0;
  int b = 0;
  EdgeTag tag = EdgeTag::Outer;
};

/// Observation subdomain (Ω_w). Axis-aligned squares are the common case;
/// general polygons must be rectilinear so their boundary follows grid lines.
struct SubdomainSpec {
  enum class Kind { AxisAlignedSquare, Polygon };

  Kind kind = Kind::AxisAlignedSquare;
  std::vector<Point2> vertices;  // counterclockwise

  static SubdomainSpec square(Point2 center, double half_length);
  static SubdomainSpec polygon(std::vector<Point2> vertices);

  double area() const;
  bool contains(const Point2& p) const;
};

/// Conforming triangulation with tagged boundaries and element regions.
///
/// Meshes are plain values; once generated they are treated as immutable and
/// can be shared read-only across threads.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<Triangle> elements;
  std::vector<TaggedEdge> edges;  // boundary and interface loops
  double h = 0.0;                 // nominal element size

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_elements() const { return elements.size(); }

  std::array<Point2, 3> vertices(std::size_t e) const;
  double element_area(std::size_t e) const;
  Point2 centroid(std::size_t e) const;
  double total_area() const;
  double region_area(Region r) const;
  bool has_tag(EdgeTag tag) const;
};

/// Throws GeometryError describing the first violated mesh invariant.
void validate(const Mesh& mesh);

/// Euler characteristic V - E + F, with F counting triangles only.
long euler_characteristic(const Mesh& mesh);

/// Minimum interior angle over all elements (radians).
double min_element_angle(const Mesh& mesh);

/// Edges with the given tag, chained into closed node loops in traversal order.
/// Throws GeometryError if the tagged edges do not form closed simple loops.
std::vector<std::vector<int>> edge_loops(const Mesh& mesh, EdgeTag tag);

/// Indices of elements with the given region tag.
std::vector<int> elements_with_region(const Mesh& mesh, Region r);

/// Indices of elements whose centroid lies inside the subdomain.
std::vector<int> elements_in_subdomain(const Mesh& mesh, const SubdomainSpec& sub);

// ---------------------------------------------------------------------------
// Generation

/// Structured grid on (-L, L)^2 with each square split along its (/) diagonal.
/// The subdomain boundary must lie on grid lines.
Mesh generate_square_mesh(double half_length, double h, const SubdomainSpec& subdomain);
/// Same grid without an observed subdomain to align to.
Mesh generate_square_mesh(double half_length, double h);

/// Structured grid with a polygonal hole. Each polygon edge is split into a
/// power-of-two number of pieces no longer than h, so halving h nests the
/// hole loops. Grid squares within h/2 of the polygon are removed and the gap
/// is re-triangulated by constrained Delaunay flips.
Mesh generate_hole_mesh(double half_length, std::span<const Point2> polygon, double h,
                        const SubdomainSpec& subdomain);

/// Same exterior triangulation as generate_hole_mesh (identical node and
/// element numbering for the exterior part), with the polygon interior also
/// triangulated and tagged CellInterior. The polygon loop is tagged Interface.
Mesh generate_cell_conforming_mesh(double half_length, std::span<const Point2> polygon,
                                   double h, const SubdomainSpec& subdomain);

/// Drops CellInterior elements and nodes used only by them; Interface edges
/// become Hole edges. Applied to a generated conforming mesh this reproduces
/// generate_hole_mesh exactly.
Mesh exterior_part(const Mesh& mesh);

/// Uniform red refinement: every triangle splits into four similar children
/// through its edge midpoints. Tagged edges are split and keep their tag.
/// Node indices of the parent mesh are preserved.
Mesh refine(const Mesh& mesh);

// ---------------------------------------------------------------------------
// Point location

struct Location {
  int element = -1;
  std::array<double, 3> bary{};
};

/// Finds the lowest-index element containing p. Throws NotFoundError when p is
/// outside the mesh or inside a hole.
Location locate(const Mesh& mesh, const Point2& p);

// ---------------------------------------------------------------------------
// Text format:
//   MESH2 <n_nodes> <n_elems> <n_edges>
//   x y                 (per node)
//   i j k region        (per element; region 0 exterior, 1 cell interior)
//   i j tag             (per edge; tag 0 outer, 1 hole, 2 interface)
// The nominal size h is not part of the format.

void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
std::string mesh_to_string(const Mesh& mesh);

}  // namespace cellforce
