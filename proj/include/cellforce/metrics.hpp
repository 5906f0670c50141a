#pragma once

#include <span>
#include <vector>

#include "cellforce/elasticity.hpp"
#include "cellforce/mesh.hpp"

namespace cellforce {

/// Boundary loop after displacement, x = X + u(X), in traversal order.
struct DeformedPolygon {
  std::vector<Point2> vertices;
};

/// ½|Σ (x_i y_{i+1} - x_{i+1} y_i)| with wrap-around. Throws GeometryError
/// for fewer than 3 vertices.
double shoelace_area(std::span<const Point2> vertices);
inline double shoelace_area(const DeformedPolygon& poly) { return shoelace_area(poly.vertices); }

/// The (single) loop of edges with `tag`, displaced by the field.
DeformedPolygon deformed_boundary(const Mesh& mesh, const DisplacementField& u, EdgeTag tag);

/// Boundary of a grid-aligned subdomain traced through mesh nodes and edges,
/// displaced by the field. Throws GeometryError if the boundary is not a
/// closed chain of mesh edges.
DeformedPolygon deformed_boundary(const Mesh& mesh, const DisplacementField& u, const SubdomainSpec& sub);

/// Loop nodes of a subdomain boundary (counterclockwise, starting at the
/// first subdomain vertex).
std::vector<int> subdomain_boundary_nodes(const Mesh& mesh, const SubdomainSpec& sub);

struct JacobianArea {
  double area = 0.0;
  int inverted_elements = 0;  // elements with det(I + ∇u) <= 0
};

/// Σ det(I + J_e)·|e| over the element subset (exact for P1 fields).
JacobianArea jacobian_area(const Mesh& mesh, const DisplacementField& u, std::span<const int> elements);

/// |A - A0| / A0. Throws GeometryError if A0 is not positive.
double reduction_ratio(double area_now, double area_initial);

/// Q_h, Q_{h/2}, Q_{h/4} on nested uniform refinements.
struct ConvergenceTriple {
  double coarse = 0.0;
  double medium = 0.0;
  double fine = 0.0;
};

/// log2(|Q_h - Q_{h/2}| / |Q_{h/2} - Q_{h/4}|). Throws IndeterminateRateError
/// when either difference vanishes.
double convergence_rate(const ConvergenceTriple& q);

/// (∫|u|² dΩ)^{1/2} with the exact P1 mass matrix.
double l2_norm(const Mesh& mesh, const DisplacementField& u);
double l2_norm(const Mesh& mesh, const DisplacementField& u, std::span<const int> elements);

/// Field value at an arbitrary point by barycentric interpolation.
Vec2 interpolate(const Mesh& mesh, const DisplacementField& u, const Point2& p);

}  // namespace cellforce
