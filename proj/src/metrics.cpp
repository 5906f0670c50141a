#include "cellforce/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include <Eigen/LU>

#include "cellforce/errors.hpp"

namespace cellforce {

double shoelace_area(std::span<const Point2> v) {
  if (v.size() < 3) throw GeometryError("shoelace: polygon needs at least 3 vertices");
  return std::abs(signed_polygon_area(v));
}

DeformedPolygon deformed_boundary(const Mesh& mesh, const DisplacementField& u, EdgeTag tag) {
  const auto loops = edge_loops(mesh, tag);
  if (loops.size() != 1) throw GeometryError("deformed_boundary: expected exactly one tagged loop");
  DeformedPolygon out;
  for (int v : loops.front()) out.vertices.push_back(mesh.nodes[v] + u.at(v));
  return out;
}

std::vector<int> subdomain_boundary_nodes(const Mesh& mesh, const SubdomainSpec& sub) {
  std::set<std::pair<int, int>> mesh_edges;
  for (const Triangle& t : mesh.elements)
    for (int k = 0; k < 3; ++k) {
      const int a = t.nodes[k], b = t.nodes[(k + 1) % 3];
      mesh_edges.insert({std::min(a, b), std::max(a, b)});
    }
  const std::size_t nv = sub.vertices.size();
  double scale = 0.0;
  for (const Point2& v : sub.vertices) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
  const double tol = 1e-9 * std::max(1.0, scale);

  std::vector<int> loop;
  for (std::size_t k = 0; k < nv; ++k) {
    const Point2& a = sub.vertices[k];
    const Point2& b = sub.vertices[(k + 1) % nv];
    const double len = distance(a, b);
    std::vector<std::pair<double, int>> on_edge;
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
      if (point_segment_distance(mesh.nodes[n], a, b) > tol) continue;
      on_edge.push_back({dot(mesh.nodes[n] - a, b - a) / len, static_cast<int>(n)});
    }
    std::sort(on_edge.begin(), on_edge.end());
    if (on_edge.size() < 2 || on_edge.front().first > tol || on_edge.back().first < len - tol)
      throw GeometryError("subdomain boundary: corner is not a mesh node");
    // The last node of this side is the first of the next one.
    for (std::size_t i = 0; i + 1 < on_edge.size(); ++i) loop.push_back(on_edge[i].second);
  }
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const int a = loop[i], b = loop[(i + 1) % loop.size()];
    if (!mesh_edges.contains({std::min(a, b), std::max(a, b)}))
      throw GeometryError("subdomain boundary: loop is not a chain of mesh edges");
  }
  return loop;
}

DeformedPolygon deformed_boundary(const Mesh& mesh, const DisplacementField& u, const SubdomainSpec& sub) {
  DeformedPolygon out;
  for (int v : subdomain_boundary_nodes(mesh, sub)) out.vertices.push_back(mesh.nodes[v] + u.at(v));
  return out;
}

JacobianArea jacobian_area(const Mesh& mesh, const DisplacementField& u, std::span<const int> elements) {
  JacobianArea out;
  for (int e : elements) {
    const Eigen::Matrix2d F = Eigen::Matrix2d::Identity() + displacement_gradient(mesh, u, static_cast<std::size_t>(e));
    const double det = F.determinant();
    if (det <= 0.0) ++out.inverted_elements;
    out.area += det * mesh.element_area(static_cast<std::size_t>(e));
  }
  return out;
}

double reduction_ratio(double area_now, double area_initial) {
  if (!(area_initial > 0.0)) throw GeometryError("reduction_ratio: initial area must be positive");
  return std::abs(area_now - area_initial) / area_initial;
}

double convergence_rate(const ConvergenceTriple& q) {
  const double d1 = std::abs(q.coarse - q.medium);
  const double d2 = std::abs(q.medium - q.fine);
  if (d1 == 0.0 || d2 == 0.0) throw IndeterminateRateError("convergence_rate: successive values coincide");
  return std::log2(d1 / d2);
}

namespace {

double element_mass_term(const Mesh& mesh, const DisplacementField& u, std::size_t e) {
  const auto& t = mesh.elements[e].nodes;
  double q = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q += (i == j ? 2.0 : 1.0) * dot(u.at(t[i]), u.at(t[j]));
  return mesh.element_area(e) / 12.0 * q;
}

}  // namespace

double l2_norm(const Mesh& mesh, const DisplacementField& u) {
  double s = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) s += element_mass_term(mesh, u, e);
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const DisplacementField& u, std::span<const int> elements) {
  double s = 0.0;
  for (int e : elements) s += element_mass_term(mesh, u, static_cast<std::size_t>(e));
  return std::sqrt(s);
}

Vec2 interpolate(const Mesh& mesh, const DisplacementField& u, const Point2& p) {
  const Location loc = locate(mesh, p);
  const auto& t = mesh.elements[loc.element].nodes;
  Vec2 v{};
  for (int k = 0; k < 3; ++k) v += loc.bary[k] * u.at(t[k]);
  return v;
}

}  // namespace cellforce
