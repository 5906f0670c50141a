#include "cellforce/cellmodel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "cellforce/errors.hpp"

namespace cellforce {

double PolygonApprox::perimeter() const {
  double p = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) p += distance(vertices[k], vertices[(k + 1) % vertices.size()]);
  return p;
}

double PolygonApprox::area() const { return std::abs(signed_polygon_area(vertices)); }

PolygonApprox polygonize(const CellSpec& cell, int n, bool equal_area, double phase) {
  if (n < 3) throw GeometryError("polygonize: degree must be at least 3");
  if (!(cell.radius > 0.0)) throw GeometryError("polygonize: cell radius must be positive");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  PolygonApprox poly;
  poly.center = cell.center;
  poly.cell_radius = cell.radius;
  poly.equal_area = equal_area;
  poly.circumradius = equal_area ? cell.radius * std::sqrt(two_pi / (n * std::sin(two_pi / n))) : cell.radius;
  poly.vertices.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double theta = phase + two_pi * k / n;
    poly.vertices.push_back(
        {cell.center.x + poly.circumradius * std::cos(theta), cell.center.y + poly.circumradius * std::sin(theta)});
  }
  return poly;
}

std::vector<ForceSegment> loop_segments(std::span<const Point2> loop, const Point2& center, double P) {
  std::vector<ForceSegment> segs;
  segs.reserve(loop.size());
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const Point2& a = loop[k];
    const Point2& b = loop[(k + 1) % loop.size()];
    const Vec2 d = b - a;
    const double len = norm(d);
    ForceSegment s;
    s.midpoint = midpoint(a, b);
    s.length = len;
    s.magnitude = P;
    s.normal = {-d.y / len, d.x / len};
    if (dot(s.normal, center - s.midpoint) < 0.0) s.normal = -s.normal;
    segs.push_back(s);
  }
  return segs;
}

std::vector<ForceSegment> force_segments(const PolygonApprox& poly, double P, bool conserve_total) {
  const double magnitude =
      conserve_total ? P * 2.0 * std::numbers::pi * poly.cell_radius / poly.perimeter() : P;
  return loop_segments(poly.vertices, poly.center, magnitude);
}

std::vector<ForceSegment> mesh_cell_segments(const Mesh& mesh, EdgeTag tag, double P) {
  std::vector<ForceSegment> segs;
  for (const auto& loop : edge_loops(mesh, tag)) {
    std::vector<Point2> pts;
    for (int v : loop) pts.push_back(mesh.nodes[v]);
    const auto part = loop_segments(pts, polygon_centroid(pts), P);
    segs.insert(segs.end(), part.begin(), part.end());
  }
  return segs;
}

std::vector<PointLoad> to_point_loads(std::span<const ForceSegment> segments) {
  std::vector<PointLoad> loads;
  loads.reserve(segments.size());
  for (const ForceSegment& s : segments) loads.push_back(s.load());
  return loads;
}

std::vector<CellSpec> sample_cells(double half_length, double lambda, double radius, std::uint64_t seed,
                                   const SubdomainSpec& region) {
  if (!(lambda > 0.0)) throw GeometryError("sample_cells: lambda must be positive");
  if (!(radius > 0.0)) throw GeometryError("sample_cells: radius must be positive");
  double xmin = half_length, xmax = -half_length, ymin = half_length, ymax = -half_length;
  for (const Point2& v : region.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> count_dist(lambda);
  std::uniform_real_distribution<double> ux(xmin, xmax);
  std::uniform_real_distribution<double> uy(ymin, ymax);

  const int count = count_dist(rng);
  std::vector<CellSpec> cells;
  cells.reserve(static_cast<std::size_t>(count));
  constexpr int kMaxAttempts = 10000;
  for (int c = 0; c < count; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Point2 p{ux(rng), uy(rng)};
      if (!region.contains(p)) continue;
      double edge_dist = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < region.vertices.size(); ++k)
        edge_dist = std::min(edge_dist, point_segment_distance(p, region.vertices[k],
                                                               region.vertices[(k + 1) % region.vertices.size()]));
      if (edge_dist < radius) continue;
      const bool clear = std::all_of(cells.begin(), cells.end(),
                                     [&](const CellSpec& o) { return distance(o.center, p) >= 2.0 * radius; });
      if (!clear) continue;
      cells.push_back({p, radius});
      placed = true;
    }
    if (!placed) throw GeometryError("sample_cells: region too crowded, rejection sampling failed");
  }
  return cells;
}

void write_cells(std::ostream& out, std::span<const CellSpec> cells) {
  out << "CELLS " << cells.size() << '\n' << std::setprecision(17);
  for (const CellSpec& c : cells) out << c.center.x << ' ' << c.center.y << ' ' << c.radius << '\n';
}

std::vector<CellSpec> read_cells(std::istream& in) {
  std::string magic;
  std::size_t n = 0;
  if (!(in >> magic >> n) || magic != "CELLS") throw FormatError("cells: bad CELLS header");
  std::vector<CellSpec> cells(n);
  for (CellSpec& c : cells) {
    if (!(in >> c.center.x >> c.center.y >> c.radius)) throw FormatError("cells: truncated cell list");
    if (!(c.radius > 0.0)) throw FormatError("cells: radius must be positive");
  }
  return cells;
}

}  // namespace cellforce
