#include "cellforce/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "cellforce/errors.hpp"
#include "triangulate.hpp"

namespace cellforce {
namespace {

using EdgeKey = std::pair<int, int>;
EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Minimum element angle accepted in generated gap triangulations.
constexpr double kMinAngle = 5.0 * std::numbers::pi / 180.0;

int grid_steps(double extent, double h, const char* what) {
  const double q = extent / h;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * std::max(1.0, q)) {
    std::ostringstream msg;
    msg << "alignment: h=" << h << " does not divide " << what << " extent " << extent;
    throw AlignmentError(msg.str());
  }
  return static_cast<int>(r);
}

struct Grid {
  double half_length;
  double h;
  int n;  // squares per side

  Point2 node(int i, int j) const { return {-half_length + i * h, -half_length + j * h}; }
  int id(int i, int j) const { return j * (n + 1) + i; }
  int num_nodes() const { return (n + 1) * (n + 1); }
};

Grid make_grid(double half_length, double h) {
  if (!(h > 0.0) || h > 2.0 * half_length)
    throw GeometryError("mesh: h must satisfy 0 < h <= side length");
  return Grid{half_length, h, grid_steps(2.0 * half_length, h, "domain")};
}

Grid make_grid(double half_length, double h, const SubdomainSpec& sub) {
  Grid g = make_grid(half_length, h);
  const std::size_t nv = sub.vertices.size();
  if (nv < 3) throw GeometryError("mesh: subdomain needs at least 3 vertices");
  for (std::size_t k = 0; k < nv; ++k) {
    const Point2& v = sub.vertices[k];
    const Point2& w = sub.vertices[(k + 1) % nv];
    if (!(std::abs(v.x) < half_length && std::abs(v.y) < half_length))
      throw GeometryError("mesh: subdomain must lie strictly inside the domain");
    grid_steps(v.x + half_length, h, "subdomain x");
    grid_steps(v.y + half_length, h, "subdomain y");
    if (v.x != w.x && v.y != w.y) throw AlignmentError("alignment: subdomain edges must be axis-aligned");
  }
  return g;
}

void append_outer_edges(const Grid& g, const std::vector<int>& remap, std::vector<TaggedEdge>& edges) {
  const auto push = [&](int a, int b) { edges.push_back({remap[a], remap[b], EdgeTag::Outer}); };
  for (int i = 0; i < g.n; ++i) push(g.id(i, 0), g.id(i + 1, 0));
  for (int j = 0; j < g.n; ++j) push(g.id(g.n, j), g.id(g.n, j + 1));
  for (int i = g.n; i > 0; --i) push(g.id(i, g.n), g.id(i - 1, g.n));
  for (int j = g.n; j > 0; --j) push(g.id(0, j), g.id(0, j - 1));
}

// The two triangles of grid square (i, j), split along the (/) diagonal.
std::array<std::array<int, 3>, 2> square_triangles(const Grid& g, int i, int j) {
  const int p00 = g.id(i, j), p10 = g.id(i + 1, j), p11 = g.id(i + 1, j + 1), p01 = g.id(i, j + 1);
  return {{{p00, p10, p11}, {p00, p11, p01}}};
}

// Polygon normalized to counterclockwise order, checked for degenerate edges.
std::vector<Point2> normalized_polygon(std::span<const Point2> polygon, double h) {
  if (polygon.size() < 3) throw GeometryError("mesh: cell polygon needs at least 3 vertices");
  std::vector<Point2> poly(polygon.begin(), polygon.end());
  if (signed_polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (distance(poly[k], poly[(k + 1) % poly.size()]) < 1e-3 * h)
      throw GeometryError("mesh: polygon edge shorter than 1e-3*h");
  }
  return poly;
}

// Each polygon edge split into 2^k equal pieces, the smallest count with
// piece length <= h.
std::vector<Point2> subdivide_polygon(const std::vector<Point2>& poly, double h) {
  std::vector<Point2> loop;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point2& a = poly[k];
    const Point2& b = poly[(k + 1) % poly.size()];
    const double len = distance(a, b);
    int pieces = 1;
    while (len / pieces > h * (1.0 + 1e-12)) pieces *= 2;
    for (int s = 0; s < pieces; ++s) {
      const double t = static_cast<double>(s) / pieces;
      loop.push_back(a + t * (b - a));
    }
  }
  return loop;
}

double polygon_boundary_distance(std::span<const Point2> poly, const Point2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < poly.size(); ++k)
    d = std::min(d, point_segment_distance(p, poly[k], poly[(k + 1) % poly.size()]));
  return d;
}

// Distance between a closed axis-aligned square and a closed polygonal region.
double square_polygon_distance(std::span<const Point2> poly, const Point2& lo, double side) {
  const std::array<Point2, 4> sq{lo, {lo.x + side, lo.y}, {lo.x + side, lo.y + side}, {lo.x, lo.y + side}};
  for (const Point2& c : sq)
    if (point_in_polygon(poly, c)) return 0.0;
  for (const Point2& v : poly)
    if (v.x >= lo.x && v.x <= lo.x + side && v.y >= lo.y && v.y <= lo.y + side) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (const Point2& c : sq) d = std::min(d, polygon_boundary_distance(poly, c));
  for (const Point2& v : poly) d = std::min(d, polygon_boundary_distance(sq, v));
  return d;  // polygon edges crossing the square would touch a corner or vertex case above
}

// Counterclockwise boundary loop (grid node ids) of a set of grid squares.
// Returns an empty vector if the set is empty; throws if the boundary is not
// a single simple loop.
std::vector<int> polyomino_loop(const Grid& g, const std::vector<char>& in_set) {
  std::map<EdgeKey, int> directed;  // (from, to) -> multiplicity
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!in_set[j * g.n + i]) continue;
      const std::array<int, 4> c{g.id(i, j), g.id(i + 1, j), g.id(i + 1, j + 1), g.id(i, j + 1)};
      for (int k = 0; k < 4; ++k) {
        const int a = c[k], b = c[(k + 1) % 4];
        auto rev = directed.find({b, a});
        if (rev != directed.end()) {
          directed.erase(rev);
        } else {
          directed[{a, b}] = 1;
        }
      }
    }
  }
  if (directed.empty()) return {};
  std::map<int, int> next;
  for (const auto& [e, m] : directed) {
    if (!next.emplace(e.first, e.second).second)
      throw GeometryError("mesh: removed region boundary is pinched");
  }
  std::vector<int> loop;
  const int start = next.begin()->first;
  int v = start;
  do {
    loop.push_back(v);
    v = next.at(v);
  } while (v != start && loop.size() <= next.size());
  if (loop.size() != next.size()) throw GeometryError("mesh: removed region is not simply connected");
  return loop;
}

struct HoleLayout {
  Grid grid;
  std::vector<Point2> grid_nodes;     // possibly perturbed grid node positions
  std::vector<char> removed;          // per square
  std::vector<char> inner;            // per square, fully inside the cell
  std::vector<int> outer_loop;        // grid ids, ccw
  std::vector<int> inner_loop;        // grid ids, ccw (may be empty)
  std::vector<Point2> cell_loop;      // subdivided polygon, ccw
  std::vector<detail::Tri> gap_tris;  // local indices: [0, |outer_loop|) then cell loop
};

double min_angle_of(std::span<const Point2> pts, const std::vector<detail::Tri>& tris, int* worst) {
  double best = std::numbers::pi;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const double a = min_angle(pts[tris[t][0]], pts[tris[t][1]], pts[tris[t][2]]);
    if (a < best) {
      best = a;
      if (worst) *worst = static_cast<int>(t);
    }
  }
  return best;
}

HoleLayout layout_hole(double half_length, std::span<const Point2> polygon, double h,
                       const SubdomainSpec& sub) {
  HoleLayout L{make_grid(half_length, h, sub), {}, {}, {}, {}, {}, {}, {}};
  const Grid& g = L.grid;
  const std::vector<Point2> poly = normalized_polygon(polygon, h);
  L.cell_loop = subdivide_polygon(poly, h);

  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i) L.grid_nodes.push_back(g.node(i, j));

  const double clearance = 0.5 * h;
  L.removed.assign(static_cast<std::size_t>(g.n) * g.n, 0);
  L.inner.assign(static_cast<std::size_t>(g.n) * g.n, 0);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const Point2 lo = g.node(i, j);
      if (square_polygon_distance(poly, lo, h) > clearance) continue;
      L.removed[j * g.n + i] = 1;
      const std::array<Point2, 4> c{lo, g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)};
      for (const Point2& p : c) {
        if (!sub.contains(p) || polygon_boundary_distance(sub.vertices, p) <= 1e-9 * h)
          throw GeometryError("mesh: cell polygon too close to the subdomain boundary for this h");
      }
      bool inside = true;
      for (const Point2& p : c)
        inside = inside && point_in_polygon(poly, p) && polygon_boundary_distance(poly, p) >= clearance;
      for (const Point2& v : poly)
        inside = inside && !(v.x > lo.x && v.x < lo.x + h && v.y > lo.y && v.y < lo.y + h);
      L.inner[j * g.n + i] = inside ? 1 : 0;
    }
  }
  L.outer_loop = polyomino_loop(g, L.removed);
  if (L.outer_loop.empty()) throw GeometryError("mesh: cell polygon covers no grid square");
  try {
    L.inner_loop = polyomino_loop(g, L.inner);
  } catch (const GeometryError&) {
    // Pinched interior block: triangulate the cell from its boundary alone.
    std::fill(L.inner.begin(), L.inner.end(), 0);
    L.inner_loop.clear();
  }

  const Point2 center = polygon_centroid(poly);
  const auto triangulate_gap = [&]() {
    std::vector<Point2> pts;
    std::vector<int> outer, hole;
    for (int id : L.outer_loop) {
      outer.push_back(static_cast<int>(pts.size()));
      pts.push_back(L.grid_nodes[id]);
    }
    for (const Point2& p : L.cell_loop) {
      hole.push_back(static_cast<int>(pts.size()));
      pts.push_back(p);
    }
    L.gap_tris = detail::triangulate_annulus(pts, outer, hole);
    return pts;
  };

  std::vector<Point2> pts = triangulate_gap();
  int worst = -1;
  if (min_angle_of(pts, L.gap_tris, &worst) < kMinAngle) {
    // Push the grid-side vertices of poorly shaped gap triangles radially
    // outward (by 0.3 h) and re-triangulate once.
    std::set<int> moved;
    for (const auto& t : L.gap_tris) {
      if (min_angle(pts[t[0]], pts[t[1]], pts[t[2]]) >= kMinAngle) continue;
      for (int v : t)
        if (v < static_cast<int>(L.outer_loop.size())) moved.insert(L.outer_loop[v]);
    }
    for (int id : moved) {
      Vec2 dir = L.grid_nodes[id] - center;
      dir = dir / norm(dir);
      L.grid_nodes[id] += 0.3 * h * dir;
    }
    pts = triangulate_gap();
    if (min_angle_of(pts, L.gap_tris, nullptr) < kMinAngle)
      throw GeometryError("mesh: gap triangulation has an element angle below 5 degrees");
  }
  return L;
}

Mesh build_from_layout(const HoleLayout& L, bool with_interior) {
  const Grid& g = L.grid;
  Mesh mesh;
  mesh.h = g.h;

  // Grid nodes used by retained squares, in grid order.
  std::vector<char> used(g.num_nodes(), 0);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (!L.removed[j * g.n + i])
        for (const auto& t : square_triangles(g, i, j))
          for (int v : t) used[v] = 1;
  std::vector<int> remap(g.num_nodes(), -1);
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (!used[id]) continue;
    remap[id] = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(L.grid_nodes[id]);
  }
  const int cell_base = static_cast<int>(mesh.nodes.size());
  for (const Point2& p : L.cell_loop) mesh.nodes.push_back(p);

  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (!L.removed[j * g.n + i])
        for (const auto& t : square_triangles(g, i, j))
          mesh.elements.push_back({{remap[t[0]], remap[t[1]], remap[t[2]]}, Region::Exterior});

  const int n_outer = static_cast<int>(L.outer_loop.size());
  const auto gap_node = [&](int local) {
    return local < n_outer ? remap[L.outer_loop[local]] : cell_base + (local - n_outer);
  };
  for (const auto& t : L.gap_tris)
    mesh.elements.push_back({{gap_node(t[0]), gap_node(t[1]), gap_node(t[2])}, Region::Exterior});

  append_outer_edges(g, remap, mesh.edges);
  const int nc = static_cast<int>(L.cell_loop.size());
  const EdgeTag cell_tag = with_interior ? EdgeTag::Interface : EdgeTag::Hole;
  // Exterior lies outside the ccw cell loop, i.e. to the left of the cw traversal.
  for (int k = 0; k < nc; ++k) {
    const int a = cell_base + (k + 1) % nc;
    const int b = cell_base + k;
    mesh.edges.push_back({a, b, cell_tag});
  }
  if (!with_interior) return mesh;

  // Interior: grid nodes of fully-inside squares, then their triangles and the
  // triangulated ring between the cell loop and that block.
  std::vector<int> inner_remap(g.num_nodes(), -1);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (L.inner[j * g.n + i])
        for (const auto& t : square_triangles(g, i, j))
          for (int v : t)
            if (inner_remap[v] < 0) inner_remap[v] = -2;
  for (int id = 0; id < g.num_nodes(); ++id) {
    if (inner_remap[id] != -2) continue;
    inner_remap[id] = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(L.grid_nodes[id]);
  }
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (L.inner[j * g.n + i])
        for (const auto& t : square_triangles(g, i, j))
          mesh.elements.push_back(
              {{inner_remap[t[0]], inner_remap[t[1]], inner_remap[t[2]]}, Region::CellInterior});

  std::vector<Point2> pts;
  std::vector<int> outer, hole, global;
  for (int k = 0; k < nc; ++k) {
    outer.push_back(static_cast<int>(pts.size()));
    pts.push_back(L.cell_loop[k]);
    global.push_back(cell_base + k);
  }
  for (int id : L.inner_loop) {
    hole.push_back(static_cast<int>(pts.size()));
    pts.push_back(L.grid_nodes[id]);
    global.push_back(inner_remap[id]);
  }
  for (const auto& t : detail::triangulate_annulus(pts, outer, hole))
    mesh.elements.push_back({{global[t[0]], global[t[1]], global[t[2]]}, Region::CellInterior});
  return mesh;
}

}  // namespace

// ---------------------------------------------------------------------------

SubdomainSpec SubdomainSpec::square(Point2 center, double half_length) {
  SubdomainSpec s;
  s.kind = Kind::AxisAlignedSquare;
  s.vertices = {{center.x - half_length, center.y - half_length},
                {center.x + half_length, center.y - half_length},
                {center.x + half_length, center.y + half_length},
                {center.x - half_length, center.y + half_length}};
  return s;
}

SubdomainSpec SubdomainSpec::polygon(std::vector<Point2> vertices) {
  SubdomainSpec s;
  s.kind = Kind::Polygon;
  if (signed_polygon_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  s.vertices = std::move(vertices);
  return s;
}

double SubdomainSpec::area() const { return std::abs(signed_polygon_area(vertices)); }

bool SubdomainSpec::contains(const Point2& p) const { return point_in_polygon(vertices, p); }

std::array<Point2, 3> Mesh::vertices(std::size_t e) const {
  const auto& t = elements[e].nodes;
  return {nodes[t[0]], nodes[t[1]], nodes[t[2]]};
}

double Mesh::element_area(std::size_t e) const {
  const auto v = vertices(e);
  return signed_triangle_area(v[0], v[1], v[2]);
}

Point2 Mesh::centroid(std::size_t e) const {
  const auto v = vertices(e);
  return {(v[0].x + v[1].x + v[2].x) / 3.0, (v[0].y + v[1].y + v[2].y) / 3.0};
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e) a += element_area(e);
  return a;
}

double Mesh::region_area(Region r) const {
  double a = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (elements[e].region == r) a += element_area(e);
  return a;
}

bool Mesh::has_tag(EdgeTag tag) const {
  return std::any_of(edges.begin(), edges.end(), [&](const TaggedEdge& e) { return e.tag == tag; });
}

void validate(const Mesh& mesh) {
  const int nn = static_cast<int>(mesh.num_nodes());
  std::map<EdgeKey, int> count;
  std::set<std::pair<int, int>> directed;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.elements[e].nodes;
    for (int v : t)
      if (v < 0 || v >= nn) throw GeometryError("mesh: element references a missing node");
    if (!(mesh.element_area(e) > 0.0)) {
      std::ostringstream msg;
      msg << "mesh: element " << e << " has non-positive area";
      throw GeometryError(msg.str());
    }
    for (int k = 0; k < 3; ++k) {
      ++count[key(t[k], t[(k + 1) % 3])];
      directed.insert({t[k], t[(k + 1) % 3]});
    }
  }
  std::set<EdgeKey> tagged_boundary;
  for (const TaggedEdge& te : mesh.edges) {
    auto it = count.find(key(te.a, te.b));
    if (it == count.end()) throw GeometryError("mesh: tagged edge is not an element edge");
    if (te.tag == EdgeTag::Interface) {
      if (it->second != 2) throw GeometryError("mesh: interface edge must be shared by two elements");
    } else {
      if (it->second != 1) throw GeometryError("mesh: boundary edge must belong to exactly one element");
      if (!directed.contains({te.a, te.b}))
        throw GeometryError("mesh: boundary edge orientation does not keep the domain on its left");
      tagged_boundary.insert(key(te.a, te.b));
    }
  }
  for (const auto& [e, c] : count) {
    if (c > 2) throw GeometryError("mesh: edge shared by more than two elements");
    if (c == 1 && !tagged_boundary.contains(e)) throw GeometryError("mesh: untagged boundary edge");
  }
  for (EdgeTag tag : {EdgeTag::Outer, EdgeTag::Hole, EdgeTag::Interface}) edge_loops(mesh, tag);
  if (mesh.has_tag(EdgeTag::Hole)) {
    for (const Triangle& t : mesh.elements)
      if (t.region == Region::CellInterior) throw GeometryError("mesh: hole mesh has cell-interior elements");
  }
}

long euler_characteristic(const Mesh& mesh) {
  std::set<EdgeKey> edges;
  std::vector<char> used(mesh.num_nodes(), 0);
  for (const Triangle& t : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      edges.insert(key(t.nodes[k], t.nodes[(k + 1) % 3]));
      used[t.nodes[k]] = 1;
    }
  }
  const long v = std::count(used.begin(), used.end(), 1);
  return v - static_cast<long>(edges.size()) + static_cast<long>(mesh.num_elements());
}

double min_element_angle(const Mesh& mesh) {
  double best = std::numbers::pi;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.vertices(e);
    best = std::min(best, min_angle(v[0], v[1], v[2]));
  }
  return best;
}

std::vector<std::vector<int>> edge_loops(const Mesh& mesh, EdgeTag tag) {
  std::map<int, int> next;
  for (const TaggedEdge& e : mesh.edges) {
    if (e.tag != tag) continue;
    if (!next.emplace(e.a, e.b).second) throw GeometryError("mesh: tagged edges are non-manifold");
  }
  std::vector<std::vector<int>> loops;
  std::set<int> seen;
  // Follow edges in their stored order so loops start at the first tagged edge.
  for (const TaggedEdge& e : mesh.edges) {
    if (e.tag != tag || seen.contains(e.a)) continue;
    std::vector<int> loop;
    int v = e.a;
    while (!seen.contains(v)) {
      seen.insert(v);
      loop.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) throw GeometryError("mesh: tagged edges do not form a closed loop");
      v = it->second;
    }
    if (v != e.a) throw GeometryError("mesh: tagged edges do not form a closed loop");
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<int> elements_with_region(const Mesh& mesh, Region r) {
  std::vector<int> out;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    if (mesh.elements[e].region == r) out.push_back(static_cast<int>(e));
  return out;
}

std::vector<int> elements_in_subdomain(const Mesh& mesh, const SubdomainSpec& sub) {
  std::vector<int> out;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    if (sub.contains(mesh.centroid(e))) out.push_back(static_cast<int>(e));
  return out;
}

Mesh generate_square_mesh(double half_length, double h, const SubdomainSpec& subdomain) {
  make_grid(half_length, h, subdomain);
  return generate_square_mesh(half_length, h);
}

Mesh generate_square_mesh(double half_length, double h) {
  const Grid g = make_grid(half_length, h);
  Mesh mesh;
  mesh.h = h;
  mesh.nodes.reserve(g.num_nodes());
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i) mesh.nodes.push_back(g.node(i, j));
  mesh.elements.reserve(2 * static_cast<std::size_t>(g.n) * g.n);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      for (const auto& t : square_triangles(g, i, j)) mesh.elements.push_back({t, Region::Exterior});
  std::vector<int> identity(g.num_nodes());
  for (int k = 0; k < g.num_nodes(); ++k) identity[k] = k;
  append_outer_edges(g, identity, mesh.edges);
  return mesh;
}

Mesh generate_hole_mesh(double half_length, std::span<const Point2> polygon, double h,
                        const SubdomainSpec& subdomain) {
  return build_from_layout(layout_hole(half_length, polygon, h, subdomain), false);
}

Mesh generate_cell_conforming_mesh(double half_length, std::span<const Point2> polygon, double h,
                                   const SubdomainSpec& subdomain) {
  return build_from_layout(layout_hole(half_length, polygon, h, subdomain), true);
}

Mesh exterior_part(const Mesh& mesh) {
  std::vector<int> remap(mesh.num_nodes(), -1);
  for (const Triangle& t : mesh.elements)
    if (t.region == Region::Exterior)
      for (int v : t.nodes) remap[v] = 0;
  Mesh out;
  out.h = mesh.h;
  for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
    if (remap[k] < 0) continue;
    remap[k] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(mesh.nodes[k]);
  }
  for (const Triangle& t : mesh.elements) {
    if (t.region != Region::Exterior) continue;
    out.elements.push_back({{remap[t.nodes[0]], remap[t.nodes[1]], remap[t.nodes[2]]}, Region::Exterior});
  }
  for (const TaggedEdge& e : mesh.edges) {
    const EdgeTag tag = e.tag == EdgeTag::Interface ? EdgeTag::Hole : e.tag;
    out.edges.push_back({remap[e.a], remap[e.b], tag});
  }
  return out;
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.h = 0.5 * mesh.h;
  out.nodes = mesh.nodes;
  std::map<EdgeKey, int> mid;
  const auto midpoint_node = [&](int a, int b) {
    auto [it, inserted] = mid.emplace(key(a, b), static_cast<int>(out.nodes.size()));
    if (inserted) out.nodes.push_back(midpoint(mesh.nodes[a], mesh.nodes[b]));
    return it->second;
  };
  out.elements.reserve(4 * mesh.num_elements());
  for (const Triangle& t : mesh.elements) {
    const auto [a, b, c] = t.nodes;
    const int ab = midpoint_node(a, b);
    const int bc = midpoint_node(b, c);
    const int ca = midpoint_node(c, a);
    out.elements.push_back({{a, ab, ca}, t.region});
    out.elements.push_back({{ab, b, bc}, t.region});
    out.elements.push_back({{ca, bc, c}, t.region});
    out.elements.push_back({{ab, bc, ca}, t.region});
  }
  out.edges.reserve(2 * mesh.edges.size());
  for (const TaggedEdge& e : mesh.edges) {
    const int m = mid.at(key(e.a, e.b));
    out.edges.push_back({e.a, m, e.tag});
    out.edges.push_back({m, e.b, e.tag});
  }
  return out;
}

Location locate(const Mesh& mesh, const Point2& p) {
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.vertices(e);
    const double area2 = orient2d(v[0], v[1], v[2]);
    std::array<double, 3> w{orient2d(p, v[1], v[2]) / area2, orient2d(v[0], p, v[2]) / area2,
                            orient2d(v[0], v[1], p) / area2};
    constexpr double tol = 1e-12;
    if (w[0] < -tol || w[1] < -tol || w[2] < -tol) continue;
    for (double& x : w) x = std::max(x, 0.0);
    const double s = w[0] + w[1] + w[2];
    for (double& x : w) x /= s;
    return {static_cast<int>(e), w};
  }
  std::ostringstream msg;
  msg << "locate: point (" << p.x << ", " << p.y << ") is outside the meshed domain";
  throw NotFoundError(msg.str());
}

}  // namespace cellforce
