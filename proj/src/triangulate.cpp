#include "triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "cellforce/errors.hpp"

namespace cellforce::detail {
namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

bool segments_cross(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const double d1 = orient2d(q1, q2, p1);
  const double d2 = orient2d(q1, q2, p2);
  const double d3 = orient2d(p1, p2, q1);
  const double d4 = orient2d(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Point strictly inside or on the boundary of the (ccw) triangle abc.
bool in_closed_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c,
                        double tol) {
  return orient2d(a, b, p) >= -tol && orient2d(b, c, p) >= -tol && orient2d(c, a, p) >= -tol;
}

// Joins the hole into the outer loop through the shortest bridge segment that
// does not cross any loop edge. The result is a weakly simple polygon.
std::vector<int> bridge(std::span<const Point2> pts, std::span<const int> outer,
                        std::span<const int> hole_ccw) {
  std::vector<int> hole(hole_ccw.rbegin(), hole_ccw.rend());  // now clockwise

  struct Candidate {
    double dist;
    std::size_t io;
    std::size_t ih;
  };
  std::vector<Candidate> cands;
  cands.reserve(outer.size() * hole.size());
  for (std::size_t io = 0; io < outer.size(); ++io) {
    for (std::size_t ih = 0; ih < hole.size(); ++ih) {
      cands.push_back({distance(pts[outer[io]], pts[hole[ih]]), io, ih});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.io != b.io) return a.io < b.io;
    return a.ih < b.ih;
  });

  const auto visible = [&](int o, int hv) {
    const Point2& p = pts[o];
    const Point2& q = pts[hv];
    for (auto loop : {std::span<const int>(outer), std::span<const int>(hole)}) {
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const int a = loop[i];
        const int b = loop[(i + 1) % loop.size()];
        if (a == o || b == o || a == hv || b == hv) continue;
        if (segments_cross(p, q, pts[a], pts[b])) return false;
        // A loop vertex lying on the bridge would create a degenerate corner.
        if (point_segment_distance(pts[a], p, q) < 1e-12 * (1.0 + distance(p, q))) return false;
      }
    }
    // The bridge must leave the outer vertex into the interior wedge.
    const std::size_t n = outer.size();
    std::size_t io = 0;
    while (outer[io] != o) ++io;
    const Point2& prev = pts[outer[(io + n - 1) % n]];
    const Point2& next = pts[outer[(io + 1) % n]];
    const Point2& cur = pts[o];
    const bool convex = orient2d(prev, cur, next) > 0;
    const double s1 = orient2d(prev, cur, q);
    const double s2 = orient2d(cur, next, q);
    return convex ? (s1 > 0 && s2 > 0) : (s1 > 0 || s2 > 0);
  };

  for (const Candidate& c : cands) {
    const int o = outer[c.io];
    const int hv = hole[c.ih];
    if (!visible(o, hv)) continue;
    std::vector<int> merged;
    merged.reserve(outer.size() + hole.size() + 2);
    for (std::size_t k = 0; k <= c.io; ++k) merged.push_back(outer[k]);
    for (std::size_t k = 0; k <= hole.size(); ++k) merged.push_back(hole[(c.ih + k) % hole.size()]);
    for (std::size_t k = c.io; k < outer.size(); ++k) merged.push_back(outer[k]);
    return merged;
  }
  throw GeometryError("triangulation: no visible bridge between loops");
}

double ear_quality(const Point2& a, const Point2& b, const Point2& c) { return min_angle(a, b, c); }

std::vector<Tri> ear_clip(std::span<const Point2> pts, std::vector<int> poly, double scale) {
  const double tol = 1e-12 * scale * scale;
  std::vector<Tri> tris;
  tris.reserve(poly.size());

  const auto ear_score = [&](std::size_t i) -> double {
    const std::size_t n = poly.size();
    const int ip = poly[(i + n - 1) % n];
    const int ic = poly[i];
    const int in = poly[(i + 1) % n];
    const Point2& a = pts[ip];
    const Point2& b = pts[ic];
    const Point2& c = pts[in];
    if (orient2d(a, b, c) <= tol) return -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const int v = poly[k];
      if (v == ip || v == ic || v == in) continue;
      const Point2& p = pts[v];
      if (p == a || p == b || p == c) continue;
      if (in_closed_triangle(p, a, b, c, tol)) return -1.0;
    }
    return ear_quality(a, b, c);
  };

  std::vector<double> score(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) score[i] = ear_score(i);

  while (poly.size() > 3) {
    auto best = std::max_element(score.begin(), score.end());
    if (*best < 0.0) {
      for (std::size_t i = 0; i < poly.size(); ++i) score[i] = ear_score(i);
      best = std::max_element(score.begin(), score.end());
      if (*best < 0.0) throw GeometryError("triangulation: ear clipping found no ear");
    }
    const std::size_t i = static_cast<std::size_t>(best - score.begin());
    const std::size_t n = poly.size();
    tris.push_back({poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]});
    poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
    score.erase(score.begin() + static_cast<std::ptrdiff_t>(i));
    const std::size_t m = poly.size();
    const std::size_t before = (i + m - 1) % m;
    const std::size_t after = i % m;
    score[before] = ear_score(before);
    score[after] = ear_score(after);
  }
  if (orient2d(pts[poly[0]], pts[poly[1]], pts[poly[2]]) <= tol)
    throw GeometryError("triangulation: degenerate final triangle");
  tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

// > 0 when d lies strictly inside the circumcircle of ccw triangle abc.
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

int opposite(const Tri& t, int a, int b) {
  for (int v : t)
    if (v != a && v != b) return v;
  return -1;
}

void lawson_flips(std::span<const Point2> pts, std::vector<Tri>& tris,
                  const std::set<EdgeKey>& constrained, double scale) {
  const double tol = 1e-10 * std::pow(scale, 4);
  std::map<EdgeKey, std::vector<int>> adj;
  const auto add = [&](int t) {
    for (int k = 0; k < 3; ++k) adj[key(tris[t][k], tris[t][(k + 1) % 3])].push_back(t);
  };
  const auto remove = [&](int t) {
    for (int k = 0; k < 3; ++k) {
      auto& v = adj[key(tris[t][k], tris[t][(k + 1) % 3])];
      v.erase(std::find(v.begin(), v.end(), t));
    }
  };
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) add(t);

  const std::size_t max_passes = 4 * tris.size() + 16;
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    bool flipped = false;
    std::vector<EdgeKey> edges;
    edges.reserve(adj.size());
    for (const auto& [e, ts] : adj)
      if (ts.size() == 2 && !constrained.contains(e)) edges.push_back(e);
    for (const EdgeKey& e : edges) {
      const auto& ts = adj[e];
      if (ts.size() != 2) continue;
      const int t0 = ts[0];
      const int t1 = ts[1];
      // Orient so that t0 contains the directed edge a->b.
      int a = e.first, b = e.second;
      bool forward = false;
      for (int k = 0; k < 3; ++k)
        if (tris[t0][k] == a && tris[t0][(k + 1) % 3] == b) forward = true;
      if (!forward) std::swap(a, b);
      const int c = opposite(tris[t0], a, b);
      const int d = opposite(tris[t1], a, b);
      if (incircle(pts[a], pts[b], pts[c], pts[d]) <= tol) continue;
      // Flip only if the quadrilateral a-d-b-c is strictly convex.
      if (orient2d(pts[c], pts[d], pts[b]) <= 0.0 || orient2d(pts[d], pts[c], pts[a]) <= 0.0) continue;
      remove(t0);
      remove(t1);
      adj.erase(e);
      tris[t0] = {c, a, d};
      tris[t1] = {d, b, c};
      add(t0);
      add(t1);
      flipped = true;
    }
    if (!flipped) return;
  }
  throw GeometryError("triangulation: Delaunay flips did not terminate");
}

}  // namespace

std::vector<Tri> triangulate_annulus(std::span<const Point2> points, std::span<const int> outer,
                                     std::span<const int> hole) {
  if (outer.size() < 3) throw GeometryError("triangulation: outer loop needs 3 vertices");
  double xmin = points[outer[0]].x, xmax = xmin, ymin = points[outer[0]].y, ymax = ymin;
  for (int v : outer) {
    xmin = std::min(xmin, points[v].x);
    xmax = std::max(xmax, points[v].x);
    ymin = std::min(ymin, points[v].y);
    ymax = std::max(ymax, points[v].y);
  }
  const double scale = std::max(xmax - xmin, ymax - ymin);

  std::vector<int> poly = hole.empty() ? std::vector<int>(outer.begin(), outer.end())
                                       : bridge(points, outer, hole);
  std::vector<Tri> tris = ear_clip(points, std::move(poly), scale);

  std::set<EdgeKey> constrained;
  for (auto loop : {outer, hole}) {
    for (std::size_t i = 0; i < loop.size(); ++i)
      constrained.insert(key(loop[i], loop[(i + 1) % loop.size()]));
  }
  lawson_flips(points, tris, constrained, scale);
  return tris;
}

}  // namespace cellforce::detail
