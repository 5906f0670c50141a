#pragma once

// Internal helpers for gap and cell-interior triangulation.

#include <array>
#include <span>
#include <vector>

#include "cellforce/geometry.hpp"

namespace cellforce::detail {

using Tri = std::array<int, 3>;

/// Triangulates the region inside `outer` and outside `hole` using only the
/// loop vertices. Both loops index into `points` and must be counterclockwise;
/// `hole` may be empty. The result is a constrained Delaunay triangulation
/// (ear clipping followed by Lawson flips that never cross loop edges), with
/// counterclockwise triangles.
std::vector<Tri> triangulate_annulus(std::span<const Point2> points, std::span<const int> outer,
                                     std::span<const int> hole);

}  // namespace cellforce::detail
