#pragma once

#include <array>
#include <optional>
#include <vector>

#include "floatlab/numerics.hpp"

namespace floatlab {

/// Closed halfspace {x : normal . x <= offset}, normal of unit length.
template <int Dim>
struct Halfspace
{
  Point<Dim> normal;
  double offset = 0.0;

  double slack(const Point<Dim>& x) const { return offset - normal.dot(x); }
};

/// A polytope held both as halfspaces and (when computed) as vertices.
/// 2D vertices run counter-clockwise and facet k is the edge (k, k+1).
/// 3D facets are outward oriented triangles over `vertices`.
template <int Dim>
struct PolytopeApprox
{
  std::vector<Halfspace<Dim>> halfspaces;
  std::vector<Point<Dim>> vertices;
  std::vector<std::array<int, Dim>> facets;
  /// Indices into the input halfspace list that define facets.
  std::vector<int> irredundant;
  bool degenerate = false;

  double volume() const;
  Point<Dim> centroid() const;
  double support(const Point<Dim>& u) const;
  bool contains(const Point<Dim>& x, double tol = 1e-12) const;
  /// Number of facets; coplanar hull triangles count once.
  int facet_count() const { return static_cast<int>(halfspaces.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
};

/// Convex hull of a point cloud. Affinely dependent inputs produce a hull
/// with `degenerate` set and no facets.
template <int Dim>
PolytopeApprox<Dim> convex_hull(const std::vector<Point<Dim>>& points);

/// Intersection of halfspaces, computed from the dual hull of the points
/// normal / (offset - normal . z). Without `interior`, a Chebyshev centre
/// is located first. Throws EmptyIntersection or Unbounded.
template <int Dim>
PolytopeApprox<Dim> halfspace_intersection(const std::vector<Halfspace<Dim>>& hs,
                                           std::optional<Point<Dim>> interior = std::nullopt);

/// Indices of the halfspaces that are facets of their intersection, given a
/// point z with positive slack in all of them. Valid for unbounded
/// intersections as well.
template <int Dim>
std::vector<int> irredundant_halfspaces(const std::vector<Halfspace<Dim>>& hs, const Point<Dim>& z);

/// Centre and radius of the largest ball inside the intersection (ellipsoid
/// method on the concave min-slack function). Radius <= 0 means empty interior.
template <int Dim>
std::pair<Point<Dim>, double> chebyshev_center(const std::vector<Halfspace<Dim>>& hs);

}  // namespace floatlab
