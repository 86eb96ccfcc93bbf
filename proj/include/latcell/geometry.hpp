#pragma once

#include "latcell/lattice.hpp"
#include "latcell/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace latcell::geometry {

struct HalfSpace {
  Vec3 normal;    // outward, not necessarily unit
  double offset;  // set is {x : x . normal <= offset}
};

struct Facet {
  Vec3 normal;  // outward unit
  double offset;
  double area = 0.0;
  std::vector<int> ring;  // vertex indices, counterclockwise seen from outside
  std::optional<lattice::MillerVector> miller;
};

/// Bounded convex polytope kept in joint vertex + facet form. Construction
/// canonicalizes the representation: duplicate planes merged, vertices within
/// 1e-10 * diameter merged, facet rings ordered.
class ConvexPolytope {
 public:
  ConvexPolytope() = default;

  static ConvexPolytope from_box(const Vec3& lo, const Vec3& hi);
  static ConvexPolytope from_halfspaces(const std::vector<HalfSpace>& hs);
  static ConvexPolytope from_vertices(const std::vector<Vec3>& pts);
  /// Trusted triangle mesh of a convex surface (used for sphere
  /// approximations where the hull combinatorics are known up front).
  static ConvexPolytope from_mesh(const std::vector<Vec3>& pts,
                                  const std::vector<std::array<int, 3>>& tris);

  bool empty() const { return vertices_.empty(); }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  std::vector<Facet>& facets() { return facets_; }
  double volume() const { return volume_; }
  double diameter() const { return diameter_; }

  std::vector<HalfSpace> halfspaces() const;
  bool contains(const Vec3& x, BoundaryRule rule) const;
  /// Signed distance to the farthest violated facet plane (<= 0 inside).
  double violation(const Vec3& x) const;

 private:
  void finalize();
  std::vector<Vec3> vertices_;
  std::vector<Facet> facets_;
  double volume_ = 0.0;
  double diameter_ = 0.0;
  friend ConvexPolytope clip(const ConvexPolytope&, const HalfSpace&);
};

ConvexPolytope clip(const ConvexPolytope& poly, const HalfSpace& hs);

struct Measure {
  double volume = 0.0;
  std::vector<std::pair<double, Vec3>> facets;  // (area, unit normal)
};

Measure measure(const ConvexPolytope& poly);

/// vol(P cap (-shift + P)).
double self_intersection_volume(const ConvexPolytope& poly, const Vec3& shift);

struct InterfacePlane {
  Vec3 unit_normal;
  std::optional<lattice::MillerVector> miller;
  Vec3 anchor = Vec3::Zero();

  double level() const { return unit_normal.dot(anchor); }
  static InterfacePlane from_miller(const lattice::MillerVector& m,
                                    const Vec3& anchor = Vec3::Zero());
};

struct SplitResult {
  ConvexPolytope plus;
  ConvexPolytope minus;
  double interface_area = 0.0;
  std::vector<Vec3> interface_ring;
};

SplitResult split_by_plane(const ConvexPolytope& poly, const InterfacePlane& plane);

/// Area of the planar section P cap {x . n = s} (n unit).
double cross_section_area(const ConvexPolytope& poly, const Vec3& n, double s);

/// Pushes facet f outward by distances[f]; throws if the facet structure
/// changes (a facet vanishes or a new one appears).
ConvexPolytope offset_facets(const ConvexPolytope& poly,
                             const std::vector<double>& distances);

/// Smallest integer vector parallel to dir, if one exists with entries
/// bounded by max_den; orientation preserved.
std::optional<IVec3> rational_direction(const Vec3& dir, int max_den = 720);

/// Attaches reduced integer normals to every facet; throws when a facet
/// normal has no small rational direction.
void attach_miller_normals(ConvexPolytope& poly, int max_den = 720);

/// Inscribed icosphere: refinement 0 is the icosahedron, each level splits
/// every triangle in four and projects back to the sphere.
ConvexPolytope make_ball_polytope(const Vec3& center, double radius,
                                  int refinement);

}  // namespace latcell::geometry
