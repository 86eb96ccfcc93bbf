#include "latcell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace latcell::geometry {

namespace {

constexpr double kMergeRel = 1e-10;   // vertex/plane coincidence, relative to diameter
constexpr double kMemberRel = 1e-12;  // membership band for boundary rules

struct Plane {
  Vec3 n;  // unit
  double o;
};

Plane normalize(const HalfSpace& hs) {
  double len = hs.normal.norm();
  if (len <= 0.0) throw ValidationError("half-space has zero normal");
  return {hs.normal / len, hs.offset / len};
}

/// The intersection is bounded iff no direction satisfies n.d <= 0 for every
/// outward normal. Any escape direction can be taken (up to sign) along a
/// pair cross product or against a single normal, so those finitely many
/// candidates decide it.
bool normals_bound_space(const std::vector<Plane>& planes) {
  const double tol = 1e-9;
  std::vector<Vec3> candidates;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    candidates.push_back(-planes[i].n);
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      Vec3 c = planes[i].n.cross(planes[j].n);
      if (c.norm() > tol) {
        candidates.push_back(c.normalized());
        candidates.push_back(-c.normalized());
      }
    }
  }
  if (candidates.size() <= planes.size()) return false;  // all normals parallel
  for (const auto& d : candidates) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : planes) worst = std::max(worst, p.n.dot(d));
    if (worst <= tol) return false;
  }
  return true;
}

bool lex_less(const Vec3& a, const Vec3& b, double tol) {
  for (int i = 0; i < 3; ++i) {
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return false;
}

bool lex_negative(const Vec3& n, double tol = 1e-12) {
  for (int i = 0; i < 3; ++i) {
    if (n[i] < -tol) return true;
    if (n[i] > tol) return false;
  }
  return false;
}

/// Orders coplanar points counterclockwise around their centroid as seen
/// from the +n side.
std::vector<int> order_ring(const std::vector<Vec3>& pts, const std::vector<int>& ids,
                            const Vec3& n) {
  Vec3 centroid = Vec3::Zero();
  for (int id : ids) centroid += pts[id];
  centroid /= static_cast<double>(ids.size());
  Vec3 u = n.unitOrthogonal();
  Vec3 v = n.cross(u);
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(ids.size());
  for (int id : ids) {
    Vec3 r = pts[id] - centroid;
    keyed.emplace_back(std::atan2(r.dot(v), r.dot(u)), id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  out.reserve(ids.size());
  for (auto& [a, id] : keyed) out.push_back(id);
  return out;
}

double ring_area(const std::vector<Vec3>& pts, const std::vector<int>& ring) {
  if (ring.size() < 3) return 0.0;
  Vec3 acc = Vec3::Zero();
  const Vec3& p0 = pts[ring[0]];
  for (std::size_t i = 1; i + 1 < ring.size(); ++i)
    acc += (pts[ring[i]] - p0).cross(pts[ring[i + 1]] - p0);
  return 0.5 * acc.norm();
}

double polygon_area(const std::vector<Vec3>& ring) {
  if (ring.size() < 3) return 0.0;
  Vec3 acc = Vec3::Zero();
  for (std::size_t i = 1; i + 1 < ring.size(); ++i)
    acc += (ring[i] - ring[0]).cross(ring[i + 1] - ring[0]);
  return 0.5 * acc.norm();
}

/// Shared constructor core: candidate vertices are intersections of plane
/// triples kept when they satisfy every inequality. Desk-scale polytopes
/// keep the O(m^3) triple scan cheap and exact.
std::pair<std::vector<Vec3>, std::vector<Plane>> vertices_from_planes(
    std::vector<Plane> planes) {
  // Merge duplicate planes first (equal normal and offset).
  std::vector<Plane> unique_planes;
  for (const auto& p : planes) {
    bool dup = false;
    for (const auto& q : unique_planes) {
      if ((p.n - q.n).norm() < 1e-9 && std::abs(p.o - q.o) < 1e-9 * (1.0 + std::abs(q.o))) {
        dup = true;
        break;
      }
    }
    if (!dup) unique_planes.push_back(p);
  }
  const int m = static_cast<int>(unique_planes.size());
  std::vector<Vec3> cand;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Mat3 A;
        A.row(0) = unique_planes[i].n.transpose();
        A.row(1) = unique_planes[j].n.transpose();
        A.row(2) = unique_planes[k].n.transpose();
        double det = A.determinant();
        if (std::abs(det) < 1e-12) continue;
        Vec3 rhs(unique_planes[i].o, unique_planes[j].o, unique_planes[k].o);
        Vec3 x = A.partialPivLu().solve(rhs);
        if (!x.allFinite() || x.norm() > 1e12) continue;
        cand.push_back(x);
      }
  // Scale for feasibility test.
  double scale = 1.0;
  for (const auto& x : cand) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  double tol = 1e-9 * scale;
  std::vector<Vec3> kept;
  for (const auto& x : cand) {
    bool ok = true;
    for (const auto& p : unique_planes) {
      if (x.dot(p.n) > p.o + tol) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(x);
  }
  return {kept, unique_planes};
}

std::vector<Vec3> merge_points(std::vector<Vec3> pts, double tol) {
  std::vector<Vec3> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out) {
      if ((p - q).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  std::sort(out.begin(), out.end(),
            [tol](const Vec3& a, const Vec3& b) { return lex_less(a, b, 0.0); });
  return out;
}

long long igcd(long long a, long long b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

void ConvexPolytope::finalize() {
  if (vertices_.size() < 4) {
    vertices_.clear();
    facets_.clear();
    volume_ = 0.0;
    diameter_ = 0.0;
    return;
  }
  diameter_ = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      diameter_ = std::max(diameter_, (vertices_[i] - vertices_[j]).norm());
  volume_ = 0.0;
  double total_area = 0.0;
  Vec3 closure = Vec3::Zero();
  for (auto& f : facets_) {
    f.area = ring_area(vertices_, f.ring);
    volume_ += f.offset * f.area / 3.0;
    total_area += f.area;
    closure += f.area * f.normal;
  }
  if (volume_ > 0.0 && closure.norm() > 1e-6 * total_area)
    throw ValidationError("region is not bounded");
  if (volume_ <= 0.0) {
    vertices_.clear();
    facets_.clear();
    volume_ = 0.0;
    diameter_ = 0.0;
  }
}

ConvexPolytope ConvexPolytope::from_halfspaces(const std::vector<HalfSpace>& hs) {
  std::vector<Plane> planes;
  planes.reserve(hs.size());
  for (const auto& h : hs) planes.push_back(normalize(h));
  if (!normals_bound_space(planes))
    throw ValidationError("half-spaces do not bound a solid");
  auto [cand, unique_planes] = vertices_from_planes(planes);
  if (cand.empty()) return {};
  double scale = 0.0;
  for (const auto& x : cand) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  std::vector<Vec3> verts = merge_points(std::move(cand), kMergeRel * std::max(1.0, scale));
  ConvexPolytope poly;
  poly.vertices_ = verts;
  double tol = 1e-8 * std::max(1.0, scale);
  for (const auto& p : unique_planes) {
    std::vector<int> on;
    for (int i = 0; i < static_cast<int>(verts.size()); ++i)
      if (std::abs(verts[i].dot(p.n) - p.o) <= tol) on.push_back(i);
    if (on.size() < 3) continue;
    Facet f;
    f.normal = p.n;
    f.offset = p.o;
    f.ring = order_ring(verts, on, p.n);
    if (ring_area(verts, f.ring) <= tol * tol) continue;
    poly.facets_.push_back(std::move(f));
  }
  poly.finalize();
  return poly;
}

ConvexPolytope ConvexPolytope::from_box(const Vec3& lo, const Vec3& hi) {
  for (int i = 0; i < 3; ++i)
    if (!(lo[i] < hi[i])) throw ValidationError("box has empty extent");
  std::vector<HalfSpace> hs;
  for (int i = 0; i < 3; ++i) {
    Vec3 n = Vec3::Zero();
    n[i] = 1.0;
    hs.push_back({n, hi[i]});
    hs.push_back({-n, -lo[i]});
  }
  return from_halfspaces(hs);
}

ConvexPolytope ConvexPolytope::from_vertices(const std::vector<Vec3>& pts) {
  if (pts.size() < 4) throw ValidationError("hull needs at least 4 points");
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  double tol = 1e-9 * std::max(1.0, scale);
  // Every supporting plane through three points with all others on one side.
  std::vector<Plane> planes;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vec3 nor = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        double len = nor.norm();
        if (len < tol * tol) continue;
        nor /= len;
        double o = nor.dot(pts[i]);
        int above = 0, below = 0;
        for (int l = 0; l < n; ++l) {
          double d = pts[l].dot(nor) - o;
          if (d > tol) ++above;
          if (d < -tol) ++below;
        }
        if (above && below) continue;
        if (above) {
          nor = -nor;
          o = -o;
        }
        bool dup = false;
        for (const auto& q : planes)
          if ((q.n - nor).norm() < 1e-8 && std::abs(q.o - o) < 1e-8 * (1.0 + std::abs(o))) {
            dup = true;
            break;
          }
        if (!dup) planes.push_back({nor, o});
      }
  if (planes.size() < 4) throw ValidationError("hull is degenerate");
  std::vector<HalfSpace> hs;
  hs.reserve(planes.size());
  for (const auto& p : planes) hs.push_back({p.n, p.o});
  return from_halfspaces(hs);
}

ConvexPolytope ConvexPolytope::from_mesh(const std::vector<Vec3>& pts,
                                         const std::vector<std::array<int, 3>>& tris) {
  ConvexPolytope poly;
  poly.vertices_ = pts;
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  for (const auto& t : tris) {
    Facet f;
    Vec3 nor = (pts[t[1]] - pts[t[0]]).cross(pts[t[2]] - pts[t[0]]);
    double len = nor.norm();
    if (len <= 0.0) throw ValidationError("mesh has a degenerate triangle");
    nor /= len;
    if (nor.dot(pts[t[0]] - centroid) < 0.0) nor = -nor;
    f.normal = nor;
    f.offset = nor.dot(pts[t[0]]);
    f.ring = order_ring(pts, {t[0], t[1], t[2]}, nor);
    poly.facets_.push_back(std::move(f));
  }
  poly.finalize();
  if (poly.empty()) throw ValidationError("mesh does not bound a positive volume");
  // Convexity audit: every vertex obeys every facet plane.
  double tol = 1e-9 * poly.diameter_;
  for (const auto& f : poly.facets_)
    for (const auto& v : poly.vertices_)
      if (v.dot(f.normal) > f.offset + tol)
        throw ValidationError("mesh is not convex");
  return poly;
}

std::vector<HalfSpace> ConvexPolytope::halfspaces() const {
  std::vector<HalfSpace> hs;
  hs.reserve(facets_.size());
  for (const auto& f : facets_) hs.push_back({f.normal, f.offset});
  return hs;
}

double ConvexPolytope::violation(const Vec3& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) worst = std::max(worst, x.dot(f.normal) - f.offset);
  return worst;
}

bool ConvexPolytope::contains(const Vec3& x, BoundaryRule rule) const {
  if (empty()) return false;
  double band = kMemberRel * diameter_;
  for (const auto& f : facets_)
    if (x.dot(f.normal) - f.offset > band) return false;
  if (rule == BoundaryRule::Closed) return true;
  // Half-open: boundary points count only when every incident facet has a
  // lexicographically negative normal, which makes opposite facets of a box
  // complementary and the unit cube hold exactly k^3 points at eps = 1/k.
  for (const auto& f : facets_) {
    double d = x.dot(f.normal) - f.offset;
    if (std::abs(d) <= band && !lex_negative(f.normal)) return false;
  }
  return true;
}

ConvexPolytope clip(const ConvexPolytope& poly, const HalfSpace& hs) {
  if (poly.empty()) return {};
  auto planes = poly.halfspaces();
  planes.push_back(hs);
  ConvexPolytope out = ConvexPolytope::from_halfspaces(planes);
  // Carry Miller tags across matching planes.
  for (auto& f : out.facets()) {
    for (const auto& g : poly.facets()) {
      if (g.miller && (f.normal - g.normal).norm() < 1e-9 &&
          std::abs(f.offset - g.offset) < 1e-9 * (1.0 + std::abs(g.offset))) {
        f.miller = g.miller;
        break;
      }
    }
  }
  return out;
}

Measure measure(const ConvexPolytope& poly) {
  Measure m;
  m.volume = poly.volume();
  for (const auto& f : poly.facets()) m.facets.emplace_back(f.area, f.normal);
  return m;
}

double self_intersection_volume(const ConvexPolytope& poly, const Vec3& shift) {
  if (poly.empty()) return 0.0;
  auto planes = poly.halfspaces();
  std::size_t base = planes.size();
  for (std::size_t i = 0; i < base; ++i)
    planes.push_back({planes[i].normal, planes[i].offset - shift.dot(planes[i].normal)});
  return ConvexPolytope::from_halfspaces(planes).volume();
}

InterfacePlane InterfacePlane::from_miller(const lattice::MillerVector& m,
                                           const Vec3& anchor) {
  InterfacePlane p;
  p.unit_normal = m.unit();
  p.miller = m;
  p.anchor = anchor;
  return p;
}

SplitResult split_by_plane(const ConvexPolytope& poly, const InterfacePlane& plane) {
  if (poly.empty()) throw ValidationError("cannot split an empty polytope");
  double s0 = plane.level();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : poly.vertices()) {
    double s = v.dot(plane.unit_normal);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  double tol = 1e-9 * poly.diameter();
  if (!(lo + tol < s0 && s0 < hi - tol))
    throw ValidationError("interface plane misses the interior of the domain");
  SplitResult r;
  r.minus = clip(poly, {plane.unit_normal, s0});
  r.plus = clip(poly, {-plane.unit_normal, -s0});
  for (const auto& f : r.minus.facets()) {
    if ((f.normal - plane.unit_normal).norm() < 1e-9) {
      r.interface_area = f.area;
      for (int id : f.ring) r.interface_ring.push_back(r.minus.vertices()[id]);
      break;
    }
  }
  return r;
}

double cross_section_area(const ConvexPolytope& poly, const Vec3& n, double s) {
  if (poly.empty()) return 0.0;
  double band = 1e-12 * std::max(1.0, poly.diameter());
  std::vector<Vec3> pts;
  auto push = [&](const Vec3& p) {
    for (const auto& q : pts)
      if ((p - q).norm() <= 1e-10 * std::max(1.0, poly.diameter())) return;
    pts.push_back(p);
  };
  for (const auto& f : poly.facets()) {
    const auto& ring = f.ring;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Vec3& a = poly.vertices()[ring[i]];
      const Vec3& b = poly.vertices()[ring[(i + 1) % ring.size()]];
      double da = a.dot(n) - s, db = b.dot(n) - s;
      if (std::abs(da) <= band) push(a);
      if ((da < -band && db > band) || (da > band && db < -band))
        push(a + (da / (da - db)) * (b - a));
    }
  }
  if (pts.size() < 3) return 0.0;
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  Vec3 u = n.normalized().unitOrthogonal();
  Vec3 v = n.normalized().cross(u);
  std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
    Vec3 ra = a - centroid, rb = b - centroid;
    return std::atan2(ra.dot(v), ra.dot(u)) < std::atan2(rb.dot(v), rb.dot(u));
  });
  return polygon_area(pts);
}

ConvexPolytope offset_facets(const ConvexPolytope& poly,
                             const std::vector<double>& distances) {
  if (distances.size() != poly.facets().size())
    throw ValidationError("offset_facets needs one distance per facet");
  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const auto& f = poly.facets()[i];
    hs.push_back({f.normal, f.offset + distances[i]});
  }
  ConvexPolytope out = ConvexPolytope::from_halfspaces(hs);
  if (out.facets().size() != poly.facets().size())
    throw ValidationError("facet offsets changed the polytope combinatorics");
  for (auto& f : out.facets()) {
    bool matched = false;
    for (std::size_t i = 0; i < poly.facets().size(); ++i) {
      if ((f.normal - poly.facets()[i].normal).norm() < 1e-9) {
        f.miller = poly.facets()[i].miller;
        matched = true;
        break;
      }
    }
    if (!matched) throw ValidationError("facet offsets changed the polytope combinatorics");
  }
  return out;
}

std::optional<IVec3> rational_direction(const Vec3& dir, int max_den) {
  double len = dir.norm();
  if (len <= 0.0) return std::nullopt;
  Vec3 d = dir / len;
  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(d[i]) > std::abs(d[imax])) imax = i;
  Vec3 base = d / std::abs(d[imax]);
  for (int q = 1; q <= max_den; ++q) {
    Vec3 scaled = base * q;
    IVec3 cand;
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      double r = std::round(scaled[i]);
      if (std::abs(scaled[i] - r) > 1e-7 * q) {
        ok = false;
        break;
      }
      cand[i] = static_cast<int>(r);
    }
    if (!ok || (cand[0] == 0 && cand[1] == 0 && cand[2] == 0)) continue;
    long long g = igcd(igcd(cand[0], cand[1]), cand[2]);
    for (int i = 0; i < 3; ++i) cand[i] = static_cast<int>(cand[i] / g);
    return cand;
  }
  return std::nullopt;
}

void attach_miller_normals(ConvexPolytope& poly, int max_den) {
  for (auto& f : poly.facets()) {
    auto m = rational_direction(f.normal, max_den);
    if (!m) throw ValidationError("facet normal is not crystallographic");
    f.miller = lattice::MillerVector{*m};
  }
}

ConvexPolytope make_ball_polytope(const Vec3& center, double radius, int refinement) {
  if (radius <= 0.0) throw ValidationError("ball radius must be positive");
  if (refinement < 0 || refinement > 6)
    throw ValidationError("ball refinement must be in [0, 6]");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : pts) p.normalize();
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < refinement; ++level) {
    std::vector<std::array<int, 3>> next;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      std::pair<int, int> key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (pts[a] + pts[b]).normalized();
      pts.push_back(m);
      int id = static_cast<int>(pts.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    for (const auto& t : tris) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  for (auto& p : pts) p = center + radius * p;
  return ConvexPolytope::from_mesh(pts, tris);
}

}  // namespace latcell::geometry
