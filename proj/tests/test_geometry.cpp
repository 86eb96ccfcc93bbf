#include "doctest.h"

#include "latcell/geometry.hpp"

#include <cmath>
#include <random>

using namespace latcell;
using namespace latcell::geometry;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("box polytope volume, facets, diameter") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  CHECK(cube.volume() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cube.diameter() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  CHECK(cube.vertices().size() == 8);
  REQUIRE(cube.facets().size() == 6);
  double total_area = 0.0;
  for (const auto& f : cube.facets()) {
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
    total_area += f.area;
  }
  CHECK(total_area == doctest::Approx(6.0).epsilon(1e-12));

  auto m = measure(cube);
  CHECK(m.volume == doctest::Approx(1.0));
  CHECK(m.facets.size() == 6);
}

TEST_CASE("halfspace construction matches the box") {
  std::vector<HalfSpace> hs = {
      {Vec3(1, 0, 0), 1.0},  {Vec3(-1, 0, 0), 0.0}, {Vec3(0, 1, 0), 1.0},
      {Vec3(0, -1, 0), 0.0}, {Vec3(0, 0, 1), 1.0},  {Vec3(0, 0, -1), 0.0}};
  auto cube = ConvexPolytope::from_halfspaces(hs);
  CHECK(cube.volume() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cube.vertices().size() == 8);

  std::vector<HalfSpace> octant = {
      {Vec3(-1, 0, 0), 0.0}, {Vec3(0, -1, 0), 0.0}, {Vec3(0, 0, -1), 0.0}};
  CHECK_THROWS_AS(ConvexPolytope::from_halfspaces(octant), ValidationError);
}

TEST_CASE("tetrahedron from vertices") {
  std::vector<Vec3> pts = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2)};
  auto tet = ConvexPolytope::from_vertices(pts);
  CHECK(tet.volume() == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  REQUIRE(tet.facets().size() == 4);
  bool found_slanted = false;
  for (const auto& f : tet.facets()) {
    if (f.normal.x() > 0.1 && f.normal.y() > 0.1 && f.normal.z() > 0.1) {
      found_slanted = true;
      CHECK((f.normal - Vec3(1, 1, 1).normalized()).norm() ==
            doctest::Approx(0.0).epsilon(1e-12));
      CHECK(f.area == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    }
  }
  CHECK(found_slanted);
}

TEST_CASE("containment rules at corners and faces") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  CHECK(cube.contains(Vec3(0.5, 0.5, 0.5), BoundaryRule::Closed));
  CHECK(cube.contains(Vec3(0.5, 0.5, 0.5), BoundaryRule::HalfOpen));
  CHECK(cube.contains(Vec3(0, 0, 0), BoundaryRule::Closed));
  CHECK(cube.contains(Vec3(1, 1, 1), BoundaryRule::Closed));
  CHECK_FALSE(cube.contains(Vec3(1.2, 0.5, 0.5), BoundaryRule::Closed));

  // half-open keeps a boundary point only when every incident facet
  // normal is lexicographically negative
  CHECK(cube.contains(Vec3(0, 0, 0), BoundaryRule::HalfOpen));
  CHECK(cube.contains(Vec3(0, 0.4, 0.7), BoundaryRule::HalfOpen));
  CHECK_FALSE(cube.contains(Vec3(1, 1, 1), BoundaryRule::HalfOpen));
  CHECK_FALSE(cube.contains(Vec3(1, 0.5, 0.5), BoundaryRule::HalfOpen));
  CHECK_FALSE(cube.contains(Vec3(0.5, 1, 0.5), BoundaryRule::HalfOpen));
  CHECK_FALSE(cube.contains(Vec3(0, 1, 0.5), BoundaryRule::HalfOpen));

  CHECK(cube.violation(Vec3(0.5, 0.5, 0.5)) < 0.0);
  CHECK(cube.violation(Vec3(1.3, 0.5, 0.5)) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("clip against a plane") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  auto lower = clip(cube, HalfSpace{Vec3(0, 0, 1), 0.3});
  CHECK(lower.volume() == doctest::Approx(0.3).epsilon(1e-12));
  auto all = clip(cube, HalfSpace{Vec3(0, 0, 1), 5.0});
  CHECK(all.volume() == doctest::Approx(1.0).epsilon(1e-12));
  auto none = clip(cube, HalfSpace{Vec3(0, 0, 1), -0.1});
  CHECK(none.empty());
}

TEST_CASE("self intersection of a shifted cube") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  CHECK(self_intersection_volume(cube, Vec3(0.3, 0.2, 0.0)) ==
        doctest::Approx(0.7 * 0.8).epsilon(1e-12));
  CHECK(self_intersection_volume(cube, Vec3(0, 0, 0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(self_intersection_volume(cube, Vec3(1.5, 0, 0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(self_intersection_volume(cube, Vec3(-0.25, 0.5, -0.1)) ==
        doctest::Approx(0.75 * 0.5 * 0.9).epsilon(1e-12));
}

TEST_CASE("split by a plane") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  InterfacePlane plane{Vec3(0, 0, 1), std::nullopt, Vec3(0, 0, 0.3)};
  auto split = split_by_plane(cube, plane);
  CHECK(split.minus.volume() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(split.plus.volume() == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(split.interface_area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(split.plus.contains(Vec3(0.5, 0.5, 0.9), BoundaryRule::Closed));
  CHECK(split.minus.contains(Vec3(0.5, 0.5, 0.1), BoundaryRule::Closed));

  InterfacePlane outside{Vec3(0, 0, 1), std::nullopt, Vec3(0, 0, 5.0)};
  CHECK_THROWS_AS(split_by_plane(cube, outside), ValidationError);
}

TEST_CASE("cross sections") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  CHECK(cross_section_area(cube, Vec3(0, 0, 1), 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cross_section_area(cube, Vec3(0, 0, 1), 2.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  auto tet = ConvexPolytope::from_vertices(
      {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2)});
  CHECK(cross_section_area(tet, Vec3(0, 0, 1), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-10));
  double diag = cross_section_area(cube, Vec3(1, 1, 1).normalized(),
                                   0.5 * std::sqrt(3.0));
  CHECK(diag == doctest::Approx(0.75 * std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("facet offsets grow the cube uniformly") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  std::vector<double> d(cube.facets().size(), 0.1);
  auto grown = offset_facets(cube, d);
  CHECK(grown.volume() == doctest::Approx(1.2 * 1.2 * 1.2).epsilon(1e-12));
  CHECK(grown.facets().size() == cube.facets().size());
  CHECK(grown.contains(Vec3(-0.05, 0.5, 0.5), BoundaryRule::Closed));

  std::vector<double> bad(cube.facets().size(), 0.0);
  bad[0] = -2.0;
  CHECK_THROWS(offset_facets(cube, bad));
}

TEST_CASE("rational directions") {
  auto r = rational_direction(Vec3(0.5, 0.25, 0.0));
  REQUIRE(r.has_value());
  CHECK(*r == IVec3(2, 1, 0));
  auto r2 = rational_direction(Vec3(1.0 / 3.0, 2.0 / 3.0, 1.0));
  REQUIRE(r2.has_value());
  CHECK(*r2 == IVec3(1, 2, 3));
  auto neg = rational_direction(Vec3(-0.5, 0.0, 0.0));
  REQUIRE(neg.has_value());
  CHECK(*neg == IVec3(-1, 0, 0));
  CHECK_FALSE(rational_direction(Vec3(1.0, std::sqrt(2.0), 0.0)).has_value());
}

TEST_CASE("miller normals attach to crystallographic facets") {
  auto cube = ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  attach_miller_normals(cube);
  for (const auto& f : cube.facets()) {
    REQUIRE(f.miller.has_value());
    CHECK(f.miller->norm() == doctest::Approx(1.0));
  }
  auto ball = make_ball_polytope(Vec3::Zero(), 1.0, 1);
  CHECK_THROWS_AS(attach_miller_normals(ball), ValidationError);
}

TEST_CASE("interface plane from miller data") {
  auto plane = InterfacePlane::from_miller(lattice::MillerVector{IVec3(1, 1, 0)},
                                           Vec3(0.5, 0.5, 0.0));
  CHECK((plane.unit_normal - Vec3(1, 1, 0).normalized()).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
  REQUIRE(plane.miller.has_value());
  CHECK(plane.level() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("icosphere stays inscribed and converges to the ball") {
  Vec3 c(0.5, -0.25, 0.0);
  double r = 0.4;
  double sphere = 4.0 / 3.0 * kPi * r * r * r;
  double prev = 0.0;
  for (int level = 0; level <= 2; ++level) {
    auto ball = make_ball_polytope(c, r, level);
    for (const auto& v : ball.vertices())
      CHECK((v - c).norm() == doctest::Approx(r).epsilon(1e-10));
    CHECK(ball.volume() > prev);
    CHECK(ball.volume() < sphere);
    prev = ball.volume();
  }
  CHECK(prev > 0.9 * sphere);
}

TEST_CASE("hull volume agrees with a seeded monte carlo estimate") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 30; ++i) pts.emplace_back(uni(rng), uni(rng), uni(rng));
  auto hull = ConvexPolytope::from_vertices(pts);
  REQUIRE(hull.volume() > 0.0);
  const int n = 200000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    Vec3 x(uni(rng), uni(rng), uni(rng));
    if (hull.contains(x, BoundaryRule::Closed)) ++inside;
  }
  double mc = static_cast<double>(inside) / n;
  CHECK(hull.volume() == doctest::Approx(mc).epsilon(0.02));
}
