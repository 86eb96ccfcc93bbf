#include "doctest.h"

#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"

#include <array>
#include <cmath>
#include <set>

using namespace latcell;
using namespace latcell::lattice;

TEST_CASE("cubic lattice basics") {
  auto lat = BravaisLattice::cubic();
  CHECK(lat.cell_volume() == doctest::Approx(1.0));
  CHECK(lat.is_integer());
  IVec3 c(2, -1, 3);
  Vec3 x = lat.site(c);
  CHECK(x.x() == doctest::Approx(2.0));
  Vec3 back = lat.to_lattice_coords(x);
  CHECK((back - c.cast<double>()).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("dual basis is the transpose inverse") {
  Mat3 B;
  B << 1.0, 0.5, 0.0, 0.0, 1.0, 0.3, 0.2, 0.0, 1.0;
  auto lat = BravaisLattice::from_basis(B);
  CHECK_FALSE(lat.is_integer());
  Mat3 gram = lat.dual().transpose() * lat.basis();
  CHECK((gram - Mat3::Identity()).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lat.cell_volume() == doctest::Approx(std::abs(B.determinant())));

  Mat3 S = Mat3::Zero();
  CHECK_THROWS_AS(BravaisLattice::from_basis(S), ValidationError);
}

TEST_CASE("miller reduction and geometry") {
  auto m = miller_reduce(IVec3(2, 4, 6));
  CHECK(m.components == IVec3(1, 2, 3));
  auto mz = miller_reduce(IVec3(0, 0, 4));
  CHECK(mz.components == IVec3(0, 0, 1));
  auto mneg = miller_reduce(IVec3(0, -2, -4));
  CHECK(mneg.components == IVec3(0, -1, -2));
  CHECK_THROWS_AS(miller_reduce(IVec3(0, 0, 0)), ValidationError);

  auto [spacing, area] = miller_geometry(MillerVector{IVec3(1, 1, 1)});
  CHECK(spacing == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(area == doctest::Approx(std::sqrt(3.0)));
  CHECK(MillerVector{IVec3(1, 1, 1)}.unit().norm() == doctest::Approx(1.0));
}

TEST_CASE("rational miller sequence converges with valid certificates") {
  MillerVector target{IVec3(0, 0, 1)};
  double prev_norm = 0.0;
  double prev_angle = 10.0;
  for (int j = 1; j <= 12; ++j) {
    auto el = miller_sequence(target, j);
    long long dot = 0;
    for (int i = 0; i < 3; ++i)
      dot += static_cast<long long>(el.n.components[i]) * el.bezout[i];
    CHECK(dot == 1);
    CHECK(el.n.norm() > prev_norm);
    prev_norm = el.n.norm();
    double angle = std::acos(std::min(1.0, el.n.unit().dot(target.unit())));
    if (j > 1) CHECK(angle < prev_angle);
    prev_angle = angle;
  }
  // the standard completion of (0,0,1) gives n_j = (1,1,j)
  auto e5 = miller_sequence(target, 5);
  CHECK(e5.n.components == IVec3(1, 1, 5));

  MillerVector t2{IVec3(1, 1, 0)};
  auto s2 = miller_sequence(t2, 9);
  long long dot = 0;
  for (int i = 0; i < 3; ++i)
    dot += static_cast<long long>(s2.n.components[i]) * s2.bezout[i];
  CHECK(dot == 1);
  double angle = std::acos(std::min(1.0, s2.n.unit().dot(t2.unit())));
  CHECK(angle < 0.2);
}

TEST_CASE("irrational miller sequence approaches the target direction") {
  Vec3 dir(1.0, std::sqrt(2.0), 0.0);
  dir.normalize();
  auto early = miller_sequence(dir, 2);
  auto late = miller_sequence(dir, 6);
  double a_early = std::acos(std::min(1.0, early.n.unit().dot(dir)));
  double a_late = std::acos(std::min(1.0, late.n.unit().dot(dir)));
  CHECK(a_late < a_early);
  CHECK(a_late < 1e-3);
  long long dot = 0;
  for (int i = 0; i < 3; ++i)
    dot += static_cast<long long>(late.n.components[i]) * late.bezout[i];
  CHECK(dot == 1);
  CHECK_THROWS_AS(miller_sequence(Vec3(1.0, 1.0, 0.0), 3), ValidationError);
}

TEST_CASE("enumerate_ball counts cubic shells") {
  auto lat = BravaisLattice::cubic();
  CHECK(enumerate_ball(lat, 0.0).size() == 1);
  CHECK(enumerate_ball(lat, 1.0).size() == 7);
  CHECK(enumerate_ball(lat, 1.5).size() == 19);
  CHECK(enumerate_ball(lat, 1.999).size() == 27);
  auto pts = enumerate_ball(lat, 1.0);
  std::set<std::array<int, 3>> uniq;
  for (const auto& c : pts) uniq.insert({c[0], c[1], c[2]});
  CHECK(uniq.size() == pts.size());
  CHECK(uniq.count({0, 0, 0}) == 1);
}

TEST_CASE("region enumeration honors the boundary rule") {
  auto lat = BravaisLattice::cubic();
  auto cube = geometry::ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  auto closed = enumerate_in_region(lat, 0.5, cube, BoundaryRule::Closed);
  CHECK(closed.size() == 27);
  auto half = enumerate_in_region(lat, 0.5, cube, BoundaryRule::HalfOpen);
  CHECK(half.size() == 8);
  for (const auto& p : half.points) CHECK(cube.contains(p, BoundaryRule::HalfOpen));

  // k^3 points exactly at eps = 1/k under the half-open rule
  for (int k : {3, 7, 10}) {
    auto s = enumerate_in_region(lat, 1.0 / k, cube, BoundaryRule::HalfOpen);
    CHECK(s.size() == static_cast<std::size_t>(k) * k * k);
  }

  auto shifted = enumerate_in_region(lat, 0.5, cube, BoundaryRule::Closed,
                                     Vec3(0.25, 0.25, 0.25));
  CHECK(shifted.size() == 8);
}

TEST_CASE("lattice remainder of the unit cube") {
  auto lat = BravaisLattice::cubic();
  auto cube = geometry::ConvexPolytope::from_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
  CHECK(lattice_remainder(cube, lat, 0.5, BoundaryRule::HalfOpen) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lattice_remainder(cube, lat, 0.5, BoundaryRule::Closed) ==
        doctest::Approx(1.0 - 27.0 / 8.0));
  for (int k : {2, 5, 9}) {
    CHECK(std::abs(lattice_remainder(cube, lat, 1.0 / k, BoundaryRule::HalfOpen)) <
          1e-12);
  }
}
