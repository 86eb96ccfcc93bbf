#include "latcell/lattice.hpp"

#include "latcell/geometry.hpp"
#include "latcell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace latcell::lattice {

namespace {

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

// g = a x + b y with g = gcd(|a|,|b|) >= 0.
void egcd(long long a, long long b, long long& g, long long& x, long long& y) {
  if (b == 0) {
    g = std::llabs(a);
    x = (a < 0) ? -1 : (a > 0 ? 1 : 0);
    y = 0;
    return;
  }
  long long g1, x1, y1;
  egcd(b, a % b, g1, x1, y1);
  g = g1;
  x = y1;
  y = x1 - (a / b) * y1;
}

using IMat3 = Eigen::Matrix<long long, 3, 3>;

// Unimodular U with U m = e3 (|det U| = 1); requires gcd of m = 1.
IMat3 unimodular_to_e3(const IVec3& m) {
  long long m1 = m[0], m2 = m[1], m3 = m[2];
  IMat3 u1 = IMat3::Identity();
  long long g12, x, y;
  egcd(m1, m2, g12, x, y);
  if (g12 != 0) {
    u1 << x, y, 0, -m2 / g12, m1 / g12, 0, 0, 0, 1;
  }
  // u1 * m = (g12, 0, m3)
  long long g, u, v;
  egcd(g12, m3, g, u, v);
  if (g != 1) throw ValidationError("miller components are not coprime");
  IMat3 u2;
  u2 << -m3, 0, g12, 0, 1, 0, u, 0, v;
  return u2 * u1;
}

IMat3 integer_inverse(const IMat3& a) {
  long long det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                  a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                  a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  if (det != 1 && det != -1) throw NumericalError("matrix is not unimodular");
  IMat3 adj;
  adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return det == 1 ? adj : IMat3(-adj);
}

IVec3 to_ivec(const Eigen::Matrix<long long, 3, 1>& v) {
  return IVec3(static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]));
}

bool lex_negative_int(const IVec3& v) {
  for (int i = 0; i < 3; ++i) {
    if (v[i] < 0) return true;
    if (v[i] > 0) return false;
  }
  return false;
}

}  // namespace

BravaisLattice BravaisLattice::cubic() {
  return BravaisLattice(Mat3::Identity(), Mat3::Identity(), 1.0, true);
}

BravaisLattice BravaisLattice::from_basis(const Mat3& basis) {
  double det = basis.determinant();
  if (std::abs(det) < 1e-14) throw ValidationError("lattice basis is singular");
  Mat3 dual = dual_basis(basis);
  bool integer = basis.isApprox(Mat3::Identity(), 1e-12);
  return BravaisLattice(basis, dual, std::abs(det), integer);
}

Mat3 dual_basis(const Mat3& basis) {
  double det = basis.determinant();
  if (std::abs(det) < 1e-14) throw ValidationError("lattice basis is singular");
  return basis.inverse().transpose();
}

MillerVector miller_reduce(const IVec3& v) {
  if (v[0] == 0 && v[1] == 0 && v[2] == 0)
    throw ValidationError("zero vector has no miller reduction");
  long long g = igcd(igcd(v[0], v[1]), v[2]);
  return MillerVector{IVec3(static_cast<int>(v[0] / g), static_cast<int>(v[1] / g),
                            static_cast<int>(v[2] / g))};
}

std::pair<double, double> miller_geometry(const MillerVector& m) {
  double n = m.norm();
  return {1.0 / n, n};
}

MillerSequenceElement miller_sequence(const MillerVector& target, int j) {
  if (j < 1) throw ValidationError("sequence index must be positive");
  IVec3 m = miller_reduce(target.components).components;
  IMat3 U = unimodular_to_e3(m);
  IMat3 B = integer_inverse(U);  // columns are dual to the rows of U
  // Flip paired rows/columns so the first two dual vectors point
  // lexicographically positive; for m = e3 this lands on the standard basis.
  for (int i = 0; i < 2; ++i) {
    if (lex_negative_int(to_ivec(B.col(i)))) {
      B.col(i) = -B.col(i);
      U.row(i) = -U.row(i);
    }
  }
  Eigen::Matrix<long long, 3, 1> b1 = B.col(0), b2 = B.col(1), b3 = B.col(2);
  // b3 equals m. Reduce b1, b2 modulo m to keep |n_j| strictly increasing
  // from j = 1 on; the certificate below absorbs the shift.
  long long mm = m.cast<long long>().squaredNorm();
  auto reduce_mod = [&](Eigen::Matrix<long long, 3, 1>& b) {
    long long d = b.dot(m.cast<long long>());
    long long q = std::llround(static_cast<double>(d) / static_cast<double>(mm));
    b -= q * m.cast<long long>();
  };
  reduce_mod(b1);
  reduce_mod(b2);
  Eigen::Matrix<long long, 3, 1> n = b1 + b2 + static_cast<long long>(j) * b3;
  Eigen::Matrix<long long, 3, 1> d1 = U.row(0).transpose(), d2 = U.row(1).transpose(),
                                 d3 = U.row(2).transpose();
  long long shift = n.dot(d3);  // = j plus the modular shifts above
  Eigen::Matrix<long long, 3, 1> p = -shift * d1 + d2 + d3;
  if (n.dot(p) != 1) throw NumericalError("sequence certificate failed");
  return {MillerVector{to_ivec(n)}, to_ivec(p)};
}

MillerSequenceElement miller_sequence(const Vec3& unit_target, int j) {
  if (j < 1) throw ValidationError("sequence index must be positive");
  if (std::abs(unit_target.norm() - 1.0) > 1e-9)
    throw ValidationError("sequence target must be a unit vector");
  long long num[3], den[3];
  for (int i = 0; i < 3; ++i) {
    auto conv = cf_convergents(unit_target[i], j + 1);
    if (conv.empty()) throw NumericalError("no rational approximation found");
    num[i] = conv.back().first;
    den[i] = conv.back().second;
  }
  long long l = den[0] / igcd(den[0], den[1]) * den[1];
  l = l / igcd(l, den[2]) * den[2];
  Eigen::Matrix<long long, 3, 1> v;
  for (int i = 0; i < 3; ++i) v[i] = num[i] * (l / den[i]);
  if (v[0] == 0 && v[1] == 0 && v[2] == 0)
    throw NumericalError("rational approximation degenerated to zero");
  long long g123 = igcd(igcd(v[0], v[1]), v[2]);
  for (int i = 0; i < 3; ++i) {
    v[i] /= g123;
    if (std::llabs(v[i]) > 1000000000ll)
      throw NumericalError("rational approximation exceeds the integer range");
  }
  MillerVector n = miller_reduce(to_ivec(v));
  // Generic Bezout certificate from a two-stage extended gcd.
  long long g1, x1, y1;
  egcd(n.components[0], n.components[1], g1, x1, y1);
  long long g, u, w;
  egcd(g1, n.components[2], g, u, w);
  if (g != 1) throw NumericalError("sequence element is not coprime");
  IVec3 p(static_cast<int>(u * x1), static_cast<int>(u * y1), static_cast<int>(w));
  return {n, p};
}

std::vector<IVec3> enumerate_ball(const BravaisLattice& lattice, double radius) {
  if (radius < 0.0) throw ValidationError("ball radius must be nonnegative");
  std::vector<IVec3> out;
  int bound[3];
  for (int i = 0; i < 3; ++i)
    bound[i] = static_cast<int>(std::floor(lattice.dual().col(i).norm() * radius + 1e-12));
  double r2 = radius * radius * (1.0 + 1e-14);
  for (int c0 = -bound[0]; c0 <= bound[0]; ++c0)
    for (int c1 = -bound[1]; c1 <= bound[1]; ++c1)
      for (int c2 = -bound[2]; c2 <= bound[2]; ++c2) {
        IVec3 c(c0, c1, c2);
        if (lattice.site(c).squaredNorm() <= r2) out.push_back(c);
      }
  return out;
}

LatticePointSet enumerate_in_region(const BravaisLattice& lattice, double scale,
                                    const geometry::ConvexPolytope& region,
                                    BoundaryRule rule, const Vec3& offset) {
  if (scale <= 0.0) throw ValidationError("lattice scale must be positive");
  if (region.empty()) return {scale, offset, rule, {}, {}};
  LatticePointSet set;
  set.scale = scale;
  set.offset = offset;
  set.rule = rule;
  // Bounding box in lattice coordinates of (x - offset) / scale.
  double lo[3], hi[3];
  for (int i = 0; i < 3; ++i) {
    lo[i] = std::numeric_limits<double>::infinity();
    hi[i] = -lo[i];
  }
  for (const auto& v : region.vertices()) {
    Vec3 c = lattice.to_lattice_coords(v - offset) / scale;
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], c[i]);
      hi[i] = std::max(hi[i], c[i]);
    }
  }
  int ilo[3], ihi[3];
  for (int i = 0; i < 3; ++i) {
    ilo[i] = static_cast<int>(std::floor(lo[i] - 1e-9)) - 1;
    ihi[i] = static_cast<int>(std::ceil(hi[i] + 1e-9)) + 1;
  }
  for (int c0 = ilo[0]; c0 <= ihi[0]; ++c0)
    for (int c1 = ilo[1]; c1 <= ihi[1]; ++c1)
      for (int c2 = ilo[2]; c2 <= ihi[2]; ++c2) {
        IVec3 c(c0, c1, c2);
        Vec3 x = offset + scale * lattice.site(c);
        if (region.contains(x, rule)) {
          set.coords.push_back(c);
          set.points.push_back(x);
        }
      }
  return set;
}

double lattice_remainder(const geometry::ConvexPolytope& region,
                         const BravaisLattice& lattice, double scale,
                         BoundaryRule rule) {
  auto set = enumerate_in_region(lattice, scale, region, rule);
  return region.volume() -
         scale * scale * scale * lattice.cell_volume() * static_cast<double>(set.size());
}

}  // namespace latcell::lattice
