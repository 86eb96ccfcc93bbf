#pragma once

#include "latcell/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace latcell::geometry {
class ConvexPolytope;
}

namespace latcell::lattice {

/// Bravais lattice spanned by three basis vectors (columns of `basis`).
/// Lattice points are basis * c for integer c; dual columns b_i satisfy
/// b_i . e_k = delta_ik.
class BravaisLattice {
 public:
  static BravaisLattice cubic();
  static BravaisLattice from_basis(const Mat3& basis);

  const Mat3& basis() const { return basis_; }
  const Mat3& dual() const { return dual_; }
  double cell_volume() const { return cell_volume_; }
  bool is_integer() const { return integer_; }

  Vec3 site(const IVec3& c) const { return basis_ * c.cast<double>(); }
  Vec3 to_lattice_coords(const Vec3& x) const { return dual_.transpose() * x; }

 private:
  BravaisLattice(const Mat3& basis, const Mat3& dual, double vol, bool integer)
      : basis_(basis), dual_(dual), cell_volume_(vol), integer_(integer) {}
  Mat3 basis_;
  Mat3 dual_;
  double cell_volume_;
  bool integer_;
};

Mat3 dual_basis(const Mat3& basis);

/// Coprime integer plane normal (h,k,l).
struct MillerVector {
  IVec3 components;

  double norm() const { return components.cast<double>().norm(); }
  Vec3 unit() const { return components.cast<double>() / norm(); }
};

MillerVector miller_reduce(const IVec3& v);

/// (interplanar spacing, planar unit-cell area) = (1/|m|, |m|).
std::pair<double, double> miller_geometry(const MillerVector& m);

struct MillerSequenceElement {
  MillerVector n;
  IVec3 bezout;  // certificate p with n . p = 1
};

/// Rational branch: target is itself a Miller vector m; returns
/// n_j = b1 + b2 + j*m built from a unimodular basis completion of m.
MillerSequenceElement miller_sequence(const MillerVector& target, int j);

/// Irrational branch: continued-fraction convergents of the components,
/// scaled by the lcm of denominators and reduced.
MillerSequenceElement miller_sequence(const Vec3& unit_target, int j);

/// All lattice points w with |basis*w| <= radius, lexicographic in
/// integer coordinates; includes 0.
std::vector<IVec3> enumerate_ball(const BravaisLattice& lattice, double radius);

/// Finite point set omega `cap` (offset + eps L), in enumeration order.
struct LatticePointSet {
  double scale = 1.0;
  Vec3 offset = Vec3::Zero();
  BoundaryRule rule = BoundaryRule::Closed;
  std::vector<IVec3> coords;
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
};

LatticePointSet enumerate_in_region(const BravaisLattice& lattice, double scale,
                                    const geometry::ConvexPolytope& region,
                                    BoundaryRule rule,
                                    const Vec3& offset = Vec3::Zero());

/// |omega| - eps^3 |K| #(omega cap eps L).
double lattice_remainder(const geometry::ConvexPolytope& region,
                         const BravaisLattice& lattice, double scale,
                         BoundaryRule rule);

}  // namespace latcell::lattice
