#pragma once

#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"
#include "latcell/types.hpp"

#include <functional>
#include <map>
#include <string>
#include <variant>

namespace latcell::material {

enum class Smoothness { C0, C1 };

/// Even finite-range pair interaction: Phi(z) = phi(|z|), Phi(0) = 0 and
/// phi(r) = 0 for r >= cutoff.
class PairPotential {
 public:
  PairPotential(std::function<double(double)> profile, double cutoff,
                double decay_exponent, Smoothness smooth, std::string name,
                std::map<std::string, double> params);

  double radial(double r) const {
    return (r <= 0.0 || r >= cutoff_) ? 0.0 : profile_(r);
  }
  double operator()(const Vec3& z) const { return radial(z.norm()); }

  double cutoff() const { return cutoff_; }
  double decay_exponent() const { return decay_exponent_; }
  Smoothness smoothness() const { return smooth_; }
  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }

 private:
  std::function<double(double)> profile_;
  double cutoff_;
  double decay_exponent_;
  Smoothness smooth_;
  std::string name_;
  std::map<std::string, double> params_;
};

double potential_eval(const PairPotential& phi, const Vec3& z);

/// Supported names: quadratic_cutoff {cutoff=2, amplitude=1},
/// lj_truncated_shifted {sigma=1, epsilon=1, cutoff=2.5},
/// morse_truncated {depth=1, width=2, r0=1, cutoff=2.5}.
/// lj and morse are value- and force-shifted to vanish C1 at the cutoff.
PairPotential builtin_potential(const std::string& name,
                                const std::map<std::string, double>& params = {});

struct AffineDeformation {
  Mat3 F;
};

/// Continuous piecewise-affine map y(x) = F- x + max((x-anchor).n, 0) a with
/// gradient F+ = F- + a (x) n on the plus side of the interface plane.
struct PiecewiseAffineDeformation {
  Mat3 F_minus;
  Vec3 a;
  geometry::InterfacePlane plane;

  Mat3 F_plus() const { return F_minus + a * plane.unit_normal.transpose(); }
};

struct SmoothDeformation {
  std::function<Vec3(const Vec3&)> map;
  std::function<Mat3(const Vec3&)> gradient;
  double lower_bound = 0.0;  // user-supplied bi-Lipschitz constant
};

using Deformation =
    std::variant<AffineDeformation, PiecewiseAffineDeformation, SmoothDeformation>;

Vec3 deformation_apply(const Deformation& d, const Vec3& x);

/// Smallest guaranteed ratio |y(z)-y(x)| / |z-x|; throws when it is not
/// positive (the map would fail global invertibility).
double bilipschitz_lower_bound(const Deformation& d);

/// Smallest singular value over the gradient segment t F+ + (1-t) F-.
double segment_min_singular_value(const Mat3& F_plus, const Mat3& F_minus);

/// (1/2) sum over lattice vectors of Phi(F w).
double cauchy_born_W(const PairPotential& phi, const lattice::BravaisLattice& lattice,
                     const Mat3& F);

}  // namespace latcell::material
