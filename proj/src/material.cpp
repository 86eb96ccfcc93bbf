#include "latcell/material.hpp"

#include "latcell/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace latcell::material {

namespace {

double svd_min(const Mat3& F) {
  Eigen::JacobiSVD<Mat3> svd(F);
  return svd.singularValues()(2);
}

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::map<std::string, double>& params,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok) throw ValidationError("unknown potential parameter: " + key);
  }
}

}  // namespace

PairPotential::PairPotential(std::function<double(double)> profile, double cutoff,
                             double decay_exponent, Smoothness smooth, std::string name,
                             std::map<std::string, double> params)
    : profile_(std::move(profile)),
      cutoff_(cutoff),
      decay_exponent_(decay_exponent),
      smooth_(smooth),
      name_(std::move(name)),
      params_(std::move(params)) {
  if (cutoff_ <= 0.0) throw ValidationError("potential cutoff must be positive");
}

double potential_eval(const PairPotential& phi, const Vec3& z) { return phi(z); }

PairPotential builtin_potential(const std::string& name,
                                const std::map<std::string, double>& params) {
  if (name == "quadratic_cutoff") {
    check_keys(params, {"cutoff", "amplitude"});
    double R = get_param(params, "cutoff", 2.0);
    double A = get_param(params, "amplitude", 1.0);
    if (R <= 0.0) throw ValidationError("quadratic_cutoff needs a positive cutoff");
    return PairPotential([A, R](double r) { return A * (r - R) * (r - R); }, R, 4.0,
                         Smoothness::C1, "quadratic_cutoff",
                         {{"cutoff", R}, {"amplitude", A}});
  }
  if (name == "lj_truncated_shifted") {
    check_keys(params, {"sigma", "epsilon", "cutoff"});
    double s = get_param(params, "sigma", 1.0);
    double e = get_param(params, "epsilon", 1.0);
    double R = get_param(params, "cutoff", 2.5);
    if (s <= 0.0 || R <= s * 0.5)
      throw ValidationError("lj_truncated_shifted needs sigma > 0 and cutoff > sigma/2");
    auto lj = [s, e](double r) {
      double q = std::pow(s / r, 6.0);
      return 4.0 * e * (q * q - q);
    };
    auto dlj = [s, e](double r) {
      double q = std::pow(s / r, 6.0);
      return 4.0 * e * (-12.0 * q * q + 6.0 * q) / r;
    };
    double vR = lj(R), dR = dlj(R);
    return PairPotential(
        [lj, vR, dR, R](double r) { return lj(r) - vR - dR * (r - R); }, R, 6.0,
        Smoothness::C1, "lj_truncated_shifted",
        {{"sigma", s}, {"epsilon", e}, {"cutoff", R}});
  }
  if (name == "morse_truncated") {
    check_keys(params, {"depth", "width", "r0", "cutoff"});
    double D = get_param(params, "depth", 1.0);
    double alpha = get_param(params, "width", 2.0);
    double r0 = get_param(params, "r0", 1.0);
    double R = get_param(params, "cutoff", 2.5);
    if (R <= 0.0 || alpha <= 0.0)
      throw ValidationError("morse_truncated needs positive width and cutoff");
    auto morse = [D, alpha, r0](double r) {
      double u = std::exp(-alpha * (r - r0));
      return D * (u * u - 2.0 * u);
    };
    auto dmorse = [D, alpha, r0](double r) {
      double u = std::exp(-alpha * (r - r0));
      return D * (-2.0 * alpha * u * u + 2.0 * alpha * u);
    };
    double vR = morse(R), dR = dmorse(R);
    return PairPotential(
        [morse, vR, dR, R](double r) { return morse(r) - vR - dR * (r - R); }, R, 4.0,
        Smoothness::C1, "morse_truncated",
        {{"depth", D}, {"width", alpha}, {"r0", r0}, {"cutoff", R}});
  }
  throw ValidationError("unknown potential: " + name);
}

Vec3 deformation_apply(const Deformation& d, const Vec3& x) {
  return std::visit(
      [&x](const auto& v) -> Vec3 {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineDeformation>) {
          return v.F * x;
        } else if constexpr (std::is_same_v<T, PiecewiseAffineDeformation>) {
          double s = (x - v.plane.anchor).dot(v.plane.unit_normal);
          return v.F_minus * x + std::max(s, 0.0) * v.a;
        } else {
          return v.map(x);
        }
      },
      d);
}

double segment_min_singular_value(const Mat3& F_plus, const Mat3& F_minus) {
  auto f = [&](double t) { return svd_min(t * F_plus + (1.0 - t) * F_minus); };
  return grid_golden_min(f, 0.0, 1.0, 64, 1e-12);
}

double bilipschitz_lower_bound(const Deformation& d) {
  double lambda = std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AffineDeformation>) {
          return svd_min(v.F);
        } else if constexpr (std::is_same_v<T, PiecewiseAffineDeformation>) {
          return segment_min_singular_value(v.F_plus(), v.F_minus);
        } else {
          return v.lower_bound;
        }
      },
      d);
  if (!(lambda > 1e-10))
    throw NumericalError("deformation is not invertible (bi-Lipschitz bound <= 0)");
  return lambda;
}

double cauchy_born_W(const PairPotential& phi, const lattice::BravaisLattice& lattice,
                     const Mat3& F) {
  double smin = svd_min(F);
  if (smin < 1e-12) throw NumericalError("deformation gradient is singular");
  NeumaierSum sum;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / smin))
    sum.add(phi(F * lattice.site(c)));
  return 0.5 * sum.value();
}

}  // namespace latcell::material
