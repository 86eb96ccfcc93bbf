#include "latcell/energy.hpp"

#include "latcell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace latcell::energy {

namespace {

using geometry::ConvexPolytope;
using geometry::HalfSpace;
using lattice::BravaisLattice;
using lattice::MillerVector;
using material::Deformation;
using material::PairPotential;

std::uint64_t coord_key(const IVec3& c) {
  auto pack = [](int v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1fffff; };
  return (pack(c[0]) << 42) | (pack(c[1]) << 21) | pack(c[2]);
}

void require_integer_lattice(const BravaisLattice& lattice, const char* what) {
  if (!lattice.is_integer())
    throw ValidationError(std::string(what) + " is defined for the integer lattice only");
}

void check_rank_one(const Mat3& F_plus, const Mat3& F_minus, const Vec3& n_hat) {
  Mat3 D = F_plus - F_minus;
  Vec3 a = D * n_hat;
  double defect = (D - a * n_hat.transpose()).norm();
  if (defect > 1e-10 * (1.0 + D.norm()))
    throw ValidationError("gradient pair is not rank-one compatible with the normal");
}

double segment_lambda(const Mat3& F_plus, const Mat3& F_minus) {
  double lambda = material::segment_min_singular_value(F_plus, F_minus);
  if (!(lambda > 1e-10))
    throw NumericalError("gradient segment loses invertibility");
  return lambda;
}

/// Tetrahedral Duffy-map quadrature of f over the polytope, order nodes per
/// axis, fanned from facet centroids.
double integrate_over_polytope(const ConvexPolytope& poly,
                               const std::function<double(const Vec3&)>& f, int order) {
  auto [nodes, weights] = gauss_legendre_unit(order);
  Vec3 apex = Vec3::Zero();
  for (const auto& v : poly.vertices()) apex += v;
  apex /= static_cast<double>(poly.vertices().size());
  NeumaierSum total;
  for (const auto& facet : poly.facets()) {
    Vec3 fc = Vec3::Zero();
    for (int id : facet.ring) fc += poly.vertices()[id];
    fc /= static_cast<double>(facet.ring.size());
    for (std::size_t i = 0; i < facet.ring.size(); ++i) {
      const Vec3& v1 = poly.vertices()[facet.ring[i]];
      const Vec3& v2 = poly.vertices()[facet.ring[(i + 1) % facet.ring.size()]];
      Mat3 E;
      E.col(0) = fc - apex;
      E.col(1) = v1 - apex;
      E.col(2) = v2 - apex;
      double vol6 = E.determinant();
      if (std::abs(vol6) < 1e-16) continue;
      for (int iu = 0; iu < order; ++iu)
        for (int iv = 0; iv < order; ++iv)
          for (int iw = 0; iw < order; ++iw) {
            double u = nodes[iu], v = nodes[iv], w = nodes[iw];
            Vec3 p = apex + u * (fc - apex) + u * v * (v1 - fc) + u * v * w * (v2 - v1);
            double jac = std::abs(vol6) * u * u * v;
            total.add(weights[iu] * weights[iv] * weights[iw] * jac * f(p));
          }
    }
  }
  return total.value();
}

}  // namespace

double discrete_energy(const ConvexPolytope& omega, const BravaisLattice& lattice,
                       double eps, const Deformation& d, const PairPotential& phi,
                       BoundaryRule rule, int threads, const Vec3& offset) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  double lambda = material::bilipschitz_lower_bound(d);
  auto set = lattice::enumerate_in_region(lattice, eps, omega, rule, offset);
  if (set.size() == 0) return 0.0;
  auto hops = lattice::enumerate_ball(lattice, phi.cutoff() / lambda);
  std::unordered_set<std::uint64_t> occupied;
  occupied.reserve(set.size() * 2);
  for (const auto& c : set.coords) occupied.insert(coord_key(c));
  std::vector<double> partial(set.size(), 0.0);
  parallel_for_index(set.size(), threads, [&](std::size_t i) {
    const Vec3& x = set.points[i];
    Vec3 yx = material::deformation_apply(d, x);
    NeumaierSum row;
    for (const auto& h : hops) {
      if (h[0] == 0 && h[1] == 0 && h[2] == 0) continue;
      IVec3 c = set.coords[i] + h;
      if (!occupied.count(coord_key(c))) continue;
      Vec3 z = offset + eps * lattice.site(c);
      row.add(phi((material::deformation_apply(d, z) - yx) / eps));
    }
    partial[i] = row.value();
  });
  NeumaierSum total;
  for (double v : partial) total.add(v);
  return 0.5 * eps * eps * eps * total.value();
}

namespace {

double cell_avg_affine(const ConvexPolytope& omega, const BravaisLattice& lattice,
                       double eps, const Mat3& F, const PairPotential& phi) {
  double smin = material::bilipschitz_lower_bound(material::AffineDeformation{F});
  NeumaierSum total;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / smin)) {
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
    Vec3 w = lattice.site(c);
    double value = phi(F * w);
    if (value == 0.0) continue;
    total.add(geometry::self_intersection_volume(omega, eps * w) * value);
  }
  return 0.5 * total.value();
}

double cell_avg_piecewise(const ConvexPolytope& omega, const BravaisLattice& lattice,
                          double eps, const material::PiecewiseAffineDeformation& d,
                          const PairPotential& phi, const QuadratureOptions& opts) {
  const Vec3 n = d.plane.unit_normal;
  const double s0 = d.plane.level();
  Mat3 F_plus = d.F_plus();
  double lambda = segment_lambda(F_plus, d.F_minus);
  NeumaierSum total;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / lambda)) {
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
    Vec3 w = lattice.site(c);
    std::vector<HalfSpace> planes = omega.halfspaces();
    for (const auto& h : omega.halfspaces())
      planes.push_back({h.normal, h.offset - eps * w.dot(h.normal)});
    ConvexPolytope overlap = ConvexPolytope::from_halfspaces(planes);
    if (overlap.empty()) continue;
    double cw = w.dot(n);
    // The finite difference (y(x + eps w) - y(x)) / eps is F+ w above the
    // slab s in (min(0,-eps cw), max(0,-eps cw)), F- w below it, and depends
    // on s = x.n - s0 alone inside it.
    double lo_s = std::min(0.0, -eps * cw), hi_s = std::max(0.0, -eps * cw);
    double plus_part = geometry::clip(overlap, {-n, -(s0 + hi_s)}).volume();
    double minus_part = geometry::clip(overlap, {n, s0 + lo_s}).volume();
    total.add(plus_part * phi(F_plus * w));
    total.add(minus_part * phi(d.F_minus * w));
    if (hi_s > lo_s) {
      auto integrand = [&](double s) {
        double q = (std::max(s + eps * cw, 0.0) - std::max(s, 0.0)) / eps;
        return geometry::cross_section_area(overlap, n, s0 + s) *
               phi(d.F_minus * w + q * d.a);
      };
      total.add(adaptive_simpson(integrand, lo_s, hi_s, opts.slab_tol));
    }
  }
  return 0.5 * total.value();
}

double cell_avg_smooth(const ConvexPolytope& omega, const BravaisLattice& lattice,
                       double eps, const material::SmoothDeformation& d,
                       const PairPotential& phi, const QuadratureOptions& opts) {
  double lambda = material::bilipschitz_lower_bound(Deformation{d});
  NeumaierSum total;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / lambda)) {
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;
    Vec3 w = lattice.site(c);
    std::vector<HalfSpace> planes = omega.halfspaces();
    for (const auto& h : omega.halfspaces())
      planes.push_back({h.normal, h.offset - eps * w.dot(h.normal)});
    ConvexPolytope overlap = ConvexPolytope::from_halfspaces(planes);
    if (overlap.empty()) continue;
    auto f = [&](const Vec3& x) {
      return phi((d.map(x + eps * w) - d.map(x)) / eps);
    };
    total.add(integrate_over_polytope(overlap, f, opts.smooth_order));
  }
  return 0.5 * total.value();
}

}  // namespace

double cell_avg_energy(const ConvexPolytope& omega, const BravaisLattice& lattice,
                       double eps, const Deformation& d, const PairPotential& phi,
                       const QuadratureOptions& opts) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if (omega.empty()) return 0.0;
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, material::AffineDeformation>) {
          return cell_avg_affine(omega, lattice, eps, v.F, phi);
        } else if constexpr (std::is_same_v<T, material::PiecewiseAffineDeformation>) {
          return cell_avg_piecewise(omega, lattice, eps, v, phi, opts);
        } else {
          return cell_avg_smooth(omega, lattice, eps, v, phi, opts);
        }
      },
      d);
}

double gamma(const PairPotential& phi, const BravaisLattice& lattice, const Mat3& F,
             const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9)
    throw ValidationError("surface normal must be a unit vector");
  double smin = material::bilipschitz_lower_bound(material::AffineDeformation{F});
  NeumaierSum sum;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / smin)) {
    Vec3 w = lattice.site(c);
    sum.add(std::abs(w.dot(n)) * phi(F * w));
  }
  return -0.25 * sum.value();
}

double gamma_diamond(const PairPotential& phi, const BravaisLattice& lattice,
                     const Mat3& F, const MillerVector& m) {
  require_integer_lattice(lattice, "gamma_diamond");
  double smin = material::bilipschitz_lower_bound(material::AffineDeformation{F});
  double norm = m.norm();
  NeumaierSum sum;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / smin)) {
    double value = phi(F * c.cast<double>());
    if (value == 0.0) continue;
    long long dot = static_cast<long long>(c[0]) * m.components[0] +
                    static_cast<long long>(c[1]) * m.components[1] +
                    static_cast<long long>(c[2]) * m.components[2];
    sum.add((static_cast<double>(std::llabs(dot)) - 1.0) * value);
  }
  return -0.25 * sum.value() / norm;
}

SigmaResult sigma(const PairPotential& phi, const BravaisLattice& lattice,
                  const Mat3& F_plus, const Mat3& F_minus, const Vec3& n_hat,
                  int quad_order) {
  if (quad_order < 1) throw ValidationError("quadrature order must be positive");
  check_rank_one(F_plus, F_minus, n_hat);
  segment_lambda(F_plus, F_minus);
  auto [nodes, weights] = gauss_legendre_unit(quad_order);
  NeumaierSum integral;
  for (int i = 0; i < quad_order; ++i) {
    Mat3 Ft = nodes[i] * F_plus + (1.0 - nodes[i]) * F_minus;
    integral.add(weights[i] * gamma(phi, lattice, Ft, n_hat));
  }
  SigmaResult r;
  r.sigma_hat = -2.0 * integral.value();
  r.sigma = gamma(phi, lattice, F_plus, n_hat) + gamma(phi, lattice, F_minus, n_hat) +
            r.sigma_hat;
  return r;
}

TauResult tau(const PairPotential& phi, const BravaisLattice& lattice,
              const Mat3& F_plus, const Mat3& F_minus, const MillerVector& m) {
  require_integer_lattice(lattice, "tau");
  Vec3 n_hat = m.unit();
  check_rank_one(F_plus, F_minus, n_hat);
  double lambda = segment_lambda(F_plus, F_minus);
  Mat3 D = F_plus - F_minus;
  NeumaierSum sum;
  for (const auto& c : lattice::enumerate_ball(lattice, phi.cutoff() / lambda)) {
    long long dot = static_cast<long long>(c[0]) * m.components[0] +
                    static_cast<long long>(c[1]) * m.components[1] +
                    static_cast<long long>(c[2]) * m.components[2];
    if (dot == 0) continue;
    long long K = std::llabs(dot);
    Vec3 w = c.cast<double>();
    Vec3 lo = F_minus * w, step = (D * w) / static_cast<double>(K);
    NeumaierSum bracket;
    bracket.add(0.5 * phi(lo));
    bracket.add(0.5 * phi(F_plus * w));
    for (long long j = 1; j < K; ++j) bracket.add(phi(lo + static_cast<double>(j) * step));
    sum.add(bracket.value());
  }
  TauResult r;
  r.tau_hat = sum.value() / (2.0 * m.norm());
  r.tau = gamma(phi, lattice, F_plus, n_hat) + gamma(phi, lattice, F_minus, n_hat) +
          r.tau_hat;
  return r;
}

double trapezoid_sum(const std::function<double(double)>& f, double a, double b, int K) {
  if (K < 1) throw ValidationError("trapezoid partition number must be positive");
  NeumaierSum s;
  double prev = f(a);
  for (int j = 1; j <= K; ++j) {
    double next = f(a + (b - a) * (static_cast<double>(j) / K));
    s.add(0.5 * (prev + next));
    prev = next;
  }
  return std::abs(b - a) / K * s.value();
}

double trapezoid_sum(const std::function<double(const Mat3&)>& f, const Mat3& a,
                     const Mat3& b, int K) {
  if (K < 1) throw ValidationError("trapezoid partition number must be positive");
  NeumaierSum s;
  double prev = f(a);
  for (int j = 1; j <= K; ++j) {
    Mat3 x = a + (static_cast<double>(j) / K) * (b - a);
    double next = f(x);
    s.add(0.5 * (prev + next));
    prev = next;
  }
  return (b - a).norm() / K * s.value();
}

double surface_integral(const ConvexPolytope& omega,
                        const std::function<double(const geometry::Facet&)>& density) {
  NeumaierSum s;
  for (const auto& f : omega.facets()) s.add(f.area * density(f));
  return s.value();
}

ExpansionKind expansion_kind_from_string(const std::string& tag) {
  if (tag == "cell_avg_affine") return ExpansionKind::CellAvgAffine;
  if (tag == "cell_avg_interface") return ExpansionKind::CellAvgInterface;
  if (tag == "discrete_polyhedron") return ExpansionKind::DiscretePolyhedron;
  if (tag == "discrete_interface") return ExpansionKind::DiscreteInterface;
  throw ValidationError("unknown expansion kind: " + tag);
}

namespace {

MillerVector facet_miller(const geometry::Facet& f) {
  if (f.miller) return *f.miller;
  auto m = geometry::rational_direction(f.normal);
  if (!m) throw ValidationError("facet normal is not crystallographic");
  return MillerVector{*m};
}

const material::PiecewiseAffineDeformation& require_piecewise(const Deformation& d,
                                                              const char* kind) {
  const auto* p = std::get_if<material::PiecewiseAffineDeformation>(&d);
  if (!p)
    throw ValidationError(std::string(kind) + " needs a piecewise-affine deformation");
  return *p;
}

Mat3 require_affine(const Deformation& d, const char* kind) {
  const auto* p = std::get_if<material::AffineDeformation>(&d);
  if (!p) throw ValidationError(std::string(kind) + " needs an affine deformation");
  return p->F;
}

bool is_interface_facet(const geometry::Facet& f, const geometry::InterfacePlane& plane,
                        double tol) {
  double align = std::abs(f.normal.dot(plane.unit_normal));
  if (align < 1.0 - 1e-9) return false;
  double level = f.normal.dot(plane.unit_normal) > 0 ? plane.level() : -plane.level();
  return std::abs(f.offset - level) <= tol;
}

}  // namespace

EnergyBreakdown predict_expansion(ExpansionKind kind, const ConvexPolytope& omega,
                                  const BravaisLattice& lattice, const Deformation& d,
                                  const PairPotential& phi,
                                  const QuadratureOptions& opts) {
  if (omega.empty()) throw ValidationError("expansion domain is empty");
  EnergyBreakdown out;
  switch (kind) {
    case ExpansionKind::CellAvgAffine: {
      Mat3 F = require_affine(d, "cell_avg_affine");
      out.bulk_prediction = omega.volume() * material::cauchy_born_W(phi, lattice, F);
      out.surface_prediction = surface_integral(omega, [&](const geometry::Facet& f) {
        return gamma(phi, lattice, F, f.normal);
      });
      break;
    }
    case ExpansionKind::DiscretePolyhedron: {
      Mat3 F = require_affine(d, "discrete_polyhedron");
      require_integer_lattice(lattice, "discrete_polyhedron expansion");
      out.bulk_prediction = omega.volume() * material::cauchy_born_W(phi, lattice, F);
      out.surface_prediction = surface_integral(omega, [&](const geometry::Facet& f) {
        return gamma_diamond(phi, lattice, F, facet_miller(f));
      });
      break;
    }
    case ExpansionKind::CellAvgInterface:
    case ExpansionKind::DiscreteInterface: {
      const char* tag = kind == ExpansionKind::CellAvgInterface ? "cell_avg_interface"
                                                                : "discrete_interface";
      const auto& pw = require_piecewise(d, tag);
      Mat3 F_plus = pw.F_plus();
      auto split = geometry::split_by_plane(omega, pw.plane);
      double W_plus = material::cauchy_born_W(phi, lattice, F_plus);
      double W_minus = material::cauchy_born_W(phi, lattice, pw.F_minus);
      out.bulk_prediction =
          split.plus.volume() * W_plus + split.minus.volume() * W_minus;
      double tol = 1e-9 * (1.0 + omega.diameter());
      auto side_surface = [&](const ConvexPolytope& side, const Mat3& F) {
        return surface_integral(side, [&](const geometry::Facet& f) {
          if (is_interface_facet(f, pw.plane, tol)) return 0.0;
          if (kind == ExpansionKind::CellAvgInterface)
            return gamma(phi, lattice, F, f.normal);
          return gamma_diamond(phi, lattice, F, facet_miller(f));
        });
      };
      out.surface_prediction =
          side_surface(split.plus, F_plus) + side_surface(split.minus, pw.F_minus);
      if (kind == ExpansionKind::CellAvgInterface) {
        out.interface_prediction =
            split.interface_area *
            sigma(phi, lattice, F_plus, pw.F_minus, pw.plane.unit_normal,
                  opts.sigma_order)
                .sigma;
      } else {
        if (!pw.plane.miller)
          throw ValidationError("discrete_interface needs a miller interface normal");
        out.interface_prediction =
            split.interface_area *
            tau(phi, lattice, F_plus, pw.F_minus, *pw.plane.miller).tau;
      }
      break;
    }
  }
  return out;
}

}  // namespace latcell::energy
