#include "latcell/asymptotics.hpp"

#include "latcell/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace latcell::asymptotics {

std::vector<SchedulePoint> epsilon_schedule(scene::ScheduleKind kind, int k_min,
                                            int k_max, double theta) {
  if (k_min < 2 || k_max <= k_min || k_max > 200)
    throw ValidationError("schedule range must satisfy 2 <= k_min < k_max <= 200");
  if (kind == scene::ScheduleKind::Offset && (theta <= 0.0 || theta >= 1.0))
    throw ValidationError("offset schedule needs theta in (0,1)");
  std::vector<SchedulePoint> out;
  out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    double eps = kind == scene::ScheduleKind::Reciprocal ? 1.0 / k : 1.0 / (k + theta);
    out.push_back({k, eps});
  }
  return out;
}

std::vector<SchedulePoint> epsilon_schedule(const scene::Schedule& schedule) {
  return epsilon_schedule(schedule.kind, schedule.k_min, schedule.k_max, schedule.theta);
}

namespace {

std::vector<double> residuals_against(const std::vector<SchedulePoint>& schedule,
                                      const std::vector<double>& energies, double bulk,
                                      double surface) {
  std::vector<double> r(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    double eps = schedule[i].eps;
    r[i] = (energies[i] - bulk - eps * surface) / eps;
  }
  return r;
}

double order_estimate(const std::vector<SchedulePoint>& schedule,
                      const std::vector<double>& energies, double bulk) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    double gap = std::abs(energies[i] - bulk);
    if (gap > 1e-13 * (1.0 + std::abs(bulk))) {
      lx.push_back(std::log(schedule[i].eps));
      ly.push_back(std::log(gap));
    }
  }
  if (lx.size() < 2) return 0.0;
  return polyfit(lx, ly, 1)[1];
}

}  // namespace

ExpansionReport fit_expansion(const std::vector<std::pair<double, double>>& points,
                              int model_order, double fraction) {
  if (model_order != 1 && model_order != 2)
    throw ValidationError("fit model order must be 1 or 2");
  if (fraction <= 0.0 || fraction > 1.0)
    throw ValidationError("fit fraction must lie in (0,1]");
  const std::size_t n = points.size();
  const std::size_t need = static_cast<std::size_t>(model_order) + 2;
  if (n < need) throw ValidationError("expansion fit needs more points");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return points[a].first < points[b].first; });
  std::size_t n_fit = std::max(
      need, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  n_fit = std::min(n_fit, n);

  std::vector<double> xs(n_fit), ys(n_fit);
  for (std::size_t i = 0; i < n_fit; ++i) {
    xs[i] = points[idx[i]].first;
    ys[i] = points[idx[i]].second;
  }
  std::vector<double> coeff;
  try {
    coeff = polyfit(xs, ys, model_order);
  } catch (const std::invalid_argument& e) {
    // degenerate eps lists surface as rank deficiency inside the fit
    throw ValidationError(e.what());
  }

  ExpansionReport rep;
  rep.schedule.reserve(n);
  rep.energies.reserve(n);
  for (const auto& [eps, e] : points) {
    rep.schedule.push_back({static_cast<int>(std::llround(1.0 / eps)), eps});
    rep.energies.push_back(e);
  }
  rep.fitted_bulk = coeff[0];
  rep.fitted_surface = coeff[1];
  rep.target_bulk = rep.fitted_bulk;
  rep.target_surface = rep.fitted_surface;
  rep.residuals =
      residuals_against(rep.schedule, rep.energies, rep.target_bulk, rep.target_surface);
  rep.convergence_order_estimate =
      order_estimate(rep.schedule, rep.energies, rep.target_bulk);
  return rep;
}

Proposition proposition_from_string(const std::string& tag) {
  if (tag == "P1") return Proposition::P1;
  if (tag == "P2") return Proposition::P2;
  if (tag == "P3") return Proposition::P3;
  if (tag == "P4") return Proposition::P4;
  if (tag == "P5") return Proposition::P5;
  throw ValidationError("unknown proposition tag: " + tag);
}

const char* to_string(Proposition p) {
  switch (p) {
    case Proposition::P1: return "P1";
    case Proposition::P2: return "P2";
    case Proposition::P3: return "P3";
    case Proposition::P4: return "P4";
    case Proposition::P5: return "P5";
  }
  return "?";
}

namespace {

bool is_piecewise(const material::Deformation& d) {
  return std::holds_alternative<material::PiecewiseAffineDeformation>(d);
}

energy::ExpansionKind expansion_kind_for(Proposition kind,
                                         const material::Deformation& d) {
  switch (kind) {
    case Proposition::P1:
      return is_piecewise(d) ? energy::ExpansionKind::CellAvgInterface
                             : energy::ExpansionKind::CellAvgAffine;
    case Proposition::P2:
      if (is_piecewise(d))
        throw ValidationError("P2 needs an affine deformation");
      return energy::ExpansionKind::CellAvgAffine;
    case Proposition::P3:
      if (!is_piecewise(d))
        throw ValidationError("P3 needs a piecewise-affine deformation");
      return energy::ExpansionKind::CellAvgInterface;
    case Proposition::P4:
      if (is_piecewise(d))
        throw ValidationError("P4 needs an affine deformation");
      return energy::ExpansionKind::DiscretePolyhedron;
    case Proposition::P5:
      if (!is_piecewise(d))
        throw ValidationError("P5 needs a piecewise-affine deformation");
      return energy::ExpansionKind::DiscreteInterface;
  }
  throw ValidationError("unknown proposition");
}

}  // namespace

ExpansionReport verify_proposition(Proposition kind, const scene::Scene& s) {
  auto schedule = epsilon_schedule(s.schedule);
  auto ekind = expansion_kind_for(kind, s.deformation);
  auto breakdown =
      energy::predict_expansion(ekind, s.domain, s.lattice, s.deformation, s.potential,
                                s.quadrature);
  const bool discrete = kind == Proposition::P4 || kind == Proposition::P5;

  std::vector<double> energies(schedule.size(), 0.0);
  parallel_for_index(schedule.size(), s.threads, [&](std::size_t i) {
    double eps = schedule[i].eps;
    energies[i] = discrete
                      ? energy::discrete_energy(s.domain, s.lattice, eps, s.deformation,
                                                s.potential, s.boundary_rule)
                      : energy::cell_avg_energy(s.domain, s.lattice, eps, s.deformation,
                                                s.potential, s.quadrature);
  });

  std::vector<std::pair<double, double>> points(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i)
    points[i] = {schedule[i].eps, energies[i]};
  ExpansionReport rep = fit_expansion(points);
  rep.schedule = schedule;
  rep.target_bulk = breakdown.bulk_prediction;
  rep.target_surface = kind == Proposition::P1
                           ? 0.0
                           : breakdown.surface_prediction + breakdown.interface_prediction;
  rep.residuals =
      residuals_against(rep.schedule, rep.energies, rep.target_bulk, rep.target_surface);
  rep.convergence_order_estimate =
      order_estimate(rep.schedule, rep.energies, rep.target_bulk);
  return rep;
}

std::vector<MillerLimitRow> miller_limit_study(
    const material::PairPotential& phi, const lattice::BravaisLattice& lattice,
    const Mat3& F, const Vec3& target, int j_max, const std::optional<Vec3>& jump_a) {
  if (j_max < 1) throw ValidationError("j_max must be positive");
  Vec3 n_hat = target.normalized();
  auto rational = geometry::rational_direction(target);
  double gamma_limit = energy::gamma(phi, lattice, F, n_hat);
  double sigma_limit = 0.0;
  if (jump_a) {
    Mat3 F_plus = F + (*jump_a) * n_hat.transpose();
    sigma_limit = energy::sigma(phi, lattice, F_plus, F, n_hat).sigma;
  }
  std::vector<MillerLimitRow> rows;
  rows.reserve(static_cast<std::size_t>(j_max));
  for (int j = 1; j <= j_max; ++j) {
    lattice::MillerSequenceElement el =
        rational ? lattice::miller_sequence(lattice::MillerVector{*rational}, j)
                 : lattice::miller_sequence(n_hat, j);
    MillerLimitRow row;
    row.j = j;
    row.n = el.n;
    row.norm = el.n.norm();
    row.gamma_gap = std::abs(energy::gamma_diamond(phi, lattice, F, el.n) - gamma_limit);
    if (jump_a) {
      Vec3 nj = el.n.unit();
      Mat3 F_plus_j = F + (*jump_a) * nj.transpose();
      row.tau_gap =
          std::abs(energy::tau(phi, lattice, F_plus_j, F, el.n).tau - sigma_limit);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<RemainderRow> modified_domain_check(const geometry::ConvexPolytope& omega,
                                                const lattice::BravaisLattice& lattice,
                                                int k_min, int k_max) {
  if (k_min < 2 || k_max < k_min)
    throw ValidationError("modified-domain range must satisfy 2 <= k_min <= k_max");
  geometry::ConvexPolytope tagged = omega;
  geometry::attach_miller_normals(tagged);
  std::vector<RemainderRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    double eps = 1.0 / k;
    std::vector<double> distances;
    distances.reserve(tagged.facets().size());
    for (const auto& f : tagged.facets())
      distances.push_back(eps / (2.0 * f.miller->norm()));
    geometry::ConvexPolytope grown = geometry::offset_facets(tagged, distances);
    auto base = lattice::enumerate_in_region(lattice, eps, omega, BoundaryRule::Closed);
    auto mod = lattice::enumerate_in_region(lattice, eps, grown, BoundaryRule::Closed);
    RemainderRow row;
    row.k = k;
    row.eps = eps;
    row.remainder = grown.volume() - eps * eps * eps * lattice.cell_volume() *
                                         static_cast<double>(mod.size());
    row.count_difference = static_cast<long long>(mod.size()) -
                           static_cast<long long>(base.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace latcell::asymptotics
