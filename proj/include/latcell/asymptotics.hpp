#pragma once

#include "latcell/energy.hpp"
#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"
#include "latcell/material.hpp"
#include "latcell/scene.hpp"
#include "latcell/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace latcell::asymptotics {

struct SchedulePoint {
  int k = 0;
  double eps = 0.0;
};

/// reciprocal: eps = 1/k; offset: eps = 1/(k + theta), theta in (0,1).
/// Requires 2 <= k_min < k_max <= 200.
std::vector<SchedulePoint> epsilon_schedule(scene::ScheduleKind kind, int k_min,
                                            int k_max, double theta = 0.37);
std::vector<SchedulePoint> epsilon_schedule(const scene::Schedule& schedule);

struct ExpansionReport {
  std::vector<SchedulePoint> schedule;
  std::vector<double> energies;
  double fitted_bulk = 0.0;
  double fitted_surface = 0.0;
  std::vector<double> residuals;  // (E - target_bulk - eps*target_surface) / eps
  double target_bulk = 0.0;
  double target_surface = 0.0;  // full O(eps) coefficient, interface included
  double convergence_order_estimate = 0.0;
};

/// Least-squares fit E ~ c0 + c1 eps (+ c2 eps^2) on the smallest
/// `fraction` of the eps values. Targets default to the fitted values.
ExpansionReport fit_expansion(const std::vector<std::pair<double, double>>& points,
                              int model_order = 2, double fraction = 0.6);

enum class Proposition { P1, P2, P3, P4, P5 };
Proposition proposition_from_string(const std::string& tag);
const char* to_string(Proposition p);

/// Evaluates the matching energy along the scene schedule (cell-averaged for
/// P1-P3, discrete for P4-P5), fits the series, and reports residuals scaled
/// against the closed-form prediction. P1 predicts the bulk term only.
ExpansionReport verify_proposition(Proposition kind, const scene::Scene& s);

struct MillerLimitRow {
  int j = 0;
  lattice::MillerVector n;
  double norm = 0.0;
  double gamma_gap = 0.0;  // |gamma_diamond(F, n_j) - gamma(F, n)|
  double tau_gap = 0.0;    // |tau(F + a (x) n_j/|n_j|, F, n_j) - sigma|
};

/// Convergence of the discrete densities along the normal sequence n_j
/// approaching `target`. The tau column is filled when a jump amplitude is
/// given, with F acting as the minus-side gradient.
std::vector<MillerLimitRow> miller_limit_study(
    const material::PairPotential& phi, const lattice::BravaisLattice& lattice,
    const Mat3& F, const Vec3& target, int j_max,
    const std::optional<Vec3>& jump_a = std::nullopt);

struct RemainderRow {
  int k = 0;
  double eps = 0.0;
  double remainder = 0.0;       // |Omega_k| - eps^3 |K| #(Omega_k cap eps L)
  long long count_difference = 0;  // #(Omega_k cap eps L) - #(Omega cap eps L)
};

/// Facet-offset construction: each facet moves outward by eps/(2|n_f|).
/// The point set must be unchanged and the new remainder must be o(eps).
std::vector<RemainderRow> modified_domain_check(const geometry::ConvexPolytope& omega,
                                                const lattice::BravaisLattice& lattice,
                                                int k_min, int k_max);

}  // namespace latcell::asymptotics
