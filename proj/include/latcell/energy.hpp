#pragma once

#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"
#include "latcell/material.hpp"
#include "latcell/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace latcell::energy {

struct QuadratureOptions {
  int sigma_order = 32;     // Gauss-Legendre order for interaction integrals
  double slab_tol = 1e-10;  // adaptive Simpson target for interface slabs
  int smooth_order = 8;     // tensor Gauss order per axis for sampled maps
  int threads = 1;
};

/// (eps^3 / 2) sum over ordered atom pairs of Phi((y(z) - y(x)) / eps).
double discrete_energy(const geometry::ConvexPolytope& omega,
                       const lattice::BravaisLattice& lattice, double eps,
                       const material::Deformation& d, const material::PairPotential& phi,
                       BoundaryRule rule, int threads = 1,
                       const Vec3& offset = Vec3::Zero());

/// (1/2) sum over w of the integral of chi_Omega(x + eps w) Phi(...) dx.
/// Affine and piecewise-affine maps use exact intersection volumes; sampled
/// maps fall back to tensor-Gauss quadrature over a tetrahedral split.
double cell_avg_energy(const geometry::ConvexPolytope& omega,
                       const lattice::BravaisLattice& lattice, double eps,
                       const material::Deformation& d, const material::PairPotential& phi,
                       const QuadratureOptions& opts = {});

/// Surface density -(1/4) sum |w.n| Phi(F w), n unit.
double gamma(const material::PairPotential& phi, const lattice::BravaisLattice& lattice,
             const Mat3& F, const Vec3& n);

/// Discrete facet density -(1/4) sum (|w.m| - 1) Phi(F w) / |m|; equals
/// gamma(F, m/|m|) + W(F) / (2 |m|).
double gamma_diamond(const material::PairPotential& phi,
                     const lattice::BravaisLattice& lattice, const Mat3& F,
                     const lattice::MillerVector& m);

struct SigmaResult {
  double sigma = 0.0;
  double sigma_hat = 0.0;
};

/// Interfacial density of a compatible pair: sigma_hat is -2 times the
/// gamma average along the gradient segment, sigma adds both endpoint gammas.
SigmaResult sigma(const material::PairPotential& phi,
                  const lattice::BravaisLattice& lattice, const Mat3& F_plus,
                  const Mat3& F_minus, const Vec3& n_hat, int quad_order = 32);

struct TauResult {
  double tau = 0.0;
  double tau_hat = 0.0;
};

/// Fully discrete interfacial density for a crystallographic interface;
/// tau_hat sums trapezoid brackets with |w.m| panels per lattice direction.
TauResult tau(const material::PairPotential& phi, const lattice::BravaisLattice& lattice,
              const Mat3& F_plus, const Mat3& F_minus, const lattice::MillerVector& m);

double trapezoid_sum(const std::function<double(double)>& f, double a, double b, int K);
double trapezoid_sum(const std::function<double(const Mat3&)>& f, const Mat3& a,
                     const Mat3& b, int K);

double surface_integral(const geometry::ConvexPolytope& omega,
                        const std::function<double(const geometry::Facet&)>& density);

struct EnergyBreakdown {
  double total = 0.0;
  double bulk_prediction = 0.0;
  double surface_prediction = 0.0;
  double interface_prediction = 0.0;
  double epsilon = 0.0;
  long long atom_count = 0;

  double prediction_at(double eps) const {
    return bulk_prediction + eps * (surface_prediction + interface_prediction);
  }
};

enum class ExpansionKind {
  CellAvgAffine,
  CellAvgInterface,
  DiscretePolyhedron,
  DiscreteInterface,
};

ExpansionKind expansion_kind_from_string(const std::string& tag);

/// Assembles the bulk, surface, and interface coefficients of the matching
/// energy expansion; facet Miller data must be present for the discrete kinds
/// and is attached on demand when every facet has a small rational normal.
EnergyBreakdown predict_expansion(ExpansionKind kind,
                                  const geometry::ConvexPolytope& omega,
                                  const lattice::BravaisLattice& lattice,
                                  const material::Deformation& d,
                                  const material::PairPotential& phi,
                                  const QuadratureOptions& opts = {});

struct DensityRow {
  std::string label;
  std::vector<double> F;  // row-major, 9 or 18 entries for a pair
  Vec3 normal = Vec3::Zero();
  double value = 0.0;
};

struct DensityTable {
  std::vector<DensityRow> rows;
};

}  // namespace latcell::energy
