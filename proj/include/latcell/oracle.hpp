#pragma once

#include "latcell/energy.hpp"
#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"
#include "latcell/material.hpp"
#include "latcell/types.hpp"

namespace latcell::oracle {

/// Volume estimate eps^3 |K| * (mean lattice-point count over an N^3 grid of
/// fractional-cell translates). Converges to vol(K) like a quadrature rule.
double translate_average_count(const geometry::ConvexPolytope& region,
                               const lattice::BravaisLattice& lattice, double eps,
                               int grid, BoundaryRule rule = BoundaryRule::HalfOpen);

/// Mean of the discrete energy over the same translate grid. Independent
/// cross-check for the lattice-cell average.
double translate_average_energy(const geometry::ConvexPolytope& region,
                                const lattice::BravaisLattice& lattice, double eps,
                                const material::Deformation& d,
                                const material::PairPotential& phi, int grid,
                                BoundaryRule rule = BoundaryRule::HalfOpen,
                                int threads = 1);

/// Dense composite-trapezoid evaluation of the relaxation integral behind
/// sigma_hat; a slow reference for the Gauss rule used in production.
double dense_path_integral(const material::PairPotential& phi,
                           const lattice::BravaisLattice& lattice, const Mat3& F_plus,
                           const Mat3& F_minus, const Vec3& n_hat, int panels);

}  // namespace latcell::oracle
