#include "latcell/oracle.hpp"

#include "latcell/numerics.hpp"

#include <random>

namespace latcell::oracle {

namespace {

/// Stratified offsets, one jittered sample per cell. Midpoints would lock
/// onto the planes where atoms enter the region and the average then stalls
/// instead of tightening as the grid doubles. Fixed seed and raw-bit
/// conversion keep the sequence reproducible across platforms.
std::vector<Vec3> translate_grid(const lattice::BravaisLattice& lattice, double eps,
                                 int grid) {
  if (grid < 1) throw ValidationError("translate grid must be positive");
  std::mt19937_64 rng(20240817ull);
  auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> offsets;
  offsets.reserve(static_cast<std::size_t>(grid) * grid * grid);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      for (int k = 0; k < grid; ++k) {
        Vec3 frac((i + u01()) / grid, (j + u01()) / grid, (k + u01()) / grid);
        offsets.push_back(eps * (lattice.basis() * frac));
      }
  return offsets;
}

}  // namespace

double translate_average_count(const geometry::ConvexPolytope& region,
                               const lattice::BravaisLattice& lattice, double eps,
                               int grid, BoundaryRule rule) {
  NeumaierSum counts;
  auto offsets = translate_grid(lattice, eps, grid);
  for (const auto& u : offsets) {
    auto set = lattice::enumerate_in_region(lattice, eps, region, rule, u);
    counts.add(static_cast<double>(set.size()));
  }
  double cell = eps * eps * eps * lattice.cell_volume();
  return cell * counts.value() / static_cast<double>(offsets.size());
}

double translate_average_energy(const geometry::ConvexPolytope& region,
                                const lattice::BravaisLattice& lattice, double eps,
                                const material::Deformation& d,
                                const material::PairPotential& phi, int grid,
                                BoundaryRule rule, int threads) {
  auto offsets = translate_grid(lattice, eps, grid);
  std::vector<double> samples(offsets.size(), 0.0);
  parallel_for_index(offsets.size(), threads, [&](std::size_t i) {
    samples[i] =
        energy::discrete_energy(region, lattice, eps, d, phi, rule, 1, offsets[i]);
  });
  NeumaierSum sum;
  for (double e : samples) sum.add(e);
  return sum.value() / static_cast<double>(offsets.size());
}

double dense_path_integral(const material::PairPotential& phi,
                           const lattice::BravaisLattice& lattice, const Mat3& F_plus,
                           const Mat3& F_minus, const Vec3& n_hat, int panels) {
  if (panels < 1) throw ValidationError("panel count must be positive");
  auto f = [&](double t) {
    Mat3 Ft = t * F_plus + (1.0 - t) * F_minus;
    return energy::gamma(phi, lattice, Ft, n_hat);
  };
  return -2.0 * energy::trapezoid_sum(f, 0.0, 1.0, panels);
}

}  // namespace latcell::oracle
