#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace latcell {

/// Neumaier-compensated accumulator. Used everywhere a deterministic,
/// order-stable sum feeds a regression-tested result.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Gauss-Legendre nodes and weights on [0,1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int order);

/// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// Minimum of a scalar function on [a,b]: coarse grid scan followed by
/// golden-section refinement around the best sample.
double grid_golden_min(const std::function<double(double)>& f, double a, double b,
                       int grid = 64, double tol = 1e-12);

/// Runs fn(i) for i in [0,n) across `threads` workers. Each index writes only
/// its own slot, so results are identical for any thread count; callers reduce
/// the slots in index order afterwards.
void parallel_for_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Continued-fraction convergents p/q of x, in order of increasing q,
/// stopping after max_terms or when the expansion terminates.
std::vector<std::pair<long long, long long>> cf_convergents(double x, int max_terms);

/// Ordinary least squares for y ~ sum_j c_j x^j, degree <= 2.
/// Returns the coefficient vector (size degree+1).
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree);

}  // namespace latcell
