#include "latcell/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latcell {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre_unit: order must be >= 1");
  const int n = order;
  std::vector<double> x(n), w(n);
  // Newton iteration on P_n, nodes on [-1,1], then map to [0,1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  std::sort(x.begin(), x.end());
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
  return {x, w};
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double grid_golden_min(const std::function<double(double)>& f, double a, double b,
                       int grid, double tol) {
  if (grid < 2) grid = 2;
  double best_t = a, best_v = f(a);
  for (int i = 1; i <= grid; ++i) {
    double t = a + (b - a) * i / grid;
    double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double lo = std::max(a, best_t - (b - a) / grid);
  double hi = std::min(b, best_t + (b - a) / grid);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  double t = 0.5 * (lo + hi);
  return std::min(f(t), best_v);
}

void parallel_for_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads < 1) threads = 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0) threads = std::min<int>(threads, static_cast<int>(hw) * 4);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
    pool.emplace_back([&fn, lo, hi]() {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<std::pair<long long, long long>> cf_convergents(double x, int max_terms) {
  std::vector<std::pair<long long, long long>> out;
  long long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
  long long p1 = 0, q1 = 1;  // p_0 placeholder updated in loop
  double r = x;
  const long long cap = 1LL << 40;
  for (int i = 0; i < max_terms; ++i) {
    double af = std::floor(r);
    if (af > static_cast<double>(cap) || af < -static_cast<double>(cap)) break;
    long long a = static_cast<long long>(af);
    long long p = (i == 0) ? a : a * p1 + p0;
    long long q = (i == 0) ? 1 : a * q1 + q0;
    if (i > 0) {
      p0 = p1;
      q0 = q1;
    }
    p1 = p;
    q1 = q;
    out.emplace_back(p, q);
    if (std::abs(p) > cap || q > cap) break;
    double frac = r - af;
    if (frac < 1e-12) break;  // expansion terminated (rational input)
    r = 1.0 / frac;
  }
  return out;
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree) {
  if (degree < 0 || degree > 2) throw std::invalid_argument("polyfit: degree must be 0..2");
  if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree + 1))
    throw std::invalid_argument("polyfit: need at least degree+1 points");
  const int m = degree + 1;
  Eigen::MatrixXd A(x.size(), m);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = 1.0;
    for (int j = 0; j < m; ++j) {
      A(i, j) = v;
      v *= x[i];
    }
    b(i) = y[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.rank() < m) throw std::invalid_argument("polyfit: rank-deficient design");
  Eigen::VectorXd c = svd.solve(b);
  return std::vector<double>(c.data(), c.data() + m);
}

}  // namespace latcell
