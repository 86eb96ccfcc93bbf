#include "doctest.h"

#include "latcell/numerics.hpp"

#include <atomic>
#include <cmath>
#include <vector>

using namespace latcell;

TEST_CASE("neumaier sum keeps the small term") {
  NeumaierSum s;
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-15));

  NeumaierSum t;
  for (int i = 0; i < 1000; ++i) t.add(0.1);
  CHECK(t.value() == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
  auto [x, w] = gauss_legendre_unit(5);
  REQUIRE(x.size() == 5);
  double wsum = 0.0;
  for (double wi : w) wsum += wi;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

  // order n is exact through degree 2n-1
  double i9 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) i9 += w[i] * std::pow(x[i], 9);
  CHECK(i9 == doctest::Approx(0.1).epsilon(1e-13));

  auto [x2, w2] = gauss_legendre_unit(32);
  double ie = 0.0;
  for (std::size_t i = 0; i < x2.size(); ++i) ie += w2[i] * std::exp(x2[i]);
  CHECK(ie == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("adaptive simpson hits the tolerance") {
  double v = adaptive_simpson([](double t) { return std::sin(t); }, 0.0, M_PI, 1e-12);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  double z = adaptive_simpson([](double) { return 0.0; }, 0.0, 1.0, 1e-12);
  CHECK(z == 0.0);
}

TEST_CASE("grid golden min finds an interior minimum") {
  double m = grid_golden_min([](double t) { return (t - 0.3) * (t - 0.3) + 2.0; },
                             0.0, 1.0);
  CHECK(m == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("continued fraction convergents of pi") {
  auto conv = cf_convergents(M_PI, 6);
  REQUIRE(conv.size() >= 3);
  bool has_22_7 = false, has_355_113 = false;
  for (auto [p, q] : conv) {
    if (p == 22 && q == 7) has_22_7 = true;
    if (p == 355 && q == 113) has_355_113 = true;
  }
  CHECK(has_22_7);
  CHECK(has_355_113);
  for (std::size_t i = 1; i < conv.size(); ++i) CHECK(conv[i].second > conv[i - 1].second);

  auto half = cf_convergents(0.5, 10);
  CHECK(half.back().first == 1);
  CHECK(half.back().second == 2);
}

TEST_CASE("polyfit recovers exact coefficients") {
  std::vector<double> x = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.0 - 2.0 * xi + 0.5 * xi * xi);
  auto c = polyfit(x, y, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(c[1] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-10));

  auto lin = polyfit(x, y, 1);
  REQUIRE(lin.size() == 2);

  std::vector<double> same = {0.2, 0.2, 0.2};
  std::vector<double> ys = {1.0, 1.0, 1.0};
  CHECK_THROWS(polyfit(same, ys, 1));
  CHECK_THROWS(polyfit({0.1, 0.2}, {1.0, 2.0, 3.0}, 1));
}

TEST_CASE("parallel_for_index covers every index once for any thread count") {
  const std::size_t n = 1000;
  for (int threads : {1, 2, 4, 7}) {
    std::vector<int> hits(n, 0);
    parallel_for_index(n, threads, [&](std::size_t i) { hits[i] += 1; });
    for (std::size_t i = 0; i < n; ++i) REQUIRE(hits[i] == 1);
  }
}
