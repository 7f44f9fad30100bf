#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include "disxy/quadrature.hpp"
#include "disxy/rng.hpp"

using namespace disxy;

TEST_CASE("independent angles") {
  std::vector<Coupling> none{{{1, -1}, 0.0}};
  const int obs[2] = {1, -1};
  CHECK(std::abs(quadrature_expectation(none, obs, 64)) < 1e-14);
}

TEST_CASE("two-site chain is a Bessel ratio") {
  for (double j : {0.5, 1.0, 3.0}) {
    std::vector<Coupling> c{{{1, -1}, j}};
    const int obs[2] = {1, -1};
    const double exact = boost::math::cyl_bessel_i(1, j) / boost::math::cyl_bessel_i(0, j);
    CHECK(quadrature_expectation(c, obs, 64) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(quadrature_expectation(c, obs, 128) == doctest::Approx(quadrature_expectation(c, obs, 64)).epsilon(1e-13));
  }
}

TEST_CASE("Ginibre monotonicity on random instances") {
  CounterRng rng(2718);
  for (int inst = 0; inst < 5; ++inst) {
    const int sites = 2 + static_cast<int>(rng() % 2);
    std::vector<Coupling> c;
    for (int k = 0; k < 3; ++k) {
      std::vector<int> m(sites);
      for (int& x : m) x = static_cast<int>(rng() % 3) - 1;
      c.push_back({m, 1.5 * rng.uniform()});
    }
    std::vector<int> obs(sites);
    for (int& x : obs) x = static_cast<int>(rng() % 3) - 1;
    double prev = -2.0;
    for (int step = 0; step < 5; ++step) {
      c[0].J = 0.4 * step;
      const double v = quadrature_expectation(c, obs, 64);
      CHECK(v >= prev - 1e-8);
      prev = v;
    }
  }
}

TEST_CASE("input validation") {
  std::vector<Coupling> c{{{1, -1}, 1.0}};
  const int obs2[2] = {1, -1};
  const int obs4[4] = {1, -1, 0, 0};
  const int obs1[1] = {1};
  CHECK_THROWS(quadrature_expectation(c, obs4, 64));
  CHECK_THROWS(quadrature_expectation(c, obs2, 32));
  CHECK_THROWS(quadrature_expectation(c, obs1, 64));
  std::vector<Coupling> neg{{{1, -1}, -0.5}};
  CHECK_THROWS(quadrature_expectation(neg, obs2, 64));
}
