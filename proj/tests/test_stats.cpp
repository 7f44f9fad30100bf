#include <doctest.h>

#include <cmath>
#include <vector>

#include "disxy/rng.hpp"
#include "disxy/stats.hpp"

using namespace disxy;

TEST_CASE("moments") {
  const double x[4] = {1, 2, 3, 4};
  CHECK(stats::mean(x) == 2.5);
  CHECK(stats::variance(x) == doctest::Approx(5.0 / 3.0));
  CHECK(stats::standard_error(x) == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("jackknife of the mean equals the naive error") {
  const double x[5] = {0.3, 1.2, -0.4, 2.2, 0.9};
  std::vector<double> loo;
  for (int i = 0; i < 5; ++i) {
    double s = 0;
    for (int j = 0; j < 5; ++j)
      if (j != i) s += x[j];
    loo.push_back(s / 4);
  }
  CHECK(stats::jackknife_error(loo) == doctest::Approx(stats::standard_error(x)));
}

TEST_CASE("block error of independent data") {
  CounterRng rng(1);
  std::vector<double> x(20000);
  for (double& v : x) v = rng.uniform();
  const double naive = stats::standard_error(x);
  CHECK(stats::block_standard_error(x, 20) == doctest::Approx(naive).epsilon(0.15));
}

TEST_CASE("kolmogorov tail") {
  CHECK(stats::kolmogorov_q(0.0) == 1.0);
  CHECK(stats::kolmogorov_q(1.36) == doctest::Approx(0.0494).epsilon(0.01));
  CHECK(stats::kolmogorov_q(1.63) == doctest::Approx(0.0098).epsilon(0.02));
  CounterRng rng(4);
  std::vector<double> a(5000), b(5000);
  for (double& v : a) v = rng.uniform();
  for (double& v : b) v = rng.uniform();
  CHECK(stats::ks_uniform(a, 0, 1).p_value > 0.01);
  CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
  for (double& v : b) v = v * v;
  CHECK(stats::ks_two_sample(a, b).p_value < 1e-6);
}

TEST_CASE("wilson interval") {
  auto i = stats::wilson_interval(50, 100);
  CHECK(i.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(i.high == doctest::Approx(0.5962).epsilon(1e-3));
  auto all = stats::wilson_interval(30, 30);
  CHECK(all.high == 1.0);
  CHECK(all.low > 0.88);
  CHECK_THROWS(stats::wilson_interval(3, 0));
}

TEST_CASE("linear fit and chi-square") {
  const double x[4] = {0, 1, 2, 3}, y[4] = {1, 3, 5, 7};
  auto f = stats::linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(stats::chi_square_p(3.841458820694124, 1) == doctest::Approx(0.05));
  CHECK(stats::chi_square_p(18.307038053275146, 10) == doctest::Approx(0.05));
}
