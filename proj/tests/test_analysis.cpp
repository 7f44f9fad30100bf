#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "disxy/analysis.hpp"
#include "disxy/rng.hpp"

using namespace disxy;

namespace {

ObservableSeries synthetic(double beta, const std::vector<double>& op) {
  ObservableSeries s;
  s.beta = beta;
  std::int64_t t = 0;
  for (double x : op) s.records.push_back({++t, beta, 0.0, x, x * x, x * x * x * x, 0.0, 1.0});
  return s;
}

// U_N(beta) = f((beta - beta_c) N) with a monotone f that stays away from
// saturation on the scanned grid (saturated tails would also give ratio ~ 1).
BinderCurve scaling_curve(int N, double beta_c, const std::vector<double>& grid) {
  BinderCurve c{N, grid, {}};
  for (double b : grid) c.U.push_back(1.0 / 3.0 + 0.05 * (b - beta_c) * N);
  return c;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::round((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(lo + i * step);
  return g;
}

}  // namespace

TEST_CASE("binder arithmetic and limits") {
  CHECK(binder(0.5, 0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(binder(0.2, 3 * 0.04) == doctest::Approx(0.0));
  CHECK(binder(0.09, 0.09 * 0.09) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS(binder(0.0, 1.0));
  CHECK_THROWS(binder(-1.0, 1.0));
}

TEST_CASE("disorder averaging") {
  SUBCASE("arithmetic mean of samples") {
    std::vector<SampleMoments> s{{0.2, 0.1, 0, 0}, {0.4, 0.3, 0, 0}};
    auto e = disorder_average(s, 8, 4.0, 1.0);
    CHECK(e.m2 == doctest::Approx(0.3));
    CHECK(e.m4 == doctest::Approx(0.2));
    CHECK(e.U == doctest::Approx(binder(0.3, 0.2)));
    CHECK(e.samples == 2);
  }
  SUBCASE("identical samples have no spread") {
    std::vector<SampleMoments> s(5, SampleMoments{0.3, 0.2, 0.01, 0.01});
    auto e = disorder_average(s, 8, 4.0, 1.0);
    CHECK(e.m2_err == 0.0);
    CHECK(e.m4_err == 0.0);
    CHECK(e.U_err == 0.0);
  }
  SUBCASE("Gaussian series give U near zero, two-point series give 2/3") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 0.3);
    std::vector<ObservableSeries> gauss, pm;
    for (int k = 0; k < 10; ++k) {
      std::vector<double> g(20000), t(2000);
      for (double& x : g) x = normal(rng);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = (rng() & 1) ? 0.4 : -0.4;
      gauss.push_back(synthetic(1.0, g));
      pm.push_back(synthetic(1.0, t));
    }
    auto eg = disorder_average(gauss, 8, 1.0);
    CHECK(std::abs(eg.U) < 3 * eg.U_err + 1e-12);
    CHECK(eg.m4 >= eg.m2 * eg.m2);
    auto ep = disorder_average(pm, 8, 1.0);
    CHECK(ep.U == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("order of samples does not matter") {
    CounterRng rng(3);
    std::vector<SampleMoments> s;
    for (int k = 0; k < 12; ++k) s.push_back({rng.uniform(), rng.uniform(), 0, 0});
    auto a = disorder_average(s, 6, 2.0, 1.0);
    std::reverse(s.begin(), s.end());
    std::rotate(s.begin(), s.begin() + 5, s.end());
    auto b = disorder_average(s, 6, 2.0, 1.0);
    CHECK(a.m2 == doctest::Approx(b.m2).epsilon(1e-12));
    CHECK(a.m4 == doctest::Approx(b.m4).epsilon(1e-12));
    CHECK(a.U_err == doctest::Approx(b.U_err).epsilon(1e-10));
  }
  SUBCASE("misaligned inputs") {
    std::vector<ObservableSeries> mixed{synthetic(1.0, {0.1, 0.2}), synthetic(2.0, {0.1, 0.2})};
    CHECK_THROWS(disorder_average(mixed, 8, 1.0));
    std::vector<SampleMoments> one(1);
    CHECK_THROWS(disorder_average(one, 8, 1.0, 1.0));
  }
}

TEST_CASE("crossing temperature") {
  const auto g = grid(1.0, 2.0, 0.01);
  SUBCASE("identical curves") {
    auto a = scaling_curve(8, 1.5, g);
    auto c = crossing_temperature(a, a);
    CHECK(c.found);
    CHECK(c.degenerate);
    CHECK(c.beta == g.front());
  }
  SUBCASE("planted scaling crossing") {
    auto c = crossing_temperature(scaling_curve(8, 1.5, g), scaling_curve(12, 1.5, g));
    CHECK(c.found);
    CHECK_FALSE(c.degenerate);
    CHECK(std::abs(c.beta - 1.5) <= 0.01 + 1e-12);
  }
  SUBCASE("no crossing below the floor") {
    auto a = scaling_curve(8, 1.5, g);
    BinderCurve zero{12, g, std::vector<double>(g.size(), 0.0)};
    CHECK_FALSE(crossing_temperature(a, zero).found);
  }
  SUBCASE("errors") {
    auto a = scaling_curve(8, 1.5, g);
    auto b = scaling_curve(12, 1.5, grid(1.0, 2.0, 0.02));
    CHECK_THROWS(crossing_temperature(a, b));
    BinderCurve tiny{8, {1.0, 2.0}, {0.3, 0.4}};
    CHECK_THROWS(crossing_temperature(tiny, tiny));
  }
}

TEST_CASE("T_c estimates") {
  SUBCASE("pair arithmetic") {
    std::vector<PairCrossing> p{{6, 8, {true, 1.4, false, 0.0}}, {8, 10, {true, 1.6, false, 0.0}}};
    auto t = estimate_tc(p, 4.0);
    CHECK(t.beta_c == doctest::Approx(1.5));
    CHECK(t.error == doctest::Approx(0.1414213562).epsilon(1e-8));
  }
  for (double step : {0.01, 0.02}) {
    const auto g = grid(1.0, 2.0, step);
    for (std::vector<int> sides : {std::vector<int>{6, 8, 10}, std::vector<int>{6, 8, 10, 12}}) {
      std::vector<BinderCurve> curves;
      for (int n : sides) curves.push_back(scaling_curve(n, 1.37, g));
      auto t = estimate_tc(curves, 4.0);
      CHECK(std::abs(t.beta_c - 1.37) <= 2 * step + 1e-12);
      CHECK(t.pairs.size() == sides.size() * (sides.size() - 1) / 2);
    }
  }
  SUBCASE("no valid pair") {
    const auto g = grid(1.0, 2.0, 0.1);
    std::vector<BinderCurve> flat{{6, g, std::vector<double>(g.size(), 0.0)}, {8, g, std::vector<double>(g.size(), 0.0)}};
    CHECK_THROWS(estimate_tc(flat, 4.0));
    CHECK_THROWS(estimate_tc(std::span<const BinderCurve>(flat.data(), 1), 4.0));
  }
  SUBCASE("single pair has no spread") {
    const auto g = grid(1.0, 2.0, 0.05);
    std::vector<BinderCurve> two{scaling_curve(8, 1.5, g), scaling_curve(12, 1.5, g)};
    auto t = estimate_tc(two, 4.0);
    CHECK(t.beta_c == doctest::Approx(1.5));
    CHECK(std::isnan(t.error));
  }
}

TEST_CASE("infrared check") {
  CHECK(infrared_bound(1.0, 1.0, 64) == doctest::Approx(0.015625));
  CHECK(infrared_bound(2.0, 4.0, 256) == doctest::Approx(0.001953125));
  auto s = synthetic(1.0, {0.1, -0.1, 0.05, 0.0});
  auto c = infrared_check(s, Variant::CleanWeak, Boundary::Periodic, 1.0, 64);
  CHECK(c.bound == doctest::Approx(0.015625));
  CHECK(c.estimate == doctest::Approx((0.01 + 0.01 + 0.0025) / 4));
  CHECK(c.margin == doctest::Approx((c.bound - c.estimate) / c.error));
  CHECK_THROWS(infrared_check(s, Variant::XY, Boundary::Periodic, 1.0, 64));
  CHECK_THROWS(infrared_check(s, Variant::CleanWeak, Boundary::WiredFrame, 1.0, 64));
}

TEST_CASE("infrared check on a hot clean-weak torus") {
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 8));
  Model m(Variant::CleanWeak, 1.0, g);
  RunParams p;
  p.betas = {0.5};
  p.sweeps_thermalize = 500;
  p.sweeps_measure = 20000;
  p.measure_every = 10;
  p.seed = 6;
  auto c = infrared_check(run_chain(m, p).series[0], Variant::CleanWeak, Boundary::Periodic, 1.0, 64);
  CHECK(c.estimate <= c.bound + 3 * c.error);
}

TEST_CASE("two-point tau") {
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(3, 4));
  const Vertex far = g->index(std::vector<int>{2, 2, 2});
  auto run = [&](double p_occ, double beta, std::uint64_t seed) {
    auto f = std::make_shared<const DisorderField>(sample_disorder(g, p_occ, seed));
    Model m(Variant::EffectiveStrong, 2.0, g, f);
    RunParams p;
    p.betas = {beta};
    p.sweeps_thermalize = 50;
    p.sweeps_measure = 4000;
    p.measure_every = 10;
    p.seed = seed;
    p.two_point = std::make_pair(Vertex{0}, far);
    return run_chain(m, p).series[0];
  };
  std::vector<ObservableSeries> clean{run(1.0, 2.0, 1), run(1.0, 2.0, 2)};
  auto e = two_point_tau(clean);
  CHECK(e.value == 0.0);
  std::vector<ObservableSeries> hot;
  for (std::uint64_t s = 1; s <= 6; ++s) hot.push_back(run(0.5, 0.0, s));
  auto h = two_point_tau(hot);
  CHECK(std::abs(h.value) < 4 * h.error);
  ObservableSeries none = clean[0];
  none.has_two_point = false;
  std::vector<ObservableSeries> bad{none};
  CHECK_THROWS(two_point_tau(bad));
}
