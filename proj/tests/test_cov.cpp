#include <doctest.h>

#include <cmath>
#include <numbers>

#include "disxy/change_of_variables.hpp"
#include "disxy/rng.hpp"
#include "disxy/stats.hpp"

using namespace disxy;

namespace {

constexpr double pi = std::numbers::pi;

double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

TEST_CASE("hand evaluations") {
  auto a = cov_forward(0.0, 0.0, 0.0);
  CHECK(a.zeta == doctest::Approx(0.0));
  CHECK(a.w == doctest::Approx(0.0));
  auto b = cov_forward(pi / 2, -pi / 2, pi);
  CHECK(b.zeta == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b.w == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(cov_forward(0.0, pi, 0.0), SingularInputError);
  CHECK_THROWS_AS(cov_forward(0.3, 0.3, pi), SingularInputError);
  CHECK_THROWS_AS(cov_inverse(0.1, pi, 0.0), SingularInputError);
  CHECK_THROWS(cov_forward(0.1, 0.2, 1.0));
}

TEST_CASE("round trip") {
  CounterRng rng(123);
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    const double tp = pi * (2 * rng.uniform() - 1), tm = pi * (2 * rng.uniform() - 1);
    const double alpha = (i & 1) ? pi : 0.0;
    CovAngles c;
    try {
      c = cov_forward(tp, tm, alpha);
    } catch (const SingularInputError&) {
      continue;
    }
    const auto back = cov_inverse(c.zeta, c.w, alpha);
    if (angle_distance(back.plus, tp) > 1e-9 || angle_distance(back.minus, tm) > 1e-9) FAIL("round trip failed");
    ++checked;
  }
  CHECK(checked > 99990);
}

TEST_CASE("measure preservation") {
  for (double alpha : {0.0, pi}) {
    CounterRng rng(alpha == 0.0 ? 7 : 8);
    const int n = 100000;
    std::vector<double> zeta, w, zeta_hi, zeta_lo;
    zeta.reserve(n);
    w.reserve(n);
    for (int i = 0; i < n; ++i) {
      const auto c = cov_forward(pi * (2 * rng.uniform() - 1), pi * (2 * rng.uniform() - 1), alpha);
      zeta.push_back(c.zeta);
      w.push_back(c.w);
      (c.w > 0 ? zeta_hi : zeta_lo).push_back(c.zeta);
    }
    CHECK(stats::ks_uniform(zeta, -pi, pi).p_value > 0.01);
    CHECK(stats::ks_uniform(w, -pi, pi).p_value > 0.01);
    CHECK(stats::ks_two_sample(zeta_hi, zeta_lo).p_value > 0.01);
  }
}

TEST_CASE("expansion residual") {
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(3, 4));
  auto f = sample_disorder(g, 0.5, 17);
  const std::size_t n = g->vertex_count();
  CounterRng rng(31);
  std::vector<double> zeta(n), w0(n), zero(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    zeta[i] = pi * (2 * rng.uniform() - 1);
    w0[i] = 2 * rng.uniform() - 1;
  }

  SUBCASE("vanishes at w = 0") {
    auto r = expansion_residual(bilayer_from_cov(zeta, zero, f), f, 16.0);
    CHECK(std::abs(r.residual) < 1e-9);
    CHECK(r.constant == doctest::Approx(-16.0 * static_cast<double>(n)));
  }

  SUBCASE("second order in w around the reference state") {
    std::vector<double> eps{0.2, 0.1, 0.05}, logs, loge;
    for (double e : eps) {
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = e * w0[i];
      auto r = expansion_residual(bilayer_from_cov(zero, w, f), f, 16.0);
      logs.push_back(std::log(std::abs(r.residual)));
      loge.push_back(std::log(e));
    }
    CHECK(stats::linear_fit(loge, logs).slope >= 1.9);
  }

  SUBCASE("leading coefficient at generic zeta") {
    // Same-alpha edges contribute 2 cos(grad zeta) (1 - cos(grad w / 2)); every
    // other term cancels through second order.
    double a = 0.0;
    for (const auto& ed : g->edges())
      if (f.vacant(ed.a) == f.vacant(ed.b)) {
        const double dw = w0[ed.a] - w0[ed.b];
        a += std::cos(zeta[ed.a] - zeta[ed.b]) * dw * dw / 4.0;
      }
    const double e = 1e-3;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = e * w0[i];
    auto r = expansion_residual(bilayer_from_cov(zeta, w, f), f, 16.0);
    CHECK(r.residual / (e * e) == doctest::Approx(a).epsilon(1e-2));
  }

  SUBCASE("single-site Taylor expansion") {
    auto g2 = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 3));
    auto occ = DisorderField::uniform(g2, false);
    const double h = 16.0;
    for (double w : {0.05, 0.1}) {
      std::vector<double> z(9, 0.3), ws(9, 0.0);
      ws[4] = w;
      auto r = expansion_residual(bilayer_from_cov(z, ws, occ), occ, h);
      const double taylor = w * w - std::pow(w, 4) / 48 + h * std::pow(w, 4) / 8;
      CHECK(r.residual == doctest::Approx(taylor).epsilon(1e-6));
    }
  }

  CHECK_THROWS(expansion_residual(Configuration::single(n), f, 1.0));
  CHECK_THROWS(expansion_residual(bilayer_from_cov(zeta, zero, f), f, 0.0));
}
