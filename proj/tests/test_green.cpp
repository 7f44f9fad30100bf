#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "disxy/green.hpp"
#include "disxy/special.hpp"

using namespace disxy;

namespace {

// 1D: (1+m^2) G(x) - (G(x-1) + G(x+1))/2 = delta_0 has G = A rho^|x|.
double green_1d(double m, int x) {
  const double a = 1.0 + m * m;
  const double rho = a - std::sqrt(a * a - 1.0);
  return std::pow(rho, std::abs(x)) / (a - rho);
}

// Dense Gaussian elimination for (-s Laplacian + m^2) on a 2D torus of side M.
std::vector<double> dense_torus(double m, int M, double s) {
  const int n = M * M;
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0), b(n, 0.0);
  auto id = [M](int x, int y) { return ((x + M) % M) * M + (y + M) % M; };
  for (int x = 0; x < M; ++x)
    for (int y = 0; y < M; ++y) {
      const int r = id(x, y);
      a[static_cast<std::size_t>(r) * n + r] += 4.0 * s + m * m;
      for (int c : {id(x + 1, y), id(x - 1, y), id(x, y + 1), id(x, y - 1)}) a[static_cast<std::size_t>(r) * n + c] -= s;
    }
  b[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) {
      const double f = a[static_cast<std::size_t>(i) * n + k] / a[static_cast<std::size_t>(k) * n + k];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] -= f * a[static_cast<std::size_t>(k) * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double v = b[i];
    for (int j = i + 1; j < n; ++j) v -= a[static_cast<std::size_t>(i) * n + j] * x[j];
    x[i] = v / a[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

const std::vector<std::vector<int>> kStencil = {{0, 0},  {1, 0},  {-1, 0}, {0, 1}, {0, -1},
                                                {1, 1},  {-1, -1}, {2, 0}, {0, 3}};

}  // namespace

TEST_CASE("K0 against Boost and its integral") {
  for (double x = 0.01; x < 60.0; x *= 1.13) {
    const double ref = boost::math::cyl_bessel_k(0, x);
    CHECK(std::abs(bessel_k0(x) / ref - 1.0) < 1e-9);
  }
  for (double x : {kBesselK0Switch - 1e-9, kBesselK0Switch + 1e-9})
    CHECK(std::abs(bessel_k0(x) / boost::math::cyl_bessel_k(0, x) - 1.0) < 1e-9);

  // K0(1) = int_0^inf exp(-cosh t) dt; the trapezoid rule is spectrally
  // accurate for this analytic, doubly-exponentially decaying integrand.
  const double step = 0.01;
  double integral = 0.5 * std::exp(-1.0);
  for (int k = 1; k * step < 8.0; ++k) integral += std::exp(-std::cosh(k * step));
  integral *= step;
  CHECK(std::abs(bessel_k0(1.0) - integral) < 1e-8);
  CHECK_THROWS(bessel_k0(0.0));
  CHECK_THROWS(bessel_k0(-1.0));
}

TEST_CASE("Fourier torus table") {
  SUBCASE("matches a dense solve") {
    for (double m : {0.3, 1.0}) {
      auto t = green_fourier(m, 2, 16, 0.5);
      auto ref = dense_torus(m, 16, 0.5);
      for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(t.values[k] - ref[k]) < 1e-12);
    }
  }
  SUBCASE("1D closed form") {
    auto t = green_fourier(0.5, 1, 128);
    for (int x = -5; x <= 5; ++x) CHECK(std::abs(t.at({x}) - green_1d(0.5, x)) <= t.errbound + 1e-14);
    CHECK(t.errbound < 1e-8);
  }
  SUBCASE("symmetry, positivity, identity") {
    auto t = green_fourier(0.5, 2, 32);
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      auto c = t.coords(k);
      CHECK(t.values[k] > 0.0);
      CHECK(std::abs(t.at({-c[0], -c[1]}) - t.values[k]) < 1e-10);
      CHECK(std::abs(t.at({c[1], c[0]}) - t.values[k]) < 1e-10);
    }
    CHECK(operator_residual(t) < 1e-8);
  }
  SUBCASE("heavy mass") {
    auto t = green_fourier(10.0, 2, 16);
    CHECK(std::abs(t.at({0, 0}) / 0.01 - 1.0) < 0.02);
  }
  SUBCASE("self-convergence") {
    auto a = green_fourier(0.1, 2, 512), b = green_fourier(0.1, 2, 1024);
    CHECK(std::abs(a.at({0, 0}) - b.at({0, 0})) < 1e-6);
    CHECK(a.errbound < 1e-6);
  }
  CHECK_THROWS(green_fourier(0.0, 2, 32));
  CHECK_THROWS(green_fourier(-1.0, 2, 32));
  CHECK_THROWS(green_fourier(1.0, 2, 8));
}

TEST_CASE("walk series") {
  CHECK(green_walk({5, 4}, 0.5, 2, 8).value == 0.0);
  CHECK(green_walk({1, 0}, 0.5, 2, 8).value > 0.0);
  // parity: odd sites are only visited at odd times
  CHECK(green_walk({1, 0}, 0.5, 2, 1).value == doctest::Approx(1.0 / 1.25 / 1.25 / 4.0));

  for (int x : {0, 1, 4}) {
    auto w = green_walk({x}, 0.5, 1, 400);
    CHECK(std::abs(w.value - green_1d(0.5, x)) <= w.tail_bound + 1e-14);
  }

  auto a = green_walk({1, 0}, 1.0, 2, 40), b = green_walk({1, 0}, 1.0, 2, 80);
  CHECK(std::abs(a.value - b.value) <= a.tail_bound);
  CHECK(b.value >= a.value);

  auto t = green_fourier(0.5, 2, 128);
  auto w = green_walk({0, 0}, 0.5, 2, 200);
  CHECK(std::abs(w.value - t.at({0, 0})) <= w.tail_bound + torus_image_bound(0.5, 0.25, 2, 128, 0));
  CHECK_THROWS(green_walk({0, 0}, 0.5, 2, 0));
}

TEST_CASE("box solve") {
  SUBCASE("identity and symmetry") {
    for (double s : {0.25, 1.0}) {
      auto g = green_box(12, 0.5, s);
      CHECK(operator_residual(g) < 1e-8);
      CHECK(g.errbound <= 1e-9);
      for (std::size_t k = 0; k < g.values.size(); ++k) {
        auto c = g.coords(k);
        CHECK(g.values[k] >= 0.0);
        CHECK(std::abs(g.at({-c[0], c[1]}) - g.values[k]) < 1e-10);
        CHECK(std::abs(g.at({c[1], c[0]}) - g.values[k]) < 1e-10);
        if (std::abs(c[0]) == 12 || std::abs(c[1]) == 12) CHECK(g.values[k] == 0.0);
      }
    }
  }
  SUBCASE("below the full-lattice function and increasing in N") {
    auto full = green_fourier(0.2, 2, 256);
    auto g8 = green_box(8, 0.2, 0.25), g16 = green_box(16, 0.2, 0.25), g32 = green_box(32, 0.2, 0.25);
    for (const auto& x : kStencil) {
      CHECK(g8.at(x) <= g16.at(x) + 1e-12);
      CHECK(g16.at(x) <= g32.at(x) + 1e-12);
      CHECK(g32.at(x) <= full.at(x) + full.errbound);
      CHECK(g8.at(x) >= 0.0);
    }
    CHECK(g8.at({0, 0}) < g32.at({0, 0}));
  }
  SUBCASE("three methods agree") {
    for (double m : {0.5, 1.0}) {
      auto fourier = green_fourier(m, 2, 128);
      auto box = green_box(40, m, 0.25);
      const auto walk = green_walk(kStencil, m, 2, 300);
      for (std::size_t i = 0; i < kStencil.size(); ++i) {
        const auto& x = kStencil[i];
        const double tb = torus_image_bound(m, 0.25, 2, 128, 3);
        CHECK(std::abs(fourier.at(x) - walk[i].value) <= tb + walk[i].tail_bound + 1e-13);
        CHECK(std::abs(fourier.at(x) - box.at(x)) <= tb + box_exit_bound(m, 0.25, 40, 3) + 1e-9);
      }
    }
  }
  SUBCASE("boundary decomposition") {
    auto infinite = green_fourier(0.5, 2, 64);
    CHECK(boundary_decomposition_residual(6, 0.5, infinite) < 1e-8);
    const std::vector<int> origin{0, 0};
    auto h = exit_distribution(6, 0.5, 2, origin);
    double total = 0.0;
    for (double v : h) total += v;
    CHECK(total > 0.0);
    CHECK(total < 1.0);
    CHECK_THROWS(boundary_decomposition_residual(6, 0.4, infinite));
  }
  CHECK_THROWS_AS(green_box(3, 0.5, 0.25, 2, 1e-30), SolverError);
  CHECK_THROWS(green_box(1, 0.5, 0.25));
  CHECK_THROWS(green_box(4, 0.0, 0.25));
}

TEST_CASE("gradient sup") {
  GreenTable flat;
  flat.m = 1.0;
  flat.s = 0.25;
  flat.domain = GreenDomain::Torus;
  flat.size = 16;
  flat.values.assign(256, 3.5);
  CHECK(gradient_sup(flat) == 0.0);

  auto t = green_fourier(0.5, 2, 32);
  CHECK(std::abs(t.at({0, 0}) - t.at({1, 0})) == doctest::Approx(std::abs(t.at({0, 0}) - t.at({-1, 0}))).epsilon(1e-12));
  // at the source, G(0) - G(e1) = 1 - m^2 G(0) for s = 1/(2d)
  CHECK(gradient_sup(t) == doctest::Approx(1.0 - 0.25 * t.at({0, 0})).epsilon(1e-9));

  double hi = 0.0;
  for (double m : {0.05, 0.1, 0.5, 1.0}) hi = std::max(hi, gradient_sup(green_box(32, m, 0.25)));
  CHECK(hi <= 1.0);
}

TEST_CASE("asymptotic regimes") {
  auto t = green_fourier(0.1, 2, 1024);
  auto large = asymptote_compare(t, Regime::LargeDistance);
  CHECK(large.points >= 3);
  CHECK(large.b > 0.0);
  CHECK(large.r2 > 0.99);
  CHECK(large.k0_deviation < 0.05);

  auto small = asymptote_compare(green_fourier(0.01, 2, 1024), Regime::SmallDistance);
  CHECK(small.a > 0.0);
  CHECK_THROWS(asymptote_compare(t, Regime::SmallDistance));
  CHECK_THROWS(asymptote_compare(green_fourier(0.5, 1, 64), Regime::LargeDistance));
}

TEST_CASE("modified McBryan bound") {
  auto r = mcbryan_bound(5.0, 100.0, 0.1, 16);
  CHECK(r.raw_bound > 0.0);
  CHECK(r.raw_bound <= 1.0);
  // u = G_N / ((1+delta) beta) makes the quadratic form collapse:
  // linear + quadratic = -u0 / (2 beta)
  CHECK(r.linear + r.quadratic == doctest::Approx(-r.u0 / (2.0 * r.beta)).epsilon(1e-8));
  CHECK(r.cosh_edge <= r.quadratic);
  const int side = 2 * 16 + 1;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b)
      if (a == 0 || b == 0 || a == side - 1 || b == side - 1) CHECK(r.u[static_cast<std::size_t>(a) * side + b] == 0.0);

  auto frozen = mcbryan_bound(1e12, 100.0, 0.1, 8);
  CHECK(frozen.raw_bound == doctest::Approx(1.0).epsilon(1e-9));

  double prev = 2.0;
  for (double h : {1e2, 1e3, 1e4}) {
    const double b = mcbryan_bound(5.0, h, 0.1, 64).raw_bound;
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(mcbryan_bound(0.01, 100.0, 0.1, 8), PreconditionError);
  CHECK_THROWS(mcbryan_bound(5.0, 100.0, 1.5, 8));
  CHECK_THROWS(mcbryan_bound(5.0, -1.0, 0.1, 8));
}
