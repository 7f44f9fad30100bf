#include "disxy/green.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "disxy/special.hpp"
#include "disxy/stats.hpp"

namespace disxy {

std::string to_string(GreenDomain domain) { return domain == GreenDomain::Torus ? "torus" : "box"; }

namespace {

std::size_t ipow(int base, int d) {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(base);
  return n;
}

std::vector<std::ptrdiff_t> strides(int side, int d) {
  std::vector<std::ptrdiff_t> st(d);
  st[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) st[i] = st[i + 1] * side;
  return st;
}

void check_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("mass m must be positive");
}

void check_dim(int d) {
  if (d < 1 || d > 4) throw std::invalid_argument("dimension must be 1..4");
}

// Walks a box layout: calls f(flat index, coordinates in -N..N) for every site.
template <class F>
void for_each_box_site(int N, int d, F&& f) {
  const int side = 2 * N + 1;
  const std::size_t n = ipow(side, d);
  std::vector<int> c(d, -N);
  for (std::size_t k = 0; k < n; ++k) {
    f(k, c);
    for (int i = d - 1; i >= 0; --i) {
      if (++c[i] <= N) break;
      c[i] = -N;
    }
  }
}

bool on_shell(const std::vector<int>& c, int N) {
  for (int x : c)
    if (x == N || x == -N) return true;
  return false;
}

}  // namespace

double GreenTable::at(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("coordinate rank mismatch");
  const int sd = side();
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i) {
    int c = x[i];
    if (domain == GreenDomain::Torus) {
      c %= size;
      if (c < 0) c += size;
    } else {
      if (c < -size || c > size) return 0.0;
      c += size;
    }
    k = k * static_cast<std::size_t>(sd) + static_cast<std::size_t>(c);
  }
  return values[k];
}

std::vector<int> GreenTable::coords(std::size_t k) const {
  const int sd = side();
  std::vector<int> c(dim);
  for (int i = dim - 1; i >= 0; --i) {
    c[i] = static_cast<int>(k % static_cast<std::size_t>(sd));
    k /= static_cast<std::size_t>(sd);
    if (domain == GreenDomain::Box)
      c[i] -= size;
    else if (c[i] >= size - size / 2)
      c[i] -= size;
  }
  return c;
}

double green_decay_rate(double m, double s) { return std::acosh(1.0 + m * m / (4.0 * s)); }

double torus_image_bound(double m, double s, int dim, int M, int r) {
  const double mu = green_decay_rate(m, s);
  double sum = 0.0;
  for (int k = 1; k < 10000; ++k) {
    const double shell = std::pow(2.0 * k + 1.0, dim) - std::pow(2.0 * k - 1.0, dim);
    const double term = shell * std::exp(-mu * (static_cast<double>(k) * M - r));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return 2.0 / (m * m) * sum;
}

double box_exit_bound(double m, double s, int N, int) {
  return 2.0 / (m * m) * std::exp(-green_decay_rate(m, s) * N);
}

GreenTable green_fourier(double m, int dim, int M, double s) {
  check_mass(m);
  check_dim(dim);
  if (M < 16) throw std::invalid_argument("torus side must be >= 16");
  if (!(s > 0.0)) throw std::invalid_argument("laplacian scale must be positive");
  const std::size_t n = ipow(M, dim);

  std::vector<double> sin2(M);
  for (int j = 0; j < M; ++j) {
    const double t = 2.0 * std::sin(std::numbers::pi * j / M);
    sin2[j] = t * t;
  }
  auto* buf = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!buf) throw std::bad_alloc();
  std::vector<int> dims(dim, M);
  fftw_plan plan = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);

  std::vector<int> j(dim, 0);
  for (std::size_t k = 0; k < n; ++k) {
    double lam = m * m;
    for (int i = 0; i < dim; ++i) lam += s * sin2[j[i]];
    buf[k][0] = 1.0 / lam;
    buf[k][1] = 0.0;
    for (int i = dim - 1; i >= 0; --i) {
      if (++j[i] < M) break;
      j[i] = 0;
    }
  }
  fftw_execute(plan);

  GreenTable t;
  t.m = m;
  t.s = s;
  t.domain = GreenDomain::Torus;
  t.dim = dim;
  t.size = M;
  t.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) t.values[k] = buf[k][0] / static_cast<double>(n);
  fftw_destroy_plan(plan);
  fftw_free(buf);
  t.errbound = torus_image_bound(m, s, dim, M, M / 2);
  return t;
}

std::vector<WalkValue> green_walk(std::span<const std::vector<int>> points, double m, int dim, int nmax) {
  check_mass(m);
  check_dim(dim);
  if (nmax < 1) throw std::invalid_argument("nMax must be >= 1");
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("coordinate rank mismatch");

  const double q = 1.0 / (1.0 + m * m);
  const double tail = std::pow(q, nmax + 2) / (1.0 - q);

  // walk array covers |x|_inf <= nmax plus one padding layer
  const int R = nmax + 1;
  const int side = 2 * R + 1;
  if (static_cast<double>(side) > std::pow(4e7, 1.0 / dim)) throw std::invalid_argument("nMax too large for the walk table");
  const std::size_t n = ipow(side, dim);
  const auto st = strides(side, dim);

  std::vector<std::ptrdiff_t> where(points.size(), -1);
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::ptrdiff_t k = 0;
    bool inside = true;
    for (int i = 0; i < dim; ++i) {
      inside = inside && std::abs(points[p][i]) <= nmax;
      k += (points[p][i] + R) * st[i];
    }
    if (inside) where[p] = k;
  }

  std::vector<double> cur(n, 0.0), next(n, 0.0);
  std::size_t center = 0;
  for (int i = 0; i < dim; ++i) center += static_cast<std::size_t>(R) * static_cast<std::size_t>(st[i]);
  cur[center] = 1.0;

  std::vector<WalkValue> out(points.size());
  for (auto& o : out) o.tail_bound = tail;
  const double hop = 1.0 / (2.0 * dim);
  double weight = q;  // q^(n+1)
  std::vector<int> c(dim);
  for (int step = 0; step <= nmax; ++step) {
    for (std::size_t p = 0; p < points.size(); ++p)
      if (where[p] >= 0) out[p].value += weight * cur[static_cast<std::size_t>(where[p])];
    if (step == nmax) break;
    // reachable sites after `step` moves have |x|_inf <= step < R, so the
    // padding layer never needs neighbours outside the array
    std::fill(next.begin(), next.end(), 0.0);
    const int reach = step;
    std::fill(c.begin(), c.end(), -reach);
    while (true) {
      std::ptrdiff_t k = 0;
      for (int i = 0; i < dim; ++i) k += (c[i] + R) * st[i];
      const double v = cur[static_cast<std::size_t>(k)];
      if (v != 0.0) {
        const double w = v * hop;
        for (int i = 0; i < dim; ++i) {
          next[static_cast<std::size_t>(k + st[i])] += w;
          next[static_cast<std::size_t>(k - st[i])] += w;
        }
      }
      int i = dim - 1;
      while (i >= 0 && ++c[i] > reach) c[i--] = -reach;
      if (i < 0) break;
    }
    std::swap(cur, next);
    weight *= q;
  }
  return out;
}

WalkValue green_walk(const std::vector<int>& x, double m, int dim, int nmax) {
  return green_walk(std::span<const std::vector<int>>(&x, 1), m, dim, nmax)[0];
}

namespace {

// y = (-s Laplacian + m^2) x on Lambda_{N-1}; shell entries of x must be 0
// and shell entries of y are set to 0.
void apply_box_operator(const std::vector<std::uint8_t>& interior, const std::vector<std::ptrdiff_t>& st, double diag,
                        double s, const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!interior[k]) {
      y[k] = 0.0;
      continue;
    }
    double nb = 0.0;
    for (auto d : st) nb += x[k + d] + x[k - d];
    y[k] = diag * x[k] - s * nb;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GreenTable green_box(int N, double m, double s, int dim, double tolerance) {
  check_mass(m);
  check_dim(dim);
  if (N < 2) throw std::invalid_argument("box size N must be >= 2");
  if (!(s > 0.0)) throw std::invalid_argument("laplacian scale must be positive");
  const int side = 2 * N + 1;
  const std::size_t n = ipow(side, dim);
  const auto st = strides(side, dim);
  std::vector<std::uint8_t> interior(n, 0);
  std::size_t origin = 0;
  for_each_box_site(N, dim, [&](std::size_t k, const std::vector<int>& c) {
    interior[k] = !on_shell(c, N);
    bool zero = true;
    for (int x : c) zero = zero && x == 0;
    if (zero) origin = k;
  });
  const double diag = 2.0 * dim * s + m * m;

  std::vector<double> x(n, 0.0), r(n, 0.0), p(n, 0.0), ap(n, 0.0);
  r[origin] = 1.0;
  p = r;
  double rr = 1.0;
  const std::size_t unknowns = ipow(side - 2, dim);
  const std::size_t max_iter = std::max<std::size_t>(1000, 20 * unknowns);
  std::size_t it = 0;
  for (; it < max_iter && std::sqrt(rr) > tolerance; ++it) {
    apply_box_operator(interior, st, diag, s, p, ap);
    const double alpha = rr / dot(p, ap);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  // true residual, not the recursively updated one
  apply_box_operator(interior, st, diag, s, x, ap);
  ap[origin] -= 1.0;
  const double residual = std::sqrt(dot(ap, ap));
  if (!(residual <= tolerance * 10.0))
    throw SolverError("box solve did not converge after " + std::to_string(it) + " iterations; residual " +
                          std::to_string(residual),
                      residual);

  GreenTable t;
  t.m = m;
  t.s = s;
  t.domain = GreenDomain::Box;
  t.dim = dim;
  t.size = N;
  t.values = std::move(x);
  t.errbound = residual;
  return t;
}

double operator_residual(const GreenTable& t) {
  const int d = t.dim;
  const double diag = 2.0 * d * t.s + t.m * t.m;
  double worst = 0.0;
  std::vector<int> c;
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    c = t.coords(k);
    if (t.domain == GreenDomain::Box && on_shell(c, t.size)) continue;
    double nb = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int sgn : {-1, 1}) {
        c[i] += sgn;
        nb += t.at(c);
        c[i] -= sgn;
      }
    }
    bool zero = true;
    for (int x : c) zero = zero && x == 0;
    worst = std::max(worst, std::abs(diag * t.values[k] - t.s * nb - (zero ? 1.0 : 0.0)));
  }
  return worst;
}

std::vector<double> exit_distribution(int N, double m, int dim, std::span<const int> x) {
  check_mass(m);
  check_dim(dim);
  if (N < 2) throw std::invalid_argument("box size N must be >= 2");
  if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("coordinate rank mismatch");
  for (int v : x)
    if (std::abs(v) >= N) throw std::invalid_argument("start must lie inside Lambda_{N-1}");
  const int side = 2 * N + 1;
  const std::size_t n = ipow(side, dim);
  const auto st = strides(side, dim);
  std::vector<std::uint8_t> interior(n, 0);
  for_each_box_site(N, dim, [&](std::size_t k, const std::vector<int>& c) { interior[k] = !on_shell(c, N); });

  std::size_t start = 0;
  for (int i = 0; i < dim; ++i) start += static_cast<std::size_t>(x[i] + N) * static_cast<std::size_t>(st[i]);
  const double q = 1.0 / (1.0 + m * m);
  const double hop = q / (2.0 * dim);

  std::vector<double> exit(n, 0.0), cur(n, 0.0), next(n, 0.0);
  cur[start] = 1.0;
  double mass = 1.0;
  while (mass > 1e-18) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (cur[k] == 0.0) continue;
      const double w = cur[k] * hop;
      for (auto d : st)
        for (std::ptrdiff_t j : {static_cast<std::ptrdiff_t>(k) + d, static_cast<std::ptrdiff_t>(k) - d}) {
          auto& dst = interior[static_cast<std::size_t>(j)] ? next : exit;
          dst[static_cast<std::size_t>(j)] += w;
        }
    }
    std::swap(cur, next);
    mass = 0.0;
    for (double v : cur) mass += v;
  }
  return exit;
}

double boundary_decomposition_residual(int N, double m, const GreenTable& infinite) {
  const int d = infinite.dim;
  if (infinite.domain != GreenDomain::Torus) throw std::invalid_argument("infinite-lattice table must be a torus");
  if (std::abs(infinite.m - m) > 1e-15 || std::abs(infinite.s - walk_scale(d)) > 1e-15)
    throw std::invalid_argument("torus table must match m and use s = 1/(2d)");
  // The split at the first exit is exact on the torus too, as long as the
  // box does not wrap.
  if (infinite.size < 2 * N + 2) throw std::invalid_argument("torus too small for the box");
  const auto box = green_box(N, m, walk_scale(d), d, 1e-13);
  double worst = 0.0;
  for_each_box_site(N, d, [&](std::size_t k, const std::vector<int>& x) {
    if (on_shell(x, N)) return;
    const auto h = exit_distribution(N, m, d, x);
    double through = 0.0;
    for (std::size_t z = 0; z < h.size(); ++z)
      if (h[z] != 0.0) through += h[z] * infinite.at(box.coords(z));
    worst = std::max(worst, std::abs(box.values[k] - (infinite.at(x) - through)));
  });
  return worst;
}

double gradient_sup(const GreenTable& t) {
  const int d = t.dim;
  const int sd = t.side();
  const auto st = strides(sd, d);
  double worst = 0.0;
  std::vector<int> c(d, 0);
  for (std::size_t k = 0; k < t.values.size(); ++k) {
    for (int i = 0; i < d; ++i) {
      double nb;
      if (c[i] + 1 < sd)
        nb = t.values[k + static_cast<std::size_t>(st[i])];
      else if (t.domain == GreenDomain::Torus)
        nb = t.values[k - static_cast<std::size_t>((sd - 1) * st[i])];
      else
        continue;
      worst = std::max(worst, std::abs(t.values[k] - nb));
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++c[i] < sd) break;
      c[i] = 0;
    }
  }
  return worst;
}

RegimeFit asymptote_compare(const GreenTable& t, Regime regime) {
  if (t.dim != 2) throw std::invalid_argument("asymptotics are for 2D tables");
  if (!(t.m <= 1.0)) throw std::invalid_argument("asymptotics need m <= 1");
  const double m = t.m;
  const double g0 = t.at({0, 0});
  const int rmax = t.domain == GreenDomain::Torus ? t.size / 4 : t.size - 1;

  std::vector<double> xs, ys, gs, rs;
  for (int r = 1; r <= rmax; ++r) {
    const double mr = m * r;
    const double g = t.at({r, 0});
    if (regime == Regime::SmallDistance) {
      if (mr > 0.2) break;
      xs.push_back(std::log(1.0 / mr));
      ys.push_back(g);
    } else {
      if (mr < 3.0) continue;
      if (!(g > 1e-10 * g0)) break;
      xs.push_back(mr);
      ys.push_back(std::log(g * std::sqrt(mr)));
    }
    gs.push_back(g);
    rs.push_back(r);
  }
  if (xs.size() < 3)
    throw std::invalid_argument(std::string("fewer than 3 sites in the ") +
                                (regime == Regime::SmallDistance ? "small" : "large") + "-distance regime");

  const auto fit = stats::linear_fit(xs, ys);
  RegimeFit out;
  out.regime = regime;
  out.points = static_cast<int>(xs.size());
  out.r2 = fit.r2;
  if (regime == Regime::SmallDistance) {
    out.a = fit.slope;
    out.b = fit.intercept;
  } else {
    out.a = std::exp(fit.intercept);
    out.b = -fit.slope;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double model = regime == Regime::SmallDistance
                             ? out.a * xs[i] + out.b
                             : out.a * std::exp(-out.b * xs[i]) / std::sqrt(xs[i]);
    out.max_relative_residual = std::max(out.max_relative_residual, std::abs(model / gs[i] - 1.0));
    const double cont = bessel_k0(m * rs[i] / std::sqrt(t.s)) / (2.0 * std::numbers::pi * t.s);
    out.k0_deviation = std::max(out.k0_deviation, std::abs(gs[i] / cont - 1.0));
  }
  return out;
}

McBryanReport mcbryan_bound(double beta, double h, double delta, int N) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const double m2 = 1.0 / (h * (1.0 + delta));
  const auto g = green_box(N, std::sqrt(m2), 1.0, 2);

  McBryanReport r;
  r.beta = beta;
  r.h = h;
  r.delta = delta;
  r.N = N;
  r.u.resize(g.values.size());
  for (std::size_t k = 0; k < g.values.size(); ++k) r.u[k] = g.values[k] / ((1.0 + delta) * beta);
  for_each_box_site(N, 2, [&](std::size_t k, const std::vector<int>& c) {
    if (on_shell(c, N) && r.u[k] != 0.0) throw std::logic_error("shift does not vanish on the boundary");
  });
  const int side = 2 * N + 1;
  r.u0 = r.u[static_cast<std::size_t>(N) * side + N];

  // cosh(x) - 1 = 2 sinh^2(x/2) keeps small arguments accurate
  auto cosh_m1 = [](double x) {
    const double sh = std::sinh(x / 2.0);
    return 2.0 * sh * sh;
  };
  double grad2 = 0.0, u2 = 0.0, edge = 0.0, site = 0.0;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const std::size_t k = static_cast<std::size_t>(a) * side + b;
      u2 += r.u[k] * r.u[k];
      site += cosh_m1(2.0 * r.u[k]);
      for (std::size_t nb : {a + 1 < side ? k + side : k, b + 1 < side ? k + 1 : k}) {
        if (nb == k) continue;
        const double gu = r.u[nb] - r.u[k];
        const double c = cosh_m1(gu);
        if (c > 0.5 * (1.0 + delta) * gu * gu)
          throw PreconditionError("cosh(grad u) - 1 exceeds (1+delta)/2 (grad u)^2 on some edge; beta is too small");
        grad2 += gu * gu;
        edge += c;
      }
    }
  r.linear = -r.u0 / beta;
  r.quadratic = 0.5 * (1.0 + delta) * (grad2 + m2 * u2);
  r.cosh_edge = edge;
  r.cosh_site = site / (4.0 * h);
  r.raw_bound = std::exp(beta * (r.linear + r.cosh_edge + r.cosh_site));
  return r;
}

}  // namespace disxy
