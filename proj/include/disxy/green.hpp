#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace disxy {

enum class GreenDomain { Torus, Box };

std::string to_string(GreenDomain domain);

// G = (-s Laplacian + m^2)^{-1} delta_0 on a torus of side M, or on the box
// {-N..N}^d with G = 0 on the outer shell (unknowns on Lambda_{N-1}).
struct GreenTable {
  double m = 0.0;
  double s = 0.0;
  GreenDomain domain = GreenDomain::Torus;
  int dim = 2;
  int size = 0;  // M for the torus, N for the box
  // Torus: row-major over 0..M-1 per axis. Box: row-major over -N..N.
  std::vector<double> values;
  // Torus: sup over the table of the distance to the infinite-lattice
  // function. Box: final relative CG residual.
  double errbound = 0.0;

  int side() const noexcept { return domain == GreenDomain::Torus ? size : 2 * size + 1; }
  // Torus coordinates wrap; box coordinates outside {-N..N}^d read 0.
  double at(std::span<const int> x) const;
  double at(std::initializer_list<int> x) const { return at(std::span<const int>(x.begin(), x.size())); }
  // Signed coordinates of table entry k (torus: wrapped into [-M/2, M/2)).
  std::vector<int> coords(std::size_t k) const;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline double walk_scale(int dim) noexcept { return 1.0 / (2.0 * dim); }

// Rigorous decay bound for the infinite-lattice function:
// G(y) <= (2/m^2) exp(-mu |y|_inf) with cosh(mu) = 1 + m^2 / (4 s).
double green_decay_rate(double m, double s);
// Bound on |G_torus(x) - G(x)| for |x|_inf <= r, from summing the decay
// bound over the periodic images.
double torus_image_bound(double m, double s, int dim, int M, int r);
// Bound on G(x) - G_N(x) for |x|_inf <= r: the walk must reach the shell.
double box_exit_bound(double m, double s, int N, int r);

// Exact torus function by the discrete Fourier sum over momenta 2 pi j / M.
GreenTable green_fourier(double m, int dim, int M, double s);
inline GreenTable green_fourier(double m, int dim, int M) { return green_fourier(m, dim, M, walk_scale(dim)); }

struct WalkValue {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the omitted n > nMax terms
};

// G(x) = q sum_{n <= nMax} q^n P[S_n = x], q = 1/(1+m^2), for the simple
// random walk from the origin (s = 1/(2d)). P is propagated exactly.
std::vector<WalkValue> green_walk(std::span<const std::vector<int>> points, double m, int dim, int nmax);
WalkValue green_walk(const std::vector<int>& x, double m, int dim, int nmax);

// Conjugate-gradient solve to relative residual `tolerance`.
GreenTable green_box(int N, double m, double s, int dim = 2, double tolerance = 1e-10);

// max |(-s Laplacian + m^2) G - delta_0| over the torus, or over Lambda_{N-1}.
double operator_residual(const GreenTable& table);

// H(z) = E_x[q^tau; S_tau = z] for the walk from x killed at rate q and
// stopped on first reaching the shell |z|_inf = N. Same layout as a box table.
std::vector<double> exit_distribution(int N, double m, int dim, std::span<const int> x);

// max over x in Lambda_{N-1} of |G_N(x) - (G(x) - sum_z H_x(z) G(z))|, with G
// read from `infinite` (a torus table at s = 1/(2d) wide enough to contain
// the shell) and G_N from green_box.
double boundary_decomposition_residual(int N, double m, const GreenTable& infinite);

// max over edges of |G(x) - G(y)| (torus edges wrap; box edges include the shell).
double gradient_sup(const GreenTable& table);

enum class Regime { SmallDistance, LargeDistance };

struct RegimeFit {
  Regime regime;
  int points = 0;
  // Small: G ~ a log(1/(m r)) + b. Large: G ~ a exp(-b m r)/sqrt(m r).
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
  double max_relative_residual = 0.0;
  // max |G / G_cont - 1| with G_cont = K0(m r / sqrt(s)) / (2 pi s).
  double k0_deviation = 0.0;
};

// 2D tables only, m <= 1. Uses sites on the positive first axis: the small
// regime takes 0 < m r <= 0.2, the large regime m r >= 3 while G is above
// 1e-10 G(0) (and r < side/4 on a torus). Fewer than 3 points throws.
RegimeFit asymptote_compare(const GreenTable& table, Regime regime);

struct McBryanReport {
  double beta = 0.0;
  double h = 0.0;
  double delta = 0.0;
  int N = 0;
  std::vector<double> u;  // box layout over {-N..N}^2
  double u0 = 0.0;
  double linear = 0.0;      // -u0 / beta
  double quadratic = 0.0;   // (1+delta)/2 [sum_e (grad u)^2 + m^2 sum u^2]
  double cosh_edge = 0.0;   // sum_e (cosh grad u - 1)
  double cosh_site = 0.0;   // (1/4h) sum_x (cosh 2u - 1)
  double raw_bound = 0.0;   // exp(beta (linear + cosh_edge + cosh_site))
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Shift u = G_N / ((1+delta) beta) with G_N the s = 1 box function at
// m^2 = 1/(h(1+delta)) in d = 2. Throws PreconditionError when some edge has
// cosh(grad u) - 1 > (1+delta)/2 (grad u)^2.
McBryanReport mcbryan_bound(double beta, double h, double delta, int N);

}  // namespace disxy
