#pragma once

#include <span>
#include <utility>
#include <vector>

#include "disxy/mc.hpp"
#include "disxy/model.hpp"

namespace disxy {

// U = 1 - m4 / (3 m2^2). Throws for m2 <= 0.
double binder(double m2, double m4);

// Time averages of op^2 and op^4 over one chain, with block errors.
struct SampleMoments {
  double m2 = 0.0;
  double m4 = 0.0;
  double m2_err = 0.0;
  double m4_err = 0.0;
};

SampleMoments time_average(const ObservableSeries& series, std::size_t block = 20);

struct MomentEstimate {
  int N = 0;
  double h = 0.0;
  double beta = 0.0;
  std::size_t samples = 0;
  double m2 = 0.0;
  double m2_err = 0.0;
  double m4 = 0.0;
  double m4_err = 0.0;
  double U = 0.0;
  double U_err = 0.0;
};

// Means over disorder samples of the per-sample moments. Errors are
// leave-one-sample-out jackknife errors; U is formed from the averaged
// moments and carries its own jackknife error. Needs >= 2 samples.
MomentEstimate disorder_average(std::span<const SampleMoments> samples, int N, double h, double beta);
// Same from raw chains; all series must share one beta.
MomentEstimate disorder_average(std::span<const ObservableSeries> samples, int N, double h);

struct BinderCurve {
  int N = 0;
  std::vector<double> betas;
  std::vector<double> U;
};

inline constexpr double kBinderFloor = 0.02;

struct Crossing {
  bool found = false;
  double beta = 0.0;
  // More than one grid point attains the minimal |U_A / U_B - 1|.
  bool degenerate = false;
  double deviation = 0.0;
};

// Grid point minimizing |U_A / U_B - 1| among points with |U_A|, |U_B| > floor;
// ties go to the smaller beta. found == false when no point passes the floor.
Crossing crossing_temperature(const BinderCurve& a, const BinderCurve& b, double floor = kBinderFloor);

struct PairCrossing {
  int N_a = 0;
  int N_b = 0;
  Crossing crossing;
};

struct TcEstimate {
  double h = 0.0;
  double beta_c = 0.0;
  double error = 0.0;  // sample standard deviation over valid pairs; NaN for a single pair
  std::vector<PairCrossing> pairs;     // valid pairs
  std::vector<PairCrossing> excluded;  // pairs without a crossing
};

// Crossings for every pair of distinct sides, averaged. Throws when no pair
// has a crossing.
TcEstimate estimate_tc(std::span<const BinderCurve> curves, double h);
TcEstimate estimate_tc(std::vector<PairCrossing> pairs, double h);

struct InfraredCheck {
  double estimate = 0.0;
  double error = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // (bound - estimate) / error
};

double infrared_bound(double h, double beta, double volume);

// Compares the time average of (mean sin phi)^2 from a CleanWeak chain on a
// torus with h / (beta V).
InfraredCheck infrared_check(const ObservableSeries& series, Variant variant, Boundary boundary, double h,
                             double volume, std::size_t block = 20);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// Disorder-and-time average of the two-point channel with a jackknife error
// over samples.
Estimate two_point_tau(std::span<const ObservableSeries> samples);

}  // namespace disxy
