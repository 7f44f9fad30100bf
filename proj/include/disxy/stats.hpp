#pragma once

#include <cstdint>
#include <span>

namespace disxy::stats {

double mean(std::span<const double> x);
// Unbiased sample variance (n - 1 denominator); NaN for fewer than 2 values.
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
// Naive standard error of the mean, sqrt(var / n).
double standard_error(std::span<const double> x);

// Standard error of the mean from non-overlapping blocks of `block` records.
// Trailing records that do not fill a block are dropped. Falls back to the
// naive error when fewer than two blocks fit.
double block_standard_error(std::span<const double> x, std::size_t block = 20);

// Jackknife error from the n leave-one-out estimates.
double jackknife_error(std::span<const double> leave_one_out);

struct KsResult {
  double statistic;
  double p_value;
};

// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);
// One-sample test against Uniform[lo, hi).
KsResult ks_uniform(std::span<const double> x, double lo, double hi);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
  double low;
  double high;
};

// Wilson score interval; z = 1.959964 gives 95%.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.959963984540054);

struct LinearFit {
  double slope;
  double intercept;
  double r2;
  double slope_error;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Upper tail P(chi2_dof > statistic).
double chi_square_p(double statistic, double dof);

}  // namespace disxy::stats
