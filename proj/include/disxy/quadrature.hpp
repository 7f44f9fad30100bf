#pragma once

#include <span>
#include <vector>

namespace disxy {

// One term -J_m cos(m . theta) of a general XY Hamiltonian on a few sites.
struct Coupling {
  std::vector<int> m;
  double J;
};

inline constexpr int kMaxQuadratureSites = 3;

// <cos(m0 . theta)> under exp(-H) with H = -sum_m J_m cos(m . theta) and
// uniform a priori measure on each angle, by the tensor-product trapezoidal
// rule with `grid_points` nodes per angle. The integrand is smooth and
// periodic, so the rule converges faster than any power of 1/grid_points.
double quadrature_expectation(std::span<const Coupling> couplings, std::span<const int> observable, int grid_points);

}  // namespace disxy
