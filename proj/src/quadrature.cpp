#include "disxy/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace disxy {

double quadrature_expectation(std::span<const Coupling> couplings, std::span<const int> observable, int grid_points) {
  const std::size_t sites = observable.size();
  if (sites == 0 || sites > kMaxQuadratureSites)
    throw std::invalid_argument("quadrature supports 1 to 3 sites");
  if (grid_points < 64) throw std::invalid_argument("quadrature needs at least 64 grid points");
  double shift = 0.0;
  for (const auto& c : couplings) {
    if (c.m.size() != sites) throw std::invalid_argument("coupling multi-index has the wrong number of sites");
    if (!(c.J >= 0.0)) throw std::invalid_argument("general XY couplings must be nonnegative");
    shift += c.J;
  }

  const std::size_t g = static_cast<std::size_t>(grid_points);
  std::size_t total = 1;
  for (std::size_t i = 0; i < sites; ++i) total *= g;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(g);

  std::vector<std::size_t> idx(sites, 0);
  double z = 0.0, num = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t i = 0; i < sites; ++i) {
      idx[i] = rest % g;
      rest /= g;
    }
    auto phase = [&](std::span<const int> m) {
      double s = 0.0;
      for (std::size_t i = 0; i < sites; ++i) s += m[i] * (-std::numbers::pi + step * static_cast<double>(idx[i]));
      return s;
    };
    double expo = -shift;
    for (const auto& c : couplings)
      if (c.J != 0.0) expo += c.J * std::cos(phase(c.m));
    const double weight = std::exp(expo);
    z += weight;
    num += weight * std::cos(phase(observable));
  }
  return num / z;
}

}  // namespace disxy
