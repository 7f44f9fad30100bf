#pragma once

#include <stdexcept>

#include "disxy/disorder.hpp"
#include "disxy/model.hpp"

namespace disxy {

class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Mean-phase / relative-phase coordinates of one bilayer site.
struct CovAngles {
  double zeta;  // arg(e^{-i alpha/2} sigma^+ + e^{i alpha/2} sigma^-)
  double w;     // wrap(theta^+ - theta^- - alpha)
};

struct LayerAngles {
  double plus;
  double minus;
};

// Threshold on |e^{-i alpha/2} sigma^+ + e^{i alpha/2} sigma^-| below which the
// input is treated as lying on the singular set sigma^+ = -e^{i alpha} sigma^-.
inline constexpr double kCovSingularTolerance = 1e-12;

// alpha must be 0 or pi.
CovAngles cov_forward(double theta_plus, double theta_minus, double alpha);
// Inverse map; w = pi (the excluded point -1) is rejected.
LayerAngles cov_inverse(double zeta, double w, double alpha);

struct ExpansionResidual {
  double exact;      // bilayer energy
  double expansion;  // strong-disorder part plus (h/2) sum (tau - D/h)^2
  double constant;   // exact - expansion at the w = 0, grad theta = 0 reference state
  double residual;   // exact - expansion - constant
};

// Compares the bilayer energy of `config` with the leading terms of its
// large-h expansion in the (zeta, w) coordinates, tau_x = Im[e^{i alpha_x} w_x].
ExpansionResidual expansion_residual(const Configuration& config, const DisorderField& field, double h);

// Builds the bilayer configuration with mean phases `zeta` and relative
// phases `w` (site-wise cov_inverse).
Configuration bilayer_from_cov(std::span<const double> zeta, std::span<const double> w, const DisorderField& field);

}  // namespace disxy
