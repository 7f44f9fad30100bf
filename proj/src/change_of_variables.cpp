#include "disxy/change_of_variables.hpp"

#include <cmath>
#include <numbers>

namespace disxy {

namespace {

double check_alpha(double alpha) {
  if (std::abs(alpha) < 1e-12) return 0.0;
  if (std::abs(alpha - std::numbers::pi) < 1e-12) return std::numbers::pi;
  throw std::invalid_argument("alpha must be 0 or pi");
}

double bilayer_energy(const Configuration& config, const DisorderField& field, double h) {
  const auto& g = field.graph();
  double e = 0.0;
  for (int l = 0; l < 2; ++l) {
    const auto t = config.layer(l);
    for (const auto& ed : g.edges()) e -= std::cos(t[ed.a] - t[ed.b]);
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) e -= h * field.cos_alpha(v) * std::cos(config.phi(v));
  return e;
}

double expansion_energy(std::span<const double> theta, std::span<const double> tau, const DisorderField& field,
                        double h) {
  const auto& g = field.graph();
  std::vector<double> d(g.vertex_count(), 0.0);
  double e = 0.0;
  for (const auto& ed : g.edges()) {
    const double c = std::cos(theta[ed.a] - theta[ed.b]);
    if (edge_alpha_gradient(field, ed) == EdgeClass::Same) {
      e -= 2.0 * c;
    } else {
      d[ed.a] += c;
      d[ed.b] += c;
    }
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const double r = tau[v] - d[v] / h;
    e += -d[v] * d[v] / (2.0 * h) + 0.5 * h * r * r;
  }
  return e;
}

struct Split {
  std::vector<double> zeta, w, tau;
};

Split split(const Configuration& config, const DisorderField& field) {
  const std::size_t n = config.sites();
  Split s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (Vertex v = 0; v < n; ++v) {
    const double alpha = field.vacant(v) ? std::numbers::pi : 0.0;
    const auto c = cov_forward(config.angle(v, 0), config.angle(v, 1), alpha);
    s.zeta[v] = c.zeta;
    s.w[v] = c.w;
    s.tau[v] = field.cos_alpha(v) * std::sin(c.w);
  }
  return s;
}

}  // namespace

CovAngles cov_forward(double theta_plus, double theta_minus, double alpha) {
  alpha = check_alpha(alpha);
  const double re = std::cos(theta_plus - alpha / 2) + std::cos(theta_minus + alpha / 2);
  const double im = std::sin(theta_plus - alpha / 2) + std::sin(theta_minus + alpha / 2);
  if (std::hypot(re, im) < kCovSingularTolerance)
    throw SingularInputError("sigma^+ = -e^{i alpha} sigma^-: change of variables undefined");
  return {wrap_angle(std::atan2(im, re)), wrap_angle(theta_plus - theta_minus - alpha)};
}

LayerAngles cov_inverse(double zeta, double w, double alpha) {
  alpha = check_alpha(alpha);
  w = wrap_angle(w);
  if (std::numbers::pi - w < kCovSingularTolerance) throw SingularInputError("w = -1 lies outside the image");
  const double half = (alpha + w) / 2;
  return {wrap_angle(zeta + half), wrap_angle(zeta - half)};
}

Configuration bilayer_from_cov(std::span<const double> zeta, std::span<const double> w, const DisorderField& field) {
  const std::size_t n = field.size();
  if (zeta.size() != n || w.size() != n) throw std::invalid_argument("field sizes do not match the disorder field");
  std::vector<double> plus(n), minus(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto l = cov_inverse(zeta[v], w[v], field.vacant(static_cast<Vertex>(v)) ? std::numbers::pi : 0.0);
    plus[v] = l.plus;
    minus[v] = l.minus;
  }
  return Configuration::from_layers(std::move(plus), std::move(minus));
}

ExpansionResidual expansion_residual(const Configuration& config, const DisorderField& field, double h) {
  if (!config.is_bilayer()) throw std::invalid_argument("expansion residual needs a bilayer configuration");
  if (config.sites() != field.size()) throw std::invalid_argument("configuration does not match the disorder field");
  if (!(h > 0.0)) throw std::invalid_argument("disorder strength h must be positive");

  const auto s = split(config, field);
  ExpansionResidual r{};
  r.exact = bilayer_energy(config, field, h);
  r.expansion = expansion_energy(s.zeta, s.tau, field, h);

  const std::vector<double> zeros(config.sites(), 0.0);
  const auto ref = bilayer_from_cov(zeros, zeros, field);
  r.constant = bilayer_energy(ref, field, h) - expansion_energy(zeros, zeros, field, h);
  r.residual = r.exact - r.expansion - r.constant;
  return r;
}

}  // namespace disxy
