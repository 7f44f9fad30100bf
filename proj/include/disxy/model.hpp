#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "disxy/disorder.hpp"
#include "disxy/lattice.hpp"

namespace disxy {

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

class FrozenSiteError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Per-site angles for one layer (a SpinConfig) or two layers (a BilayerConfig,
// layer 0 = theta^+, layer 1 = theta^-). Every stored angle is wrapped.
class Configuration {
 public:
  Configuration(std::size_t sites, int layers);
  static Configuration single(std::size_t sites) { return {sites, 1}; }
  static Configuration bilayer(std::size_t sites) { return {sites, 2}; }
  static Configuration from_angles(std::vector<double> angles);
  static Configuration from_layers(std::vector<double> plus, std::vector<double> minus);

  std::size_t sites() const noexcept { return sites_; }
  int layers() const noexcept { return layers_; }
  bool is_bilayer() const noexcept { return layers_ == 2; }

  double angle(Vertex site, int layer = 0) const noexcept { return angles_[layer * sites_ + site]; }
  void set(Vertex site, double value, int layer = 0) noexcept { angles_[layer * sites_ + site] = wrap_angle(value); }
  std::span<const double> layer(int l) const noexcept { return {angles_.data() + l * sites_, sites_}; }
  std::span<const double> raw() const noexcept { return angles_; }
  // Interlayer phase difference phi = wrap(theta^+ - theta^-).
  double phi(Vertex site) const noexcept { return wrap_angle(angles_[site] - angles_[sites_ + site]); }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::size_t sites_;
  int layers_;
  std::vector<double> angles_;
};

enum class Variant { XY, Bilayer, EffectiveStrong, EffectiveWeak, CleanWeak };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

// D_x = sum over different-alpha edges at x of cos(grad theta).
class DivergenceCache {
 public:
  DivergenceCache() = default;
  explicit DivergenceCache(std::vector<double> values) : values_(std::move(values)) {}
  std::span<const double> values() const noexcept { return values_; }
  double operator[](Vertex v) const noexcept { return values_[v]; }
  double& at(Vertex v) noexcept { return values_[v]; }
  bool empty() const noexcept { return values_.empty(); }

 private:
  std::vector<double> values_;
};

// From-scratch divergence for any single-layer configuration.
std::vector<double> divergence(const DisorderField& field, const Configuration& config);

// tau_x = D_x / h.
std::vector<double> tau_field(const Configuration& config, const DisorderField& field, double h);

// Hamiltonian definitions (coupling of the plain XY bonds is 1):
//   XY               -sum_e cos grad theta
//   Bilayer          -sum_{l=+-} sum_e cos grad theta^l - h sum_x cos(phi_x - alpha_x)
//   EffectiveStrong  -2 sum_{grad alpha = 0} cos grad theta - (1/2h) sum_x D_x^2
//   EffectiveWeak    -2 sum_e cos grad phi - h sum_x cos(phi_x - alpha_x)
//   CleanWeak        -sum_e cos grad phi - (1/2h) sum_x cos^2 phi_x
// On wired-frame graphs the frame sites are frozen at angle 0.
class Model {
 public:
  Model(Variant variant, double h, std::shared_ptr<const LatticeGraph> graph,
        std::shared_ptr<const DisorderField> disorder = nullptr);

  Variant variant() const noexcept { return variant_; }
  double h() const noexcept { return h_; }
  const LatticeGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const LatticeGraph>& graph_ptr() const noexcept { return graph_; }
  const DisorderField* disorder() const noexcept { return disorder_.get(); }
  Boundary boundary() const noexcept { return graph_->boundary(); }
  int layers() const noexcept { return variant_ == Variant::Bilayer ? 2 : 1; }
  // Graph distance over which a single-site update changes local energies.
  int interaction_radius() const noexcept { return variant_ == Variant::EffectiveStrong ? 2 : 1; }
  bool uses_cache() const noexcept { return variant_ == Variant::EffectiveStrong; }

  // All angles zero (frame sites included).
  Configuration ground_configuration() const;
  // Uniform angles on free sites, zero on frozen sites.
  Configuration random_configuration(std::uint64_t key) const;

  DivergenceCache make_cache(const Configuration& config) const;

  double energy(const Configuration& config) const;
  // energy(after) - energy(before) for setting (site, layer) to new_angle.
  // `cache` must be current for EffectiveStrong and is ignored otherwise.
  double delta(const Configuration& config, const DivergenceCache& cache, Vertex site, double new_angle,
               int layer = 0) const;
  void apply(Configuration& config, DivergenceCache& cache, Vertex site, double new_angle, int layer = 0) const;

  // Local order parameter: sin phi (Bilayer), sin of the field angle (XY,
  // EffectiveWeak, CleanWeak), tau_x = D_x / h (EffectiveStrong).
  double local_order(const Configuration& config, const DivergenceCache& cache, Vertex site) const;
  // Mean of local_order over all sites.
  double order_parameter(const Configuration& config, const DivergenceCache& cache) const;

  void check(const Configuration& config) const;

 private:
  double xy_delta(std::span<const double> theta, Vertex site, double new_angle) const noexcept;

  Variant variant_;
  double h_;
  std::shared_ptr<const LatticeGraph> graph_;
  std::shared_ptr<const DisorderField> disorder_;
};

}  // namespace disxy
