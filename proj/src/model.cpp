#include "disxy/model.hpp"

#include <numbers>

#include "disxy/rng.hpp"

namespace disxy {

Configuration::Configuration(std::size_t sites, int layers)
    : sites_(sites), layers_(layers), angles_(sites * static_cast<std::size_t>(layers), 0.0) {
  if (layers != 1 && layers != 2) throw std::invalid_argument("configurations have one or two layers");
}

Configuration Configuration::from_angles(std::vector<double> angles) {
  Configuration c(angles.size(), 1);
  for (std::size_t i = 0; i < angles.size(); ++i) c.set(static_cast<Vertex>(i), angles[i]);
  return c;
}

Configuration Configuration::from_layers(std::vector<double> plus, std::vector<double> minus) {
  if (plus.size() != minus.size()) throw std::invalid_argument("layer sizes differ");
  Configuration c(plus.size(), 2);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    c.set(static_cast<Vertex>(i), plus[i], 0);
    c.set(static_cast<Vertex>(i), minus[i], 1);
  }
  return c;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::XY: return "XY";
    case Variant::Bilayer: return "Bilayer";
    case Variant::EffectiveStrong: return "EffectiveStrong";
    case Variant::EffectiveWeak: return "EffectiveWeak";
    case Variant::CleanWeak: return "CleanWeak";
  }
  return "unknown";
}

Variant parse_variant(const std::string& text) {
  if (text == "XY") return Variant::XY;
  if (text == "Bilayer") return Variant::Bilayer;
  if (text == "EffectiveStrong") return Variant::EffectiveStrong;
  if (text == "EffectiveWeak") return Variant::EffectiveWeak;
  if (text == "CleanWeak") return Variant::CleanWeak;
  throw std::invalid_argument("unknown model variant '" + text + "'");
}

std::vector<double> divergence(const DisorderField& field, const Configuration& config) {
  const auto& g = field.graph();
  if (config.sites() != g.vertex_count()) throw std::invalid_argument("configuration does not match the graph");
  std::vector<double> d(g.vertex_count(), 0.0);
  const auto theta = config.layer(0);
  for (const auto& e : g.edges()) {
    if (edge_alpha_gradient(field, e) != EdgeClass::Different) continue;
    const double c = std::cos(theta[e.a] - theta[e.b]);
    d[e.a] += c;
    d[e.b] += c;
  }
  return d;
}

std::vector<double> tau_field(const Configuration& config, const DisorderField& field, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("disorder strength h must be positive");
  auto d = divergence(field, config);
  for (double& v : d) v /= h;
  return d;
}

Model::Model(Variant variant, double h, std::shared_ptr<const LatticeGraph> graph,
             std::shared_ptr<const DisorderField> disorder)
    : variant_(variant), h_(h), graph_(std::move(graph)), disorder_(std::move(disorder)) {
  if (!graph_) throw std::invalid_argument("model needs a graph");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw std::invalid_argument("disorder strength h must be positive");
  const bool needs_alpha =
      variant_ == Variant::Bilayer || variant_ == Variant::EffectiveStrong || variant_ == Variant::EffectiveWeak;
  if (needs_alpha && !disorder_) throw std::invalid_argument(to_string(variant_) + " requires a disorder field");
  if (!needs_alpha && disorder_) throw std::invalid_argument(to_string(variant_) + " takes no disorder field");
  if (disorder_ && !(disorder_->graph() == *graph_))
    throw std::invalid_argument("disorder field was generated on a different graph");
}

Configuration Model::ground_configuration() const { return Configuration(graph_->vertex_count(), layers()); }

Configuration Model::random_configuration(std::uint64_t key) const {
  Configuration c = ground_configuration();
  CounterRng rng(key);
  for (int l = 0; l < layers(); ++l)
    for (Vertex v = 0; v < graph_->vertex_count(); ++v) {
      const double a = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
      if (!graph_->frozen(v)) c.set(v, a, l);
    }
  return c;
}

DivergenceCache Model::make_cache(const Configuration& config) const {
  if (!uses_cache()) return {};
  return DivergenceCache(divergence(*disorder_, config));
}

void Model::check(const Configuration& config) const {
  if (config.sites() != graph_->vertex_count()) throw std::invalid_argument("configuration does not match the graph");
  if (config.layers() != layers())
    throw std::invalid_argument(to_string(variant_) + " expects a " + (layers() == 2 ? "bilayer" : "single-layer") +
                                " configuration");
}

double Model::energy(const Configuration& config) const {
  check(config);
  const auto& g = *graph_;
  double e = 0.0;
  switch (variant_) {
    case Variant::XY:
    case Variant::CleanWeak:
    case Variant::EffectiveWeak: {
      const double j = variant_ == Variant::EffectiveWeak ? 2.0 : 1.0;
      const auto t = config.layer(0);
      for (const auto& ed : g.edges()) e -= j * std::cos(t[ed.a] - t[ed.b]);
      if (variant_ == Variant::CleanWeak) {
        for (double a : t) {
          const double c = std::cos(a);
          e -= c * c / (2.0 * h_);
        }
      } else if (variant_ == Variant::EffectiveWeak) {
        for (Vertex v = 0; v < g.vertex_count(); ++v) e -= h_ * disorder_->cos_alpha(v) * std::cos(t[v]);
      }
      break;
    }
    case Variant::Bilayer: {
      for (int l = 0; l < 2; ++l) {
        const auto t = config.layer(l);
        for (const auto& ed : g.edges()) e -= std::cos(t[ed.a] - t[ed.b]);
      }
      for (Vertex v = 0; v < g.vertex_count(); ++v) e -= h_ * disorder_->cos_alpha(v) * std::cos(config.phi(v));
      break;
    }
    case Variant::EffectiveStrong: {
      const auto t = config.layer(0);
      for (const auto& ed : g.edges())
        if (edge_alpha_gradient(*disorder_, ed) == EdgeClass::Same) e -= 2.0 * std::cos(t[ed.a] - t[ed.b]);
      for (double d : divergence(*disorder_, config)) e -= d * d / (2.0 * h_);
      break;
    }
  }
  return e;
}

double Model::xy_delta(std::span<const double> theta, Vertex site, double new_angle) const noexcept {
  const double old = theta[site];
  double s = 0.0;
  for (Vertex y : graph_->neighbors(site)) s += std::cos(new_angle - theta[y]) - std::cos(old - theta[y]);
  return -s;
}

double Model::delta(const Configuration& config, const DivergenceCache& cache, Vertex site, double new_angle,
                    int layer) const {
  if (graph_->frozen(site)) throw FrozenSiteError("site " + std::to_string(site) + " is frozen by the wired frame");
  new_angle = wrap_angle(new_angle);
  switch (variant_) {
    case Variant::XY: return xy_delta(config.layer(0), site, new_angle);
    case Variant::CleanWeak: {
      const double c0 = std::cos(config.angle(site)), c1 = std::cos(new_angle);
      return xy_delta(config.layer(0), site, new_angle) - (c1 * c1 - c0 * c0) / (2.0 * h_);
    }
    case Variant::EffectiveWeak: {
      const double ca = disorder_->cos_alpha(site);
      return 2.0 * xy_delta(config.layer(0), site, new_angle) -
             h_ * ca * (std::cos(new_angle) - std::cos(config.angle(site)));
    }
    case Variant::Bilayer: {
      const double other = config.angle(site, 1 - layer);
      const double sign = layer == 0 ? 1.0 : -1.0;
      const double phi_old = sign * (config.angle(site, layer) - other);
      const double phi_new = sign * (new_angle - other);
      return xy_delta(config.layer(layer), site, new_angle) -
             h_ * disorder_->cos_alpha(site) * (std::cos(phi_new) - std::cos(phi_old));
    }
    case Variant::EffectiveStrong: {
      const auto theta = config.layer(0);
      const double old = theta[site];
      const auto nbrs = graph_->neighbors(site);
      const bool vac = disorder_->vacant(site);
      double same = 0.0, quad = 0.0, dx = 0.0;
      for (Vertex y : nbrs) {
        const double dc = std::cos(new_angle - theta[y]) - std::cos(old - theta[y]);
        if (disorder_->vacant(y) == vac) {
          same += dc;
        } else {
          dx += dc;
          quad += dc * (2.0 * cache[y] + dc);
        }
      }
      quad += dx * (2.0 * cache[site] + dx);
      return -2.0 * same - quad / (2.0 * h_);
    }
  }
  return 0.0;
}

void Model::apply(Configuration& config, DivergenceCache& cache, Vertex site, double new_angle, int layer) const {
  if (graph_->frozen(site)) throw FrozenSiteError("site " + std::to_string(site) + " is frozen by the wired frame");
  if (variant_ == Variant::EffectiveStrong) {
    const auto theta = config.layer(0);
    const double old = theta[site];
    const double next = wrap_angle(new_angle);
    const bool vac = disorder_->vacant(site);
    for (Vertex y : graph_->neighbors(site)) {
      if (disorder_->vacant(y) == vac) continue;
      const double dc = std::cos(next - theta[y]) - std::cos(old - theta[y]);
      cache.at(y) += dc;
      cache.at(site) += dc;
    }
  }
  config.set(site, new_angle, layer);
}

double Model::local_order(const Configuration& config, const DivergenceCache& cache, Vertex site) const {
  switch (variant_) {
    case Variant::Bilayer: return std::sin(config.phi(site));
    case Variant::EffectiveStrong: return cache[site] / h_;
    default: return std::sin(config.angle(site));
  }
}

double Model::order_parameter(const Configuration& config, const DivergenceCache& cache) const {
  const std::size_t n = graph_->vertex_count();
  double s = 0.0;
  for (Vertex v = 0; v < n; ++v) s += local_order(config, cache, v);
  return s / static_cast<double>(n);
}

}  // namespace disxy
