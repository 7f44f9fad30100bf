#include "disxy/mc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "disxy/rng.hpp"

namespace disxy {

void RunParams::validate() const {
  if (betas.empty()) throw std::invalid_argument("beta ladder is empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0) || !std::isfinite(betas[i])) throw std::invalid_argument("beta must be finite and >= 0");
    if (i > 0 && !(betas[i] > betas[i - 1])) throw std::invalid_argument("beta ladder must be strictly increasing");
  }
  if (sweeps_thermalize < 0 || sweeps_measure < 1 || measure_every < 1 || exchange_every < 1)
    throw std::invalid_argument("sweep counts must be >= 1 (thermalization >= 0)");
  if (proposal_width && !(*proposal_width > 0.0)) throw std::invalid_argument("proposal width must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

double metropolis_probability(double beta, double delta_energy) noexcept {
  if (delta_energy <= 0.0) return 1.0;
  return std::exp(-beta * delta_energy);
}

double exchange_probability(double beta_i, double beta_j, double energy_i, double energy_j) noexcept {
  const double x = (beta_i - beta_j) * (energy_i - energy_j);
  return x >= 0.0 ? 1.0 : std::exp(x);
}

namespace {

// Returns 1 when the proposal was accepted.
inline int propose(const Model& model, Configuration& config, DivergenceCache& cache, double beta,
                   std::uint64_t sweep_key, Vertex site, int layer, const std::optional<double>& width) {
  CounterRng rng(mix64(sweep_key ^ mix64(2 * static_cast<std::uint64_t>(site) + layer + kGolden)));
  const double u = rng.uniform();
  const double accept = rng.uniform();
  const double next = width ? config.angle(site, layer) + *width * (u - 0.5) : std::numbers::pi * (2.0 * u - 1.0);
  const double de = model.delta(config, cache, site, next, layer);
  if (de <= 0.0 || accept < std::exp(-beta * de)) {
    model.apply(config, cache, site, next, layer);
    return 1;
  }
  return 0;
}

}  // namespace

double metropolis_sweep(const Model& model, Configuration& config, DivergenceCache& cache, double beta,
                        std::uint64_t sweep_key, const Coloring& colors, std::optional<double> proposal_width,
                        int threads) {
  const auto& g = model.graph();
  const int layers = model.layers();
  long accepted = 0, proposals = 0;
  for (const auto& cls : colors.classes) {
    const long n = static_cast<long>(cls.size());
#if defined(_OPENMP)
#pragma omp parallel for reduction(+ : accepted, proposals) num_threads(threads) if (threads > 1) schedule(static)
#endif
    for (long k = 0; k < n; ++k) {
      const Vertex v = cls[static_cast<std::size_t>(k)];
      if (g.frozen(v)) continue;
      for (int l = 0; l < layers; ++l) {
        accepted += propose(model, config, cache, beta, sweep_key, v, l, proposal_width);
        ++proposals;
      }
    }
  }
  (void)threads;
  return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
}

std::vector<bool> tempering_exchange(std::span<const double> energies, std::span<const double> betas, int parity,
                                     std::uint64_t key, SwapStats* stats) {
  if (energies.size() != betas.size()) throw std::invalid_argument("replica count does not match the beta ladder");
  const std::size_t pairs = betas.empty() ? 0 : betas.size() - 1;
  if (stats && stats->attempts.size() != pairs) {
    stats->attempts.assign(pairs, 0);
    stats->accepts.assign(pairs, 0);
  }
  std::vector<bool> swap(pairs, false);
  for (std::size_t i = static_cast<std::size_t>(parity & 1); i < pairs; i += 2) {
    const double prob = exchange_probability(betas[i], betas[i + 1], energies[i], energies[i + 1]);
    CounterRng rng(mix64(key ^ mix64(i + kGolden)));
    swap[i] = prob >= 1.0 || rng.uniform() < prob;
    if (stats) {
      ++stats->attempts[i];
      if (swap[i]) ++stats->accepts[i];
    }
  }
  return swap;
}

RunResult run_chain(const Model& model, const RunParams& params, const MeasurementObserver& observer) {
  params.validate();
  const auto& g = model.graph();
  if (params.two_point &&
      (params.two_point->first >= g.vertex_count() || params.two_point->second >= g.vertex_count()))
    throw std::invalid_argument("two-point sites are outside the graph");

  const std::size_t slots = params.betas.size();
  const Coloring colors = coloring(g, model.interaction_radius());

  std::vector<Configuration> configs;
  std::vector<DivergenceCache> caches;
  configs.reserve(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    configs.push_back(params.cold_start ? model.ground_configuration()
                                        : model.random_configuration(derive_key(params.seed, {1, k})));
    caches.push_back(model.make_cache(configs.back()));
  }

  RunResult result;
  result.series.resize(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    result.series[k].beta = params.betas[k];
    result.series[k].has_two_point = params.two_point.has_value();
    result.series[k].records.reserve(static_cast<std::size_t>(params.sweeps_measure / params.measure_every));
  }
  result.swaps.attempts.assign(slots > 0 ? slots - 1 : 0, 0);
  result.swaps.accepts.assign(slots > 0 ? slots - 1 : 0, 0);

  std::vector<double> acc_sum(slots, 0.0);
  std::vector<int> acc_count(slots, 0);
  std::vector<double> energies(slots);
  std::int64_t exchanges = 0;
  const std::int64_t total = static_cast<std::int64_t>(params.sweeps_thermalize) + params.sweeps_measure;

  for (std::int64_t t = 1; t <= total; ++t) {
    for (std::size_t k = 0; k < slots; ++k) {
      const auto key = derive_key(params.seed, {2, k, static_cast<std::uint64_t>(t)});
      acc_sum[k] += metropolis_sweep(model, configs[k], caches[k], params.betas[k], key, colors,
                                     params.proposal_width, params.threads);
      ++acc_count[k];
    }

    if (slots > 1 && t % params.exchange_every == 0) {
      for (std::size_t k = 0; k < slots; ++k) energies[k] = model.energy(configs[k]);
      const auto key = derive_key(params.seed, {3, static_cast<std::uint64_t>(exchanges)});
      const auto swaps = tempering_exchange(energies, params.betas, static_cast<int>(exchanges % 2), key,
                                            &result.swaps);
      ++exchanges;
      for (std::size_t i = 0; i < swaps.size(); ++i) {
        if (!swaps[i]) continue;
        std::swap(configs[i], configs[i + 1]);
        std::swap(caches[i], caches[i + 1]);
      }
    }

    const std::int64_t m = t - params.sweeps_thermalize;
    if (m > 0 && m % params.measure_every == 0) {
      for (std::size_t k = 0; k < slots; ++k) {
        if (model.uses_cache()) caches[k] = model.make_cache(configs[k]);
        const double op = model.order_parameter(configs[k], caches[k]);
        MeasurementRecord r{};
        r.sweep = t;
        r.beta = params.betas[k];
        r.energy = model.energy(configs[k]);
        r.op = op;
        r.op2 = op * op;
        r.op4 = r.op2 * r.op2;
        r.two_point = std::numeric_limits<double>::quiet_NaN();
        if (params.two_point)
          r.two_point = model.local_order(configs[k], caches[k], params.two_point->first) *
                        model.local_order(configs[k], caches[k], params.two_point->second);
        r.acceptance = acc_sum[k] / acc_count[k];
        acc_sum[k] = 0.0;
        acc_count[k] = 0;
        result.series[k].records.push_back(r);
        if (observer) observer(k, configs[k], caches[k]);
      }
    }
  }
  return result;
}

}  // namespace disxy
