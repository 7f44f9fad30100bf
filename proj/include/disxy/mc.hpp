#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "disxy/lattice.hpp"
#include "disxy/model.hpp"

namespace disxy {

struct RunParams {
  // Strictly increasing inverse temperatures; one replica per entry.
  std::vector<double> betas;
  int sweeps_thermalize = 10000;
  int sweeps_measure = 100000;
  int measure_every = 10;
  int exchange_every = 10;
  // Width of the symmetric window around the current angle; nullopt draws
  // the new angle uniformly from the full circle.
  std::optional<double> proposal_width;
  std::uint64_t seed = 0;
  // Threads used inside one colored sweep. Results do not depend on it.
  int threads = 1;
  // Start from the all-zero configuration instead of uniform random angles.
  bool cold_start = false;
  // Sites whose local order parameters are multiplied into the two-point channel.
  std::optional<std::pair<Vertex, Vertex>> two_point;

  void validate() const;
};

struct MeasurementRecord {
  std::int64_t sweep;
  double beta;
  double energy;
  double op;
  double op2;
  double op4;
  double two_point;  // NaN when the channel is off
  double acceptance;  // mean acceptance over the sweeps since the previous record
};

struct ObservableSeries {
  double beta = 0.0;
  bool has_two_point = false;
  std::vector<MeasurementRecord> records;
};

// Replica-exchange statistics for adjacent ladder pairs (i, i + 1).
struct SwapStats {
  std::vector<std::int64_t> attempts;
  std::vector<std::int64_t> accepts;
  double rate(std::size_t pair) const {
    return attempts[pair] ? static_cast<double>(accepts[pair]) / static_cast<double>(attempts[pair]) : 0.0;
  }
};

struct RunResult {
  std::vector<ObservableSeries> series;  // one per ladder entry, ascending beta
  SwapStats swaps;
};

// Called at every measurement with the ladder slot and its current state.
using MeasurementObserver = std::function<void(std::size_t slot, const Configuration&, const DivergenceCache&)>;

// One Metropolis proposal per free site (and per layer), class by class.
// Random numbers for (site, layer) come from a counter stream keyed by
// (sweep_key, site, layer), so the outcome is independent of `threads`.
// Returns the acceptance fraction.
double metropolis_sweep(const Model& model, Configuration& config, DivergenceCache& cache, double beta,
                        std::uint64_t sweep_key, const Coloring& colors,
                        std::optional<double> proposal_width = std::nullopt, int threads = 1);

// Metropolis acceptance probability min(1, exp(-beta * dE)).
double metropolis_probability(double beta, double delta_energy) noexcept;

// Exchange probability min(1, exp((beta_i - beta_j)(E_i - E_j))).
double exchange_probability(double beta_i, double beta_j, double energy_i, double energy_j) noexcept;

// Attempts swaps between slots (i, i+1) for every i with i % 2 == parity.
// energies[k] is the energy of the configuration currently at betas[k].
// Returns one decision per adjacent pair (false for pairs not attempted).
std::vector<bool> tempering_exchange(std::span<const double> energies, std::span<const double> betas, int parity,
                                     std::uint64_t key, SwapStats* stats = nullptr);

// Runs a parallel-tempering Metropolis chain over params.betas. The result is
// a pure function of (model, params).
RunResult run_chain(const Model& model, const RunParams& params, const MeasurementObserver& observer = {});

}  // namespace disxy
