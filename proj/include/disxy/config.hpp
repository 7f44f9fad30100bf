#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "disxy/lattice.hpp"
#include "disxy/mc.hpp"
#include "disxy/model.hpp"

namespace disxy {

// Schema violation; the message starts with "file:line:" when the offending
// node has a position.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphSpec {
  LatticeKind kind = LatticeKind::Hypercubic;
  int dim = 3;
  int N = 8;  // ignored by binder, which takes `sizes`
  Boundary boundary = Boundary::Periodic;
};

// Ladder and schedule; seed and threads come from the experiment.
struct ChainSpec {
  std::vector<double> betas;
  int thermalize = 10000;
  int measure = 100000;
  int measure_every = 10;
  int exchange_every = 10;
  std::optional<double> proposal_width;
  bool cold_start = false;
};

struct SimulateConfig {
  Variant model = Variant::EffectiveStrong;
  double h = 4.0;
  GraphSpec graph;
  double p = 0.5;
  int samples = 1;
  ChainSpec chain;
  // "origin,antipode" pair, or none
  bool antipodal_two_point = false;
  bool snapshots = false;
};

struct BinderConfig {
  Variant model = Variant::EffectiveStrong;
  GraphSpec graph;
  std::vector<int> sizes;
  std::vector<double> h;
  double p = 0.5;
  int samples = 10;
  ChainSpec chain;
};

struct PercolationConfig {
  LatticeKind kind = LatticeKind::Hypercubic;
  int dim = 3;
  double p = 0.5;
  std::vector<int> lengths;
  int trials = 200;
  int divisor = 100;
};

struct GreenConfig {
  std::vector<std::string> methods;  // fourier | walk | box
  std::vector<double> m;
  // torus side (fourier), box N (box), nMax (walk), index-aligned with methods
  std::vector<int> sizes;
  int dim = 2;
  std::vector<std::vector<int>> points;
};

struct McBryanConfig {
  double beta = 5.0;
  std::vector<double> h;
  double delta = 0.1;
  int N = 64;
};

struct ValidateConfig {
  std::vector<std::string> suites;  // empty = all
};

using Payload = std::variant<SimulateConfig, BinderConfig, PercolationConfig, GreenConfig, McBryanConfig, ValidateConfig>;

struct ExperimentConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  int threads = 1;
  bool reference = false;
  Payload payload;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"simulate", "binder", "percolation", "green", "mcbryan", "validate"};
  return names;
}

// Parses a YAML config (or a run manifest, whose "config" entry is used).
// The payload is read from the key named after the subcommand.
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& subcommand);
ExperimentConfig parse_config(const std::string& text, const std::string& subcommand,
                              const std::string& source = "<config>");
// Default configuration for subcommands that need none (validate).
ExperimentConfig default_config(const std::string& subcommand);

// Resolved config in the input schema, with every default filled in.
nlohmann::json to_json(const ExperimentConfig& config);

RunParams run_params(const ChainSpec& chain, std::uint64_t seed, int threads);
LatticeGraph build_graph(const GraphSpec& spec, int N);

}  // namespace disxy
