#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "disxy/lattice.hpp"

namespace disxy {

// Quenched random phase alpha_x in {0, pi}. Occupied sites have alpha = 0,
// vacant sites alpha = pi. Stored as one byte per site (0 occupied, 1 vacant).
class DisorderField {
 public:
  DisorderField(std::shared_ptr<const LatticeGraph> graph, std::vector<std::uint8_t> vacant, double p,
                std::uint64_t seed);

  // Hand-built masks; p and seed are recorded as NaN / 0.
  static DisorderField from_mask(std::shared_ptr<const LatticeGraph> graph, std::vector<std::uint8_t> vacant);
  // Uniform field (all occupied when value == 0, all vacant when value == 1).
  static DisorderField uniform(std::shared_ptr<const LatticeGraph> graph, bool vacant);

  const LatticeGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const LatticeGraph>& graph_ptr() const noexcept { return graph_; }
  std::size_t size() const noexcept { return vacant_.size(); }
  double p() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool vacant(Vertex v) const noexcept { return vacant_[v] != 0; }
  bool occupied(Vertex v) const noexcept { return vacant_[v] == 0; }
  // cos(alpha_x); sin(alpha_x) is identically zero.
  double cos_alpha(Vertex v) const noexcept { return vacant_[v] ? -1.0 : 1.0; }
  const std::vector<std::uint8_t>& mask() const noexcept { return vacant_; }
  std::size_t occupied_count() const noexcept;

  // Same field with occupied and vacant exchanged.
  DisorderField flipped() const;

  // Length-prefixed bitset: 8-byte little-endian site count, then
  // ceil(n/8) bytes with site i at bit (i % 8) of byte i / 8 (1 = vacant).
  std::vector<std::uint8_t> to_bytes() const;
  std::string to_hex() const;
  static DisorderField from_hex(std::shared_ptr<const LatticeGraph> graph, const std::string& hex, double p,
                                std::uint64_t seed);

  friend bool operator==(const DisorderField& x, const DisorderField& y) { return x.vacant_ == y.vacant_; }

 private:
  std::shared_ptr<const LatticeGraph> graph_;
  std::vector<std::uint8_t> vacant_;
  double p_;
  std::uint64_t seed_;
};

// Each site is occupied independently with probability p. The draw at site i
// depends only on (seed, i), so the field does not depend on generation order.
DisorderField sample_disorder(std::shared_ptr<const LatticeGraph> graph, double p, std::uint64_t seed);

enum class EdgeClass { Same, Different };

inline EdgeClass edge_alpha_gradient(const DisorderField& field, const Edge& e) noexcept {
  return field.vacant(e.a) == field.vacant(e.b) ? EdgeClass::Same : EdgeClass::Different;
}

// Number of "different" edges at each site.
std::vector<int> alpha_degree(const DisorderField& field);

}  // namespace disxy
