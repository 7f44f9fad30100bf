#include "disxy/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "disxy/rng.hpp"

namespace disxy {

DisorderField::DisorderField(std::shared_ptr<const LatticeGraph> graph, std::vector<std::uint8_t> vacant, double p,
                             std::uint64_t seed)
    : graph_(std::move(graph)), vacant_(std::move(vacant)), p_(p), seed_(seed) {
  if (!graph_) throw std::invalid_argument("disorder field needs a graph");
  if (vacant_.size() != graph_->vertex_count())
    throw std::invalid_argument("disorder mask size does not match the graph");
  for (auto& b : vacant_) b = b ? 1 : 0;
}

DisorderField DisorderField::from_mask(std::shared_ptr<const LatticeGraph> graph, std::vector<std::uint8_t> vacant) {
  return DisorderField(std::move(graph), std::move(vacant), std::numeric_limits<double>::quiet_NaN(), 0);
}

DisorderField DisorderField::uniform(std::shared_ptr<const LatticeGraph> graph, bool vacant) {
  const std::size_t n = graph->vertex_count();
  return DisorderField(std::move(graph), std::vector<std::uint8_t>(n, vacant ? 1 : 0), vacant ? 0.0 : 1.0, 0);
}

std::size_t DisorderField::occupied_count() const noexcept {
  return static_cast<std::size_t>(std::count(vacant_.begin(), vacant_.end(), std::uint8_t{0}));
}

DisorderField DisorderField::flipped() const {
  std::vector<std::uint8_t> m(vacant_.size());
  std::transform(vacant_.begin(), vacant_.end(), m.begin(), [](std::uint8_t b) { return std::uint8_t(b ^ 1); });
  return DisorderField(graph_, std::move(m), 1.0 - p_, seed_);
}

std::vector<std::uint8_t> DisorderField::to_bytes() const {
  const std::uint64_t n = vacant_.size();
  std::vector<std::uint8_t> out(8 + (n + 7) / 8, 0);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(n >> (8 * i));
  for (std::uint64_t i = 0; i < n; ++i)
    if (vacant_[i]) out[8 + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return out;
}

std::string DisorderField::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (std::uint8_t b : to_bytes()) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

DisorderField DisorderField::from_hex(std::shared_ptr<const LatticeGraph> graph, const std::string& hex, double p,
                                      std::uint64_t seed) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit in disorder field");
  };
  if (hex.size() % 2 != 0 || hex.size() < 16) throw std::invalid_argument("truncated disorder hex string");
  std::vector<std::uint8_t> bytes(hex.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if (bytes.size() != 8 + (n + 7) / 8) throw std::invalid_argument("disorder hex length does not match its prefix");
  std::vector<std::uint8_t> mask(n);
  for (std::uint64_t i = 0; i < n; ++i) mask[i] = (bytes[8 + i / 8] >> (i % 8)) & 1u;
  return DisorderField(std::move(graph), std::move(mask), p, seed);
}

DisorderField sample_disorder(std::shared_ptr<const LatticeGraph> graph, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0, 1]");
  const std::size_t n = graph->vertex_count();
  std::vector<std::uint8_t> vacant(n);
  const std::uint64_t key = derive_key(seed, {0xd15c0u});
  for (std::size_t i = 0; i < n; ++i) vacant[i] = to_unit(mix64(key ^ mix64(i + kGolden))) < p ? 0 : 1;
  return DisorderField(std::move(graph), std::move(vacant), p, seed);
}

std::vector<int> alpha_degree(const DisorderField& field) {
  const auto& g = field.graph();
  std::vector<int> deg(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    if (edge_alpha_gradient(field, e) == EdgeClass::Different) {
      ++deg[e.a];
      ++deg[e.b];
    }
  }
  return deg;
}

}  // namespace disxy
