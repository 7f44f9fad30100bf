#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "disxy/disorder.hpp"
#include "disxy/lattice.hpp"
#include "disxy/stats.hpp"
#include "disxy/union_find.hpp"

namespace disxy {

enum class Phase { Occupied, Vacant };

// Sites center + {-L..L}^d, read through the graph's periodic wrap.
struct Box {
  std::vector<int> center;
  int length = 1;

  int side() const noexcept { return 2 * length + 1; }
};

// Connected components of one phase inside a box, using only edges of the
// graph's stencil that stay inside the box. Local coordinates run 0..side-1
// per axis; local site index is row-major like the graph.
struct ClusterLabeling {
  Box region;
  int dim = 0;
  Phase phase = Phase::Occupied;
  std::vector<std::int32_t> labels;  // -1 for sites of the other phase
  std::vector<Vertex> sites;         // graph vertex of each local site
  std::vector<std::uint32_t> sizes;
  std::vector<int> lo;  // per cluster, per axis: lo[c * dim + i]
  std::vector<int> hi;

  std::size_t cluster_count() const noexcept { return sizes.size(); }
  // Largest coordinate spread over the axes.
  int diameter(std::size_t c) const noexcept;
  // Has sites on both faces of every axis.
  bool touches_all_faces(std::size_t c) const noexcept;
};

// Reusable buffers for repeated labelings (sub-box scans).
class ClusterLabeler {
 public:
  const ClusterLabeling& label(const LatticeGraph& graph, const DisorderField& field, Phase phase, const Box& region);

 private:
  ClusterLabeling out_;
  DisjointSet sets_;
  std::vector<std::int32_t> root_label_;
  std::vector<int> coords_;
};

ClusterLabeling label_clusters(const LatticeGraph& graph, const DisorderField& field, Phase phase, const Box& region);

// Non-spanning clusters of a box of length L may have diameter at most
// floor(L / divisor); the definition uses divisor 100. Other divisors are
// only for diagnostics.
inline constexpr int kSmallClusterDivisor = 100;
inline int small_cluster_bound(int length, int divisor = kSmallClusterDivisor) noexcept { return length / divisor; }
inline int sub_box_length(int length) noexcept { return length / 10; }

// Id of the unique cluster touching all faces, if exactly one exists.
std::optional<std::size_t> unique_spanning_cluster(const ClusterLabeling& labeling);

// Exactly one cluster touches all 2d faces and every other cluster has
// diameter <= floor(L / divisor).
bool classify_pre_good(const ClusterLabeling& labeling, int divisor = kSmallClusterDivisor);

// Pre-good, and every box of length floor(L / 10) meeting the box is pre-good
// for the same phase. Sub-boxes read the field outside the box, so the graph
// must extend at least 2 floor(L / 10) beyond it without wrapping onto it.
bool classify_good(const DisorderField& field, const Box& box, Phase phase, int divisor = kSmallClusterDivisor);

struct BoxClassification {
  Box box;
  bool pre_good_occupied = false;
  bool pre_good_vacant = false;
  bool good_occupied = false;
  bool good_vacant = false;
  bool good = false;
  bool optimal = false;
  // Labels of the spanning clusters in the occupied / vacant labelings.
  std::optional<std::pair<std::size_t, std::size_t>> spanning;
  // Edges of the box joining the two spanning clusters.
  std::vector<Edge> interface;
};

BoxClassification classify_optimal(const DisorderField& field, const Box& box, int divisor = kSmallClusterDivisor);

struct BoxScanRow {
  int length = 0;
  int trials = 0;
  int pre_good = 0;  // pre-good for the occupied phase
  int good = 0;      // good for both phases
  int optimal = 0;
  stats::Interval pre_good_ci{};
  stats::Interval good_ci{};
  stats::Interval optimal_ci{};

  double p_pre_good() const noexcept { return static_cast<double>(pre_good) / trials; }
  double p_good() const noexcept { return static_cast<double>(good) / trials; }
  double p_optimal() const noexcept { return static_cast<double>(optimal) / trials; }
};

struct BoxScanParams {
  LatticeKind kind = LatticeKind::Hypercubic;
  int dim = 3;
  double p = 0.5;
  std::vector<int> lengths;
  int trials = 200;
  std::uint64_t seed = 0;
  int divisor = kSmallClusterDivisor;
};

// Fresh disorder per trial on a torus of side 2 (L + 2 floor(L/10)) + 2
// centred on the box, so sub-boxes never wrap onto the box.
std::vector<BoxScanRow> box_probability_scan(const BoxScanParams& params);

}  // namespace disxy
