#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace disxy {

enum class LatticeKind { Hypercubic, NnnSquare, Custom };
enum class Boundary { Periodic, WiredFrame };

std::string to_string(LatticeKind kind);
std::string to_string(Boundary boundary);
LatticeKind parse_lattice_kind(const std::string& text);
Boundary parse_boundary(const std::string& text);

using Vertex = std::uint32_t;

// Undirected edge stored with the lower vertex index first.
struct Edge {
  Vertex a;
  Vertex b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Graph on which the spin models live.
//
// Periodic graphs are tori with `side` sites per axis. Vertex indices are
// row-major in the coordinates: the last axis varies fastest, so in 3D
// index = (x0 * side + x1) * side + x2.
//
// Wired-frame graphs are boxes {-N..N}^d (side 2N+1) without wrap-around;
// coordinates are signed offsets from the box center and the outer shell
// (any |x_i| == N) is flagged frozen. Row-major indexing applies to x_i + N.
class LatticeGraph {
 public:
  // hypercubic(d, N) for d in {2,3,4} or nnn-square(N) (d must be 2).
  // Periodic tori require N >= 3 so the +e and -e neighbors are distinct.
  static LatticeGraph build(LatticeKind kind, int dim, int size, Boundary boundary);
  static LatticeGraph hypercubic(int dim, int size, Boundary boundary = Boundary::Periodic) {
    return build(LatticeKind::Hypercubic, dim, size, boundary);
  }
  static LatticeGraph nnn_square(int size, Boundary boundary = Boundary::Periodic) {
    return build(LatticeKind::NnnSquare, 2, size, boundary);
  }
  // Small explicit graphs (two-site chains and the like) for model checks.
  static LatticeGraph from_edges(std::size_t vertex_count, std::vector<Edge> edges);

  LatticeKind kind() const noexcept { return kind_; }
  Boundary boundary() const noexcept { return boundary_; }
  int dim() const noexcept { return dim_; }
  // Size parameter as passed to build(): torus side, or box radius N.
  int size() const noexcept { return size_; }
  // Sites per axis.
  int side() const noexcept { return side_; }

  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  // Edge ids parallel to neighbors(v).
  std::span<const std::uint32_t> incident_edges(Vertex v) const noexcept {
    return {edge_ids_.data() + offsets_[v], edge_ids_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool frozen(Vertex v) const noexcept { return !frozen_.empty() && frozen_[v] != 0; }
  std::size_t frozen_count() const noexcept;

  // Displacements to neighbors in the infinite lattice.
  const std::vector<std::vector<int>>& stencil() const noexcept { return stencil_; }

  std::vector<int> coords(Vertex v) const;
  // Periodic: coordinates are wrapped. Wired: must lie in {-N..N}^d.
  Vertex index(std::span<const int> coords) const;
  // Site at coordinates zero (box center for wired graphs).
  Vertex origin() const;

  // Human-readable descriptor, e.g. "hypercubic(d=3,N=8,periodic)".
  std::string descriptor() const;

  friend bool operator==(const LatticeGraph& x, const LatticeGraph& y) {
    return x.kind_ == y.kind_ && x.boundary_ == y.boundary_ && x.dim_ == y.dim_ && x.size_ == y.size_ &&
           x.edges_ == y.edges_;
  }

 private:
  LatticeGraph() = default;
  void finalize(std::size_t vertex_count);

  LatticeKind kind_ = LatticeKind::Custom;
  Boundary boundary_ = Boundary::Periodic;
  int dim_ = 0;
  int size_ = 0;
  int side_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;
  std::vector<std::uint32_t> edge_ids_;
  std::vector<std::uint8_t> frozen_;
  std::vector<std::vector<int>> stencil_;
};

// Partition of the vertices into classes whose members are pairwise at graph
// distance > radius, so that sites of one class can be updated concurrently
// for interactions of that range.
struct Coloring {
  std::vector<std::vector<Vertex>> classes;
  std::vector<std::uint32_t> class_of;
  std::string scheme;
  // Set when no modular coloring validated and singleton classes were used.
  bool fallback = false;
};

Coloring coloring(const LatticeGraph& graph, int radius);

// Exhaustive check that same-class vertices are more than `radius` apart.
bool coloring_valid(const LatticeGraph& graph, std::span<const std::uint32_t> class_of, int radius);

}  // namespace disxy
