#include "disxy/lattice.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace disxy {

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Hypercubic: return "hypercubic";
    case LatticeKind::NnnSquare: return "nnn-square";
    case LatticeKind::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(Boundary boundary) {
  return boundary == Boundary::Periodic ? "periodic" : "wired-frame";
}

LatticeKind parse_lattice_kind(const std::string& text) {
  if (text == "hypercubic") return LatticeKind::Hypercubic;
  if (text == "nnn-square" || text == "nnn_square") return LatticeKind::NnnSquare;
  throw std::invalid_argument("unknown lattice kind '" + text + "' (expected hypercubic or nnn-square)");
}

Boundary parse_boundary(const std::string& text) {
  if (text == "periodic") return Boundary::Periodic;
  if (text == "wired" || text == "wired-frame") return Boundary::WiredFrame;
  throw std::invalid_argument("unknown boundary '" + text + "' (expected periodic or wired)");
}

namespace {

std::vector<std::vector<int>> forward_stencil(LatticeKind kind, int dim) {
  std::vector<std::vector<int>> out;
  if (kind == LatticeKind::Hypercubic) {
    for (int i = 0; i < dim; ++i) {
      std::vector<int> e(dim, 0);
      e[i] = 1;
      out.push_back(e);
    }
  } else {
    out = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  }
  return out;
}

}  // namespace

LatticeGraph LatticeGraph::build(LatticeKind kind, int dim, int size, Boundary boundary) {
  if (kind == LatticeKind::Custom) throw std::invalid_argument("custom graphs are built with from_edges");
  if (kind == LatticeKind::Hypercubic && (dim < 2 || dim > 4))
    throw std::invalid_argument("hypercubic lattices support d in {2, 3, 4}, got d=" + std::to_string(dim));
  if (kind == LatticeKind::NnnSquare && dim != 2)
    throw std::invalid_argument("nnn-square lattice is two-dimensional, got d=" + std::to_string(dim));
  if (size < 2) throw std::invalid_argument("lattice size must be >= 2, got " + std::to_string(size));
  if (boundary == Boundary::Periodic && size < 3)
    throw std::invalid_argument("periodic tori need N >= 3 to avoid doubled edges, got " + std::to_string(size));

  LatticeGraph g;
  g.kind_ = kind;
  g.boundary_ = boundary;
  g.dim_ = dim;
  g.size_ = size;
  g.side_ = boundary == Boundary::Periodic ? size : 2 * size + 1;

  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(g.side_);

  const auto forward = forward_stencil(kind, dim);
  for (const auto& s : forward) {
    g.stencil_.push_back(s);
    std::vector<int> neg(s.size());
    std::transform(s.begin(), s.end(), neg.begin(), [](int v) { return -v; });
    g.stencil_.push_back(neg);
  }

  std::vector<int> c(dim), nb(dim);
  for (Vertex v = 0; v < n; ++v) {
    c = g.coords(v);
    for (const auto& s : forward) {
      bool inside = true;
      for (int i = 0; i < dim; ++i) {
        nb[i] = c[i] + s[i];
        if (boundary == Boundary::WiredFrame && (nb[i] < -size || nb[i] > size)) inside = false;
      }
      if (!inside) continue;
      const Vertex w = g.index(nb);
      g.edges_.push_back({std::min(v, w), std::max(v, w)});
    }
  }

  if (boundary == Boundary::WiredFrame) {
    g.frozen_.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      c = g.coords(v);
      for (int x : c)
        if (x == -size || x == size) g.frozen_[v] = 1;
    }
  }

  g.finalize(n);
  return g;
}

LatticeGraph LatticeGraph::from_edges(std::size_t vertex_count, std::vector<Edge> edges) {
  LatticeGraph g;
  g.kind_ = LatticeKind::Custom;
  g.size_ = static_cast<int>(vertex_count);
  g.side_ = static_cast<int>(vertex_count);
  for (auto& e : edges) {
    if (e.a >= vertex_count || e.b >= vertex_count || e.a == e.b)
      throw std::invalid_argument("edge endpoints out of range or self-loop");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  g.edges_ = std::move(edges);
  g.finalize(vertex_count);
  return g;
}

void LatticeGraph::finalize(std::size_t vertex_count) {
  auto sorted = edges_;
  std::sort(sorted.begin(), sorted.end(), [](const Edge& x, const Edge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("graph has duplicate edges");

  std::vector<std::size_t> deg(vertex_count, 0);
  for (const auto& e : edges_) {
    ++deg[e.a];
    ++deg[e.b];
  }
  offsets_.assign(vertex_count + 1, 0);
  for (std::size_t v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.assign(offsets_.back(), 0);
  edge_ids_.assign(offsets_.back(), 0);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    adjacency_[fill[e.a]] = e.b;
    edge_ids_[fill[e.a]++] = id;
    adjacency_[fill[e.b]] = e.a;
    edge_ids_[fill[e.b]++] = id;
  }
}

std::size_t LatticeGraph::frozen_count() const noexcept {
  return static_cast<std::size_t>(std::count(frozen_.begin(), frozen_.end(), std::uint8_t{1}));
}

std::vector<int> LatticeGraph::coords(Vertex v) const {
  if (kind_ == LatticeKind::Custom) throw std::logic_error("custom graphs have no coordinates");
  std::vector<int> c(dim_);
  std::size_t rest = v;
  for (int i = dim_ - 1; i >= 0; --i) {
    c[i] = static_cast<int>(rest % side_);
    rest /= side_;
  }
  if (boundary_ == Boundary::WiredFrame)
    for (int& x : c) x -= size_;
  return c;
}

Vertex LatticeGraph::index(std::span<const int> coords) const {
  if (kind_ == LatticeKind::Custom) throw std::logic_error("custom graphs have no coordinates");
  if (static_cast<int>(coords.size()) != dim_) throw std::invalid_argument("coordinate rank mismatch");
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) {
    int x = coords[i];
    if (boundary_ == Boundary::Periodic) {
      x %= side_;
      if (x < 0) x += side_;
    } else {
      if (x < -size_ || x > size_) throw std::out_of_range("coordinate outside wired box");
      x += size_;
    }
    idx = idx * side_ + static_cast<std::size_t>(x);
  }
  return static_cast<Vertex>(idx);
}

Vertex LatticeGraph::origin() const {
  if (kind_ == LatticeKind::Custom) return 0;
  std::vector<int> zero(dim_, 0);
  return index(zero);
}

std::string LatticeGraph::descriptor() const {
  if (kind_ == LatticeKind::Custom)
    return "custom(V=" + std::to_string(vertex_count()) + ",E=" + std::to_string(edges_.size()) + ")";
  std::string s = to_string(kind_) + "(";
  if (kind_ == LatticeKind::Hypercubic) s += "d=" + std::to_string(dim_) + ",";
  return s + "N=" + std::to_string(size_) + "," + to_string(boundary_) + ")";
}

bool coloring_valid(const LatticeGraph& graph, std::span<const std::uint32_t> class_of, int radius) {
  const std::size_t n = graph.vertex_count();
  if (class_of.size() != n) return false;
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<Vertex> frontier, next;
  for (Vertex v = 0; v < n; ++v) {
    frontier.assign(1, v);
    stamp[v] = v + 1;
    for (int r = 0; r < radius; ++r) {
      next.clear();
      for (Vertex u : frontier) {
        for (Vertex w : graph.neighbors(u)) {
          if (stamp[w] == v + 1) continue;
          stamp[w] = v + 1;
          if (class_of[w] == class_of[v]) return false;
          next.push_back(w);
        }
      }
      frontier.swap(next);
    }
  }
  return true;
}

namespace {

using ClassFn = std::function<std::uint32_t(const std::vector<int>&)>;

int pos_mod(int x, int q) {
  const int r = x % q;
  return r < 0 ? r + q : r;
}

Coloring make_coloring(const LatticeGraph& graph, const ClassFn& fn, std::string scheme) {
  Coloring c;
  c.scheme = std::move(scheme);
  const std::size_t n = graph.vertex_count();
  c.class_of.resize(n);
  std::uint32_t max_class = 0;
  for (Vertex v = 0; v < n; ++v) {
    c.class_of[v] = fn(graph.coords(v));
    max_class = std::max(max_class, c.class_of[v]);
  }
  std::vector<std::vector<Vertex>> classes(max_class + 1);
  for (Vertex v = 0; v < n; ++v) classes[c.class_of[v]].push_back(v);
  // Compact away empty classes so ids stay dense.
  std::vector<std::uint32_t> remap(max_class + 1, 0);
  for (std::uint32_t k = 0; k <= max_class; ++k) {
    if (classes[k].empty()) continue;
    remap[k] = static_cast<std::uint32_t>(c.classes.size());
    c.classes.push_back(std::move(classes[k]));
  }
  for (auto& k : c.class_of) k = remap[k];
  return c;
}

bool divides_side(const LatticeGraph& graph, int q) {
  return graph.boundary() == Boundary::WiredFrame || graph.side() % q == 0;
}

}  // namespace

Coloring coloring(const LatticeGraph& graph, int radius) {
  if (radius != 1 && radius != 2) throw std::invalid_argument("coloring radius must be 1 or 2");

  if (graph.kind() != LatticeKind::Custom) {
    const int d = graph.dim();
    std::vector<std::pair<ClassFn, std::string>> fixed;
    if (radius == 1 && graph.kind() == LatticeKind::Hypercubic) {
      fixed.emplace_back(
          [](const std::vector<int>& x) {
            int s = 0;
            for (int v : x) s += v;
            return static_cast<std::uint32_t>(pos_mod(s, 2));
          },
          "parity");
    }
    const int q = (radius == 1) ? 2 : 3;
    if (radius == 2 || graph.kind() == LatticeKind::NnnSquare) {
      fixed.emplace_back(
          [q](const std::vector<int>& x) {
            std::uint32_t c = 0, w = 1;
            for (int v : x) {
              c += w * static_cast<std::uint32_t>(pos_mod(v, q));
              w *= static_cast<std::uint32_t>(q);
            }
            return c;
          },
          "product-mod-" + std::to_string(q));
    }
    for (const auto& [fn, name] : fixed) {
      auto c = make_coloring(graph, fn, name);
      if (coloring_valid(graph, c.class_of, radius)) return c;
    }

    // Linear modular colorings sum_i a_i x_i mod q with a_0 = 1.
    const int qmax = 16;
    for (int mod = 2; mod <= qmax; ++mod) {
      if (!divides_side(graph, mod)) continue;
      std::vector<int> a(d, 1);
      while (true) {
        auto fn = [a, mod](const std::vector<int>& x) {
          long s = 0;
          for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long>(a[i]) * x[i];
          long r = s % mod;
          return static_cast<std::uint32_t>(r < 0 ? r + mod : r);
        };
        auto c = make_coloring(graph, fn, "linear-mod-" + std::to_string(mod));
        if (coloring_valid(graph, c.class_of, radius)) return c;
        int i = 1;
        while (i < d && ++a[i] == mod) a[i++] = 1;
        if (i >= d) break;
      }
    }
  }

  Coloring c;
  c.scheme = "singleton";
  c.fallback = true;
  c.class_of.resize(graph.vertex_count());
  for (Vertex v = 0; v < graph.vertex_count(); ++v) {
    c.class_of[v] = v;
    c.classes.push_back({v});
  }
  return c;
}

}  // namespace disxy
