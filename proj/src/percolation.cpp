#include "disxy/percolation.hpp"

#include <algorithm>
#include <stdexcept>

#include "disxy/rng.hpp"

namespace disxy {

int ClusterLabeling::diameter(std::size_t c) const noexcept {
  int d = 0;
  for (int i = 0; i < dim; ++i) d = std::max(d, hi[c * dim + i] - lo[c * dim + i]);
  return d;
}

bool ClusterLabeling::touches_all_faces(std::size_t c) const noexcept {
  const int last = region.side() - 1;
  for (int i = 0; i < dim; ++i)
    if (lo[c * dim + i] != 0 || hi[c * dim + i] != last) return false;
  return true;
}

namespace {

std::vector<std::vector<int>> forward_stencil(const LatticeGraph& graph) {
  // stencil() lists each forward displacement followed by its negation
  std::vector<std::vector<int>> out;
  const auto& all = graph.stencil();
  for (std::size_t k = 0; k < all.size(); k += 2) out.push_back(all[k]);
  return out;
}

void check_region(const LatticeGraph& graph, const Box& region) {
  if (graph.kind() == LatticeKind::Custom) throw std::invalid_argument("boxes need a lattice graph");
  if (region.length < 1) throw std::invalid_argument("box length must be >= 1");
  if (static_cast<int>(region.center.size()) != graph.dim()) throw std::invalid_argument("box center has wrong rank");
  if (graph.boundary() == Boundary::Periodic && region.side() > graph.side())
    throw std::invalid_argument("box is larger than the torus");
}

}  // namespace

const ClusterLabeling& ClusterLabeler::label(const LatticeGraph& graph, const DisorderField& field, Phase phase,
                                             const Box& region) {
  check_region(graph, region);
  if (!(field.graph() == graph)) throw std::invalid_argument("disorder field belongs to a different graph");
  const int d = graph.dim();
  const int side = region.side();
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(side);

  auto& o = out_;
  o.region = region;
  o.dim = d;
  o.phase = phase;
  o.sites.resize(n);
  o.labels.assign(n, -1);
  const bool want_vacant = phase == Phase::Vacant;

  coords_.assign(d, 0);
  std::vector<int> global(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < d; ++i) global[i] = region.center[i] + coords_[i] - region.length;
    o.sites[k] = graph.index(global);
    for (int i = d - 1; i >= 0; --i) {
      if (++coords_[i] < side) break;
      coords_[i] = 0;
    }
  }

  std::vector<std::ptrdiff_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;
  const auto fwd = forward_stencil(graph);

  sets_.reset(n);
  coords_.assign(d, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (field.vacant(o.sites[k]) == want_vacant) {
      for (const auto& s : fwd) {
        std::ptrdiff_t off = 0;
        bool inside = true;
        for (int i = 0; i < d && inside; ++i) {
          const int c = coords_[i] + s[i];
          inside = c >= 0 && c < side;
          off += s[i] * stride[i];
        }
        if (!inside) continue;
        const auto nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
        if (field.vacant(o.sites[nb]) == want_vacant)
          sets_.unite(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(nb));
      }
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++coords_[i] < side) break;
      coords_[i] = 0;
    }
  }

  root_label_.assign(n, -1);
  o.sizes.clear();
  o.lo.clear();
  o.hi.clear();
  coords_.assign(d, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (field.vacant(o.sites[k]) == want_vacant) {
      const auto r = sets_.find(static_cast<std::uint32_t>(k));
      if (root_label_[r] < 0) {
        root_label_[r] = static_cast<std::int32_t>(o.sizes.size());
        o.sizes.push_back(0);
        o.lo.insert(o.lo.end(), coords_.begin(), coords_.end());
        o.hi.insert(o.hi.end(), coords_.begin(), coords_.end());
      }
      const auto c = static_cast<std::size_t>(root_label_[r]);
      o.labels[k] = root_label_[r];
      ++o.sizes[c];
      for (int i = 0; i < d; ++i) {
        o.lo[c * d + i] = std::min(o.lo[c * d + i], coords_[i]);
        o.hi[c * d + i] = std::max(o.hi[c * d + i], coords_[i]);
      }
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++coords_[i] < side) break;
      coords_[i] = 0;
    }
  }
  return o;
}

ClusterLabeling label_clusters(const LatticeGraph& graph, const DisorderField& field, Phase phase, const Box& region) {
  ClusterLabeler l;
  return l.label(graph, field, phase, region);
}

std::optional<std::size_t> unique_spanning_cluster(const ClusterLabeling& labeling) {
  std::optional<std::size_t> found;
  for (std::size_t c = 0; c < labeling.cluster_count(); ++c) {
    if (!labeling.touches_all_faces(c)) continue;
    if (found) return std::nullopt;
    found = c;
  }
  return found;
}

namespace {

bool pre_good(const ClusterLabeling& l, int divisor) {
  const int bound = small_cluster_bound(l.region.length, divisor);
  int spanning = 0;
  for (std::size_t c = 0; c < l.cluster_count(); ++c) {
    if (l.touches_all_faces(c)) {
      if (++spanning > 1) return false;
    } else if (l.diameter(c) > bound) {
      return false;
    }
  }
  return spanning == 1;
}

void check_good_args(const DisorderField& field, const Box& box) {
  if (box.length < 10) throw std::invalid_argument("goodness needs L >= 10");
  const auto& g = field.graph();
  const int reach = 2 * (box.length + 2 * sub_box_length(box.length)) + 1;
  if (g.boundary() == Boundary::Periodic && g.side() < reach)
    throw std::invalid_argument("torus too small for the sub-box scan: side " + std::to_string(g.side()) +
                                " < " + std::to_string(reach));
}

bool good_with(ClusterLabeler& labeler, const DisorderField& field, const Box& box, Phase phase, int divisor) {
  const auto& g = field.graph();
  if (!pre_good(labeler.label(g, field, phase, box), divisor)) return false;
  const int l = sub_box_length(box.length);
  const int reach = box.length + l;
  const int d = g.dim();
  Box sub{std::vector<int>(d), l};
  std::vector<int> off(d, -reach);
  while (true) {
    for (int i = 0; i < d; ++i) sub.center[i] = box.center[i] + off[i];
    if (!pre_good(labeler.label(g, field, phase, sub), divisor)) return false;
    int i = d - 1;
    while (i >= 0 && ++off[i] > reach) off[i--] = -reach;
    if (i < 0) break;
  }
  return true;
}

}  // namespace

bool classify_pre_good(const ClusterLabeling& labeling, int divisor) { return pre_good(labeling, divisor); }

bool classify_good(const DisorderField& field, const Box& box, Phase phase, int divisor) {
  check_good_args(field, box);
  ClusterLabeler labeler;
  return good_with(labeler, field, box, phase, divisor);
}

BoxClassification classify_optimal(const DisorderField& field, const Box& box, int divisor) {
  check_good_args(field, box);
  const auto& g = field.graph();
  BoxClassification r;
  r.box = box;
  const auto occ = label_clusters(g, field, Phase::Occupied, box);
  const auto vac = label_clusters(g, field, Phase::Vacant, box);
  r.pre_good_occupied = pre_good(occ, divisor);
  r.pre_good_vacant = pre_good(vac, divisor);
  ClusterLabeler labeler;
  r.good_occupied = r.pre_good_occupied && good_with(labeler, field, box, Phase::Occupied, divisor);
  r.good_vacant = r.pre_good_vacant && good_with(labeler, field, box, Phase::Vacant, divisor);
  r.good = r.good_occupied && r.good_vacant;
  if (!r.good) return r;

  const auto co = *unique_spanning_cluster(occ);
  const auto cv = *unique_spanning_cluster(vac);
  r.spanning = std::make_pair(co, cv);

  const int d = g.dim();
  const int side = box.side();
  std::vector<int> c(d, 0);
  std::vector<std::ptrdiff_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;
  for (std::size_t k = 0; k < occ.sites.size(); ++k) {
    if (occ.labels[k] == static_cast<std::int32_t>(co)) {
      for (const auto& s : g.stencil()) {
        std::ptrdiff_t off = 0;
        bool inside = true;
        for (int i = 0; i < d && inside; ++i) {
          const int x = c[i] + s[i];
          inside = x >= 0 && x < side;
          off += s[i] * stride[i];
        }
        if (!inside) continue;
        const auto nb = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + off);
        if (vac.labels[nb] == static_cast<std::int32_t>(cv))
          r.interface.push_back({std::min(occ.sites[k], occ.sites[nb]), std::max(occ.sites[k], occ.sites[nb])});
      }
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++c[i] < side) break;
      c[i] = 0;
    }
  }
  r.optimal = !r.interface.empty();
  return r;
}

std::vector<BoxScanRow> box_probability_scan(const BoxScanParams& params) {
  if (params.trials < 30) throw std::invalid_argument("box scan needs at least 30 trials");
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw std::invalid_argument("occupation probability must lie in [0, 1]");
  std::vector<BoxScanRow> rows;
  for (int L : params.lengths) {
    if (L < 10) throw std::invalid_argument("box lengths must be >= 10");
    const int half = L + 2 * sub_box_length(L);
    auto g = std::make_shared<const LatticeGraph>(
        LatticeGraph::build(params.kind, params.dim, 2 * half + 2, Boundary::Periodic));
    const Box box{std::vector<int>(params.dim, half), L};
    BoxScanRow row;
    row.length = L;
    row.trials = params.trials;
    for (int t = 0; t < params.trials; ++t) {
      const auto field = sample_disorder(
          g, params.p, derive_key(params.seed, {static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(t)}));
      const auto c = classify_optimal(field, box, params.divisor);
      row.pre_good += c.pre_good_occupied;
      row.good += c.good;
      row.optimal += c.optimal;
    }
    row.pre_good_ci = stats::wilson_interval(row.pre_good, row.trials);
    row.good_ci = stats::wilson_interval(row.good, row.trials);
    row.optimal_ci = stats::wilson_interval(row.optimal, row.trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace disxy
