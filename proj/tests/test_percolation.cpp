#include <doctest.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "disxy/percolation.hpp"

using namespace disxy;

namespace {

using Mask = std::function<bool(const std::vector<int>&)>;  // true = vacant

// Coordinates are read relative to the origin, wrapped into [-side/2, side/2).
DisorderField field_from(std::shared_ptr<const LatticeGraph> g, const Mask& vacant) {
  std::vector<std::uint8_t> m(g->vertex_count());
  const int s = g->side();
  for (Vertex v = 0; v < g->vertex_count(); ++v) {
    auto c = g->coords(v);
    for (int& x : c)
      if (x >= s / 2) x -= s;
    m[v] = vacant(c) ? 1 : 0;
  }
  return DisorderField::from_mask(g, std::move(m));
}

std::shared_ptr<const LatticeGraph> torus(int d, int n) {
  return std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(d, n));
}

// Breadth-first reference: sorted cluster sizes, spanning count and the
// largest non-spanning diameter.
struct BfsSummary {
  std::vector<std::uint32_t> sizes;
  int spanning = 0;
  int max_small_diameter = -1;
};

BfsSummary bfs_clusters(const LatticeGraph& g, const DisorderField& f, Phase phase, const Box& box) {
  const int d = g.dim(), side = box.side();
  std::map<std::vector<int>, bool> seen;
  auto in_phase = [&](const std::vector<int>& local) {
    std::vector<int> gc(d);
    for (int i = 0; i < d; ++i) gc[i] = box.center[i] + local[i] - box.length;
    return f.vacant(g.index(gc)) == (phase == Phase::Vacant);
  };
  BfsSummary out;
  std::vector<int> start(d, 0);
  auto next = [&](std::vector<int>& c) {
    for (int i = d - 1; i >= 0; --i) {
      if (++c[i] < side) return true;
      c[i] = 0;
    }
    return false;
  };
  do {
    if (seen.count(start) || !in_phase(start)) continue;
    std::deque<std::vector<int>> q{start};
    seen[start] = true;
    std::vector<int> lo = start, hi = start;
    std::uint32_t n = 0;
    while (!q.empty()) {
      auto c = q.front();
      q.pop_front();
      ++n;
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], c[i]);
        hi[i] = std::max(hi[i], c[i]);
      }
      for (int i = 0; i < d; ++i)
        for (int s : {-1, 1}) {
          auto nb = c;
          nb[i] += s;
          if (nb[i] < 0 || nb[i] >= side || seen.count(nb) || !in_phase(nb)) continue;
          seen[nb] = true;
          q.push_back(nb);
        }
    }
    out.sizes.push_back(n);
    bool spans = true;
    int diam = 0;
    for (int i = 0; i < d; ++i) {
      spans = spans && lo[i] == 0 && hi[i] == side - 1;
      diam = std::max(diam, hi[i] - lo[i]);
    }
    if (spans)
      ++out.spanning;
    else
      out.max_small_diameter = std::max(out.max_small_diameter, diam);
  } while (next(start));
  std::sort(out.sizes.begin(), out.sizes.end());
  return out;
}

std::vector<std::uint32_t> sorted(std::vector<std::uint32_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("hand-labeled 5x5 box") {
  // rows are the first coordinate
  const char* rows[] = {"OOVOO", "VOVVO", "VOOVO", "VVOVV", "OOOVO"};
  auto g = torus(2, 5);
  std::vector<std::uint8_t> m(25);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) m[r * 5 + c] = rows[r][c] == 'V';
  auto f = DisorderField::from_mask(g, m);
  const Box box{{2, 2}, 2};

  auto occ = label_clusters(*g, f, Phase::Occupied, box);
  CHECK(sorted(occ.sizes) == std::vector<std::uint32_t>{1, 4, 9});
  auto vac = label_clusters(*g, f, Phase::Vacant, box);
  CHECK(sorted(vac.sizes) == std::vector<std::uint32_t>{4, 7});
  // the 9-site occupied cluster runs over every row but columns 0..2 only
  const auto big = static_cast<std::size_t>(occ.labels[0]);
  CHECK(occ.sizes[big] == 9);
  CHECK(occ.diameter(big) == 4);
  CHECK_FALSE(occ.touches_all_faces(big));
  CHECK_FALSE(unique_spanning_cluster(occ).has_value());
  CHECK(occ.labels[2] == -1);
  CHECK(vac.labels[0] == -1);
  // periodic edges of the 5-torus are not used inside the box
  CHECK(occ.labels[4] != occ.labels[0]);
}

TEST_CASE("labeling agrees with breadth-first search") {
  for (int d : {2, 3}) {
    auto g = torus(d, d == 2 ? 30 : 14);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const double p = 0.3 + 0.05 * static_cast<double>(seed);
      auto f = sample_disorder(g, p, seed);
      const Box box{std::vector<int>(d, static_cast<int>(seed)), d == 2 ? 12 : 5};
      for (Phase ph : {Phase::Occupied, Phase::Vacant}) {
        auto l = label_clusters(*g, f, ph, box);
        auto ref = bfs_clusters(*g, f, ph, box);
        CHECK(sorted(l.sizes) == ref.sizes);
        int spanning = 0;
        for (std::size_t c = 0; c < l.cluster_count(); ++c) spanning += l.touches_all_faces(c);
        CHECK(spanning == ref.spanning);
        for (int divisor : {1, 2, 5, 100}) {
          const bool expect = ref.spanning == 1 && ref.max_small_diameter <= box.length / divisor;
          CHECK(classify_pre_good(l, divisor) == expect);
        }
      }
    }
  }
}

TEST_CASE("labeling rejects bad regions") {
  auto g = torus(2, 6);
  auto f = DisorderField::uniform(g, false);
  CHECK_THROWS(label_clusters(*g, f, Phase::Occupied, Box{{0, 0}, 3}));
  CHECK_THROWS(label_clusters(*g, f, Phase::Occupied, Box{{0, 0, 0}, 1}));
  CHECK_THROWS(label_clusters(*g, f, Phase::Occupied, Box{{0, 0}, 0}));
  auto other = torus(2, 7);
  CHECK_THROWS(label_clusters(*other, f, Phase::Occupied, Box{{0, 0}, 1}));
}

TEST_CASE("uniform fields") {
  auto g = torus(3, 26);
  const Box box{{0, 0, 0}, 10};
  auto f = DisorderField::uniform(g, false);
  CHECK(classify_pre_good(label_clusters(*g, f, Phase::Occupied, box)));
  CHECK_FALSE(classify_pre_good(label_clusters(*g, f, Phase::Vacant, box)));
  CHECK(classify_good(f, box, Phase::Occupied));
  CHECK_FALSE(classify_good(f, box, Phase::Vacant));
  auto c = classify_optimal(f, box);
  CHECK(c.good_occupied);
  CHECK_FALSE(c.good);
  CHECK_FALSE(c.optimal);
  CHECK(c.interface.empty());
}

TEST_CASE("checkerboard has only singletons") {
  auto g = torus(3, 26);
  auto f = field_from(g, [](const std::vector<int>& c) { return ((c[0] + c[1] + c[2]) & 1) != 0; });
  const Box box{{0, 0, 0}, 10};
  for (Phase ph : {Phase::Occupied, Phase::Vacant}) {
    auto l = label_clusters(*g, f, ph, box);
    for (auto s : l.sizes) CHECK(s == 1);
    CHECK_FALSE(classify_pre_good(l));
  }
  CHECK_FALSE(classify_optimal(f, box).optimal);
}

TEST_CASE("two disjoint spanning clusters are not pre-good") {
  auto g = torus(3, 26);
  auto occupied = [](const std::vector<int>& c) {
    const int x = c[0], y = c[1], z = c[2];
    auto in = [](int v) { return v >= -10 && v <= 10; };
    if (!in(x) || !in(y) || !in(z)) return false;
    const bool a_plane = x == -10 && !((y == 10 && z == 10) || (y == 9 && z == 10) || (y == 10 && z == 9));
    const bool b_plane = x == 10 && !((y == -10 && z == -10) || (y == -9 && z == -10) || (y == -10 && z == -9));
    const bool a_line = y == -10 && z == -10;
    const bool b_line = y == 10 && z == 10;
    return a_plane || b_plane || a_line || b_line;
  };
  auto f = field_from(g, [&](const std::vector<int>& c) { return !occupied(c); });
  const Box box{{0, 0, 0}, 10};
  auto l = label_clusters(*g, f, Phase::Occupied, box);
  CHECK(l.cluster_count() == 2);
  for (std::size_t c = 0; c < 2; ++c) CHECK(l.touches_all_faces(c));
  CHECK_FALSE(unique_spanning_cluster(l).has_value());
  CHECK_FALSE(classify_pre_good(l));
  CHECK_FALSE(classify_pre_good(l, 1));
}

TEST_CASE("an island in the margin breaks goodness but not pre-goodness") {
  auto g = torus(3, 26);
  // occupied pair at x = 12 walled off by vacant sites; the sub-box centred
  // at (11, 0, 0) sees it as a non-spanning cluster of diameter 1 > 0
  auto island = [](const std::vector<int>& c) {
    return c[0] == 12 && c[1] == 0 && (c[2] == 0 || c[2] == 1);
  };
  auto moat = [&](const std::vector<int>& c) {
    if (island(c)) return false;
    for (int i = 0; i < 3; ++i)
      for (int s : {-1, 1}) {
        auto nb = c;
        nb[i] += s;
        if (island(nb)) return true;
      }
    return false;
  };
  auto f = field_from(g, moat);
  const Box box{{0, 0, 0}, 10};
  CHECK(classify_pre_good(label_clusters(*g, f, Phase::Occupied, box)));
  CHECK_FALSE(classify_good(f, box, Phase::Occupied));
  // a looser small-cluster bound accepts the island
  CHECK(classify_good(f, box, Phase::Occupied, 1));

  auto flipped = f.flipped();
  CHECK(classify_pre_good(label_clusters(*g, flipped, Phase::Vacant, box)));
  CHECK_FALSE(classify_good(flipped, box, Phase::Vacant));
}

TEST_CASE("interpenetrating phases are optimal, a slab is not") {
  auto g = torus(3, 26);
  auto inter = field_from(g, [](const std::vector<int>& c) {
    auto even = [](int v) { return (v & 1) == 0; };
    const bool occ = (even(c[2]) && !(!even(c[0]) && !even(c[1]))) || (even(c[0]) && even(c[1]));
    return !occ;
  });
  const Box box{{0, 0, 0}, 10};
  auto c = classify_optimal(inter, box);
  CHECK(c.pre_good_occupied);
  CHECK(c.pre_good_vacant);
  CHECK(c.good);
  CHECK(c.optimal);
  REQUIRE(c.spanning.has_value());
  CHECK_FALSE(c.interface.empty());
  for (const auto& e : c.interface) {
    CHECK(inter.occupied(e.a) != inter.occupied(e.b));
    const auto n = g->neighbors(e.a);
    CHECK(std::find(n.begin(), n.end(), e.b) != n.end());
  }

  auto slab = field_from(g, [](const std::vector<int>& c) { return c[2] >= 0; });
  auto s = classify_optimal(slab, box);
  CHECK_FALSE(s.pre_good_occupied);
  CHECK_FALSE(s.pre_good_vacant);
  CHECK_FALSE(s.optimal);
}

TEST_CASE("good implies pre-good and respects duality") {
  auto g = torus(2, 30);
  const Box box{{0, 0}, 12};
  int good_seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto f = sample_disorder(g, seed % 2 ? 0.9 : 0.995, seed);
    for (int divisor : {1, 100}) {
      for (Phase ph : {Phase::Occupied, Phase::Vacant}) {
        const bool good = classify_good(f, box, ph, divisor);
        const bool pre = classify_pre_good(label_clusters(*g, f, ph, box), divisor);
        if (good) CHECK(pre);
        good_seen += good;
        const Phase other = ph == Phase::Occupied ? Phase::Vacant : Phase::Occupied;
        CHECK(classify_good(f.flipped(), box, other, divisor) == good);
      }
      auto c = classify_optimal(f, box, divisor);
      CHECK(c.good == (c.good_occupied && c.good_vacant));
      if (c.optimal) CHECK(c.good);
    }
  }
  CHECK(good_seen > 0);
}

TEST_CASE("goodness argument checks") {
  auto small = torus(3, 20);
  auto f = DisorderField::uniform(small, false);
  CHECK_THROWS(classify_good(f, Box{{0, 0, 0}, 10}, Phase::Occupied));
  auto g = torus(3, 26);
  auto h = DisorderField::uniform(g, false);
  CHECK_THROWS(classify_good(h, Box{{0, 0, 0}, 9}, Phase::Occupied));
}

TEST_CASE("box scan at degenerate densities") {
  BoxScanParams p;
  p.dim = 2;
  p.lengths = {10, 20};
  p.trials = 30;
  p.seed = 5;
  p.p = 1.0;
  auto rows = box_probability_scan(p);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.pre_good == r.trials);
    CHECK(r.good == 0);
    CHECK(r.optimal == 0);
    CHECK(r.pre_good_ci.high == 1.0);
    CHECK(r.good_ci.low == 0.0);
  }
  p.p = 0.0;
  for (const auto& r : box_probability_scan(p)) CHECK(r.pre_good == 0);
  p.trials = 10;
  CHECK_THROWS(box_probability_scan(p));
}

TEST_CASE("box scan is reproducible") {
  BoxScanParams p;
  p.dim = 2;
  p.p = 0.8;
  p.lengths = {10};
  p.trials = 40;
  p.seed = 9;
  p.divisor = 1;
  auto a = box_probability_scan(p), b = box_probability_scan(p);
  CHECK(a[0].pre_good == b[0].pre_good);
  CHECK(a[0].good == b[0].good);
  CHECK(a[0].pre_good > 0);
}
