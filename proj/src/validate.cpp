#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>

#include "disxy/analysis.hpp"
#include "disxy/change_of_variables.hpp"
#include "disxy/cli.hpp"
#include "disxy/green.hpp"
#include "disxy/io.hpp"
#include "disxy/percolation.hpp"
#include "disxy/quadrature.hpp"
#include "disxy/rng.hpp"

namespace disxy {

namespace {

struct Fail {
  std::string why;
};

void expect(bool ok, const std::string& why) {
  if (!ok) throw Fail{why};
}

std::vector<std::shared_ptr<const LatticeGraph>> sample_graphs() {
  return {std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 6)),
          std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(3, 4)),
          std::make_shared<const LatticeGraph>(LatticeGraph::nnn_square(6)),
          std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 3, Boundary::WiredFrame))};
}

std::string suite_lattice(std::uint64_t) {
  std::size_t checked = 0;
  for (const auto& g : sample_graphs()) {
    std::set<std::pair<Vertex, Vertex>> seen;
    for (const auto& e : g->edges()) {
      expect(e.a < e.b, "edge not normalized in " + g->descriptor());
      expect(seen.insert({e.a, e.b}).second, "duplicate edge in " + g->descriptor());
    }
    std::size_t deg = 0;
    for (Vertex v = 0; v < g->vertex_count(); ++v) {
      deg += g->degree(v);
      for (Vertex y : g->neighbors(v)) {
        const auto back = g->neighbors(y);
        expect(std::find(back.begin(), back.end(), v) != back.end(), "asymmetric adjacency");
      }
    }
    expect(deg == 2 * g->edges().size(), "degree sum mismatch");
    for (int radius : {1, 2}) {
      const auto c = coloring(*g, radius);
      expect(coloring_valid(*g, c.class_of, radius), "invalid coloring on " + g->descriptor());
    }
    ++checked;
  }
  return std::to_string(checked) + " graphs";
}

std::string suite_disorder(std::uint64_t seed) {
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 200));
  const auto f = sample_disorder(g, 0.5, seed);
  const double frac = static_cast<double>(f.occupied_count()) / static_cast<double>(f.size());
  expect(std::abs(frac - 0.5) < 5.0 * std::sqrt(0.25 / static_cast<double>(f.size())), "occupied fraction off");
  expect(DisorderField::from_hex(g, f.to_hex(), f.p(), f.seed()) == f, "hex round trip");
  expect(f.flipped().flipped() == f, "flip is not an involution");
  expect(sample_disorder(g, 0.5, seed) == f, "regeneration differs");
  return "fraction " + io::fmt(frac).substr(0, 6);
}

std::string suite_model(std::uint64_t seed) {
  std::size_t trials = 0;
  for (const auto& g : sample_graphs()) {
    for (Variant v : {Variant::XY, Variant::Bilayer, Variant::EffectiveStrong, Variant::EffectiveWeak,
                      Variant::CleanWeak}) {
      std::shared_ptr<const DisorderField> d;
      if (v != Variant::XY && v != Variant::CleanWeak)
        d = std::make_shared<const DisorderField>(sample_disorder(g, 0.5, seed));
      Model m(v, 3.0, g, d);
      auto c = m.random_configuration(derive_key(seed, {1}));
      auto cache = m.make_cache(c);
      CounterRng rng(derive_key(seed, {2, static_cast<std::uint64_t>(v)}));
      for (int t = 0; t < 50; ++t) {
        const auto site = static_cast<Vertex>(rng.uniform() * static_cast<double>(g->vertex_count()));
        if (g->frozen(site)) continue;
        const int layer = m.layers() == 2 && rng.uniform() < 0.5 ? 1 : 0;
        const double a = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
        const double before = m.energy(c);
        const double de = m.delta(c, cache, site, a, layer);
        m.apply(c, cache, site, a, layer);
        expect(std::abs(m.energy(c) - before - de) < 1e-9, "delta disagrees with energy for " + to_string(v));
        ++trials;
      }
    }
  }
  return std::to_string(trials) + " moves";
}

std::string suite_cov(std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double tp = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    const double tm = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    const double alpha = i % 2 ? std::numbers::pi : 0.0;
    try {
      const auto f = cov_forward(tp, tm, alpha);
      const auto b = cov_inverse(f.zeta, f.w, alpha);
      worst = std::max({worst, std::abs(wrap_angle(b.plus - tp)), std::abs(wrap_angle(b.minus - tm))});
    } catch (const SingularInputError&) {
    }
  }
  expect(worst < 1e-9, "round trip error " + io::fmt(worst));
  return "max round-trip error " + io::fmt(worst);
}

std::string suite_quadrature(std::uint64_t seed) {
  CounterRng rng(seed);
  for (int inst = 0; inst < 4; ++inst) {
    std::vector<Coupling> cs{{{1, -1, 0}, 0.0}, {{0, 1, -1}, 0.5 + rng.uniform()}, {{1, 0, 0}, rng.uniform()}};
    const std::vector<int> obs{1, -1, 0};
    double prev = -1.0;
    for (int k = 0; k < 5; ++k) {
      cs[0].J = 0.5 * k;
      const double e = quadrature_expectation(cs, obs, 64);
      expect(e >= prev - 1e-8, "expectation decreased along the ladder");
      prev = e;
    }
  }
  return "4 ladders monotone";
}

std::string suite_mc(std::uint64_t seed) {
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(3, 4));
  auto d = std::make_shared<const DisorderField>(sample_disorder(g, 0.5, seed));
  Model m(Variant::EffectiveStrong, 4.0, g, d);
  RunParams p;
  p.betas = {0.5, 1.0, 2.0};
  p.sweeps_thermalize = 20;
  p.sweeps_measure = 100;
  p.seed = seed;
  const auto a = run_chain(m, p);
  p.threads = 2;
  const auto b = run_chain(m, p);
  for (std::size_t k = 0; k < a.series.size(); ++k)
    for (std::size_t i = 0; i < a.series[k].records.size(); ++i)
      expect(a.series[k].records[i].energy == b.series[k].records[i].energy, "thread count changed the chain");
  return "chains bit-identical across thread counts";
}

std::string suite_analysis(std::uint64_t) {
  expect(std::abs(binder(1.0, 3.0)) < 1e-15, "Gaussian moments should give U = 0");
  expect(std::abs(binder(1.0, 1.0) - 2.0 / 3.0) < 1e-15, "constant moments should give U = 2/3");
  BinderCurve a{8, {1, 2, 3, 4}, {0.1, 0.3, 0.5, 0.6}}, b{12, {1, 2, 3, 4}, {0.05, 0.3, 0.55, 0.65}};
  const auto c = crossing_temperature(a, b);
  expect(c.found && c.beta == 2.0, "crossing not at the shared point");
  return "limits and crossing";
}

std::string suite_percolation(std::uint64_t seed) {
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 30));
  const auto f = sample_disorder(g, 0.6, seed);
  const Box box{{0, 0}, 12};
  const auto occ = label_clusters(*g, f, Phase::Occupied, box);
  const auto dual = label_clusters(*g, f.flipped(), Phase::Vacant, box);
  expect(occ.labels == dual.labels, "duality violated");
  const auto all = DisorderField::uniform(g, false);
  expect(classify_good(all, box, Phase::Occupied), "all-occupied box not good");
  expect(!classify_optimal(all, box).optimal, "all-occupied box optimal");
  return std::to_string(occ.cluster_count()) + " clusters";
}

std::string suite_green(std::uint64_t) {
  const auto t = green_fourier(1.0, 2, 32);
  const auto b = green_box(16, 1.0, 0.25);
  expect(operator_residual(t) < 1e-8 && operator_residual(b) < 1e-8, "defining identity fails");
  const auto w = green_walk({1, 0}, 1.0, 2, 60);
  const double tb = torus_image_bound(1.0, 0.25, 2, 32, 1);
  expect(std::abs(w.value - t.at({1, 0})) <= w.tail_bound + tb + 1e-13, "walk and Fourier disagree");
  expect(std::abs(b.at({1, 0}) - t.at({1, 0})) <= box_exit_bound(1.0, 0.25, 16, 1) + tb + 1e-9,
         "box and Fourier disagree");
  return "three methods agree";
}

std::string suite_io(std::uint64_t seed) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23})
    expect(std::strtod(io::fmt(x).c_str(), nullptr) == x, "CSV number does not round-trip");
  auto g = std::make_shared<const LatticeGraph>(LatticeGraph::hypercubic(2, 4));
  auto d = std::make_shared<const DisorderField>(sample_disorder(g, 0.5, seed));
  Model m(Variant::Bilayer, 2.0, g, d);
  const auto c = m.random_configuration(seed);
  const auto dir = std::filesystem::temp_directory_path() / ("disxy-validate-" + std::to_string(seed));
  io::write_snapshot(dir / "snap", m, c, seed);
  const bool same = io::read_snapshot(dir / "snap") == c;
  std::filesystem::remove_all(dir);
  expect(same, "snapshot does not round-trip");
  return "numbers and snapshots round-trip";
}

using Suite = std::string (*)(std::uint64_t);

const std::vector<std::pair<std::string, Suite>>& suite_table() {
  static const std::vector<std::pair<std::string, Suite>> t{
      {"lattice", suite_lattice},         {"disorder", suite_disorder}, {"model", suite_model},
      {"cov", suite_cov},                 {"quadrature", suite_quadrature}, {"mc", suite_mc},
      {"analysis", suite_analysis},       {"percolation", suite_percolation}, {"green", suite_green},
      {"io", suite_io}};
  return t;
}

}  // namespace

const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suite_table()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  for (const auto& [n, fn] : suite_table()) {
    if (n != name) continue;
    try {
      return {name, true, fn(seed)};
    } catch (const Fail& f) {
      return {name, false, f.why};
    } catch (const std::exception& e) {
      return {name, false, std::string("exception: ") + e.what()};
    }
  }
  return {name, false, "unknown suite"};
}

}  // namespace disxy
