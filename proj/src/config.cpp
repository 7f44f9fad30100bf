#include "disxy/config.hpp"

#include "disxy/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace disxy {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (node.IsDefined() && node.Mark().line >= 0) os << ':' << node.Mark().line + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  void only_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) fail(map, where + " must be a mapping");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto k = kv.first.as<std::string>();
      if (!allowed.count(k)) fail(kv.first, "unknown key '" + k + "' in " + where);
    }
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& name) const {
    if (!node.IsScalar()) fail(node, name + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "cannot read " + name + " from '" + node.Scalar() + "'");
    }
  }

  template <class T>
  T get(const YAML::Node& map, const char* key, T fallback) const {
    const auto n = map[key];
    if (!n.IsDefined() || n.IsNull()) return fallback;
    return scalar<T>(n, key);
  }

  template <class T>
  T need(const YAML::Node& map, const char* key, const std::string& where) const {
    const auto n = map[key];
    if (!n.IsDefined() || n.IsNull()) fail(map, "missing required key '" + std::string(key) + "' in " + where);
    return scalar<T>(n, key);
  }

  template <class T>
  std::vector<T> list(const YAML::Node& map, const char* key, const std::string& where, bool required = true) const {
    const auto n = map[key];
    if (!n.IsDefined() || n.IsNull()) {
      if (required) fail(map, "missing required key '" + std::string(key) + "' in " + where);
      return {};
    }
    std::vector<T> out;
    if (n.IsScalar()) {
      out.push_back(scalar<T>(n, key));
      return out;
    }
    if (!n.IsSequence()) fail(n, std::string(key) + " must be a list");
    for (const auto& e : n) out.push_back(scalar<T>(e, key));
    if (out.empty()) fail(n, std::string(key) + " must not be empty");
    return out;
  }

  void check(bool ok, const YAML::Node& node, const std::string& msg) const {
    if (!ok) fail(node, msg);
  }

  template <class F>
  auto convert(const YAML::Node& node, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
  }

 private:
  std::string source_;
};

GraphSpec read_graph(const Reader& r, const YAML::Node& n, bool need_size) {
  r.only_keys(n, "graph", {"kind", "dim", "N", "boundary"});
  GraphSpec g;
  g.kind = r.convert(n["kind"], [&] { return parse_lattice_kind(r.get<std::string>(n, "kind", "hypercubic")); });
  g.dim = r.get<int>(n, "dim", g.kind == LatticeKind::NnnSquare ? 2 : 3);
  g.boundary = r.convert(n["boundary"], [&] { return parse_boundary(r.get<std::string>(n, "boundary", "periodic")); });
  r.check(g.dim >= 1 && g.dim <= 4, n["dim"], "dim must be 1..4");
  r.check(g.kind != LatticeKind::NnnSquare || g.dim == 2, n["dim"], "nnn-square graphs are two-dimensional");
  if (need_size) {
    g.N = r.need<int>(n, "N", "graph");
    r.convert(n["N"], [&] { return build_graph(g, g.N); });
  } else {
    g.N = 0;
  }
  return g;
}

ChainSpec read_chain(const Reader& r, const YAML::Node& n) {
  r.only_keys(n, "run", {"betas", "thermalize", "measure", "measure_every", "exchange_every", "proposal_width",
                         "cold_start"});
  ChainSpec c;
  c.betas = r.list<double>(n, "betas", "run");
  c.thermalize = r.get<int>(n, "thermalize", c.thermalize);
  c.measure = r.get<int>(n, "measure", c.measure);
  c.measure_every = r.get<int>(n, "measure_every", c.measure_every);
  c.exchange_every = r.get<int>(n, "exchange_every", c.exchange_every);
  if (n["proposal_width"].IsDefined() && !n["proposal_width"].IsNull())
    c.proposal_width = r.scalar<double>(n["proposal_width"], "proposal_width");
  c.cold_start = r.get<bool>(n, "cold_start", false);
  r.convert(n, [&] {
    run_params(c, 0, 1).validate();
    return 0;
  });
  return c;
}

double positive(const Reader& r, const YAML::Node& n, double v, const char* name) {
  r.check(v > 0.0 && std::isfinite(v), n, std::string(name) + " must be positive (got " + std::to_string(v) + ")");
  return v;
}

double probability(const Reader& r, const YAML::Node& n, double v) {
  r.check(v >= 0.0 && v <= 1.0, n, "p must lie in [0, 1]");
  return v;
}

Payload read_payload(const Reader& r, const std::string& sub, const YAML::Node& n) {
  if (sub == "simulate") {
    r.only_keys(n, sub, {"model", "h", "graph", "p", "samples", "run", "two_point", "snapshots"});
    SimulateConfig c;
    c.model = r.convert(n["model"], [&] { return parse_variant(r.need<std::string>(n, "model", sub)); });
    c.h = positive(r, n["h"], r.need<double>(n, "h", sub), "h");
    if (!n["graph"].IsDefined()) r.fail(n, "missing required key 'graph' in simulate");
    c.graph = read_graph(r, n["graph"], true);
    c.p = probability(r, n["p"], r.get<double>(n, "p", 0.5));
    c.samples = r.get<int>(n, "samples", 1);
    r.check(c.samples >= 1, n["samples"], "samples must be >= 1");
    if (!n["run"].IsDefined()) r.fail(n, "missing required key 'run' in simulate");
    c.chain = read_chain(r, n["run"]);
    const auto tp = r.get<std::string>(n, "two_point", "none");
    r.check(tp == "none" || tp == "antipodal", n["two_point"], "two_point must be 'none' or 'antipodal'");
    c.antipodal_two_point = tp == "antipodal";
    r.check(!c.antipodal_two_point || c.graph.boundary == Boundary::Periodic, n["two_point"],
            "antipodal two-point needs a periodic graph");
    c.snapshots = r.get<bool>(n, "snapshots", false);
    return c;
  }
  if (sub == "binder") {
    r.only_keys(n, sub, {"model", "graph", "sizes", "h", "p", "samples", "run"});
    BinderConfig c;
    c.model = r.convert(n["model"], [&] { return parse_variant(r.need<std::string>(n, "model", sub)); });
    if (!n["graph"].IsDefined()) r.fail(n, "missing required key 'graph' in binder");
    c.graph = read_graph(r, n["graph"], false);
    c.sizes = r.list<int>(n, "sizes", sub);
    r.check(c.sizes.size() >= 2, n["sizes"], "binder needs at least two sizes");
    for (int N : c.sizes) r.convert(n["sizes"], [&] { return build_graph(c.graph, N); });
    c.h = r.list<double>(n, "h", sub);
    for (double h : c.h) positive(r, n["h"], h, "h");
    c.p = probability(r, n["p"], r.get<double>(n, "p", 0.5));
    c.samples = r.get<int>(n, "samples", 10);
    r.check(c.samples >= 2, n["samples"], "binder needs at least two disorder samples");
    if (!n["run"].IsDefined()) r.fail(n, "missing required key 'run' in binder");
    c.chain = read_chain(r, n["run"]);
    r.check(c.chain.betas.size() >= 3, n["run"]["betas"], "binder needs at least three betas");
    return c;
  }
  if (sub == "percolation") {
    r.only_keys(n, sub, {"graph", "dim", "p", "lengths", "trials", "divisor"});
    PercolationConfig c;
    c.kind = r.convert(n["graph"], [&] { return parse_lattice_kind(r.get<std::string>(n, "graph", "hypercubic")); });
    c.dim = r.get<int>(n, "dim", c.kind == LatticeKind::NnnSquare ? 2 : 3);
    r.check(c.dim >= 2 && c.dim <= 4, n["dim"], "dim must be 2..4");
    c.p = probability(r, n["p"], r.get<double>(n, "p", 0.5));
    c.lengths = r.list<int>(n, "lengths", sub);
    for (int L : c.lengths) r.check(L >= 10, n["lengths"], "box lengths must be >= 10");
    c.trials = r.get<int>(n, "trials", 200);
    r.check(c.trials >= 30, n["trials"], "trials must be >= 30");
    c.divisor = r.get<int>(n, "divisor", 100);
    r.check(c.divisor >= 1, n["divisor"], "divisor must be >= 1");
    return c;
  }
  if (sub == "green") {
    r.only_keys(n, sub, {"methods", "m", "sizes", "dim", "points"});
    GreenConfig c;
    c.methods = r.list<std::string>(n, "methods", sub);
    for (const auto& meth : c.methods)
      r.check(meth == "fourier" || meth == "walk" || meth == "box", n["methods"],
              "unknown method '" + meth + "' (fourier, walk, box)");
    c.sizes = r.list<int>(n, "sizes", sub);
    r.check(c.sizes.size() == c.methods.size(), n["sizes"], "sizes must have one entry per method");
    for (std::size_t i = 0; i < c.sizes.size(); ++i) {
      const int lo = c.methods[i] == "fourier" ? 16 : c.methods[i] == "box" ? 2 : 1;
      r.check(c.sizes[i] >= lo, n["sizes"], c.methods[i] + " size must be >= " + std::to_string(lo));
    }
    c.m = r.list<double>(n, "m", sub);
    for (double m : c.m) positive(r, n["m"], m, "m");
    c.dim = r.get<int>(n, "dim", 2);
    r.check(c.dim >= 1 && c.dim <= 4, n["dim"], "dim must be 1..4");
    const auto pts = n["points"];
    if (pts.IsDefined() && !pts.IsNull()) {
      r.check(pts.IsSequence(), pts, "points must be a list of coordinate lists");
      for (const auto& p : pts) {
        r.check(p.IsSequence() && static_cast<int>(p.size()) == c.dim, p, "each point needs dim coordinates");
        std::vector<int> x;
        for (const auto& v : p) x.push_back(r.scalar<int>(v, "coordinate"));
        c.points.push_back(x);
      }
    } else if (c.dim == 2) {
      c.points = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    } else {
      c.points = {std::vector<int>(c.dim, 0)};
      for (int i = 0; i < c.dim; ++i) {
        c.points.push_back(std::vector<int>(c.dim, 0));
        c.points.back()[i] = 1;
      }
    }
    return c;
  }
  if (sub == "mcbryan") {
    r.only_keys(n, sub, {"beta", "h", "delta", "N"});
    McBryanConfig c;
    c.beta = positive(r, n["beta"], r.need<double>(n, "beta", sub), "beta");
    c.h = r.list<double>(n, "h", sub);
    for (double h : c.h) positive(r, n["h"], h, "h");
    c.delta = r.get<double>(n, "delta", 0.1);
    r.check(c.delta > 0.0 && c.delta < 1.0, n["delta"], "delta must lie in (0, 1)");
    c.N = r.need<int>(n, "N", sub);
    r.check(c.N >= 2, n["N"], "N must be >= 2");
    return c;
  }
  if (sub == "validate") {
    ValidateConfig c;
    if (!n.IsDefined() || n.IsNull()) return c;
    r.only_keys(n, sub, {"suites"});
    c.suites = r.list<std::string>(n, "suites", sub, false);
    for (const auto& name : c.suites)
      r.check(std::find(validation_suites().begin(), validation_suites().end(), name) != validation_suites().end(),
              n["suites"], "unknown suite '" + name + "'");
    return c;
  }
  throw ConfigError("unknown subcommand '" + sub + "'");
}

ExperimentConfig parse_node(const Reader& r, YAML::Node root, const std::string& sub) {
  if (std::find(subcommands().begin(), subcommands().end(), sub) == subcommands().end())
    throw ConfigError("unknown subcommand '" + sub + "'");
  if (root.IsMap() && root["manifest_version"].IsDefined()) root = root["config"];
  if (!root.IsDefined() || root.IsNull()) {
    if (sub == "validate") return default_config(sub);
    throw ConfigError("empty configuration");
  }
  r.only_keys(root, "the top level",
              {"seed", "threads", "simulate", "binder", "percolation", "green", "mcbryan", "validate"});
  ExperimentConfig c;
  c.subcommand = sub;
  c.seed = r.get<std::uint64_t>(root, "seed", 0);
  c.threads = r.get<int>(root, "threads", 1);
  r.check(c.threads >= 1, root["threads"], "threads must be >= 1");
  const auto body = root[sub];
  if (sub != "validate" && (!body.IsDefined() || body.IsNull()))
    r.fail(root, "config has no '" + sub + "' section");
  c.payload = read_payload(r, sub, body);
  return c;
}

}  // namespace

RunParams run_params(const ChainSpec& chain, std::uint64_t seed, int threads) {
  RunParams p;
  p.betas = chain.betas;
  p.sweeps_thermalize = chain.thermalize;
  p.sweeps_measure = chain.measure;
  p.measure_every = chain.measure_every;
  p.exchange_every = chain.exchange_every;
  p.proposal_width = chain.proposal_width;
  p.cold_start = chain.cold_start;
  p.seed = seed;
  p.threads = threads;
  return p;
}

LatticeGraph build_graph(const GraphSpec& spec, int N) { return LatticeGraph::build(spec.kind, spec.dim, N, spec.boundary); }

ExperimentConfig parse_config(const std::string& text, const std::string& subcommand, const std::string& source) {
  Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return parse_node(r, root, subcommand);
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), subcommand, path.string());
}

ExperimentConfig default_config(const std::string& subcommand) {
  if (subcommand != "validate") throw ConfigError(subcommand + " needs --config");
  ExperimentConfig c;
  c.subcommand = subcommand;
  c.payload = ValidateConfig{};
  return c;
}

namespace {

nlohmann::json graph_json(const GraphSpec& g, bool with_size) {
  nlohmann::json j{{"kind", to_string(g.kind)}, {"dim", g.dim}, {"boundary", to_string(g.boundary)}};
  if (with_size) j["N"] = g.N;
  return j;
}

nlohmann::json chain_json(const ChainSpec& c) {
  nlohmann::json j{{"betas", c.betas},
                   {"thermalize", c.thermalize},
                   {"measure", c.measure},
                   {"measure_every", c.measure_every},
                   {"exchange_every", c.exchange_every},
                   {"cold_start", c.cold_start}};
  j["proposal_width"] = c.proposal_width ? nlohmann::json(*c.proposal_width) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json body = std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SimulateConfig>) {
          return {{"model", to_string(p.model)},
                  {"h", p.h},
                  {"graph", graph_json(p.graph, true)},
                  {"p", p.p},
                  {"samples", p.samples},
                  {"run", chain_json(p.chain)},
                  {"two_point", p.antipodal_two_point ? "antipodal" : "none"},
                  {"snapshots", p.snapshots}};
        } else if constexpr (std::is_same_v<T, BinderConfig>) {
          return {{"model", to_string(p.model)}, {"graph", graph_json(p.graph, false)},
                  {"sizes", p.sizes},            {"h", p.h},
                  {"p", p.p},                    {"samples", p.samples},
                  {"run", chain_json(p.chain)}};
        } else if constexpr (std::is_same_v<T, PercolationConfig>) {
          return {{"graph", to_string(p.kind)}, {"dim", p.dim},       {"p", p.p},
                  {"lengths", p.lengths},       {"trials", p.trials}, {"divisor", p.divisor}};
        } else if constexpr (std::is_same_v<T, GreenConfig>) {
          return {{"methods", p.methods}, {"m", p.m}, {"sizes", p.sizes}, {"dim", p.dim}, {"points", p.points}};
        } else if constexpr (std::is_same_v<T, McBryanConfig>) {
          return {{"beta", p.beta}, {"h", p.h}, {"delta", p.delta}, {"N", p.N}};
        } else {
          return {{"suites", p.suites}};
        }
      },
      c.payload);
  return {{"seed", c.seed}, {"threads", c.threads}, {c.subcommand, body}};
}

}  // namespace disxy
