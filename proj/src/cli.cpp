#include "disxy/cli.hpp"

#include <CLI11.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "disxy/analysis.hpp"
#include "disxy/green.hpp"
#include "disxy/io.hpp"
#include "disxy/percolation.hpp"
#include "disxy/rng.hpp"

#ifndef DISXY_VERSION
#define DISXY_VERSION "unknown"
#endif

namespace disxy {

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_doubles(const std::string& row) {
  std::vector<double> out;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::strtod(cell.c_str(), nullptr));
  return out;
}

std::uint64_t key_of(double x) { return std::bit_cast<std::uint64_t>(x); }

std::shared_ptr<const DisorderField> make_disorder(Variant v, std::shared_ptr<const LatticeGraph> g, double p,
                                                   std::uint64_t seed) {
  if (v == Variant::XY || v == Variant::CleanWeak) return nullptr;
  return std::make_shared<const DisorderField>(sample_disorder(std::move(g), p, seed));
}

std::string fmt_tag(double x) {
  std::string s = io::fmt(x);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

// ---- simulate ----

void run_simulate(const ExperimentConfig& cfg, const SimulateConfig& c, const fs::path& dir, std::ostream& log) {
  auto g = std::make_shared<const LatticeGraph>(build_graph(c.graph, c.graph.N));
  for (int k = 0; k < c.samples; ++k) {
    const auto path = dir / "series" / ("sample_" + std::to_string(k) + ".csv");
    if (fs::exists(path)) {
      log << "sample " << k << ": reusing " << path.string() << '\n';
      continue;
    }
    const auto sk = static_cast<std::uint64_t>(k);
    Model model(c.model, c.h, g, make_disorder(c.model, g, c.p, derive_key(cfg.seed, {10, sk})));
    auto params = run_params(c.chain, derive_key(cfg.seed, {11, sk}), cfg.threads);
    if (c.antipodal_two_point) {
      std::vector<int> far(c.graph.dim, c.graph.N / 2);
      params.two_point = std::make_pair(g->origin(), g->index(far));
    }
    std::vector<Configuration> last(params.betas.size(), model.ground_configuration());
    MeasurementObserver observer;
    if (c.snapshots)
      observer = [&](std::size_t slot, const Configuration& cf, const DivergenceCache&) { last[slot] = cf; };
    const auto result = run_chain(model, params, observer);
    if (c.snapshots)
      for (std::size_t i = 0; i < last.size(); ++i)
        io::write_snapshot(dir / "snapshots" / ("sample_" + std::to_string(k) + "_beta_" + std::to_string(i)), model,
                           last[i], params.seed);
    io::write_series_csv(path, result.series);
    log << "sample " << k << ": " << result.series.front().records.size() << " records per beta\n";
  }
}

// ---- binder ----

constexpr const char* kMomentHeader = "beta,m2,m2_err,m4,m4_err";

std::vector<SampleMoments> binder_cell(const ExperimentConfig& cfg, const BinderConfig& c, double h, int N, int k,
                                       const fs::path& dir, std::ostream& log) {
  const auto path = dir / "cells" / ("h" + fmt_tag(h) + "_N" + std::to_string(N) + "_s" + std::to_string(k) + ".csv");
  std::vector<SampleMoments> out;
  if (!fs::exists(path)) {
    auto g = std::make_shared<const LatticeGraph>(build_graph(c.graph, N));
    const std::uint64_t hk = key_of(h), nk = static_cast<std::uint64_t>(N), sk = static_cast<std::uint64_t>(k);
    Model model(c.model, h, g, make_disorder(c.model, g, c.p, derive_key(cfg.seed, {20, hk, nk, sk})));
    const auto result = run_chain(model, run_params(c.chain, derive_key(cfg.seed, {21, hk, nk, sk}), cfg.threads));
    std::vector<std::string> rows;
    for (const auto& s : result.series) {
      const auto m = time_average(s);
      rows.push_back(io::fmt(s.beta) + "," + io::fmt(m.m2) + "," + io::fmt(m.m2_err) + "," + io::fmt(m.m4) + "," +
                     io::fmt(m.m4_err));
    }
    io::write_csv(path, kMomentHeader, rows);
    log << "h=" << h << " N=" << N << " sample " << k << " done\n";
  }
  for (const auto& row : io::read_csv_rows(path, kMomentHeader)) {
    const auto v = parse_doubles(row);
    if (v.size() != 5) throw std::runtime_error(path.string() + ": malformed cell row");
    out.push_back({v[1], v[3], v[2], v[4]});
  }
  if (out.size() != c.chain.betas.size()) throw std::runtime_error(path.string() + ": wrong number of betas");
  return out;
}

void run_binder(const ExperimentConfig& cfg, const BinderConfig& c, const fs::path& dir, std::ostream& log) {
  std::vector<std::string> binder_rows, tc_rows;
  for (double h : c.h) {
    std::vector<BinderCurve> curves;
    for (int N : c.sizes) {
      std::vector<std::vector<SampleMoments>> per_sample;
      for (int k = 0; k < c.samples; ++k) per_sample.push_back(binder_cell(cfg, c, h, N, k, dir, log));
      BinderCurve curve;
      curve.N = N;
      for (std::size_t b = 0; b < c.chain.betas.size(); ++b) {
        std::vector<SampleMoments> at_beta;
        for (const auto& s : per_sample) at_beta.push_back(s[b]);
        const auto est = disorder_average(at_beta, N, h, c.chain.betas[b]);
        binder_rows.push_back(io::binder_row(est));
        curve.betas.push_back(est.beta);
        curve.U.push_back(est.U);
      }
      curves.push_back(std::move(curve));
    }
    try {
      const auto tc = estimate_tc(curves, h);
      tc_rows.push_back(io::tc_row(tc));
    } catch (const std::runtime_error& e) {
      log << "h=" << h << ": " << e.what() << '\n';
      TcEstimate none;
      none.h = h;
      none.beta_c = std::nan("");
      none.error = std::nan("");
      tc_rows.push_back(io::tc_row(none));
    }
  }
  io::write_csv(dir / "binder.csv", io::kBinderHeader, binder_rows);
  io::write_csv(dir / "tc.csv", io::kTcHeader, tc_rows);
}

// ---- percolation ----

void run_percolation(const ExperimentConfig& cfg, const PercolationConfig& c, const fs::path& dir, std::ostream& log) {
  const std::string graph = to_string(c.kind) + "-d" + std::to_string(c.dim);
  std::vector<std::string> rows;
  for (int L : c.lengths) {
    const auto path = dir / "cells" / ("L" + std::to_string(L) + ".csv");
    if (!fs::exists(path)) {
      BoxScanParams p;
      p.kind = c.kind;
      p.dim = c.dim;
      p.p = c.p;
      p.lengths = {L};
      p.trials = c.trials;
      p.seed = cfg.seed;
      p.divisor = c.divisor;
      const auto r = box_probability_scan(p).front();
      io::write_csv(path, io::kPercolationHeader, {io::percolation_row(graph, c.p, r)});
      log << "L=" << L << ": pre-good " << r.pre_good << ", good " << r.good << ", optimal " << r.optimal << " of "
          << r.trials << '\n';
    }
    for (auto& row : io::read_csv_rows(path, io::kPercolationHeader)) rows.push_back(row);
  }
  io::write_csv(dir / "percolation.csv", io::kPercolationHeader, rows);
}

// ---- green ----

int sup_norm(const std::vector<int>& x) {
  int r = 0;
  for (int v : x) r = std::max(r, std::abs(v));
  return r;
}

void run_green(const GreenConfig& c, const fs::path& dir, std::ostream& log) {
  const double s = walk_scale(c.dim);
  std::vector<std::string> rows;
  auto add = [&](const std::string& method, double m, const std::string& domain, const std::vector<int>& x,
                 double value, double err) {
    rows.push_back(io::green_row(method, m, s, domain, x[0], x.size() > 1 ? x[1] : 0, value, err));
  };
  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    const auto& method = c.methods[i];
    const int size = c.sizes[i];
    for (double m : c.m) {
      if (method == "fourier") {
        const auto t = green_fourier(m, c.dim, size, s);
        for (const auto& x : c.points)
          add(method, m, "torus(" + std::to_string(size) + ")", x, t.at(x),
              torus_image_bound(m, s, c.dim, size, sup_norm(x)));
      } else if (method == "walk") {
        const auto w = green_walk(c.points, m, c.dim, size);
        for (std::size_t k = 0; k < c.points.size(); ++k)
          add(method, m, "walk(" + std::to_string(size) + ")", c.points[k], w[k].value, w[k].tail_bound);
      } else {
        const auto t = green_box(size, m, s, c.dim);
        for (const auto& x : c.points)
          add(method, m, "box(" + std::to_string(size) + ")", x, t.at(x), box_exit_bound(m, s, size, sup_norm(x)));
      }
      log << method << " m=" << m << " done\n";
    }
  }
  io::write_csv(dir / "green.csv", io::kGreenHeader, rows);
}

// ---- mcbryan ----

void run_mcbryan(const McBryanConfig& c, const fs::path& dir, std::ostream& log) {
  std::vector<std::string> rows;
  for (double h : c.h) {
    const auto r = mcbryan_bound(c.beta, h, c.delta, c.N);
    rows.push_back(io::mcbryan_row(r));
    log << "h=" << h << ": rawBound " << r.raw_bound << '\n';
  }
  io::write_csv(dir / "mcbryan.csv", io::kMcBryanHeader, rows);
}

// ---- validate ----

bool run_validate(const ExperimentConfig& cfg, const ValidateConfig& c, const fs::path& dir, std::ostream& log) {
  auto names = c.suites.empty() ? validation_suites() : c.suites;
  std::vector<std::string> lines;
  bool ok = true;
  for (const auto& n : names) {
    const auto r = run_suite(n, cfg.seed);
    ok = ok && r.passed;
    lines.push_back(std::string(r.passed ? "PASS " : "FAIL ") + r.name + (r.detail.empty() ? "" : ": " + r.detail));
    log << lines.back() << '\n';
  }
  std::ofstream out(dir / "validate.txt", std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
  out << (ok ? "all suites passed" : "some suites failed") << '\n';
  return ok;
}

nlohmann::json comparable(nlohmann::json config) {
  config.erase("threads");
  return config;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
  const auto manifest_path = dir / "manifest.json";
  nlohmann::json manifest{{"manifest_version", 1},
                          {"code_version", DISXY_VERSION},
                          {"subcommand", cfg.subcommand},
                          {"reference", cfg.reference},
                          {"config", to_json(cfg)}};
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    nlohmann::json old;
    try {
      old = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
      log << "error: " << manifest_path.string() << " is not a manifest\n";
      return kExitInvalid;
    }
    if (old.value("subcommand", "") != cfg.subcommand || !old.contains("config") ||
        comparable(old["config"]) != comparable(manifest["config"])) {
      log << "error: " << dir.string() << " holds a different run; choose another --out\n";
      return kExitInvalid;
    }
    log << "resuming in " << dir.string() << '\n';
  } else {
    fs::create_directories(dir);
    std::ofstream out(manifest_path, std::ios::trunc);
    out << manifest.dump(2) << '\n';
  }

  return std::visit(
      [&](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SimulateConfig>) run_simulate(cfg, p, dir, log);
        if constexpr (std::is_same_v<T, BinderConfig>) run_binder(cfg, p, dir, log);
        if constexpr (std::is_same_v<T, PercolationConfig>) run_percolation(cfg, p, dir, log);
        if constexpr (std::is_same_v<T, GreenConfig>) run_green(p, dir, log);
        if constexpr (std::is_same_v<T, McBryanConfig>) run_mcbryan(p, dir, log);
        if constexpr (std::is_same_v<T, ValidateConfig>)
          if (!run_validate(cfg, p, dir, log)) return kExitRuntime;
        return kExitOk;
      },
      cfg.payload);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disordered bilayer XY simulations and checks", "disxy"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool reference = false;
  app.add_option("--config", config_path, "YAML config or a previous run's manifest.json");
  app.add_option("--out", out_dir, "Output directory (one run per directory)");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", threads, "Threads per sweep")->check(CLI::PositiveNumber);
  app.add_flag("--reference", reference, "Single-threaded, bit-reproducible mode");
  app.fallthrough();
  for (const auto& name : subcommands()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? default_config(sub) : load_config(config_path, sub);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;
  cfg.reference = reference;
  if (reference) cfg.threads = 1;

  try {
    return run_experiment(cfg, out_dir, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace disxy
