#include "disxy/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace disxy::io {

namespace fs = std::filesystem;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ',';
    out += p;
  }
  return out;
}

}  // namespace

std::string series_row(const MeasurementRecord& r) {
  return join({std::to_string(r.sweep), fmt(r.beta), fmt(r.energy), fmt(r.op), fmt(r.op2), fmt(r.op4),
               fmt(r.two_point), fmt(r.acceptance)});
}

std::string binder_row(const MomentEstimate& e) {
  return join({std::to_string(e.N), fmt(e.h), fmt(e.beta), fmt(e.m2), fmt(e.m2_err), fmt(e.m4), fmt(e.m4_err),
               fmt(e.U)});
}

std::string tc_row(const TcEstimate& t) {
  return join({fmt(t.h), fmt(t.beta_c), fmt(t.error), std::to_string(t.pairs.size())});
}

std::string infrared_row(double h, double beta, double volume, const InfraredCheck& c) {
  return join({fmt(h), fmt(beta), fmt(volume), fmt(c.estimate), fmt(c.bound), fmt(c.margin)});
}

std::string percolation_row(const std::string& graph, double p, const BoxScanRow& r) {
  return join({graph, fmt(p), std::to_string(r.length), std::to_string(r.trials), fmt(r.p_pre_good()),
               fmt(r.p_good()), fmt(r.p_optimal()), fmt(r.pre_good_ci.low), fmt(r.pre_good_ci.high),
               fmt(r.good_ci.low), fmt(r.good_ci.high), fmt(r.optimal_ci.low), fmt(r.optimal_ci.high)});
}

std::string green_row(const std::string& method, double m, double s, const std::string& domain, int x1, int x2,
                      double value, double errbound) {
  return join({method, fmt(m), fmt(s), domain, std::to_string(x1), std::to_string(x2), fmt(value), fmt(errbound)});
}

std::string mcbryan_row(const McBryanReport& r) {
  return join({fmt(r.beta), fmt(r.h), fmt(r.delta), std::to_string(r.N), fmt(r.u0), fmt(r.linear), fmt(r.quadratic),
               fmt(r.cosh_edge), fmt(r.cosh_site), fmt(r.raw_bound)});
}

void write_csv(const fs::path& path, const std::string& header, const std::vector<std::string>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << header << '\n';
    for (const auto& r : rows) out << r << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::string> read_csv_rows(const fs::path& path, const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<std::string> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  return rows;
}

void write_series_csv(const fs::path& path, std::span<const ObservableSeries> series) {
  std::vector<std::string> rows;
  for (const auto& s : series)
    for (const auto& r : s.records) rows.push_back(series_row(r));
  write_csv(path, kSeriesHeader, rows);
}

namespace {

fs::path with_ext(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

}  // namespace

void write_snapshot(const fs::path& stem, const Model& model, const Configuration& config, std::uint64_t seed) {
  model.check(config);
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  const auto raw = config.raw();
  std::string bytes(raw.size() * 8, '\0');
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(raw[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  {
    std::ofstream out(with_ext(stem, ".bin"), std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write snapshot " + stem.string());
  }
  nlohmann::json j;
  j["variant"] = to_string(model.variant());
  j["h"] = model.h();
  const auto* d = model.disorder();
  // hand-built masks and disorder-free models have no p
  if (d && !std::isnan(d->p()))
    j["p"] = d->p();
  else
    j["p"] = nullptr;
  j["seed"] = seed;
  j["graph"] = model.graph().descriptor();
  j["layers"] = config.layers();
  j["sites"] = config.sites();
  j["byte_order"] = "little-endian float64, layer-major";
  j["disorder"] = d ? d->to_hex() : "";
  std::ofstream out(with_ext(stem, ".json"), std::ios::trunc);
  out << j.dump(2) << '\n';
}

SnapshotInfo read_snapshot_info(const fs::path& stem) {
  std::ifstream in(with_ext(stem, ".json"));
  if (!in) throw std::runtime_error("cannot read snapshot manifest " + stem.string());
  const auto j = nlohmann::json::parse(in);
  SnapshotInfo s;
  s.variant = parse_variant(j.at("variant").get<std::string>());
  s.h = j.at("h").get<double>();
  s.p = j.at("p").is_null() ? std::nan("") : j.at("p").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.graph = j.at("graph").get<std::string>();
  s.layers = j.at("layers").get<int>();
  s.sites = j.at("sites").get<std::size_t>();
  s.disorder_hex = j.at("disorder").get<std::string>();
  return s;
}

Configuration read_snapshot(const fs::path& stem) {
  const auto info = read_snapshot_info(stem);
  std::ifstream in(with_ext(stem, ".bin"), std::ios::binary);
  if (!in) throw std::runtime_error("cannot read snapshot " + stem.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t n = info.sites * static_cast<std::size_t>(info.layers);
  if (bytes.size() != n * 8) throw std::runtime_error("snapshot size does not match its manifest");
  Configuration c(info.sites, info.layers);
  for (int l = 0; l < info.layers; ++l)
    for (std::size_t i = 0; i < info.sites; ++i) {
      std::uint64_t bits = 0;
      const std::size_t at = (static_cast<std::size_t>(l) * info.sites + i) * 8;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[at + b])) << (8 * b);
      c.set(static_cast<Vertex>(i), std::bit_cast<double>(bits), l);
    }
  return c;
}

}  // namespace disxy::io
