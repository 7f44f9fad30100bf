#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "disxy/analysis.hpp"
#include "disxy/green.hpp"
#include "disxy/mc.hpp"
#include "disxy/model.hpp"
#include "disxy/percolation.hpp"

namespace disxy::io {

// %.17g, so values round-trip exactly; NaN prints as "nan".
std::string fmt(double x);

// Header lines (no trailing newline) and row formatters for every CSV the
// tools write.
inline constexpr const char* kSeriesHeader = "sweep,beta,energy,op,op2,op4,twopoint,acceptance";
inline constexpr const char* kBinderHeader = "N,h,beta,m2,m2_err,m4,m4_err,U";
inline constexpr const char* kTcHeader = "h,betaC,stderr,pairs";
inline constexpr const char* kInfraredHeader = "h,beta,V,estimate,bound,margin";
inline constexpr const char* kPercolationHeader =
    "graph,p,L,trials,p_pregood,p_good,p_optimal,pregood_ci_low,pregood_ci_high,good_ci_low,good_ci_high,"
    "optimal_ci_low,optimal_ci_high";
inline constexpr const char* kGreenHeader = "method,m,s,domain,x1,x2,value,errbound";
inline constexpr const char* kMcBryanHeader = "beta,h,delta,N,u0,linear,quadratic,coshEdge,coshSite,rawBound";

std::string series_row(const MeasurementRecord& r);
std::string binder_row(const MomentEstimate& e);
std::string tc_row(const TcEstimate& t);
std::string infrared_row(double h, double beta, double volume, const InfraredCheck& c);
std::string percolation_row(const std::string& graph, double p, const BoxScanRow& r);
std::string green_row(const std::string& method, double m, double s, const std::string& domain, int x1, int x2,
                      double value, double errbound);
std::string mcbryan_row(const McBryanReport& r);

// Writes `header` then `rows`, one per line, to a temporary file that is
// renamed over `path` at the end, so readers never see a partial file.
void write_csv(const std::filesystem::path& path, const std::string& header, const std::vector<std::string>& rows);

// Rows of a CSV written by write_csv, without the header. Throws if the
// header differs.
std::vector<std::string> read_csv_rows(const std::filesystem::path& path, const std::string& header);

void write_series_csv(const std::filesystem::path& path, std::span<const ObservableSeries> series);

struct SnapshotInfo {
  Variant variant = Variant::XY;
  double h = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string graph;
  int layers = 1;
  std::size_t sites = 0;
  std::string disorder_hex;  // empty when the model has no disorder
};

// `stem`.bin holds the angles as little-endian float64, layer-major;
// `stem`.json holds the SnapshotInfo.
void write_snapshot(const std::filesystem::path& stem, const Model& model, const Configuration& config,
                    std::uint64_t seed);
SnapshotInfo read_snapshot_info(const std::filesystem::path& stem);
Configuration read_snapshot(const std::filesystem::path& stem);

}  // namespace disxy::io
