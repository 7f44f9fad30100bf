#include "disxy/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "disxy/stats.hpp"

namespace disxy {

double binder(double m2, double m4) {
  if (!(m2 > 0.0)) throw std::invalid_argument("Binder cumulant needs m2 > 0");
  return 1.0 - m4 / (3.0 * m2 * m2);
}

SampleMoments time_average(const ObservableSeries& series, std::size_t block) {
  if (series.records.empty()) throw std::invalid_argument("series has no records");
  std::vector<double> op2, op4;
  op2.reserve(series.records.size());
  op4.reserve(series.records.size());
  for (const auto& r : series.records) {
    op2.push_back(r.op2);
    op4.push_back(r.op4);
  }
  SampleMoments s;
  s.m2 = stats::mean(op2);
  s.m4 = stats::mean(op4);
  if (op2.size() > 1) {
    s.m2_err = stats::block_standard_error(op2, block);
    s.m4_err = stats::block_standard_error(op4, block);
  }
  return s;
}

MomentEstimate disorder_average(std::span<const SampleMoments> samples, int N, double h, double beta) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("disorder average needs at least 2 samples");
  MomentEstimate e;
  e.N = N;
  e.h = h;
  e.beta = beta;
  e.samples = n;
  double s2 = 0.0, s4 = 0.0;
  for (const auto& s : samples) {
    s2 += s.m2;
    s4 += s.m4;
  }
  e.m2 = s2 / static_cast<double>(n);
  e.m4 = s4 / static_cast<double>(n);
  e.U = e.m2 > 0.0 ? binder(e.m2, e.m4) : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> j2(n), j4(n), ju(n);
  const double k = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    j2[i] = (s2 - samples[i].m2) / k;
    j4[i] = (s4 - samples[i].m4) / k;
    ju[i] = j2[i] > 0.0 ? binder(j2[i], j4[i]) : std::numeric_limits<double>::quiet_NaN();
  }
  e.m2_err = stats::jackknife_error(j2);
  e.m4_err = stats::jackknife_error(j4);
  e.U_err = stats::jackknife_error(ju);
  return e;
}

MomentEstimate disorder_average(std::span<const ObservableSeries> samples, int N, double h) {
  if (samples.empty()) throw std::invalid_argument("disorder average needs at least 2 samples");
  std::vector<SampleMoments> m;
  for (const auto& s : samples) {
    if (s.beta != samples.front().beta) throw std::invalid_argument("samples are at different beta");
    m.push_back(time_average(s));
  }
  return disorder_average(m, N, h, samples.front().beta);
}

Crossing crossing_temperature(const BinderCurve& a, const BinderCurve& b, double floor) {
  if (a.betas != b.betas) throw std::invalid_argument("Binder curves are on different beta grids");
  if (a.betas.size() < 3) throw std::invalid_argument("crossing search needs at least 3 grid points");
  if (a.U.size() != a.betas.size() || b.U.size() != b.betas.size())
    throw std::invalid_argument("Binder curve has mismatched lengths");
  Crossing c;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < a.betas.size(); ++i) {
    if (!(std::abs(a.U[i]) > floor && std::abs(b.U[i]) > floor)) continue;
    const double dev = std::abs(a.U[i] / b.U[i] - 1.0);
    if (!c.found || dev < c.deviation - 1e-12) {
      c.found = true;
      c.beta = a.betas[i];
      c.deviation = dev;
      ties = 1;
    } else if (std::abs(dev - c.deviation) <= 1e-12) {
      ++ties;
    }
  }
  c.degenerate = ties > 1;
  return c;
}

TcEstimate estimate_tc(std::vector<PairCrossing> pairs, double h) {
  TcEstimate t;
  t.h = h;
  std::vector<double> betas;
  for (auto& p : pairs) {
    if (p.crossing.found) {
      betas.push_back(p.crossing.beta);
      t.pairs.push_back(p);
    } else {
      t.excluded.push_back(p);
    }
  }
  if (betas.empty()) throw std::runtime_error("no pair of sides produced a Binder crossing");
  t.beta_c = stats::mean(betas);
  t.error = betas.size() > 1 ? stats::stddev(betas) : std::numeric_limits<double>::quiet_NaN();
  return t;
}

TcEstimate estimate_tc(std::span<const BinderCurve> curves, double h) {
  if (curves.size() < 2) throw std::invalid_argument("T_c estimate needs at least 2 sides");
  std::vector<PairCrossing> pairs;
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j)
      pairs.push_back({curves[i].N, curves[j].N, crossing_temperature(curves[i], curves[j])});
  return estimate_tc(std::move(pairs), h);
}

double infrared_bound(double h, double beta, double volume) {
  if (!(h > 0.0) || !(beta > 0.0) || !(volume > 0.0))
    throw std::invalid_argument("infrared bound needs h, beta, V > 0");
  return h / (beta * volume);
}

InfraredCheck infrared_check(const ObservableSeries& series, Variant variant, Boundary boundary, double h,
                             double volume, std::size_t block) {
  if (variant != Variant::CleanWeak) throw std::invalid_argument("infrared check applies to the CleanWeak model");
  if (boundary != Boundary::Periodic) throw std::invalid_argument("infrared check needs a periodic torus");
  if (series.records.empty()) throw std::invalid_argument("series has no records");
  std::vector<double> op2;
  for (const auto& r : series.records) op2.push_back(r.op2);
  InfraredCheck c;
  c.estimate = stats::mean(op2);
  c.error = op2.size() > 1 ? stats::block_standard_error(op2, block) : 0.0;
  c.bound = infrared_bound(h, series.beta, volume);
  c.margin = (c.bound - c.estimate) / c.error;
  return c;
}

Estimate two_point_tau(std::span<const ObservableSeries> samples) {
  if (samples.empty()) throw std::invalid_argument("two-point average needs samples");
  std::vector<double> per;
  for (const auto& s : samples) {
    if (!s.has_two_point || s.records.empty()) throw std::invalid_argument("series has no two-point channel");
    double sum = 0.0;
    for (const auto& r : s.records) sum += r.two_point;
    per.push_back(sum / static_cast<double>(s.records.size()));
  }
  Estimate e;
  e.value = stats::mean(per);
  if (per.size() > 1) {
    const double total = e.value * static_cast<double>(per.size());
    std::vector<double> loo;
    for (double v : per) loo.push_back((total - v) / static_cast<double>(per.size() - 1));
    e.error = stats::jackknife_error(loo);
  } else {
    std::vector<double> tp;
    for (const auto& r : samples.front().records) tp.push_back(r.two_point);
    e.error = tp.size() > 1 ? stats::block_standard_error(tp) : 0.0;
  }
  return e;
}

}  // namespace disxy
