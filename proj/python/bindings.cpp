#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "disxy/analysis.hpp"
#include "disxy/change_of_variables.hpp"
#include "disxy/cli.hpp"
#include "disxy/green.hpp"
#include "disxy/mc.hpp"
#include "disxy/percolation.hpp"

namespace py = pybind11;
using namespace disxy;

namespace {

// pybind11 holders must be non-const; they convert to the const pointers the core takes.
using GraphPtr = std::shared_ptr<LatticeGraph>;
using FieldPtr = std::shared_ptr<DisorderField>;

Configuration to_configuration(const Model& m, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  const auto n = m.graph().vertex_count();
  if (m.layers() == 2) {
    if (a.ndim() != 2 || a.shape(0) != 2 || static_cast<std::size_t>(a.shape(1)) != n)
      throw py::value_error("bilayer angles must have shape (2, vertex_count)");
    const double* p = a.data();
    return Configuration::from_layers({p, p + n}, {p + n, p + 2 * n});
  }
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != n)
    throw py::value_error("angles must have shape (vertex_count,)");
  return Configuration::from_angles({a.data(), a.data() + n});
}

py::dict series_dict(const ObservableSeries& s) {
  const auto n = static_cast<py::ssize_t>(s.records.size());
  py::array_t<std::int64_t> sweep(n);
  py::array_t<double> energy(n), op(n), op2(n), op4(n), two(n), acc(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& r = s.records[i];
    sweep.mutable_at(i) = r.sweep;
    energy.mutable_at(i) = r.energy;
    op.mutable_at(i) = r.op;
    op2.mutable_at(i) = r.op2;
    op4.mutable_at(i) = r.op4;
    two.mutable_at(i) = r.two_point;
    acc.mutable_at(i) = r.acceptance;
  }
  py::dict d;
  d["beta"] = s.beta;
  d["sweep"] = sweep;
  d["energy"] = energy;
  d["op"] = op;
  d["op2"] = op2;
  d["op4"] = op4;
  d["twopoint"] = two;
  d["acceptance"] = acc;
  return d;
}

py::array_t<double> table_array(const GreenTable& t) {
  std::vector<py::ssize_t> shape(t.dim, t.side());
  py::array_t<double> a(shape);
  std::copy(t.values.begin(), t.values.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_disxy, mod) {
  mod.doc() = "Disordered XY lattice models: Monte Carlo, percolation boxes and lattice Green functions";

  py::class_<LatticeGraph, GraphPtr>(mod, "LatticeGraph")
      .def_static(
          "hypercubic",
          [](int dim, int N, bool wired) {
            return std::make_shared<LatticeGraph>(
                LatticeGraph::hypercubic(dim, N, wired ? Boundary::WiredFrame : Boundary::Periodic));
          },
          py::arg("dim"), py::arg("N"), py::arg("wired") = false)
      .def_static(
          "nnn_square", [](int N) { return std::make_shared<LatticeGraph>(LatticeGraph::nnn_square(N)); },
          py::arg("N"))
      .def_property_readonly("dim", &LatticeGraph::dim)
      .def_property_readonly("size", &LatticeGraph::size)
      .def_property_readonly("vertex_count", &LatticeGraph::vertex_count)
      .def_property_readonly("edge_count", [](const LatticeGraph& g) { return g.edges().size(); })
      .def_property_readonly("frozen_count", &LatticeGraph::frozen_count)
      .def("degree", &LatticeGraph::degree)
      .def("coords", &LatticeGraph::coords)
      .def("index", [](const LatticeGraph& g, const std::vector<int>& x) { return g.index(x); })
      .def("origin", &LatticeGraph::origin)
      .def("__repr__", &LatticeGraph::descriptor);

  py::class_<DisorderField, FieldPtr>(mod, "DisorderField")
      .def_property_readonly("p", &DisorderField::p)
      .def_property_readonly("seed", &DisorderField::seed)
      .def_property_readonly("occupied_count", &DisorderField::occupied_count)
      .def("vacant_mask",
           [](const DisorderField& f) {
             py::array_t<std::uint8_t> a(static_cast<py::ssize_t>(f.size()));
             std::copy(f.mask().begin(), f.mask().end(), a.mutable_data());
             return a.attr("astype")("bool");
           })
      .def("to_hex", &DisorderField::to_hex);

  mod.def(
      "sample_disorder",
      [](const GraphPtr& g, double p, std::uint64_t seed) { return std::make_shared<DisorderField>(sample_disorder(g, p, seed)); },
      py::arg("graph"), py::arg("p"), py::arg("seed"), "Site i is occupied (alpha = 0) with probability p.");

  py::class_<Model, std::shared_ptr<Model>>(mod, "Model")
      .def(py::init([](const std::string& variant, double h, const GraphPtr& g, const FieldPtr& field) {
             return std::make_shared<Model>(parse_variant(variant), h, g, field);
           }),
           py::arg("variant"), py::arg("h"), py::arg("graph"), py::arg("disorder") = nullptr)
      .def_property_readonly("variant", [](const Model& m) { return to_string(m.variant()); })
      .def_property_readonly("h", &Model::h)
      .def_property_readonly("layers", &Model::layers)
      .def("energy", [](const Model& m, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
        return m.energy(to_configuration(m, a));
      })
      .def("order_parameter",
           [](const Model& m, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
             const auto c = to_configuration(m, a);
             return m.order_parameter(c, m.make_cache(c));
           });

  mod.def(
      "run_chain",
      [](const Model& m, std::vector<double> betas, int thermalize, int measure, int measure_every,
         int exchange_every, std::uint64_t seed, int threads, bool cold_start) {
        RunParams p;
        p.betas = std::move(betas);
        p.sweeps_thermalize = thermalize;
        p.sweeps_measure = measure;
        p.measure_every = measure_every;
        p.exchange_every = exchange_every;
        p.seed = seed;
        p.threads = threads;
        p.cold_start = cold_start;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_chain(m, p);
        }
        py::list out;
        for (const auto& s : r.series) out.append(series_dict(s));
        return out;
      },
      py::arg("model"), py::arg("betas"), py::arg("thermalize") = 1000, py::arg("measure") = 10000,
      py::arg("measure_every") = 10, py::arg("exchange_every") = 10, py::arg("seed") = 0, py::arg("threads") = 1,
      py::arg("cold_start") = false, "Parallel-tempering chain; one dict of numpy series per beta.");

  mod.def("binder", &binder, py::arg("m2"), py::arg("m4"));
  mod.def(
      "crossing_temperature",
      [](int na, const std::vector<double>& betas, std::vector<double> ua, int nb, std::vector<double> ub,
         double floor) -> std::optional<double> {
        const auto c = crossing_temperature({na, betas, std::move(ua)}, {nb, betas, std::move(ub)}, floor);
        if (!c.found) return std::nullopt;
        return c.beta;
      },
      py::arg("N_a"), py::arg("betas"), py::arg("U_a"), py::arg("N_b"), py::arg("U_b"), py::arg("floor") = kBinderFloor);

  mod.def("cov_forward", [](double tp, double tm, double alpha) {
    const auto c = cov_forward(tp, tm, alpha);
    return py::make_tuple(c.zeta, c.w);
  });
  mod.def("cov_inverse", [](double zeta, double w, double alpha) {
    const auto l = cov_inverse(zeta, w, alpha);
    return py::make_tuple(l.plus, l.minus);
  });

  mod.def(
      "box_probability_scan",
      [](int dim, double p, std::vector<int> lengths, int trials, std::uint64_t seed, int divisor) {
        BoxScanParams params;
        params.dim = dim;
        params.p = p;
        params.lengths = std::move(lengths);
        params.trials = trials;
        params.seed = seed;
        params.divisor = divisor;
        py::list out;
        for (const auto& r : box_probability_scan(params)) {
          py::dict d;
          d["L"] = r.length;
          d["trials"] = r.trials;
          d["pre_good"] = r.pre_good;
          d["good"] = r.good;
          d["optimal"] = r.optimal;
          out.append(d);
        }
        return out;
      },
      py::arg("dim"), py::arg("p"), py::arg("lengths"), py::arg("trials") = 200, py::arg("seed") = 0,
      py::arg("divisor") = kSmallClusterDivisor);

  mod.def(
      "green_fourier", [](double m, int dim, int M) { return table_array(green_fourier(m, dim, M)); }, py::arg("m"),
      py::arg("dim"), py::arg("M"), "Torus table, row-major over 0..M-1 per axis; s = 1/(2d).");
  mod.def(
      "green_box", [](int N, double m) { return table_array(green_box(N, m, walk_scale(2))); }, py::arg("N"),
      py::arg("m"), "Killed-at-exit table on {-N..N}^2, row-major; s = 1/4.");
  mod.def(
      "green_walk",
      [](const std::vector<int>& x, double m, int dim, int nmax) {
        const auto w = green_walk(x, m, dim, nmax);
        return py::make_tuple(w.value, w.tail_bound);
      },
      py::arg("x"), py::arg("m"), py::arg("dim"), py::arg("nmax"));
  mod.def(
      "mcbryan_bound",
      [](double beta, double h, double delta, int N) {
        const auto r = mcbryan_bound(beta, h, delta, N);
        py::dict d;
        d["u0"] = r.u0;
        d["linear"] = r.linear;
        d["quadratic"] = r.quadratic;
        d["cosh_edge"] = r.cosh_edge;
        d["cosh_site"] = r.cosh_site;
        d["raw_bound"] = r.raw_bound;
        return d;
      },
      py::arg("beta"), py::arg("h"), py::arg("delta"), py::arg("N"));

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"disxy"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the disxy command line in-process; returns (exit_code, stdout, stderr).");
}
