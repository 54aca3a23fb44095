#include "manitrans/bench.hpp"
#include "manitrans/errors.hpp"
#include "manitrans/flag_grassmann.hpp"
#include "manitrans/gl_so.hpp"
#include "manitrans/stiefel.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace manitrans;

namespace {

BenchConfig make_config(const std::string& manifold, Index n, Index d, double alpha, double beta,
                        const std::vector<Index>& d_list, const std::vector<double>& t_grid,
                        int vectors, std::uint64_t seed) {
  BenchConfig c;
  c.manifold = parse_manifold(manifold);
  c.n = n;
  c.d = d;
  c.alpha = alpha;
  c.beta = beta;
  c.d_list = d_list;
  c.t_grid = t_grid;
  c.num_vectors = vectors;
  c.seed = seed;
  return c;
}

#define MT_BENCH_ARGS                                                                         \
  py::arg("manifold"), py::arg("n"), py::arg("d") = 10, py::arg("alpha") = 0.5,              \
      py::arg("beta") = 0.7, py::arg("d_list") = std::vector<Index>{},                        \
      py::arg("t_grid") = std::vector<double>{0.5, 1.0, 2.0}, py::arg("vectors") = 20,        \
      py::arg("seed") = 42

}  // namespace

PYBIND11_MODULE(_manitrans, m) {
  m.doc() = "Parallel transport along geodesics of matrix manifolds";

  auto err = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", err.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", err.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", err.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", err.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", err.ptr());

  // Stiefel
  m.def("project_tangent", &project_tangent, py::arg("y"), py::arg("w"));
  m.def("metric_inner", &metric_inner, py::arg("y"), py::arg("xi"), py::arg("eta"), py::arg("alpha"));
  m.def("stiefel_geodesic", &stiefel_geodesic, py::arg("y"), py::arg("xi"), py::arg("alpha"), py::arg("t"));
  m.def("stiefel_christoffel", &stiefel_christoffel, py::arg("y"), py::arg("xi"), py::arg("eta"),
        py::arg("alpha"));
  m.def(
      "stiefel_transport",
      [](const Mat& y, const Mat& xi, const Mat& eta, double alpha, double t) {
        return stiefel_transport(y, xi, eta, alpha, t);
      },
      py::arg("y"), py::arg("xi"), py::arg("eta"), py::arg("alpha"), py::arg("t"));

  py::class_<StiefelTransportPlan>(m, "StiefelTransportPlan")
      .def(py::init([](const Mat& y, const Mat& xi, double alpha) { return StiefelTransportPlan(y, xi, alpha); }),
           py::arg("y"), py::arg("xi"), py::arg("alpha"))
      .def("geodesic", &StiefelTransportPlan::geodesic, py::arg("t"))
      .def("velocity", &StiefelTransportPlan::velocity, py::arg("t"))
      .def(
          "transport", [](const StiefelTransportPlan& p, const Mat& eta, double t) { return p.transport(eta, t); },
          py::arg("eta"), py::arg("t"))
      .def(
          "transport_many",
          [](const StiefelTransportPlan& p, const std::vector<Mat>& etas, double t) { return p.transport(etas, t); },
          py::arg("etas"), py::arg("t"));

  // flag and Grassmann
  auto sig = [](const std::vector<Index>& d_list, Index n) { return FlagSignature(d_list, n); };
  m.def(
      "flag_horizontal_project",
      [sig](const std::vector<Index>& d_list, const Mat& y, const Mat& w) {
        return flag_horizontal_project(sig(d_list, y.rows()), y, w);
      },
      py::arg("d_list"), py::arg("y"), py::arg("w"));
  m.def(
      "flag_christoffel",
      [sig](const std::vector<Index>& d_list, const Mat& y, const Mat& xi, const Mat& eta, double alpha) {
        return flag_christoffel(sig(d_list, y.rows()), y, xi, eta, alpha);
      },
      py::arg("d_list"), py::arg("y"), py::arg("xi"), py::arg("eta"), py::arg("alpha") = 0.5);
  m.def(
      "flag_geodesic",
      [sig](const std::vector<Index>& d_list, const Mat& y, const Mat& xi, double t) {
        return flag_geodesic(sig(d_list, y.rows()), y, xi, 0.5, t);
      },
      py::arg("d_list"), py::arg("y"), py::arg("xi"), py::arg("t"));
  m.def(
      "flag_transport",
      [sig](const std::vector<Index>& d_list, const Mat& y, const Mat& xi, const Mat& eta, double t) {
        return flag_transport_canonical(sig(d_list, y.rows()), y, xi, eta, t);
      },
      py::arg("d_list"), py::arg("y"), py::arg("xi"), py::arg("eta"), py::arg("t"));

  py::class_<FlagTransportPlan>(m, "FlagTransportPlan")
      .def(py::init([sig](const std::vector<Index>& d_list, const Mat& y, const Mat& xi) {
             return FlagTransportPlan(sig(d_list, y.rows()), y, xi);
           }),
           py::arg("d_list"), py::arg("y"), py::arg("xi"))
      .def("geodesic", &FlagTransportPlan::geodesic, py::arg("t"))
      .def("velocity", &FlagTransportPlan::velocity, py::arg("t"))
      .def(
          "transport", [](const FlagTransportPlan& p, const Mat& eta, double t) { return p.transport(eta, t); },
          py::arg("eta"), py::arg("t"));

  m.def("grassmann_geodesic", &grassmann_geodesic, py::arg("y"), py::arg("xi"), py::arg("t"));
  m.def("grassmann_transport", &grassmann_transport, py::arg("y"), py::arg("xi"), py::arg("eta"), py::arg("t"));

  // groups
  py::class_<GLGeometry>(m, "GLGeometry")
      .def(py::init<Index, double>(), py::arg("n"), py::arg("beta"))
      .def("inner", &GLGeometry::inner, py::arg("x"), py::arg("xi"), py::arg("eta"))
      .def("christoffel", &GLGeometry::christoffel, py::arg("x"), py::arg("xi"), py::arg("eta"))
      .def("geodesic", &GLGeometry::geodesic, py::arg("x"), py::arg("xi"), py::arg("t"))
      .def(
          "transport",
          [](const GLGeometry& g, const Mat& x, const Mat& xi, const Mat& eta, double t) {
            return g.transport(x, xi, eta, t);
          },
          py::arg("x"), py::arg("xi"), py::arg("eta"), py::arg("t"));

  py::class_<SOGeometry>(m, "SOGeometry")
      .def(py::init<Index, Index, double>(), py::arg("n"), py::arg("d"), py::arg("alpha"))
      .def("inner", &SOGeometry::inner, py::arg("x"), py::arg("xi"), py::arg("eta"))
      .def("christoffel", &SOGeometry::christoffel, py::arg("x"), py::arg("xi"), py::arg("eta"))
      .def("geodesic", &SOGeometry::geodesic, py::arg("x"), py::arg("xi"), py::arg("t"))
      .def(
          "transport",
          [](const SOGeometry& g, const Mat& x, const Mat& xi, const Mat& eta, double t) {
            return g.transport(x, xi, eta, t);
          },
          py::arg("x"), py::arg("xi"), py::arg("eta"), py::arg("t"));

  // experiment drivers; rows come back as dicts
  m.def(
      "run_isometry",
      [](const std::string& manifold, Index n, Index d, double alpha, double beta, const std::vector<Index>& dl,
         const std::vector<double>& tg, int vectors, std::uint64_t seed) {
        py::list out;
        for (const auto& r : run_isometry(make_config(manifold, n, d, alpha, beta, dl, tg, vectors, seed)))
          out.append(py::dict(py::arg("t") = r.t, py::arg("max_gram_drift") = r.max_gram_drift));
        return out;
      },
      MT_BENCH_ARGS);
  m.def(
      "run_verify",
      [](const std::string& manifold, Index n, Index d, double alpha, double beta, const std::vector<Index>& dl,
         const std::vector<double>& tg, int vectors, std::uint64_t seed) {
        py::list out;
        for (const auto& r : run_verify(make_config(manifold, n, d, alpha, beta, dl, tg, vectors, seed)))
          out.append(py::dict(py::arg("t") = r.t, py::arg("oracle_error") = r.oracle_error,
                              py::arg("transport_residual") = r.transport_residual,
                              py::arg("tangency") = r.tangency, py::arg("pass") = r.pass));
        return out;
      },
      MT_BENCH_ARGS);
}
