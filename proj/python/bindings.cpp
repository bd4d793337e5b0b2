#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "chromaknn/oracle.hpp"
#include "chromaknn/pipeline.hpp"

namespace py = pybind11;
using namespace chromaknn;

namespace {

Metric metric_from_name(const std::string& name) {
  if (name == "l1") return Metric::l1();
  if (name == "l2") return Metric::l2();
  if (name == "linf") return Metric::linf();
  throw std::invalid_argument("metric must be one of l1, l2, linf");
}

std::vector<ColoredPoint1> points_1d(const std::vector<std::pair<double, int>>& raw) {
  std::vector<ColoredPoint1> pts;
  pts.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    pts.push_back({raw[i].first, raw[i].second, static_cast<int>(i)});
  return pts;
}

std::vector<ColoredPoint2> points_2d(
    const std::vector<std::tuple<double, double, int>>& raw) {
  std::vector<ColoredPoint2> pts;
  pts.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    pts.push_back({{std::get<0>(raw[i]), std::get<1>(raw[i])}, std::get<2>(raw[i]),
                   static_cast<int>(i)});
  return pts;
}

}  // namespace

PYBIND11_MODULE(_chromaknn, m) {
  m.doc() = "Chromatic k-nearest-neighbor queries over colored points";

  py::class_<ChromaticAnswer>(m, "Answer")
      .def_readonly("color", &ChromaticAnswer::color)
      .def_readonly("freq", &ChromaticAnswer::freq)
      .def_readonly("radius", &ChromaticAnswer::radius)
      .def("__repr__", [](const ChromaticAnswer& a) {
        return "Answer(color=" + std::to_string(a.color) +
               ", freq=" + std::to_string(a.freq) +
               ", radius=" + std::to_string(a.radius) + ")";
      });

  py::class_<Pipeline1D>(m, "Index1D")
      .def(py::init([](const std::vector<std::pair<double, int>>& pts, double epsilon) {
             BuildOptions opts;
             opts.epsilon = epsilon;
             return Pipeline1D(points_1d(pts), opts);
           }),
           py::arg("points"), py::arg("epsilon") = 0.0,
           "Build from (x, color) pairs; epsilon > 0 enables query_approx")
      .def("__len__", &Pipeline1D::size)
      .def_property_readonly("color_bound", &Pipeline1D::color_bound)
      .def(
          "query",
          [](const Pipeline1D& p, double q, long k) { return p.query(q, k); },
          py::arg("q"), py::arg("k"),
          "Most frequent color among the k points nearest q (exact)")
      .def(
          "query_approx",
          [](const Pipeline1D& p, double q, long k) { return p.query_approx(q, k); },
          py::arg("q"), py::arg("k"))
      .def(
          "count_in_ball",
          [](const Pipeline1D& p, double q, double radius) {
            return p.count_in_ball(q, radius);
          },
          py::arg("q"), py::arg("radius"),
          "Points with |x - q| <= radius, via k-th-distance searches only");

  py::class_<Pipeline2D>(m, "Index2D")
      .def(py::init([](const std::vector<std::tuple<double, double, int>>& pts,
                       const std::string& metric, long r, std::uint64_t seed) {
             BuildOptions opts;
             opts.r = r;
             opts.seed = seed;
             return Pipeline2D(points_2d(pts), metric_from_name(metric), opts);
           }),
           py::arg("points"), py::arg("metric") = "l2", py::arg("r") = 0,
           py::arg("seed") = 1,
           "Build from (x, y, color) triples with an l1, l2 or linf metric")
      .def("__len__", &Pipeline2D::size)
      .def_property_readonly("color_bound", &Pipeline2D::color_bound)
      .def_property_readonly("metric",
                             [](const Pipeline2D& p) { return p.metric().name(); })
      .def_property_readonly("tau", &Pipeline2D::tau)
      .def(
          "query",
          [](const Pipeline2D& p, std::pair<double, double> q, long k) {
            return p.query({q.first, q.second}, k);
          },
          py::arg("q"), py::arg("k"),
          "Most frequent color among the k points nearest q (exact)");

  m.def(
      "oracle_1d",
      [](const std::vector<std::pair<double, int>>& pts, double q, long k) {
        const auto pts1 = points_1d(pts);
        const OracleAnswer a = oracle_chromatic(pts1, q, k);
        return ChromaticAnswer{a.mode_color, a.mode_frequency, a.kth_radius};
      },
      py::arg("points"), py::arg("q"), py::arg("k"),
      "Brute-force reference answer over (x, color) pairs");

  m.def(
      "oracle_2d",
      [](const std::vector<std::tuple<double, double, int>>& pts,
         std::pair<double, double> q, long k, const std::string& metric) {
        const auto pts2 = points_2d(pts);
        const OracleAnswer a =
            oracle_chromatic(pts2, {q.first, q.second}, k, metric_from_name(metric));
        return ChromaticAnswer{a.mode_color, a.mode_frequency, a.kth_radius};
      },
      py::arg("points"), py::arg("q"), py::arg("k"), py::arg("metric") = "l2",
      "Brute-force reference answer over (x, y, color) triples");
}
