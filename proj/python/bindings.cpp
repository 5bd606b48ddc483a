#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <tuple>

#include "orthoq/core.hpp"
#include "orthoq/gridded.hpp"
#include "orthoq/harness.hpp"
#include "orthoq/oracle.hpp"
#include "orthoq/rangetree.hpp"
#include "orthoq/rank.hpp"
#include "orthoq/rankspace.hpp"

namespace py = pybind11;
using namespace orthoq;

namespace {

using RectTuple = std::tuple<double, double, double, double>;

Rect to_rect(const RectTuple& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)}; }

std::vector<UnitPoint> to_points(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw std::invalid_argument("points must have shape (n, 2)");
  std::vector<UnitPoint> pts(static_cast<std::size_t>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t k = 0; k < a.shape(0); ++k) pts[k] = {r(k, 0), r(k, 1)};
  return pts;
}

py::array_t<double> from_points(const std::vector<UnitPoint>& pts) {
  py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    w(k, 0) = pts[k].x;
    w(k, 1) = pts[k].y;
  }
  return a;
}

Orientation parse_orientation(const std::string& s) {
  for (Orientation o : kOrientations) {
    if (to_string(o) == s) return o;
  }
  throw std::invalid_argument("unknown orientation '" + s + "'");
}

Backend parse_backend(const std::string& s) {
  if (s == "main1") return Backend::Main1;
  if (s == "main2") return Backend::Main2;
  throw std::invalid_argument("backend must be 'main1' or 'main2'");
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constant-time range emptiness and rank structures for uniformly random points";

  m.def("sample_points", [](std::size_t n, std::uint64_t seed) { return from_points(sample_points(n, seed)); },
        py::arg("n"), py::arg("seed"), "Uniform points in the unit square as an (n, 2) array.");
  m.def(
      "to_rank_space", [](py::array_t<double> pts) { return to_rank_space(to_points(pts)); }, py::arg("points"),
      "Permutation p with p[i-1] the y-rank of the point of x-rank i.");
  m.def(
      "rect_contains", [](const RectTuple& r, double x, double y) { return rect_contains(to_rect(r), {x, y}); },
      py::arg("rect"), py::arg("x"), py::arg("y"));
  m.def("oracle_empty", [](py::array_t<double> pts, const RectTuple& r) {
    return oracle::oracle_empty(to_points(pts), to_rect(r));
  });
  m.def("oracle_rank", [](std::vector<double> values, double x) { return oracle::oracle_rank(values, x); });

  py::class_<Rank1D>(m, "Rank1D")
      .def(py::init([](std::vector<double> values, double lo, double hi) {
             return Rank1D::build(values, {lo, hi});
           }),
           py::arg("values"), py::arg("lo") = 0.0, py::arg("hi") = 1.0)
      .def("rank", &Rank1D::rank, py::arg("x"))
      .def("ranks",
           [](const Rank1D& r, py::array_t<double, py::array::c_style | py::array::forcecast> xs) {
             auto in = xs.unchecked<1>();
             std::vector<std::uint32_t> out(static_cast<std::size_t>(in.shape(0)));
             for (py::ssize_t k = 0; k < in.shape(0); ++k) out[k] = r.rank(in(k));
             return py::array_t<std::int64_t>(py::cast(out));
           })
      .def_property_readonly("size", &Rank1D::size)
      .def_property_readonly("slots", [](const Rank1D& r) { return r.space().slots(); })
      .def_property_readonly("overflow_bins", &Rank1D::overflow_bins)
      .def_property_readonly("bytes", &Rank1D::bytes)
      .def("__len__", &Rank1D::size);

  py::class_<SlabTree>(m, "SlabTree")
      .def(py::init([](std::vector<std::uint32_t> perm, double eps) { return SlabTree::build(perm, eps); }),
           py::arg("perm"), py::arg("eps") = 0.5)
      .def(
          "empty",
          [](const SlabTree& t, std::uint32_t i1, std::uint32_t i2, std::uint32_t j1, std::uint32_t j2) {
            return t.empty({i1, i2, j1, j2});
          },
          py::arg("i1"), py::arg("i2"), py::arg("j1"), py::arg("j2"))
      .def_property_readonly("depth", &SlabTree::depth)
      .def_property_readonly("root_delta", &SlabTree::root_delta)
      .def_property_readonly("root_fanout", &SlabTree::root_fanout)
      .def_property_readonly("bytes", &SlabTree::bytes)
      .def("__len__", &SlabTree::size);

  py::class_<QuadrantStore>(m, "QuadrantStore")
      .def(py::init([](std::vector<std::uint32_t> perm) { return QuadrantStore::build(perm); }), py::arg("perm"))
      .def(
          "empty",
          [](const QuadrantStore& s, const std::string& o, std::uint32_t i, std::uint32_t j) {
            return s.empty(parse_orientation(o), i, j);
          },
          py::arg("orientation"), py::arg("i"), py::arg("j"))
      .def("staircase",
           [](const QuadrantStore& s, const std::string& o) {
             const auto f = s.staircase(parse_orientation(o));
             return std::vector<std::uint32_t>(f.begin(), f.end());
           })
      .def("__len__", &QuadrantStore::size);

  py::class_<RangeTree3>(m, "RangeTree")
      .def(py::init([](py::array_t<double> pts, const RectTuple& cell) {
             return RangeTree3::build(to_points(pts), to_rect(cell));
           }),
           py::arg("points"), py::arg("cell") = RectTuple{0.0, 1.0, 0.0, 1.0})
      .def(
          "empty", [](const RangeTree3& t, const RectTuple& q) { return t.empty(to_rect(q)); }, py::arg("rect"))
      .def_property_readonly("bytes", &RangeTree3::bytes)
      .def("__len__", &RangeTree3::size);

  py::class_<GridForest>(m, "GridForest")
      .def(py::init([](py::array_t<double> pts, double c1, double eps, const std::string& backend, bool parallel) {
             GridBuildOptions o;
             o.parallel = parallel;
             return GridForest::build(to_points(pts), c1, eps, parse_backend(backend), o);
           }),
           py::arg("points"), py::arg("c1") = 32.0, py::arg("eps") = 0.5, py::arg("backend") = "main2",
           py::arg("parallel") = false)
      .def(
          "empty", [](const GridForest& f, const RectTuple& q) { return f.empty(to_rect(q)); }, py::arg("rect"))
      .def("query_stats",
           [](const GridForest& f, const RectTuple& q) {
             GridQueryStats st;
             const bool e = f.empty(to_rect(q), &st);
             py::dict d;
             d["empty"] = e;
             d["shortcut"] = st.shortcut;
             d["level"] = st.level;
             d["cells"] = st.cells;
             d["max_quadrant_probes"] = st.max_quadrant_probes;
             d["crossing_probes"] = st.crossing_probes;
             return d;
           })
      .def_property_readonly("params", [](const GridForest& f) { return json_to_py(to_json(f.params())); })
      .def("space_report", [](const GridForest& f) { return json_to_py(to_json(f.space_report())); })
      .def_property_readonly("bytes", &GridForest::bytes);

  m.def(
      "validate_net",
      [](py::array_t<double> pts, double c, std::uint64_t trials, std::uint64_t seed) {
        const NetReport r = validate_net(to_points(pts), c, trials, seed);
        py::dict d;
        d["n"] = r.n;
        d["c"] = r.c;
        d["min_area"] = r.min_area;
        d["trials"] = r.trials;
        d["empty_rects"] = r.empty_rects;
        d["levels"] = r.levels;
        d["cells"] = r.cells;
        d["empty_cells"] = r.empty_cells;
        return d;
      },
      py::arg("points"), py::arg("c") = 32.0, py::arg("trials") = 10000, py::arg("seed") = 1);

  m.def(
      "verify",
      [](const std::string& structure, std::size_t n, std::uint64_t seed, std::uint64_t queries, double eps,
         double c1, bool exhaustive) {
        const auto s = parse_structure(structure);
        if (!s) throw std::invalid_argument("unknown structure '" + structure + "'");
        RunOptions o;
        o.structure = *s;
        o.eps = eps;
        o.c1 = c1;
        o.exhaustive = exhaustive;
        const auto pts = sample_points(n, seed);
        return json_to_py(to_json(run_structure(pts, default_workload(n, c1, queries, seed + 1), o)));
      },
      py::arg("structure"), py::arg("n"), py::arg("seed") = 1, py::arg("queries") = 10000, py::arg("eps") = 0.5,
      py::arg("c1") = 32.0, py::arg("exhaustive") = false,
      "Build a structure over sampled points and compare it with brute force; returns the run report.");
}
