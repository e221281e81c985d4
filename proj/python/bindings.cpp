#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include <memory>

#include "rtmap/errors.hpp"
#include "rtmap/verification.hpp"

namespace py = pybind11;
using namespace rtmap;

namespace {

using Coords = std::vector<double>;

TorusPoint point(const Coords& c) { return TorusPoint(std::span<const double>(c)); }
Coords coords(const TorusPoint& p) { return Coords(p.coords().begin(), p.coords().end()); }

std::vector<Coords> rows(const Mat& m) {
  std::vector<Coords> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
  return out;
}

Box box(const Coords& center, const Coords& half_width) {
  if (center.size() != half_width.size()) throw ConfigError("center and half_width lengths differ");
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < center.size(); ++i) arcs.emplace_back(center[i], half_width[i]);
  return Box(std::move(arcs));
}

ExpandingBase base_from(int degree, const Coords& u_c, const Coords& u_hw, const Coords& v_c, const Coords& v_hw,
                        double epsilon) {
  return build_expanding(degree, box(u_c, u_hw), box(v_c, v_hw), epsilon);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robustly transitive singular endomorphisms of the torus";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SearchExhausted>(m, "SearchExhausted", PyExc_RuntimeError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_RuntimeError);

  m.def("reduce", &reduce);
  m.def("dist_circle", &dist_circle);

  py::class_<ExpandingBase>(m, "ExpandingBase")
      .def(py::init(&base_from), py::arg("degree") = 2, py::arg("u_center") = Coords{0.0},
           py::arg("u_half_width") = Coords{0.02}, py::arg("v_center") = Coords{0.07},
           py::arg("v_half_width") = Coords{0.02}, py::arg("epsilon") = 0.01)
      .def_property_readonly("degree", &ExpandingBase::degree)
      .def_property_readonly("power", &ExpandingBase::power)
      .def_property_readonly("factor", &ExpandingBase::factor)
      .def_property_readonly("dim", &ExpandingBase::dim)
      .def("eval", [](const ExpandingBase& b, const Coords& x) { return coords(b.eval(point(x))); })
      .def("cantor_counts", [](const ExpandingBase& b, int depth) {
        std::vector<std::size_t> out;
        for (int n = 0; n <= depth; ++n) out.push_back(cantor_components(b, n).components.size());
        return out;
      });

  py::class_<IfsPair>(m, "IfsPair")
      .def(py::init<double, double>(), py::arg("beta") = IfsPair::kDefaultBeta,
           py::arg("alpha") = IfsPair::kDefaultAlpha)
      .def_property_readonly("beta", &IfsPair::beta)
      .def_property_readonly("alpha", &IfsPair::alpha)
      .def_property_readonly("a1", &IfsPair::a1)
      .def_property_readonly("r1", &IfsPair::r1)
      .def("g1", &IfsPair::g1)
      .def("g2", &IfsPair::g2)
      .def("apply", [](const IfsPair& p, const std::vector<std::uint8_t>& word, double y) {
        return ifs_apply(p, SemigroupWord{word}, y);
      })
      .def("branch_to_target",
           [](const IfsPair& p, double start, double center, double half_width, int max_depth) {
             return branch_to_target(p, start, Arc(center, half_width), max_depth).letters;
           },
           py::arg("start"), py::arg("center"), py::arg("half_width"), py::arg("max_depth") = 60)
      .def("minimality_depth", [](const IfsPair& p, double start, double eps, int max_depth) {
        const auto r = minimality_check(p, start, eps, max_depth);
        return r.dense ? r.word_depth : -1;
      });

  py::class_<Endomorphism, std::shared_ptr<Endomorphism>>(m, "Endomorphism")
      .def_property_readonly("dim", &Endomorphism::dim)
      .def("eval", [](const Endomorphism& f, const Coords& x) { return coords(f.eval(point(x))); })
      .def("jacobian", [](const Endomorphism& f, const Coords& x) { return rows(f.jacobian(point(x))); })
      .def("jacobian_det", [](const Endomorphism& f, const Coords& x) { return f.jacobian_det(point(x)); });

  py::class_<ProductMap, Endomorphism, std::shared_ptr<ProductMap>>(m, "ProductMap")
      .def(py::init<ExpandingBase>());

  py::class_<SkewMap, Endomorphism, std::shared_ptr<SkewMap>>(m, "SkewMap")
      .def(py::init<ExpandingBase, IfsPair>(), py::arg("base") = base_from(2, {0.0}, {0.02}, {0.07}, {0.02}, 0.01),
           py::arg("pair") = IfsPair())
      .def_property_readonly("base", &SkewMap::base)
      .def_property_readonly("pair", &SkewMap::pair);

  py::class_<SingularMap, Endomorphism, std::shared_ptr<SingularMap>>(m, "SingularMap")
      .def(py::init([](const SkewMap& f, double r, double theta, double delta) {
             return std::make_shared<SingularMap>(f, SurgeryParams{r, theta, delta, {}});
           }),
           py::arg("skew"), py::arg("r") = 0.12, py::arg("theta") = 0.03, py::arg("delta") = 0.04)
      .def_property_readonly("skew", &SingularMap::skew)
      .def_property_readonly("s", [](const SingularMap& A) { return coords(A.s()); })
      .def_property_readonly("q1", &SingularMap::q1)
      .def_property_readonly("q2", &SingularMap::q2)
      .def("det", [](const SingularMap& A, const Coords& x) { return A.det(point(x)); })
      .def("critical_points", [](const SingularMap& A, double resolution) {
        std::vector<Coords> out;
        for (const auto& p : critical_trace(A, resolution).points) out.push_back(coords(p));
        return out;
      });

  m.def("classify_fixed_points", [](const Endomorphism& f, const IfsPair& pair) {
    std::vector<py::dict> out;
    for (const auto& r : classify_fixed_points(f, pair)) {
      py::dict d;
      d["point"] = coords(r.point);
      d["classification"] = to_string(r.classification);
      d["fixed"] = r.fixed;
      d["eigenvalues"] = r.eigenvalues;
      out.push_back(d);
    }
    return out;
  });

  m.def("unstable_coverage", [](const Endomorphism& f, const ExpandingBase& base, double a1, int grid_k,
                                int max_iters) { return unstable_coverage(f, base, a1, grid_k, max_iters).fractions; },
        py::arg("map"), py::arg("base"), py::arg("a1") = 0.0, py::arg("grid_k") = 100, py::arg("max_iters") = 40);

  m.def("box_transitivity",
        [](const Endomorphism& f, int grid_k, int horizon, int samples, std::uint64_t seed) {
          const auto r = box_transitivity(f, grid_k, horizon, samples, seed);
          py::dict d;
          d["strongly_connected"] = r.strongly_connected;
          d["diameter"] = r.diameter;
          d["cells"] = r.cells;
          d["edges"] = r.edges;
          return d;
        },
        py::arg("map"), py::arg("grid_k") = 64, py::arg("horizon") = 40, py::arg("samples_per_cell") = 25,
        py::arg("seed") = 1);

  m.def("robustness_sweep",
        [](const std::shared_ptr<SingularMap>& A, int trials, double eta, std::uint64_t seed, bool transitivity) {
          SweepOptions opts;
          opts.check_transitivity = transitivity;
          std::vector<py::dict> out;
          for (const auto& t : robustness_sweep(A, trials, eta, seed, opts).trials) {
            py::dict d;
            d["trial"] = t.trial;
            d["seed"] = t.seed;
            d["c1_norm"] = t.c1_norm;
            d["singular_pass"] = t.singular_pass;
            d["transitive_pass"] = t.transitive_pass;
            out.push_back(d);
          }
          return out;
        },
        py::arg("map"), py::arg("trials"), py::arg("eta") = 0.01, py::arg("seed") = 1,
        py::arg("transitivity") = true);
}
