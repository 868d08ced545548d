#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vexlp/cli.hpp"
#include "vexlp/herz.hpp"
#include "vexlp/mollify.hpp"
#include "vexlp/norm.hpp"

namespace py = pybind11;
using namespace vexlp;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variable-exponent Lebesgue space numerics";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def_static("line", &Grid::line, py::arg("lo"), py::arg("hi"), py::arg("count"))
      .def_static("rect", [](std::pair<double, double> lo, std::pair<double, double> hi, std::size_t n0,
                             std::size_t n1) { return Grid::rect({lo.first, lo.second}, {hi.first, hi.second}, n0, n1); })
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def("spacing", &Grid::spacing)
      .def("centers", [](const Grid& g) {
        py::array_t<double> out({static_cast<py::ssize_t>(g.size()), py::ssize_t{g.dim()}});
        auto r = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < g.size(); ++i)
          for (int a = 0; a < g.dim(); ++a) r(i, a) = g.center(i)[a];
        return out;
      });

  py::class_<SampledFunction>(m, "Function")
      .def(py::init([](const Grid& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
             return SampledFunction(g, to_vector(v));
           }),
           py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &SampledFunction::grid)
      .def_property_readonly("values", [](const SampledFunction& f) { return to_array(f.values()); });

  py::class_<VariableExponent>(m, "Exponent")
      .def(py::init([](const Grid& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
             return VariableExponent(g, to_vector(v));
           }),
           py::arg("grid"), py::arg("values"))
      .def_static("constant", &VariableExponent::constant)
      .def("conjugate", &VariableExponent::conjugate)
      .def_property_readonly("values", [](const VariableExponent& p) { return to_array(p.values()); });

  py::class_<Measure>(m, "Measure")
      .def_static("lebesgue", &Measure::lebesgue)
      .def_static("normalized", &Measure::normalized);

  m.def("modular", &modular, py::arg("f"), py::arg("p"), py::arg("mu") = Measure::lebesgue());
  m.def(
      "norm",
      [](const SampledFunction& f, const VariableExponent& p, const Measure& mu, double tol) {
        return luxemburg_norm(f, p, mu, tol).norm;
      },
      py::arg("f"), py::arg("p"), py::arg("mu") = Measure::lebesgue(), py::arg("tol") = kDefaultNormTol);
  m.def("hoelder_constant", &hoelder_constant, py::arg("p"), py::arg("mu") = Measure::lebesgue());
  m.def("dual_pairing", &dual_pairing, py::arg("f"), py::arg("g"), py::arg("mu") = Measure::lebesgue());

  py::class_<Mollifier>(m, "Kernel")
      .def_static("gaussian", &Mollifier::gaussian)
      .def_static("tent", &Mollifier::tent)
      .def_static("box", &Mollifier::box)
      .def_property_readonly("name", &Mollifier::name)
      .def("dilate", [](const Mollifier& k, double sigma) { return dilate(k, sigma); });

  m.def("convolve", [](const Mollifier& k, const SampledFunction& f) { return convolve(k, f); });
  m.def("radius_ladder", &radius_ladder, py::arg("grid"), py::arg("ratio") = 1.25);
  m.def("maximal", &maximal, py::arg("f"), py::arg("radii"));

  m.def(
      "herz_norm",
      [](const SampledFunction& f, double p, double q, double alpha, int k_max) {
        return herz_norm(f, HerzParams{p, q, alpha, k_max});
      },
      py::arg("f"), py::arg("p"), py::arg("q"), py::arg("alpha"), py::arg("k_max"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a vexlp subcommand; returns (exit_code, stdout, stderr).");
}
