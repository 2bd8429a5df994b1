#include <pybind11/pybind11.h>

namespace py = pybind11;

namespace gttpy {
void pyExportOps(py::module_&);
void pyExportSuites(py::module_&);
}  // namespace gttpy

PYBIND11_MODULE(_gtt, m) {
  m.doc() =
      "Graded modal dependent type theory: type checking, usage inference, "
      "erasure to an untyped target, evaluation, and randomized audit "
      "suites.";
  m.attr("__version__") = "0.1.0";
  gttpy::pyExportOps(m);
  gttpy::pyExportSuites(m);
}
