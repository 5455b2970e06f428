#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shiftk/pipeline.hpp"
#include "shiftk/transforms.hpp"

namespace py = pybind11;
using namespace shiftk;

namespace {

RunConfig config(std::size_t lmax) {
  RunConfig c;
  c.lmax = lmax;
  c.validate();
  return c;
}

std::string invariants(const std::string& text, std::size_t lmax) {
  return to_json(compute_invariants(parse_presentation(text), config(lmax))).dump();
}

std::string classes(const std::string& text, std::size_t lmax, bool signatures) {
  const RunConfig c = config(lmax);
  return chain_to_json(PartitionChain::build(parse_presentation(text), c.lmax, c.limits), signatures).dump();
}

std::vector<std::string> transform(const std::string& text, const std::string& move) {
  std::vector<std::string> out;
  for (const auto& r : apply_move(parse_presentation(text), Json::parse(move))) out.push_back(to_json(r).dump());
  return out;
}

std::string compare(const std::string& a, const std::string& b, std::size_t lmax) {
  const RunConfig c = config(lmax);
  return to_json(compare_records(compute_invariants(parse_presentation(a), c),
                                 compute_invariants(parse_presentation(b), c)))
      .dump();
}

std::string verify_model(const std::string& text, std::size_t L) {
  const FiniteModel m(parse_presentation(text));
  Json reports = Json::array();
  bool ok = true;
  for (const auto& r : {verify_representation(m, L), verify_structure(m, L), verify_prop_structure(m, L),
                        verify_monomial_closure(m, L)}) {
    ok = ok && r.ok();
    reports.push_back(to_json(r));
  }
  return Json{{"L", L}, {"points", m.n()}, {"ok", ok}, {"reports", reports}}.dump();
}

std::string canonical(const std::string& text) { return canonical_text(parse_presentation(text)); }

} // namespace

PYBIND11_MODULE(_shiftk, m) {
  m.doc() = "Invariants of one-sided shift spaces. Presentations and results are JSON text.";

  auto error = py::register_exception<Error>(m, "ShiftkError", PyExc_ValueError);
  py::register_exception<NotStabilized>(m, "NotStabilized", error.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());

  m.def("canonical", &canonical, py::arg("presentation"));
  m.def("invariants", &invariants, py::arg("presentation"), py::arg("lmax") = 12);
  m.def("classes", &classes, py::arg("presentation"), py::arg("lmax") = 12, py::arg("signatures") = true);
  m.def("transform", &transform, py::arg("presentation"), py::arg("move"));
  m.def("compare", &compare, py::arg("a"), py::arg("b"), py::arg("lmax") = 12);
  m.def("verify_model", &verify_model, py::arg("presentation"), py::arg("L") = 3);
  m.attr("__version__") = kToolVersion;
}
