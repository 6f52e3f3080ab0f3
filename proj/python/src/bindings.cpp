#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meanstream/core.hpp"
#include "meanstream/error.hpp"
#include "meanstream/families.hpp"
#include "meanstream/myhill.hpp"
#include "meanstream/verify.hpp"

namespace py = pybind11;
using namespace meanstream;

namespace {

DescriptorPtr descriptor_from_text(const std::string& spec) {
  return std::make_shared<const MeanDescriptor>(descriptor_from_json(nlohmann::json::parse(spec)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Streaming symmetric means with mergeable states";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<MeanDescriptor, std::shared_ptr<MeanDescriptor>>(m, "Descriptor")
      .def_property_readonly("label", &MeanDescriptor::label)
      .def_property_readonly("family", [](const MeanDescriptor& d) { return std::string(family_name(d.family())); })
      .def_property_readonly("dimension", &MeanDescriptor::dimension)
      .def_property_readonly("has_counter", &MeanDescriptor::has_counter)
      .def("to_json", [](const MeanDescriptor& d) { return d.to_json().dump(); })
      .def("__repr__", [](const MeanDescriptor& d) { return "<Descriptor " + d.label() + ">"; });

  m.def("descriptor", [](const std::string& spec) {
    return std::const_pointer_cast<MeanDescriptor>(descriptor_from_text(spec));
  }, py::arg("spec_json"));

  py::class_<AccumulatorState>(m, "State")
      .def_property_readonly("reals", [](const AccumulatorState& s) {
        return std::vector<double>(s.reals().begin(), s.reals().end());
      })
      .def_property_readonly("counter", &AccumulatorState::counter)
      .def_property_readonly("overflow", &AccumulatorState::overflow)
      .def_property_readonly("empty", &AccumulatorState::empty)
      .def("absorb", [](const AccumulatorState& s, double x) { return absorb(s, x); })
      .def("merge", [](const AccumulatorState& a, const AccumulatorState& b) { return merge(a, b); })
      .def("finalize", [](const AccumulatorState& s) { return finalize(s); })
      .def("serialize", [](const AccumulatorState& s) { return serialize_state(s); });

  m.def("init", [](const std::shared_ptr<MeanDescriptor>& d) { return init(DescriptorPtr(d)); });
  m.def("parse_state", [](const std::string& text) { return parse_state(text); });
  m.def("evaluate", [](const std::shared_ptr<MeanDescriptor>& d, const std::vector<double>& xs) {
    return evaluate_stream(DescriptorPtr(d), xs);
  });
  m.def("classify", [](const std::shared_ptr<MeanDescriptor>& d) { return classify(*d).to_json().dump(); });
  m.def("run_suite", [](const std::shared_ptr<MeanDescriptor>& d, std::uint64_t seed) {
    std::vector<std::string> out;
    for (const auto& r : verify::run_suite(*d, seed)) out.push_back(r.to_json().dump());
    return out;
  }, py::arg("descriptor"), py::arg("seed") = verify::kDefaultSeed);
  m.def("myhill", [](const std::shared_ptr<MeanDescriptor>& d, const std::vector<double>& alphabet,
                     std::size_t max_len, std::size_t probe_len) {
    const auto probes = myhill::default_probes(alphabet, probe_len);
    return myhill::enumerate_classes(verify::from_descriptor(*d), alphabet, max_len, probes).to_json().dump();
  }, py::arg("descriptor"), py::arg("alphabet"), py::arg("max_len"), py::arg("probe_len") = 2);
}
