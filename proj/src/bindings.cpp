#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowkit/flow.hpp"
#include "flowkit/metrics.hpp"
#include "flowkit/render.hpp"
#include "flowkit/synth.hpp"
#include "flowkit/tree.hpp"

namespace py = pybind11;

namespace {

flowkit::Flow parse_or_raise(const std::string& text,
                             flowkit::ParseResult (*parser)(const std::string&)) {
  flowkit::ParseResult result = parser(text);
  if (const auto* error = std::get_if<flowkit::ParseError>(&result))
    throw py::value_error(error->message());
  return std::get<flowkit::Flow>(result);
}

}  // namespace

PYBIND11_MODULE(_flowkit, m) {
  m.doc() = "Workflow data model, tree edit metrics and synthetic generation";

  py::enum_<flowkit::FlowKind>(m, "FlowKind")
      .value("flow", flowkit::FlowKind::flow)
      .value("subflow", flowkit::FlowKind::subflow);

  py::enum_<flowkit::Category>(m, "Category")
      .value("action", flowkit::Category::action)
      .value("flowlogic", flowkit::Category::flowlogic)
      .value("subflow", flowkit::Category::subflow);

  py::class_<flowkit::InputBinding>(m, "InputBinding")
      .def(py::init<>())
      .def(py::init([](std::string name, std::string value) {
             return flowkit::InputBinding{std::move(name), std::move(value)};
           }),
           py::arg("name"), py::arg("value"))
      .def_readwrite("name", &flowkit::InputBinding::name)
      .def_readwrite("value", &flowkit::InputBinding::value)
      .def(py::self == py::self)
      .def("__repr__", [](const flowkit::InputBinding& input) {
        return "InputBinding(" + input.name + "=" + input.value + ")";
      });

  py::class_<flowkit::Trigger>(m, "Trigger")
      .def(py::init<>())
      .def_readwrite("annotation", &flowkit::Trigger::annotation)
      .def_readwrite("trigger_type", &flowkit::Trigger::trigger_type)
      .def_readwrite("inputs", &flowkit::Trigger::inputs)
      .def(py::self == py::self);

  py::class_<flowkit::Component>(m, "Component")
      .def(py::init<>())
      .def_readwrite("annotation", &flowkit::Component::annotation)
      .def_readwrite("category", &flowkit::Component::category)
      .def_readwrite("definition", &flowkit::Component::definition)
      .def_readwrite("scope", &flowkit::Component::scope)
      .def_readwrite("order", &flowkit::Component::order)
      .def_readwrite("block", &flowkit::Component::block)
      .def_readwrite("inputs", &flowkit::Component::inputs)
      .def(py::self == py::self);

  py::class_<flowkit::Flow>(m, "Flow")
      .def(py::init<>())
      .def_readwrite("kind", &flowkit::Flow::kind)
      .def_readwrite("scope", &flowkit::Flow::scope)
      .def_readwrite("trigger", &flowkit::Flow::trigger)
      .def_readwrite("components", &flowkit::Flow::components)
      .def(py::self == py::self)
      .def("__repr__", [](const flowkit::Flow& flow) {
        return "<Flow " + flowkit::content_id(flow) + " with " +
               std::to_string(flow.components.size()) + " components>";
      });

  py::class_<flowkit::MetricResult>(m, "MetricResult")
      .def_readonly("flow_sim_with_inputs", &flowkit::MetricResult::flow_sim_with_inputs)
      .def_readonly("flow_sim_no_inputs", &flowkit::MetricResult::flow_sim_no_inputs)
      .def_readonly("tree_bleu_with_inputs", &flowkit::MetricResult::tree_bleu_with_inputs)
      .def_readonly("tree_bleu_no_inputs", &flowkit::MetricResult::tree_bleu_no_inputs)
      .def_readonly("trigger_match", &flowkit::MetricResult::trigger_match)
      .def_readonly("component_match", &flowkit::MetricResult::component_match)
      .def("to_dict", [](const flowkit::MetricResult& result) {
        py::dict d;
        d["flow_sim_with_inputs"] = result.flow_sim_with_inputs;
        d["flow_sim_no_inputs"] = result.flow_sim_no_inputs;
        d["tree_bleu_with_inputs"] = result.tree_bleu_with_inputs;
        d["tree_bleu_no_inputs"] = result.tree_bleu_no_inputs;
        d["trigger_match"] = result.trigger_match;
        d["component_match"] = result.component_match;
        return d;
      });

  m.def(
      "parse_flow",
      [](const std::string& text) { return parse_or_raise(text, flowkit::parse_flow); },
      py::arg("text"), "Parse and validate a flow JSON document (raises ValueError)");
  m.def(
      "extract_flow",
      [](const std::string& text) {
        return parse_or_raise(text, flowkit::extract_flow_from_model_output);
      },
      py::arg("text"), "Extract the first flow JSON object from raw model output");
  m.def("canonicalize", &flowkit::canonicalize, py::arg("flow"));
  m.def("serialize_flow", &flowkit::serialize_flow, py::arg("flow"));
  m.def("serialize_flow_pretty", &flowkit::serialize_flow_pretty, py::arg("flow"),
        py::arg("indent") = 2);
  m.def("content_id", &flowkit::content_id, py::arg("flow"));
  m.def("annotate", &flowkit::annotate, py::arg("flow"));

  py::class_<flowkit::TreeWeights>(m, "TreeWeights")
      .def(py::init<>())
      .def_static("unit", &flowkit::TreeWeights::unit)
      .def_readwrite("flow", &flowkit::TreeWeights::flow)
      .def_readwrite("trigger", &flowkit::TreeWeights::trigger)
      .def_readwrite("components", &flowkit::TreeWeights::components)
      .def_readwrite("component", &flowkit::TreeWeights::component)
      .def_readwrite("input", &flowkit::TreeWeights::input);

  m.def("flow_sim", &flowkit::flow_sim, py::arg("flow"), py::arg("reference"),
        py::arg("include_inputs") = true, py::arg("weights") = flowkit::TreeWeights{});
  m.def("tree_bleu", &flowkit::tree_bleu, py::arg("flow"), py::arg("reference"),
        py::arg("include_inputs") = true);
  m.def("trigger_match", &flowkit::trigger_match, py::arg("flow"), py::arg("reference"),
        py::arg("strict") = false);
  m.def("component_match", &flowkit::component_match, py::arg("flow"), py::arg("reference"),
        py::arg("use_multiset") = true);
  m.def(
      "evaluate",
      [](const std::string& raw_output, const flowkit::Flow& reference) {
        return flowkit::evaluate_pair(flowkit::extract_flow_from_model_output(raw_output),
                                      reference);
      },
      py::arg("raw_output"), py::arg("reference"),
      "Score raw model output against a reference; parse failures score zero");

  m.def(
      "tree_size",
      [](const flowkit::Flow& flow, bool include_inputs) {
        flowkit::FlowTree tree = flowkit::build_tree(flowkit::canonicalize(flow));
        if (!include_inputs) tree = flowkit::without_inputs(tree);
        return flowkit::tree_size(tree);
      },
      py::arg("flow"), py::arg("include_inputs") = true,
      "Weighted size of the flow's tree form");

  m.def(
      "generate_flow",
      [](const std::string& pattern, std::uint64_t seed) {
        auto registry = flowkit::default_registry();
        return flowkit::generate_flow(flowkit::pattern_by_name(registry, pattern),
                                      flowkit::default_catalog(), seed);
      },
      py::arg("pattern"), py::arg("seed"));
  m.def(
      "generate_dataset",
      [](std::size_t count, std::uint64_t seed, const std::string& pattern) {
        auto registry = flowkit::default_registry();
        if (pattern != "mixed") registry = {flowkit::pattern_by_name(registry, pattern)};
        return flowkit::generate_dataset(registry, flowkit::default_catalog(), count, seed);
      },
      py::arg("count"), py::arg("seed"), py::arg("pattern") = "mixed");
  m.def("pattern_names", [] {
    std::vector<std::string> names;
    for (const auto& pattern : flowkit::default_registry()) names.push_back(pattern.name);
    return names;
  });

  m.def(
      "split_ids",
      [](const std::vector<std::string>& ids, const std::array<double, 3>& ratios,
         std::uint64_t seed) {
        flowkit::SplitManifest manifest = flowkit::split_ids(ids, ratios, seed);
        py::dict d;
        d["train"] = manifest.train;
        d["valid"] = manifest.valid;
        d["test"] = manifest.test;
        return d;
      },
      py::arg("ids"), py::arg("ratios"), py::arg("seed"));

  m.def(
      "to_dot",
      [](const flowkit::Flow& flow, std::uint64_t style_seed) {
        return flowkit::to_dot(flow, flowkit::sample_style(style_seed));
      },
      py::arg("flow"), py::arg("style_seed") = 0);
}
