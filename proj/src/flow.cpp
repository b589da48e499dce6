#include "flowkit/flow.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace flowkit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string normalize(const std::string& s) { return lower(trim(s)); }

ParseError violation(std::string path, std::string reason) {
  return ParseError{ParseError::Code::schema_violation, std::move(path), std::move(reason)};
}

bool is_flowlogic_definition(const std::string& definition) {
  const auto& vocab = flowlogic_vocabulary();
  std::string up = definition;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  up = trim(up);
  return std::find(vocab.begin(), vocab.end(), up) != vocab.end();
}

// Reads a string-ish scalar: strings pass through, numbers/bools are kept as
// their JSON text, null becomes "". Arrays/objects are rejected.
bool scalar_to_string(const json& value, std::string& out) {
  if (value.is_string()) {
    out = value.get<std::string>();
    return true;
  }
  if (value.is_number_integer() || value.is_number_unsigned() ||
      value.is_number_float() || value.is_boolean()) {
    out = value.dump();
    return true;
  }
  if (value.is_null()) {
    out = "";
    return true;
  }
  return false;
}

std::optional<ParseError> read_inputs(const json& obj, const std::string& path,
                                      std::vector<InputBinding>& out) {
  auto it = obj.find("inputs");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) return violation(path + ".inputs", "expected an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& entry = (*it)[i];
    std::string entry_path = path + ".inputs[" + std::to_string(i) + "]";
    if (!entry.is_object()) return violation(entry_path, "expected an object");
    InputBinding binding;
    auto name_it = entry.find("name");
    if (name_it == entry.end() || !name_it->is_string())
      return violation(entry_path + ".name", "expected a string");
    binding.name = name_it->get<std::string>();
    if (binding.name.empty()) return violation(entry_path + ".name", "must be non-empty");
    auto value_it = entry.find("value");
    if (value_it != entry.end()) {
      if (!scalar_to_string(*value_it, binding.value))
        return violation(entry_path + ".value", "expected a scalar");
    }
    if (!seen.insert(binding.name).second)
      return violation(entry_path + ".name", "duplicate input name '" + binding.name + "'");
    out.push_back(std::move(binding));
  }
  return std::nullopt;
}

std::optional<ParseError> read_order_like(const json& obj, const std::string& key,
                                          const std::string& path, int& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return violation(path + "." + key, "missing");
  if (it->is_number_integer() || it->is_number_unsigned()) {
    long long v = it->get<long long>();
    if (v < 1) return violation(path + "." + key, "must be a positive integer");
    out = static_cast<int>(v);
    return std::nullopt;
  }
  if (it->is_number_float()) {
    double v = it->get<double>();
    if (v == static_cast<long long>(v) && v >= 1) {
      out = static_cast<int>(v);
      return std::nullopt;
    }
  }
  return violation(path + "." + key, "must be a positive integer");
}

ParseResult parse_flow_json(const json& root) {
  if (!root.is_object()) return violation("$", "expected an object");

  Flow flow;
  auto type_it = root.find("type");
  if (type_it == root.end() || !type_it->is_string())
    return violation("type", "expected \"flow\" or \"subflow\"");
  std::string kind = normalize(type_it->get<std::string>());
  if (kind == "flow") {
    flow.kind = FlowKind::flow;
  } else if (kind == "subflow") {
    flow.kind = FlowKind::subflow;
  } else {
    return violation("type", "expected \"flow\" or \"subflow\", got \"" + kind + "\"");
  }

  if (auto it = root.find("scope"); it != root.end() && it->is_string())
    flow.scope = it->get<std::string>();

  auto trigger_it = root.find("trigger");
  bool has_trigger = trigger_it != root.end() && !trigger_it->is_null();
  if (flow.kind == FlowKind::flow && !has_trigger)
    return violation("trigger", "a flow requires a trigger");
  if (flow.kind == FlowKind::subflow && has_trigger)
    return violation("trigger", "a subflow must not carry a trigger");
  if (has_trigger) {
    if (!trigger_it->is_object()) return violation("trigger", "expected an object");
    Trigger trigger;
    if (auto it = trigger_it->find("annotation"); it != trigger_it->end() && it->is_string())
      trigger.annotation = it->get<std::string>();
    auto tt = trigger_it->find("type");
    if (tt == trigger_it->end() || !tt->is_string() || trim(tt->get<std::string>()).empty())
      return violation("trigger.type", "must be a non-empty string");
    trigger.trigger_type = tt->get<std::string>();
    if (auto err = read_inputs(*trigger_it, "trigger", trigger.inputs)) return *err;
    flow.trigger = std::move(trigger);
  }

  auto comps_it = root.find("components");
  if (comps_it != root.end() && !comps_it->is_null()) {
    if (!comps_it->is_array()) return violation("components", "expected an array");
    int previous_order = 0;
    std::set<int> flowlogic_orders;
    for (std::size_t i = 0; i < comps_it->size(); ++i) {
      const json& entry = (*comps_it)[i];
      std::string path = "components[" + std::to_string(i) + "]";
      if (!entry.is_object()) return violation(path, "expected an object");
      Component component;
      if (auto it = entry.find("annotation"); it != entry.end() && it->is_string())
        component.annotation = it->get<std::string>();

      auto cat_it = entry.find("category");
      if (cat_it == entry.end() || !cat_it->is_string())
        return violation(path + ".category", "expected a string");
      std::string category = normalize(cat_it->get<std::string>());
      if (category == "action") {
        component.category = Category::action;
      } else if (category == "flowlogic") {
        component.category = Category::flowlogic;
      } else if (category == "subflow") {
        component.category = Category::subflow;
      } else {
        return violation(path + ".category", "unknown category \"" + category + "\"");
      }

      if (auto it = entry.find("definition"); it != entry.end() && it->is_string())
        component.definition = it->get<std::string>();
      if (component.category == Category::flowlogic &&
          !is_flowlogic_definition(component.definition))
        return violation(path + ".definition",
                         "\"" + component.definition + "\" is not a flow-logic element");

      if (auto it = entry.find("scope"); it != entry.end() && it->is_string())
        component.scope = it->get<std::string>();

      if (auto err = read_order_like(entry, "order", path, component.order)) return *err;
      if (component.order <= previous_order)
        return violation(path + ".order", "orders must be strictly increasing");
      previous_order = component.order;

      if (auto it = entry.find("block"); it != entry.end() && !it->is_null()) {
        int block = 0;
        if (auto err = read_order_like(entry, "block", path, block)) return *err;
        if (!flowlogic_orders.count(block))
          return violation(path + ".block",
                           "block " + std::to_string(block) +
                               " does not reference an earlier flowlogic component");
        component.block = block;
      }

      if (auto err = read_inputs(entry, path, component.inputs)) return *err;

      if (component.category == Category::flowlogic)
        flowlogic_orders.insert(component.order);
      flow.components.push_back(std::move(component));
    }
  }
  return flow;
}

void append_inputs(ordered_json& obj, const std::vector<InputBinding>& inputs) {
  ordered_json arr = ordered_json::array();
  for (const auto& input : inputs) {
    ordered_json entry;
    entry["name"] = input.name;
    entry["value"] = input.value;
    arr.push_back(std::move(entry));
  }
  obj["inputs"] = std::move(arr);
}

ordered_json flow_to_json(const Flow& flow) {
  ordered_json root;
  root["type"] = to_string(flow.kind);
  root["scope"] = flow.scope;
  if (flow.trigger) {
    ordered_json trigger;
    trigger["annotation"] = flow.trigger->annotation;
    trigger["type"] = flow.trigger->trigger_type;
    append_inputs(trigger, flow.trigger->inputs);
    root["trigger"] = std::move(trigger);
  }
  ordered_json comps = ordered_json::array();
  for (const auto& component : flow.components) {
    ordered_json entry;
    entry["annotation"] = component.annotation;
    entry["category"] = to_string(component.category);
    entry["definition"] = component.definition;
    entry["scope"] = component.scope;
    entry["order"] = component.order;
    if (component.block) entry["block"] = *component.block;
    append_inputs(entry, component.inputs);
    comps.push_back(std::move(entry));
  }
  root["components"] = std::move(comps);
  return root;
}

// Returns the end index (one past '}') of the balanced object starting at
// `start`, or npos. Skips string literals and escapes.
std::size_t balanced_object_end(const std::string& text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string::npos;
}

}  // namespace

const std::vector<std::string>& flowlogic_vocabulary() {
  static const std::vector<std::string> vocab = {
      "IF", "ELSE", "ELSEIF", "FOREACH", "DOUNTIL", "PARALLEL", "TRY", "CATCH", "END"};
  return vocab;
}

std::string ParseError::message() const {
  switch (code) {
    case Code::malformed_json:
      return "malformed JSON: " + reason;
    case Code::no_json_found:
      return "no JSON object found in text";
    case Code::schema_violation:
      return "schema violation at " + path + ": " + reason;
  }
  return reason;
}

ComponentIdentity identity_of(const Component& component) {
  return ComponentIdentity{component.category, normalize(component.definition),
                           normalize(component.scope)};
}

ParseResult parse_flow(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded())
    return ParseError{ParseError::Code::malformed_json, "$", "not parseable as JSON"};
  return parse_flow_json(root);
}

ParseResult extract_flow_from_model_output(const std::string& text) {
  std::size_t pos = text.find('{');
  while (pos != std::string::npos) {
    std::size_t end = balanced_object_end(text, pos);
    if (end != std::string::npos) {
      std::string candidate = text.substr(pos, end - pos);
      json parsed = json::parse(candidate, nullptr, false);
      if (!parsed.is_discarded()) return parse_flow_json(parsed);
    }
    pos = text.find('{', pos + 1);
  }
  return ParseError{ParseError::Code::no_json_found, "$", "no balanced JSON object"};
}

Flow canonicalize(const Flow& flow) {
  Flow out = flow;
  out.scope = normalize(out.scope);
  if (out.trigger) {
    out.trigger->trigger_type = normalize(out.trigger->trigger_type);
    for (auto& input : out.trigger->inputs) input.name = normalize(input.name);
    std::sort(out.trigger->inputs.begin(), out.trigger->inputs.end(),
              [](const InputBinding& a, const InputBinding& b) { return a.name < b.name; });
  }
  std::map<int, int> renumber;
  for (std::size_t i = 0; i < out.components.size(); ++i)
    renumber[out.components[i].order] = static_cast<int>(i) + 1;
  for (auto& component : out.components) {
    component.definition = normalize(component.definition);
    component.scope = normalize(component.scope);
    for (auto& input : component.inputs) input.name = normalize(input.name);
    std::sort(component.inputs.begin(), component.inputs.end(),
              [](const InputBinding& a, const InputBinding& b) { return a.name < b.name; });
    component.order = renumber.at(component.order);
    if (component.block) component.block = renumber.at(*component.block);
  }
  return out;
}

std::string serialize_flow(const Flow& flow) { return flow_to_json(flow).dump(); }

std::string serialize_flow_pretty(const Flow& flow, int indent) {
  return flow_to_json(flow).dump(indent);
}

std::uint64_t content_hash(const Flow& flow) {
  std::string text = serialize_flow(canonicalize(flow));
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string content_id(const Flow& flow) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t hash = content_hash(flow);
  std::string id(16, '0');
  for (int i = 15; i >= 0; --i) {
    id[static_cast<std::size_t>(i)] = digits[hash & 0xf];
    hash >>= 4;
  }
  return id;
}

std::string to_string(FlowKind kind) { return kind == FlowKind::flow ? "flow" : "subflow"; }

std::string to_string(Category category) {
  switch (category) {
    case Category::action:
      return "action";
    case Category::flowlogic:
      return "flowlogic";
    case Category::subflow:
      return "subflow";
  }
  return "action";
}

}  // namespace flowkit
