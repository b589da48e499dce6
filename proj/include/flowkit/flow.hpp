#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// Workflow data model: a flow is a trigger plus an ordered list of action,
// flowlogic and subflow-call components. Nesting is flat: a component with
// block=k lives inside the flowlogic component whose order is k.

namespace flowkit {

enum class FlowKind { flow, subflow };
enum class Category { action, flowlogic, subflow };

// Control-flow vocabulary accepted for flowlogic definitions (case-insensitive).
const std::vector<std::string>& flowlogic_vocabulary();

struct InputBinding {
  std::string name;
  std::string value;  // opaque literal or data pill like "{{1.Records}}"

  bool operator==(const InputBinding&) const = default;
};

struct Trigger {
  std::string annotation;
  std::string trigger_type;  // JSON field "type", e.g. "weekly", "record_updated"
  std::vector<InputBinding> inputs;

  bool operator==(const Trigger&) const = default;
};

struct Component {
  std::string annotation;
  Category category = Category::action;
  std::string definition;
  std::string scope;
  int order = 0;
  std::optional<int> block;  // order of the enclosing flowlogic component
  std::vector<InputBinding> inputs;

  bool operator==(const Component&) const = default;
};

struct Flow {
  FlowKind kind = FlowKind::flow;
  std::string scope;
  std::optional<Trigger> trigger;  // present iff kind == flow
  std::vector<Component> components;

  bool operator==(const Flow&) const = default;
};

// Lowercased, trimmed (category, definition, scope) triple used by the
// order-agnostic component overlap metric.
struct ComponentIdentity {
  Category category = Category::action;
  std::string definition;
  std::string scope;

  bool operator==(const ComponentIdentity&) const = default;
  auto operator<=>(const ComponentIdentity&) const = default;
};

ComponentIdentity identity_of(const Component& component);

struct ParseError {
  enum class Code { malformed_json, schema_violation, no_json_found };

  Code code = Code::malformed_json;
  std::string path;    // JSON path of the first failing invariant
  std::string reason;

  std::string message() const;

  bool operator==(const ParseError&) const = default;
};

using ParseResult = std::variant<Flow, ParseError>;

// Parses and validates a flow from JSON text. Unknown keys are ignored and
// key order never matters. Orders must be strictly increasing positive
// integers (canonicalize renumbers them to 1..n); block values must point at
// an earlier flowlogic component.
ParseResult parse_flow(const std::string& text);

// Finds the first balanced JSON object in raw model output (code fences and
// surrounding prose are skipped) and delegates to parse_flow.
ParseResult extract_flow_from_model_output(const std::string& text);

// Lowercases and trims category/definition/scope/trigger type and input
// names, sorts inputs by name, renumbers orders to 1..n and remaps block
// references. Idempotent.
Flow canonicalize(const Flow& flow);

// Emits the wire JSON (compact single line) with the field layout used by
// parse_flow. The trigger key is absent for subflows; "components" is always
// present. parse_flow(serialize_flow(f)) reproduces f.
std::string serialize_flow(const Flow& flow);

// Same layout, pretty-printed with the given indent.
std::string serialize_flow_pretty(const Flow& flow, int indent);

// FNV-1a over the canonical serialization; keys dataset identity and splits.
std::uint64_t content_hash(const Flow& flow);
std::string content_id(const Flow& flow);  // 16 hex chars

std::string to_string(FlowKind kind);
std::string to_string(Category category);

}  // namespace flowkit
