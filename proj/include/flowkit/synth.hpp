#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowkit/flow.hpp"
#include "flowkit/rng.hpp"

// Synthetic workflow generation from pattern heuristics. Each pattern is a
// declarative step list interpreted against a catalog of triggers, tables and
// actions; all randomness flows through per-step derived streams.

namespace flowkit {

struct GenStep {
  enum class Kind { pick_trigger, add_action, add_flowlogic, maybe, pick_related_action };
  enum class Guard { none, if_exists };

  Kind kind = Kind::add_action;
  std::string pool;        // pick_trigger: family or exact type; add_action: action tag
  std::string definition;  // fixed action definition or flowlogic element
  bool enter = false;      // flowlogic only: subsequent steps nest inside
  double prob = 1.0;       // maybe only
  Guard guard = Guard::none;
  std::vector<GenStep> substeps;
};

struct PatternSpec {
  std::string name;
  std::vector<GenStep> steps;
  double weight = 1.0;  // sampling weight for mixed-pattern datasets
};

struct TriggerTemplate {
  std::string trigger_type;
  std::string family;  // scheduled | record | email | catalog | sla | integration
};

struct ActionTemplate {
  std::string definition;
  std::string scope;
  bool needs_table = false;    // binds a "table" input to the current table
  bool acts_on_record = false; // binds a "record" input to the current record pill
  std::vector<std::string> tables;  // table affinity; empty = any table
  std::vector<std::string> tags;    // crud | notify | approval | integration | lookup
  std::vector<InputBinding> fixed_inputs;
};

struct ConditionField {
  std::string field;
  std::vector<std::string> values;
};

struct Catalog {
  std::vector<std::string> tables;
  std::vector<TriggerTemplate> triggers;
  std::vector<ActionTemplate> actions;
  std::vector<ConditionField> condition_fields;
  std::vector<std::string> catalog_items;
  std::vector<std::string> subflow_names;
  std::vector<std::string> words;
};

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;
  std::array<double, 3> ratios{};
};

struct ExhaustedRetriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Catalog default_catalog();

// The full pattern registry, weighted by observed pattern frequency.
std::vector<PatternSpec> default_registry(double p_if = 0.5, double p_else = 0.5);

// Scheduled trigger, table look-up, FOREACH over the records, optional IF
// (and, only then, optional ELSE) around table-related actions.
PatternSpec scheduled_loop_pattern(double p_if = 0.5, double p_else = 0.5);

const PatternSpec& pattern_by_name(const std::vector<PatternSpec>& registry,
                                   const std::string& name);

// Deterministic per (pattern, catalog, seed). The result is schema-valid and
// fully annotated.
Flow generate_flow(const PatternSpec& pattern, const Catalog& catalog, std::uint64_t seed);

struct GeneratedFlow {
  Flow flow;
  std::string pattern;
};

// Samples patterns proportionally to their weights; flows are distinct by
// content hash (bounded resampling on collision).
std::vector<Flow> generate_dataset(const std::vector<PatternSpec>& registry,
                                   const Catalog& catalog, std::size_t count,
                                   std::uint64_t seed);

// Same draws as generate_dataset, with the source pattern name kept per flow.
std::vector<GeneratedFlow> generate_labeled_dataset(const std::vector<PatternSpec>& registry,
                                                    const Catalog& catalog, std::size_t count,
                                                    std::uint64_t seed);

// Fills every empty annotation from deterministic templates keyed on the
// trigger type or (definition, table). Existing text is preserved; idempotent.
Flow annotate(const Flow& flow);

// Partition by flow content id: sizes follow the ratios (largest remainder),
// assignment is a seeded shuffle, and equal flows always share a split.
SplitManifest split_dataset(const std::vector<Flow>& flows,
                            const std::array<double, 3>& ratios, std::uint64_t seed);
SplitManifest split_ids(const std::vector<std::string>& ids,
                        const std::array<double, 3>& ratios, std::uint64_t seed);

std::string manifest_to_json(const SplitManifest& manifest);

}  // namespace flowkit
