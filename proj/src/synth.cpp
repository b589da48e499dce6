#include "flowkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

namespace flowkit {

namespace {

struct OpenBlock {
  int order = 0;
  std::optional<int> block;  // block value of the flowlogic component itself
  std::string definition;
};

// Mutable interpreter state threaded through one pattern run.
struct GenState {
  Flow flow;
  int next_order = 1;
  std::vector<OpenBlock> stack;
  std::string table;
  std::string trigger_family;
  int lookup_order = 0;
  int foreach_order = 0;   // innermost open FOREACH, 0 if none
  int approval_order = 0;
  int if_order = 0;
  bool if_added = false;
};

std::string minutes_to_time(int minutes) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "1970-01-01 %02d:%02d:00", minutes / 60, minutes % 60);
  return buffer;
}

std::pair<std::string, std::string> pick_condition(const Catalog& catalog, Rng& rng) {
  const ConditionField& field = rng.pick(catalog.condition_fields);
  return {field.field, rng.pick(field.values)};
}

bool record_bearing(const std::string& family) {
  return family == "record" || family == "catalog" || family == "sla";
}

std::string record_pill(const GenState& state) {
  if (state.foreach_order > 0) return "{{" + std::to_string(state.foreach_order) + ".item}}";
  if (record_bearing(state.trigger_family)) return "{{trigger.current}}";
  if (state.lookup_order > 0) return "{{" + std::to_string(state.lookup_order) + ".Records}}";
  return "{{trigger.current}}";
}

std::string condition_pill(const GenState& state, const Catalog& catalog, Rng& rng) {
  if (state.approval_order > 0 && state.foreach_order == 0)
    return "{{" + std::to_string(state.approval_order) + ".approval_state}}=approved";
  auto [field, value] = pick_condition(catalog, rng);
  if (state.foreach_order > 0)
    return "{{" + std::to_string(state.foreach_order) + ".item." + field + "}}=" + value;
  return "{{trigger.current." + field + "}}=" + value;
}

void pick_trigger(GenState& state, const Catalog& catalog, const std::string& pool, Rng& rng) {
  std::vector<const TriggerTemplate*> candidates;
  for (const auto& tmpl : catalog.triggers)
    if (pool.empty() || tmpl.family == pool || tmpl.trigger_type == pool)
      candidates.push_back(&tmpl);
  const TriggerTemplate& tmpl = *candidates[rng.pick_index(candidates.size())];

  Trigger trigger;
  trigger.trigger_type = tmpl.trigger_type;
  state.trigger_family = tmpl.family;
  if (tmpl.family == "scheduled") {
    if (tmpl.trigger_type == "weekly")
      trigger.inputs.push_back({"day_of_week", std::to_string(rng.range(1, 7))});
    if (tmpl.trigger_type == "monthly")
      trigger.inputs.push_back({"day_of_month", std::to_string(rng.range(1, 28))});
    trigger.inputs.push_back({"time", minutes_to_time(rng.range(0, 1439))});
  } else if (tmpl.family == "record" || tmpl.family == "sla") {
    state.table = rng.pick(catalog.tables);
    trigger.inputs.push_back({"table", state.table});
    auto [field, value] = pick_condition(catalog, rng);
    trigger.inputs.push_back({"condition", field + "=" + value});
    if (tmpl.family == "sla") {
      static const std::vector<std::string> percentages = {"50", "75", "100"};
      trigger.inputs.push_back({"percentage", rng.pick(percentages)});
    }
  } else if (tmpl.family == "email") {
    trigger.inputs.push_back({"condition", "subject contains " + rng.pick(catalog.words)});
  } else if (tmpl.family == "catalog") {
    trigger.inputs.push_back({"item", rng.pick(catalog.catalog_items)});
    state.table = "sc_req_item";
  } else if (tmpl.family == "integration") {
    trigger.inputs.push_back({"path", "/api/" + rng.pick(catalog.words)});
    static const std::vector<std::string> methods = {"POST", "PUT"};
    trigger.inputs.push_back({"method", rng.pick(methods)});
  }
  state.flow.trigger = std::move(trigger);
}

void emit_component(GenState& state, Category category, std::string definition,
                    std::string scope, std::vector<InputBinding> inputs) {
  Component component;
  component.category = category;
  component.definition = std::move(definition);
  component.scope = std::move(scope);
  component.order = state.next_order++;
  if (!state.stack.empty()) component.block = state.stack.back().order;
  component.inputs = std::move(inputs);
  state.flow.components.push_back(std::move(component));
}

bool record_source_available(const GenState& state) {
  return state.foreach_order > 0 || record_bearing(state.trigger_family) ||
         state.lookup_order > 0;
}

void add_action_from_template(GenState& state, const Catalog& catalog,
                              const ActionTemplate& tmpl, Rng& rng) {
  std::vector<InputBinding> inputs = tmpl.fixed_inputs;
  for (auto& input : inputs) {
    std::size_t pos = input.value.find("<word>");
    if (pos != std::string::npos) input.value.replace(pos, 6, rng.pick(catalog.words));
  }
  if (tmpl.needs_table) {
    if (state.table.empty()) state.table = rng.pick(catalog.tables);
    inputs.push_back({"table", state.table});
  }
  if (tmpl.acts_on_record) inputs.push_back({"record", record_pill(state)});
  if (tmpl.definition == "update_record") {
    auto [field, value] = pick_condition(catalog, rng);
    inputs.push_back({"values", field + "=" + value});
  }
  emit_component(state, Category::action, tmpl.definition, tmpl.scope, std::move(inputs));
  if (tmpl.definition == "look_up_records") state.lookup_order = state.next_order - 1;
  if (tmpl.definition == "ask_for_approval") state.approval_order = state.next_order - 1;
}

void add_subflow_call(GenState& state, const Catalog& catalog, Rng& rng) {
  std::vector<InputBinding> inputs;
  if (record_source_available(state)) inputs.push_back({"record", record_pill(state)});
  emit_component(state, Category::subflow, rng.pick(catalog.subflow_names), "global",
                 std::move(inputs));
}

void add_action(GenState& state, const Catalog& catalog, const GenStep& step, Rng& rng) {
  if (step.pool == "subflow") {
    add_subflow_call(state, catalog, rng);
    return;
  }
  if (step.pool == "any_component" && rng.chance(0.2)) {
    add_subflow_call(state, catalog, rng);
    return;
  }
  std::vector<const ActionTemplate*> candidates;
  for (const auto& tmpl : catalog.actions) {
    if (!step.definition.empty()) {
      if (tmpl.definition == step.definition) candidates.push_back(&tmpl);
      continue;
    }
    if (!step.pool.empty() && step.pool != "any_component" &&
        std::find(tmpl.tags.begin(), tmpl.tags.end(), step.pool) == tmpl.tags.end())
      continue;
    if (tmpl.acts_on_record && !record_source_available(state)) continue;
    if (!tmpl.tables.empty() &&
        std::find(tmpl.tables.begin(), tmpl.tables.end(), state.table) == tmpl.tables.end() &&
        !state.table.empty())
      continue;
    candidates.push_back(&tmpl);
  }
  add_action_from_template(state, catalog, *candidates[rng.pick_index(candidates.size())], rng);
}

void pick_related_action(GenState& state, const Catalog& catalog, Rng& rng) {
  std::vector<const ActionTemplate*> candidates;
  for (const auto& tmpl : catalog.actions) {
    bool affinity = std::find(tmpl.tables.begin(), tmpl.tables.end(), state.table) !=
                    tmpl.tables.end();
    bool parameterized = (tmpl.needs_table || tmpl.acts_on_record) && tmpl.tables.empty();
    bool is_lookup = std::find(tmpl.tags.begin(), tmpl.tags.end(), "lookup") != tmpl.tags.end();
    if (is_lookup) continue;
    if (tmpl.acts_on_record && !record_source_available(state)) continue;
    if (affinity || parameterized) candidates.push_back(&tmpl);
  }
  add_action_from_template(state, catalog, *candidates[rng.pick_index(candidates.size())], rng);
}

void add_flowlogic(GenState& state, const Catalog& catalog, const GenStep& step, Rng& rng) {
  const std::string& def = step.definition;
  std::vector<InputBinding> inputs;
  std::optional<int> block;
  if (!state.stack.empty()) block = state.stack.back().order;

  if (def == "ELSE" || def == "ELSEIF" || def == "CATCH") {
    // sibling of the block it closes: shares that component's block value
    if (!state.stack.empty()) {
      block = state.stack.back().block;
      state.stack.pop_back();
    }
    if (def == "ELSEIF") inputs.push_back({"condition", condition_pill(state, catalog, rng)});
  } else if (def == "FOREACH") {
    std::string source = state.lookup_order > 0 ? std::to_string(state.lookup_order) : "1";
    inputs.push_back({"items", "{{" + source + ".Records}}"});
  } else if (def == "IF" || def == "DOUNTIL") {
    inputs.push_back({"condition", condition_pill(state, catalog, rng)});
  }

  Component component;
  component.category = Category::flowlogic;
  component.definition = def;
  component.scope = "global";
  component.order = state.next_order++;
  component.block = block;
  component.inputs = std::move(inputs);
  int order = component.order;
  state.flow.components.push_back(std::move(component));

  if (step.enter) state.stack.push_back({order, block, def});
  if (def == "FOREACH" && step.enter) state.foreach_order = order;
  if (def == "IF") {
    state.if_order = order;
    state.if_added = true;
  }
}

void run_steps(GenState& state, const Catalog& catalog, const std::vector<GenStep>& steps,
               const Rng& base) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const GenStep& step = steps[i];
    Rng rng = base.stream(i);
    switch (step.kind) {
      case GenStep::Kind::pick_trigger:
        pick_trigger(state, catalog, step.pool, rng);
        break;
      case GenStep::Kind::add_action:
        add_action(state, catalog, step, rng);
        break;
      case GenStep::Kind::add_flowlogic:
        add_flowlogic(state, catalog, step, rng);
        break;
      case GenStep::Kind::pick_related_action:
        pick_related_action(state, catalog, rng);
        break;
      case GenStep::Kind::maybe: {
        if (step.guard == GenStep::Guard::if_exists && !state.if_added) break;
        if (!rng.chance(step.prob)) break;
        run_steps(state, catalog, step.substeps, rng.stream("sub"));
        break;
      }
    }
  }
}

// step list builders

GenStep trigger_step(std::string pool) {
  GenStep step;
  step.kind = GenStep::Kind::pick_trigger;
  step.pool = std::move(pool);
  return step;
}

GenStep action_step(std::string definition, std::string pool = "") {
  GenStep step;
  step.kind = GenStep::Kind::add_action;
  step.definition = std::move(definition);
  step.pool = std::move(pool);
  return step;
}

GenStep flowlogic_step(std::string definition, bool enter) {
  GenStep step;
  step.kind = GenStep::Kind::add_flowlogic;
  step.definition = std::move(definition);
  step.enter = enter;
  return step;
}

GenStep related_step() {
  GenStep step;
  step.kind = GenStep::Kind::pick_related_action;
  return step;
}

GenStep maybe_step(double prob, std::vector<GenStep> substeps,
                   GenStep::Guard guard = GenStep::Guard::none) {
  GenStep step;
  step.kind = GenStep::Kind::maybe;
  step.prob = prob;
  step.guard = guard;
  step.substeps = std::move(substeps);
  return step;
}

PatternSpec make_pattern(std::string name, double weight, std::vector<GenStep> steps) {
  PatternSpec pattern;
  pattern.name = std::move(name);
  pattern.weight = weight;
  pattern.steps = std::move(steps);
  return pattern;
}

// annotation templates

const std::string* input_value(const std::vector<InputBinding>& inputs, const std::string& name) {
  for (const auto& input : inputs)
    if (input.name == name) return &input.value;
  return nullptr;
}

std::string weekday_name(const std::string& index) {
  static const std::vector<std::string> days = {"monday",   "tuesday", "wednesday", "thursday",
                                                "friday",   "saturday", "sunday"};
  int i = std::atoi(index.c_str());
  if (i >= 1 && i <= 7) return days[static_cast<std::size_t>(i - 1)];
  return "day " + index;
}

std::string short_time(const std::string& timestamp) {
  // "1970-01-01 16:45:00" -> "16:45"
  if (timestamp.size() >= 16) return timestamp.substr(11, 5);
  return timestamp;
}

std::string trigger_annotation(const Trigger& trigger) {
  const auto& type = trigger.trigger_type;
  const std::string* table = input_value(trigger.inputs, "table");
  const std::string* time = input_value(trigger.inputs, "time");
  if (type == "daily") return "every day at " + (time ? short_time(*time) : "midnight");
  if (type == "weekly") {
    const std::string* day = input_value(trigger.inputs, "day_of_week");
    return "every " + (day ? weekday_name(*day) : "week") + " at " +
           (time ? short_time(*time) : "midnight");
  }
  if (type == "monthly") {
    const std::string* day = input_value(trigger.inputs, "day_of_month");
    return "on day " + (day ? *day : "1") + " of every month at " +
           (time ? short_time(*time) : "midnight");
  }
  if (type == "record_created") return "when a " + (table ? *table : "record") + " is created";
  if (type == "record_updated") return "when a " + (table ? *table : "record") + " is updated";
  if (type == "record_created_or_updated")
    return "when a " + (table ? *table : "record") + " is created or updated";
  if (type == "inbound_email_new") return "when a new email arrives";
  if (type == "inbound_email_reply") return "when an email reply arrives";
  if (type == "service_catalog") {
    const std::string* item = input_value(trigger.inputs, "item");
    return "when " + (item ? *item : "an item") + " is requested";
  }
  if (type == "sla_percentage") {
    const std::string* pct = input_value(trigger.inputs, "percentage");
    return "when the " + (table ? *table : "task") + " sla reaches " + (pct ? *pct : "100") + "%";
  }
  if (type == "inbound_http_request") return "when an inbound api request arrives";
  return "when " + type + " fires";
}

std::string component_annotation(const Component& component) {
  const std::string* table = input_value(component.inputs, "table");
  const std::string* condition = input_value(component.inputs, "condition");
  const auto& def = component.definition;
  if (component.category == Category::subflow) return "call the " + def + " subflow";
  if (def == "look_up_records") return "look up " + (table ? *table : "matching") + " records";
  if (def == "update_record") return "update the " + (table ? *table : "") + " record";
  if (def == "create_record") return "create a " + (table ? *table : "") + " record";
  if (def == "delete_record") return "delete the " + (table ? *table : "") + " record";
  if (def == "send_email") return "send an email";
  if (def == "post_a_message") return "post a message on slack";
  if (def == "post_incident_details") return "post incident details on ms teams";
  if (def == "create_a_user") return "create a user in active directory";
  if (def == "ask_for_approval") return "ask for approval";
  if (def == "send_rest_request") return "send a rest request";
  if (def == "FOREACH" || def == "foreach") return "for each record";
  if (def == "IF" || def == "if") return "if " + (condition ? *condition : "the condition holds");
  if (def == "ELSEIF" || def == "elseif")
    return "else if " + (condition ? *condition : "the condition holds");
  if (def == "ELSE" || def == "else") return "otherwise";
  if (def == "DOUNTIL" || def == "dountil")
    return "repeat until " + (condition ? *condition : "done");
  if (def == "PARALLEL" || def == "parallel") return "run branches in parallel";
  if (def == "TRY" || def == "try") return "try the following steps";
  if (def == "CATCH" || def == "catch") return "on error";
  if (def == "END" || def == "end") return "end";
  return def;
}

}  // namespace

Catalog default_catalog() {
  Catalog catalog;
  catalog.tables = {"incident",    "incident_task", "problem",  "change_request",
                    "sc_request",  "sc_req_item",   "sys_user", "task",
                    "cmdb_ci",     "kb_knowledge",  "hr_case",  "asset"};
  catalog.triggers = {
      {"daily", "scheduled"},
      {"weekly", "scheduled"},
      {"monthly", "scheduled"},
      {"record_created", "record"},
      {"record_updated", "record"},
      {"record_created_or_updated", "record"},
      {"inbound_email_new", "email"},
      {"inbound_email_reply", "email"},
      {"service_catalog", "catalog"},
      {"sla_percentage", "sla"},
      {"inbound_http_request", "integration"},
  };
  catalog.actions = {
      {"look_up_records", "global", true, false, {}, {"lookup"}, {}},
      {"update_record", "global", true, true, {}, {"crud"}, {}},
      {"create_record", "global", true, false, {}, {"crud"}, {}},
      {"delete_record", "global", true, true, {}, {"crud"}, {}},
      {"send_email",
       "global",
       false,
       false,
       {},
       {"notify"},
       {{"to", "<word>@example.com"}, {"subject", "<word> update"}}},
      {"post_a_message", "sn_slack_ah", false, false, {}, {"notify"}, {{"channel", "#<word>"}}},
      {"post_incident_details",
       "sn_ms_teams_ah",
       false,
       false,
       {"incident", "incident_task"},
       {"notify"},
       {}},
      {"create_a_user", "sn_ms_ad_spoke", false, false, {"sys_user"}, {"crud"}, {}},
      {"ask_for_approval", "global", false, true, {}, {"approval"}, {}},
      {"send_rest_request",
       "global",
       false,
       false,
       {},
       {"integration"},
       {{"url", "https://api.example.com/<word>"}, {"method", "POST"}}},
  };
  catalog.condition_fields = {
      {"active", {"true", "false"}},
      {"state", {"new", "in_progress", "resolved", "closed"}},
      {"priority", {"1", "2", "3", "4"}},
      {"category", {"software", "hardware", "network", "inquiry"}},
      {"impact", {"1", "2", "3"}},
      {"urgency", {"1", "2", "3"}},
  };
  catalog.catalog_items = {"laptop request",    "vpn access",     "new hire onboarding",
                           "software license",  "badge renewal",  "phone upgrade",
                           "database access",   "guest wifi",     "monitor request",
                           "mailbox quota"};
  catalog.subflow_names = {"process_record",   "notify_owner",    "escalate_task",
                           "sync_to_external", "archive_record",  "validate_request",
                           "assign_on_call",   "close_children"};
  catalog.words = {"alpha", "bravo",  "delta", "echo",  "falcon", "harbor", "indigo", "juno",
                   "kilo",  "lumen",  "marble", "nova", "onyx",   "prism",  "quartz", "raven",
                   "sierra", "tango", "umber", "vapor", "willow", "xenon",  "yonder", "zephyr"};
  return catalog;
}

PatternSpec scheduled_loop_pattern(double p_if, double p_else) {
  return make_pattern(
      "scheduled_loop", 1100,
      {trigger_step("scheduled"), action_step("look_up_records"),
       flowlogic_step("FOREACH", true), maybe_step(p_if, {flowlogic_step("IF", true)}),
       related_step(),
       maybe_step(p_else, {flowlogic_step("ELSE", true), related_step()},
                  GenStep::Guard::if_exists)});
}

std::vector<PatternSpec> default_registry(double p_if, double p_else) {
  std::vector<PatternSpec> registry;
  registry.push_back(make_pattern(
      "crud_loop", 2148,
      {trigger_step("record"), action_step("look_up_records"), flowlogic_step("FOREACH", true),
       related_step(), maybe_step(0.35, {related_step()})}));
  registry.push_back(make_pattern(
      "crud_single", 2144,
      {trigger_step("record"), related_step(), maybe_step(0.3, {related_step()})}));
  registry.push_back(make_pattern(
      "service_catalog_request_manual", 1102,
      {trigger_step("catalog"), action_step("ask_for_approval"), flowlogic_step("IF", true),
       related_step(),
       maybe_step(0.5, {flowlogic_step("ELSE", true), action_step("", "notify")},
                  GenStep::Guard::if_exists)}));
  registry.push_back(scheduled_loop_pattern(p_if, p_else));
  registry.push_back(make_pattern(
      "scheduled_single", 1100,
      {trigger_step("scheduled"), action_step(""), maybe_step(0.3, {action_step("")})}));
  registry.push_back(make_pattern(
      "outbound_notification", 1100,
      {trigger_step("record"), action_step("", "notify"),
       maybe_step(0.4, {action_step("", "notify")})}));
  registry.push_back(make_pattern(
      "integration_inbound", 1058,
      {trigger_step("integration"), action_step("create_record"),
       maybe_step(0.4, {action_step("", "notify")})}));
  registry.push_back(make_pattern(
      "integration_batch_sync", 1000,
      {trigger_step("scheduled"), action_step("look_up_records"),
       flowlogic_step("FOREACH", true), action_step("send_rest_request"),
       maybe_step(0.3, {action_step("update_record")})}));
  registry.push_back(make_pattern(
      "single_component", 994, {trigger_step(""), action_step("", "any_component")}));
  registry.push_back(make_pattern(
      "sla", 660,
      {trigger_step("sla"), action_step("update_record"),
       maybe_step(0.5, {action_step("", "notify")})}));
  registry.push_back(make_pattern(
      "parallel", 656,
      {trigger_step(""), flowlogic_step("PARALLEL", true), action_step(""), action_step(""),
       maybe_step(0.4, {action_step("")})}));
  registry.push_back(make_pattern("trigger_only", 624, {trigger_step("")}));
  registry.push_back(make_pattern(
      "misc", 364,
      {trigger_step(""), flowlogic_step("TRY", true), action_step(""),
       flowlogic_step("CATCH", true), action_step("", "notify"),
       maybe_step(0.5, {action_step("", "subflow")})}));
  registry.push_back(make_pattern(
      "pad", 152,
      {trigger_step("record"), action_step("", "subflow"),
       maybe_step(0.6, {action_step("", "subflow")}),
       maybe_step(0.3, {action_step("", "subflow")})}));
  registry.push_back(make_pattern(
      "inbound_email_new", 60,
      {trigger_step("inbound_email_new"), action_step("create_record"),
       maybe_step(0.5, {action_step("", "notify")})}));
  registry.push_back(make_pattern(
      "service_catalog_request_automated", 58,
      {trigger_step("catalog"), related_step(), maybe_step(0.4, {action_step("", "notify")})}));
  registry.push_back(make_pattern(
      "inbound_email_reply", 56,
      {trigger_step("inbound_email_reply"), action_step("look_up_records"),
       flowlogic_step("FOREACH", true), action_step("update_record")}));
  return registry;
}

const PatternSpec& pattern_by_name(const std::vector<PatternSpec>& registry,
                                   const std::string& name) {
  for (const auto& pattern : registry)
    if (pattern.name == name) return pattern;
  throw std::invalid_argument("unknown pattern: " + name);
}

Flow generate_flow(const PatternSpec& pattern, const Catalog& catalog, std::uint64_t seed) {
  GenState state;
  state.flow.kind = FlowKind::flow;
  state.flow.scope = "global";
  Rng base = Rng(seed).stream(pattern.name);
  run_steps(state, catalog, pattern.steps, base);
  return annotate(state.flow);
}

std::vector<GeneratedFlow> generate_labeled_dataset(const std::vector<PatternSpec>& registry,
                                                    const Catalog& catalog, std::size_t count,
                                                    std::uint64_t seed) {
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& pattern : registry) {
    total += pattern.weight;
    cumulative.push_back(total);
  }

  std::vector<GeneratedFlow> flows;
  flows.reserve(count);
  std::set<std::uint64_t> seen;
  Rng base = Rng(seed).stream("dataset");
  constexpr int max_attempts = 64;
  for (std::size_t i = 0; i < count; ++i) {
    Rng item = base.stream(i);
    double draw = item.next_double() * total;
    std::size_t index = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), draw) - cumulative.begin());
    if (index >= registry.size()) index = registry.size() - 1;
    const PatternSpec& pattern = registry[index];

    bool accepted = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      std::uint64_t flow_seed = item.stream(static_cast<std::uint64_t>(attempt + 1)).next();
      Flow flow = generate_flow(pattern, catalog, flow_seed);
      if (seen.insert(content_hash(flow)).second) {
        flows.push_back({std::move(flow), pattern.name});
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw ExhaustedRetriesError("could not generate a distinct flow for pattern " +
                                  pattern.name);
  }
  return flows;
}

std::vector<Flow> generate_dataset(const std::vector<PatternSpec>& registry,
                                   const Catalog& catalog, std::size_t count,
                                   std::uint64_t seed) {
  std::vector<GeneratedFlow> labeled = generate_labeled_dataset(registry, catalog, count, seed);
  std::vector<Flow> flows;
  flows.reserve(labeled.size());
  for (auto& item : labeled) flows.push_back(std::move(item.flow));
  return flows;
}

Flow annotate(const Flow& flow) {
  Flow out = flow;
  if (out.trigger && out.trigger->annotation.empty())
    out.trigger->annotation = trigger_annotation(*out.trigger);
  for (auto& component : out.components)
    if (component.annotation.empty()) component.annotation = component_annotation(component);
  return out;
}

SplitManifest split_ids(const std::vector<std::string>& ids,
                        const std::array<double, 3>& ratios, std::uint64_t seed) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");

  std::vector<std::string> shuffled = ids;
  std::sort(shuffled.begin(), shuffled.end());
  shuffled.erase(std::unique(shuffled.begin(), shuffled.end()), shuffled.end());
  Rng base = Rng(seed).stream("split");
  std::vector<std::pair<std::uint64_t, std::string>> keyed;
  keyed.reserve(shuffled.size());
  for (const auto& id : shuffled) keyed.emplace_back(base.stream(id).next(), id);
  std::sort(keyed.begin(), keyed.end());

  std::size_t n = keyed.size();
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> fractional{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    double exact = static_cast<double>(n) * ratios[k];
    sizes[k] = static_cast<std::size_t>(exact);
    fractional[k] = exact - static_cast<double>(sizes[k]);
    assigned += sizes[k];
  }
  while (assigned < n) {  // largest remainder
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k)
      if (fractional[k] > fractional[best]) best = k;
    ++sizes[best];
    fractional[best] = -1.0;
    ++assigned;
  }

  SplitManifest manifest;
  manifest.ratios = ratios;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = keyed[i].second;
    if (i < sizes[0]) {
      manifest.train.push_back(id);
    } else if (i < sizes[0] + sizes[1]) {
      manifest.valid.push_back(id);
    } else {
      manifest.test.push_back(id);
    }
  }
  return manifest;
}

SplitManifest split_dataset(const std::vector<Flow>& flows,
                            const std::array<double, 3>& ratios, std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(flows.size());
  for (const auto& flow : flows) ids.push_back(content_id(flow));
  return split_ids(ids, ratios, seed);
}

std::string manifest_to_json(const SplitManifest& manifest) {
  nlohmann::ordered_json obj;
  obj["ratios"] = manifest.ratios;
  obj["train"] = manifest.train;
  obj["valid"] = manifest.valid;
  obj["test"] = manifest.test;
  return obj.dump(2);
}

}  // namespace flowkit
