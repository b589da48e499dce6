#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <variant>

#include "flowkit/flow.hpp"
#include "flowkit/synth.hpp"

using namespace flowkit;

namespace {

bool is_schema_valid(const Flow& flow) {
  return std::holds_alternative<Flow>(parse_flow(serialize_flow(flow)));
}

const Component* find_definition(const Flow& flow, const std::string& definition) {
  for (const auto& component : flow.components)
    if (component.definition == definition) return &component;
  return nullptr;
}

}  // namespace

TEST_CASE("generate_flow is deterministic per seed") {
  Catalog catalog = default_catalog();
  PatternSpec pattern = scheduled_loop_pattern();
  Flow a = generate_flow(pattern, catalog, 42);
  Flow b = generate_flow(pattern, catalog, 42);
  CHECK(a == b);
  CHECK(serialize_flow(a) == serialize_flow(b));
  CHECK(generate_flow(pattern, catalog, 43) != a);
}

TEST_CASE("scheduled loop flows keep their contract") {
  Catalog catalog = default_catalog();
  PatternSpec pattern = scheduled_loop_pattern();
  const std::set<std::string> scheduled_types = {"daily", "weekly", "monthly"};

  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Flow flow = generate_flow(pattern, catalog, seed);
    REQUIRE(is_schema_valid(flow));
    REQUIRE(flow.trigger.has_value());
    CHECK(scheduled_types.count(flow.trigger->trigger_type) == 1);

    REQUIRE(flow.components.size() >= 3);
    CHECK(flow.components[0].definition == "look_up_records");
    const Component* table_input = &flow.components[0];
    bool has_table = false;
    for (const auto& input : table_input->inputs)
      if (input.name == "table")
        has_table = std::find(catalog.tables.begin(), catalog.tables.end(), input.value) !=
                    catalog.tables.end();
    CHECK(has_table);

    CHECK(flow.components[1].definition == "FOREACH");
    REQUIRE(flow.components[1].inputs.size() == 1);
    CHECK(flow.components[1].inputs[0] == InputBinding{"items", "{{1.Records}}"});

    const Component* if_component = find_definition(flow, "IF");
    const Component* else_component = find_definition(flow, "ELSE");
    if (else_component != nullptr) CHECK(if_component != nullptr);
    if (if_component != nullptr) {
      CHECK(if_component->block == flow.components[1].order);
      REQUIRE(if_component->inputs.size() == 1);
      CHECK(if_component->inputs[0].name == "condition");
    }
    if (else_component != nullptr) {
      // the alternative branch sits beside the IF, inside the loop
      CHECK(else_component->block == if_component->block);
    }
  }
}

TEST_CASE("every registry pattern emits schema-valid flows") {
  Catalog catalog = default_catalog();
  std::vector<PatternSpec> registry = default_registry();
  CHECK(registry.size() == 17);

  double total_weight = 0.0;
  for (const auto& pattern : registry) {
    total_weight += pattern.weight;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      Flow flow = generate_flow(pattern, catalog, seed);
      CHECK(is_schema_valid(flow));
      if (pattern.name != "trigger_only") CHECK_FALSE(flow.components.empty());
    }
  }
  CHECK(total_weight == doctest::Approx(14376.0));
}

TEST_CASE("pattern_by_name finds entries and rejects unknowns") {
  std::vector<PatternSpec> registry = default_registry();
  CHECK(pattern_by_name(registry, "crud_loop").weight == doctest::Approx(2148.0));
  CHECK(pattern_by_name(registry, "trigger_only").steps.size() == 1);
  CHECK_THROWS_AS(pattern_by_name(registry, "no_such_pattern"), std::invalid_argument);
}

TEST_CASE("annotate fills empty annotations and is idempotent") {
  Catalog catalog = default_catalog();
  Flow flow = generate_flow(scheduled_loop_pattern(), catalog, 5);
  REQUIRE(flow.trigger.has_value());
  CHECK_FALSE(flow.trigger->annotation.empty());
  for (const auto& component : flow.components) CHECK_FALSE(component.annotation.empty());
  CHECK(annotate(flow) == flow);

  SUBCASE("existing annotations are preserved") {
    Flow custom = flow;
    custom.components[0].annotation = "hand written";
    CHECK(annotate(custom).components[0].annotation == "hand written");
  }
  SUBCASE("lookup template names the table") {
    Flow bare;
    bare.kind = FlowKind::subflow;
    Component lookup;
    lookup.category = Category::action;
    lookup.definition = "look_up_records";
    lookup.scope = "global";
    lookup.order = 1;
    lookup.inputs = {{"table", "incident_task"}};
    bare.components.push_back(lookup);
    CHECK(annotate(bare).components[0].annotation == "look up incident_task records");
  }
  SUBCASE("weekly trigger template names the weekday and time") {
    Flow bare;
    bare.kind = FlowKind::flow;
    bare.trigger =
        Trigger{"", "weekly", {{"day_of_week", "3"}, {"time", "1970-01-01 16:45:00"}}};
    std::string annotation = annotate(bare).trigger->annotation;
    CHECK(annotation.find("wednesday") != std::string::npos);
    CHECK(annotation.find("16:45") != std::string::npos);
  }
}

TEST_CASE("generate_dataset draws distinct flows deterministically") {
  Catalog catalog = default_catalog();
  std::vector<PatternSpec> registry = default_registry();

  std::vector<Flow> single = generate_dataset(registry, catalog, 1, 3);
  REQUIRE(single.size() == 1);
  CHECK(is_schema_valid(single[0]));

  std::vector<Flow> a = generate_dataset(registry, catalog, 400, 9);
  std::vector<Flow> b = generate_dataset(registry, catalog, 400, 9);
  CHECK(a == b);

  std::set<std::uint64_t> hashes;
  for (const auto& flow : a) hashes.insert(content_hash(flow));
  CHECK(hashes.size() == a.size());
}

TEST_CASE("labeled generation reports the source pattern") {
  Catalog catalog = default_catalog();
  std::vector<PatternSpec> registry = default_registry();
  std::vector<GeneratedFlow> labeled = generate_labeled_dataset(registry, catalog, 200, 9);
  std::set<std::string> names;
  for (const auto& pattern : registry) names.insert(pattern.name);
  for (const auto& item : labeled) CHECK(names.count(item.pattern) == 1);

  std::vector<Flow> plain = generate_dataset(registry, catalog, 200, 9);
  for (std::size_t i = 0; i < plain.size(); ++i) CHECK(plain[i] == labeled[i].flow);
}

TEST_CASE("split_ids partitions with largest-remainder sizes") {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("id" + std::to_string(i));

  SplitManifest manifest = split_ids(ids, {0.5, 0.25, 0.25}, 1);
  CHECK(manifest.train.size() == 5);
  CHECK(manifest.valid.size() == 3);  // first of the two tied remainders
  CHECK(manifest.test.size() == 2);

  std::set<std::string> all;
  for (const auto& id : manifest.train) all.insert(id);
  for (const auto& id : manifest.valid) all.insert(id);
  for (const auto& id : manifest.test) all.insert(id);
  CHECK(all.size() == 10);

  SUBCASE("same seed reproduces the same assignment") {
    SplitManifest again = split_ids(ids, {0.5, 0.25, 0.25}, 1);
    CHECK(again.train == manifest.train);
    CHECK(again.valid == manifest.valid);
    CHECK(again.test == manifest.test);
  }
  SUBCASE("ratios must sum to one") {
    CHECK_THROWS_AS(split_ids(ids, {0.5, 0.2, 0.2}, 1), std::invalid_argument);
  }
  SUBCASE("duplicate ids collapse into one split membership") {
    std::vector<std::string> doubled = ids;
    doubled.insert(doubled.end(), ids.begin(), ids.end());
    SplitManifest deduped = split_ids(doubled, {0.5, 0.25, 0.25}, 1);
    CHECK(deduped.train.size() + deduped.valid.size() + deduped.test.size() == 10);
    CHECK(deduped.train == manifest.train);
  }
}

TEST_CASE("split_dataset keys on content ids") {
  Catalog catalog = default_catalog();
  std::vector<Flow> flows = generate_dataset(default_registry(), catalog, 100, 21);
  SplitManifest manifest = split_dataset(flows, {0.8, 0.1, 0.1}, 21);
  CHECK(manifest.train.size() == 80);
  CHECK(manifest.valid.size() == 10);
  CHECK(manifest.test.size() == 10);

  std::set<std::string> ids;
  for (const auto& flow : flows) ids.insert(content_id(flow));
  for (const auto& id : manifest.train) CHECK(ids.count(id) == 1);

  std::string json = manifest_to_json(manifest);
  CHECK(json.find("\"ratios\"") != std::string::npos);
  CHECK(json.find("\"train\"") != std::string::npos);
}
