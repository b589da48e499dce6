#include <doctest.h>

#include <variant>

#include "../fixtures.hpp"
#include "flowkit/flow.hpp"

using namespace flowkit;

namespace {

ParseError expect_error(const std::string& text) {
  ParseResult result = parse_flow(text);
  REQUIRE(std::holds_alternative<ParseError>(result));
  return std::get<ParseError>(result);
}

}  // namespace

TEST_CASE("fixture parses to the exact structure") {
  Flow flow = fixtures::weekly_loop_flow();
  CHECK(flow.kind == FlowKind::flow);
  CHECK(flow.scope == "global");
  REQUIRE(flow.trigger.has_value());
  CHECK(flow.trigger->trigger_type == "weekly");
  REQUIRE(flow.trigger->inputs.size() == 2);
  CHECK(flow.trigger->inputs[0] == InputBinding{"day_of_week", "3"});
  CHECK(flow.trigger->inputs[1] == InputBinding{"time", "1970-01-01 16:45:00"});

  REQUIRE(flow.components.size() == 4);
  CHECK(flow.components[0].definition == "look_up_records");
  CHECK(flow.components[0].category == Category::action);
  CHECK_FALSE(flow.components[0].block.has_value());
  CHECK(flow.components[1].definition == "FOREACH");
  CHECK(flow.components[1].category == Category::flowlogic);
  CHECK_FALSE(flow.components[1].block.has_value());
  CHECK(flow.components[2].definition == "IF");
  CHECK(flow.components[2].block == 2);
  CHECK(flow.components[2].inputs[0].value == "{{2.item.active}}=false");
  CHECK(flow.components[3].definition == "post_incident_details");
  CHECK(flow.components[3].scope == "sn_ms_teams_ah");
  CHECK(flow.components[3].block == 3);
  CHECK(flow.components[3].inputs.empty());
}

TEST_CASE("serialize and parse round-trip") {
  Flow flow = fixtures::weekly_loop_flow();
  ParseResult again = parse_flow(serialize_flow(flow));
  REQUIRE(std::holds_alternative<Flow>(again));
  CHECK(std::get<Flow>(again) == flow);
}

TEST_CASE("canonical serialization is byte-stable") {
  Flow canonical = canonicalize(fixtures::weekly_loop_flow());
  std::string once = serialize_flow(canonical);
  Flow reparsed = std::get<Flow>(parse_flow(once));
  CHECK(serialize_flow(canonicalize(reparsed)) == once);
}

TEST_CASE("canonicalize lowercases, trims and sorts inputs") {
  Flow flow;
  flow.kind = FlowKind::flow;
  flow.scope = "  Global ";
  flow.trigger = Trigger{"", " Weekly ", {{"Time", "x"}, {"Day", "y"}}};
  Component component;
  component.category = Category::flowlogic;
  component.definition = "FOREACH";
  component.scope = "GLOBAL";
  component.order = 1;
  component.inputs = {{"Items", "{{1.Records}}"}};
  flow.components.push_back(component);

  Flow canonical = canonicalize(flow);
  CHECK(canonical.scope == "global");
  CHECK(canonical.trigger->trigger_type == "weekly");
  CHECK(canonical.trigger->inputs[0].name == "day");
  CHECK(canonical.trigger->inputs[1].name == "time");
  CHECK(canonical.components[0].definition == "foreach");
  CHECK(canonical.components[0].scope == "global");
  CHECK(canonical.components[0].inputs[0].name == "items");
  CHECK(canonicalize(canonical) == canonical);
}

TEST_CASE("canonicalize renumbers scattered orders and remaps blocks") {
  Flow flow;
  flow.kind = FlowKind::subflow;
  Component foreach_component;
  foreach_component.category = Category::flowlogic;
  foreach_component.definition = "FOREACH";
  foreach_component.order = 2;
  Component nested;
  nested.category = Category::action;
  nested.definition = "update_record";
  nested.order = 4;
  nested.block = 2;
  Component tail;
  tail.category = Category::action;
  tail.definition = "send_email";
  tail.order = 6;
  flow.components = {foreach_component, nested, tail};

  Flow canonical = canonicalize(flow);
  CHECK(canonical.components[0].order == 1);
  CHECK(canonical.components[1].order == 2);
  CHECK(canonical.components[1].block == 1);
  CHECK(canonical.components[2].order == 3);
  CHECK_FALSE(canonical.components[2].block.has_value());
}

TEST_CASE("parse rejects structural violations") {
  SUBCASE("flow without trigger") {
    ParseError error = expect_error(R"({"type":"flow","components":[]})");
    CHECK(error.code == ParseError::Code::schema_violation);
    CHECK(error.path == "trigger");
  }
  SUBCASE("subflow with trigger") {
    ParseError error = expect_error(
        R"({"type":"subflow","trigger":{"type":"daily"},"components":[]})");
    CHECK(error.path == "trigger");
  }
  SUBCASE("unknown type") {
    CHECK(expect_error(R"({"type":"pipeline"})").path == "type");
  }
  SUBCASE("empty trigger type") {
    ParseError error =
        expect_error(R"({"type":"flow","trigger":{"type":"  "},"components":[]})");
    CHECK(error.path == "trigger.type");
  }
  SUBCASE("unknown category") {
    ParseError error = expect_error(
        R"({"type":"subflow","components":[
             {"category":"widget","definition":"x","order":1}]})");
    CHECK(error.path == "components[0].category");
  }
  SUBCASE("flowlogic outside the vocabulary") {
    ParseError error = expect_error(
        R"({"type":"subflow","components":[
             {"category":"flowlogic","definition":"WHILE","order":1}]})");
    CHECK(error.path == "components[0].definition");
  }
  SUBCASE("non-increasing orders") {
    ParseError error = expect_error(
        R"({"type":"subflow","components":[
             {"category":"action","definition":"a","order":2},
             {"category":"action","definition":"b","order":2}]})");
    CHECK(error.path == "components[1].order");
  }
  SUBCASE("order below one") {
    ParseError error = expect_error(
        R"({"type":"subflow","components":[
             {"category":"action","definition":"a","order":0}]})");
    CHECK(error.path == "components[0].order");
  }
  SUBCASE("block referencing a later component") {
    ParseError error = expect_error(
        R"({"type":"subflow","components":[
             {"category":"action","definition":"a","order":1,"block":2},
             {"category":"flowlogic","definition":"IF","order":2}]})");
    CHECK(error.path == "components[0].block");
  }
  SUBCASE("block referencing a non-flowlogic component") {
    ParseError error = expect_error(
        R"({"type":"subflow","components":[
             {"category":"action","definition":"a","order":1},
             {"category":"action","definition":"b","order":2,"block":1}]})");
    CHECK(error.path == "components[1].block");
  }
  SUBCASE("duplicate input names") {
    ParseError error = expect_error(
        R"({"type":"flow","trigger":{"type":"daily","inputs":[
             {"name":"time","value":"1"},{"name":"time","value":"2"}]},"components":[]})");
    CHECK(error.path == "trigger.inputs[1].name");
  }
  SUBCASE("malformed json") {
    ParseError error = expect_error("{not json");
    CHECK(error.code == ParseError::Code::malformed_json);
  }
}

TEST_CASE("parse tolerates benign variation") {
  SUBCASE("flowlogic vocabulary is case-insensitive") {
    ParseResult result = parse_flow(
        R"({"type":"subflow","components":[
             {"category":"flowlogic","definition":"ForEach","order":1}]})");
    CHECK(std::holds_alternative<Flow>(result));
  }
  SUBCASE("unknown keys are ignored") {
    ParseResult result = parse_flow(
        R"({"type":"subflow","banner":"x","components":[],"id":"abc","pattern":"misc"})");
    CHECK(std::holds_alternative<Flow>(result));
  }
  SUBCASE("numeric and boolean input values become text") {
    ParseResult result = parse_flow(
        R"({"type":"flow","trigger":{"type":"weekly","inputs":[
             {"name":"day_of_week","value":3},{"name":"active","value":true}]},
             "components":[]})");
    REQUIRE(std::holds_alternative<Flow>(result));
    const Flow& flow = std::get<Flow>(result);
    CHECK(flow.trigger->inputs[0].value == "3");
    CHECK(flow.trigger->inputs[1].value == "true");
  }
  SUBCASE("orders may skip values as long as they increase") {
    ParseResult result = parse_flow(
        R"({"type":"subflow","components":[
             {"category":"action","definition":"a","order":2},
             {"category":"action","definition":"b","order":9}]})");
    CHECK(std::holds_alternative<Flow>(result));
  }
}

TEST_CASE("extract_flow_from_model_output finds fenced and embedded JSON") {
  Flow expected = fixtures::weekly_loop_flow();

  SUBCASE("markdown code fence") {
    std::string text = "Here is the flow:\n```json\n" + fixtures::kWeeklyLoop + "\n```\n";
    ParseResult result = extract_flow_from_model_output(text);
    REQUIRE(std::holds_alternative<Flow>(result));
    CHECK(std::get<Flow>(result) == expected);
  }
  SUBCASE("prose on both sides") {
    std::string text = "Sure! " + fixtures::kWeeklyLoop + " Let me know if that works.";
    ParseResult result = extract_flow_from_model_output(text);
    REQUIRE(std::holds_alternative<Flow>(result));
    CHECK(std::get<Flow>(result) == expected);
  }
  SUBCASE("braces inside string values do not confuse the scanner") {
    ParseResult result = extract_flow_from_model_output(
        "x {\"type\":\"subflow\",\"components\":[{\"category\":\"action\","
        "\"definition\":\"a\",\"order\":1,\"inputs\":[{\"name\":\"v\","
        "\"value\":\"{{1.Records}}\"}]}]} y");
    CHECK(std::holds_alternative<Flow>(result));
  }
  SUBCASE("no JSON at all") {
    ParseResult result = extract_flow_from_model_output("I could not read the sketch.");
    REQUIRE(std::holds_alternative<ParseError>(result));
    CHECK(std::get<ParseError>(result).code == ParseError::Code::no_json_found);
  }
  SUBCASE("unbalanced braces only") {
    ParseResult result = extract_flow_from_model_output("{\"type\": \"flow\"");
    REQUIRE(std::holds_alternative<ParseError>(result));
    CHECK(std::get<ParseError>(result).code == ParseError::Code::no_json_found);
  }
}

TEST_CASE("content ids key on canonical content") {
  Flow flow = fixtures::weekly_loop_flow();
  std::string id = content_id(flow);
  CHECK(id.size() == 16);
  CHECK(id.find_first_not_of("0123456789abcdef") == std::string::npos);

  Flow shuffled = flow;
  std::swap(shuffled.trigger->inputs[0], shuffled.trigger->inputs[1]);
  CHECK(content_id(shuffled) == id);  // input order is not content

  Flow renamed = flow;
  renamed.components[0].inputs[0].value = "incident";
  CHECK(content_id(renamed) != id);
}

TEST_CASE("component identity normalizes case and whitespace") {
  Component a;
  a.category = Category::action;
  a.definition = "Create_A_User ";
  a.scope = "SN_MS_AD_Spoke";
  Component b;
  b.category = Category::action;
  b.definition = "create_a_user";
  b.scope = "sn_ms_ad_spoke";
  CHECK(identity_of(a) == identity_of(b));
}
