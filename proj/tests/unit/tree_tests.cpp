#include <doctest.h>

#include <algorithm>

#include "../fixtures.hpp"
#include "flowkit/flow.hpp"
#include "flowkit/tree.hpp"

using namespace flowkit;

TEST_CASE("fixture decomposes with nesting and counts") {
  FlowTree tree = build_tree(canonicalize(fixtures::weekly_loop_flow()));

  CHECK(tree.root.label == "flow");
  REQUIRE(tree.root.children.size() == 2);
  CHECK(tree.root.children[0].label == "trigger:weekly");
  CHECK(tree.root.children[0].children.size() == 2);
  CHECK(tree.root.children[0].children[0].label == "input:day_of_week=3");
  CHECK(tree.root.children[1].label == "components");

  const TreeNode& components = tree.root.children[1];
  REQUIRE(components.children.size() == 2);
  CHECK(components.children[0].label == "action:look_up_records:global");
  const TreeNode& foreach_node = components.children[1];
  CHECK(foreach_node.label == "flowlogic:foreach:global");
  REQUIRE(foreach_node.children.size() == 2);
  CHECK(foreach_node.children[0].label == "input:items={{1.Records}}");
  const TreeNode& if_node = foreach_node.children[1];
  CHECK(if_node.label == "flowlogic:if:global");
  REQUIRE(if_node.children.size() == 2);
  CHECK(if_node.children[1].label == "action:post_incident_details:sn_ms_teams_ah");

  CHECK(node_count(tree) == 12);
  CHECK(tree_size(tree) == doctest::Approx(8.25));  // 7 structural + 5 inputs at 0.25
  CHECK(tree_size(build_tree(canonicalize(fixtures::weekly_loop_flow()),
                             TreeWeights::unit())) == doctest::Approx(12.0));
}

TEST_CASE("inputs precede nested components in child order") {
  FlowTree tree = build_tree(canonicalize(fixtures::weekly_loop_flow()));
  const TreeNode& foreach_node = tree.root.children[1].children[1];
  CHECK(foreach_node.children[0].kind == NodeKind::input);
  CHECK(foreach_node.children[1].kind == NodeKind::component);
}

TEST_CASE("trigger-only flow weighs trigger inputs at a quarter") {
  Flow flow;
  flow.kind = FlowKind::flow;
  flow.trigger = Trigger{"", "weekly", {{"day_of_week", "3"}, {"time", "x"}}};
  FlowTree tree = build_tree(flow);
  CHECK(node_count(tree) == 5);
  CHECK(tree_size(tree) == doctest::Approx(3.5));  // flow + trigger + components + 2 * 0.25
}

TEST_CASE("subflow trees have no trigger child") {
  Flow flow;
  flow.kind = FlowKind::subflow;
  FlowTree tree = build_tree(flow);
  REQUIRE(tree.root.children.size() == 1);
  CHECK(tree.root.children[0].label == "components");
}

TEST_CASE("without_inputs strips every input node") {
  FlowTree tree = build_tree(canonicalize(fixtures::weekly_loop_flow()));
  FlowTree stripped = without_inputs(tree);
  CHECK(node_count(stripped) == 7);
  CHECK(tree_size(stripped) == doctest::Approx(7.0));
  CHECK(stripped.root.children[0].children.empty());  // trigger lost its inputs
}

TEST_CASE("height-1 subtrees exclude the root and dedupe") {
  FlowTree tree = build_tree(canonicalize(fixtures::weekly_loop_flow()));
  std::vector<Subtree1> subtrees = subtrees_height1(tree);

  CHECK(subtrees.size() == 5);  // trigger, components, look_up, foreach, if
  for (const auto& subtree : subtrees) CHECK(subtree.parent_label != "flow");
  CHECK(std::is_sorted(subtrees.begin(), subtrees.end()));

  Subtree1 if_pair{"flowlogic:if:global",
                   {"input:condition={{2.item.active}}=false",
                    "action:post_incident_details:sn_ms_teams_ah"}};
  CHECK(std::find(subtrees.begin(), subtrees.end(), if_pair) != subtrees.end());
}

TEST_CASE("childless nodes contribute no subtree pair") {
  Flow flow;
  flow.kind = FlowKind::flow;
  flow.trigger = Trigger{"", "daily", {}};
  CHECK(subtrees_height1(build_tree(flow)).empty());
}

TEST_CASE("duplicate structures dedupe in the subtree set") {
  Flow flow;
  flow.kind = FlowKind::subflow;
  for (int i = 1; i <= 2; ++i) {
    Component component;
    component.category = Category::action;
    component.definition = "send_email";
    component.scope = "global";
    component.order = i;
    component.inputs = {{"to", "x"}};
    flow.components.push_back(component);
  }
  FlowTree tree = build_tree(canonicalize(flow));
  std::vector<Subtree1> subtrees = subtrees_height1(tree);
  // the two identical send_email pairs collapse into one, plus the components pair
  CHECK(subtrees.size() == 2);
}
