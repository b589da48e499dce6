#include "flowkit/tree.hpp"

#include <algorithm>
#include <map>

namespace flowkit {

namespace {

std::string component_label(const Component& component) {
  return to_string(component.category) + ":" + component.definition + ":" + component.scope;
}

TreeNode input_node(const InputBinding& input, const TreeWeights& weights) {
  return TreeNode{"input:" + input.name + "=" + input.value, NodeKind::input,
                  weights.of(NodeKind::input), {}};
}

TreeNode component_node(const Component& component,
                        const std::map<int, std::vector<const Component*>>& children_of,
                        const TreeWeights& weights) {
  TreeNode node{component_label(component), NodeKind::component,
                weights.of(NodeKind::component), {}};
  for (const auto& input : component.inputs) node.children.push_back(input_node(input, weights));
  auto it = children_of.find(component.order);
  if (it != children_of.end())
    for (const Component* child : it->second)
      node.children.push_back(component_node(*child, children_of, weights));
  return node;
}

void collect_subtrees(const TreeNode& node, bool is_root, std::vector<Subtree1>& out) {
  if (!node.children.empty() && !is_root) {
    Subtree1 subtree{node.label, {}};
    subtree.child_labels.reserve(node.children.size());
    for (const auto& child : node.children) subtree.child_labels.push_back(child.label);
    out.push_back(std::move(subtree));
  }
  for (const auto& child : node.children) collect_subtrees(child, false, out);
}

double sum_weights(const TreeNode& node) {
  double total = node.weight;
  for (const auto& child : node.children) total += sum_weights(child);
  return total;
}

std::size_t count_nodes(const TreeNode& node) {
  std::size_t total = 1;
  for (const auto& child : node.children) total += count_nodes(child);
  return total;
}

TreeNode strip_inputs(const TreeNode& node) {
  TreeNode out{node.label, node.kind, node.weight, {}};
  for (const auto& child : node.children)
    if (child.kind != NodeKind::input) out.children.push_back(strip_inputs(child));
  return out;
}

}  // namespace

double TreeWeights::of(NodeKind kind) const {
  switch (kind) {
    case NodeKind::flow:
      return flow;
    case NodeKind::trigger:
      return trigger;
    case NodeKind::components:
      return components;
    case NodeKind::component:
      return component;
    case NodeKind::input:
      return input;
  }
  return 1.0;
}

FlowTree build_tree(const Flow& flow, const TreeWeights& weights) {
  FlowTree tree;
  tree.root = TreeNode{"flow", NodeKind::flow, weights.of(NodeKind::flow), {}};

  if (flow.trigger) {
    TreeNode trigger{"trigger:" + flow.trigger->trigger_type, NodeKind::trigger,
                     weights.of(NodeKind::trigger), {}};
    for (const auto& input : flow.trigger->inputs)
      trigger.children.push_back(input_node(input, weights));
    tree.root.children.push_back(std::move(trigger));
  }

  std::map<int, std::vector<const Component*>> children_of;
  std::vector<const Component*> top_level;
  for (const auto& component : flow.components) {
    if (component.block) {
      children_of[*component.block].push_back(&component);
    } else {
      top_level.push_back(&component);
    }
  }

  TreeNode components{"components", NodeKind::components, weights.of(NodeKind::components), {}};
  for (const Component* component : top_level)
    components.children.push_back(component_node(*component, children_of, weights));
  tree.root.children.push_back(std::move(components));
  return tree;
}

FlowTree without_inputs(const FlowTree& tree) { return FlowTree{strip_inputs(tree.root)}; }

std::vector<Subtree1> subtrees_height1(const FlowTree& tree) {
  std::vector<Subtree1> out;
  collect_subtrees(tree.root, true, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double tree_size(const FlowTree& tree) { return sum_weights(tree.root); }

std::size_t node_count(const FlowTree& tree) { return count_nodes(tree.root); }

}  // namespace flowkit
