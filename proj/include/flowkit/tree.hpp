#pragma once

#include <string>
#include <vector>

#include "flowkit/flow.hpp"

// Ordered labeled tree decomposition of a flow. The root carries a trigger
// subtree (when present) and a components subtree; component nodes own their
// inputs followed by their block-nested children.

namespace flowkit {

enum class NodeKind { flow, trigger, components, component, input };

// Per-kind node costs for the edit distance. Structural nodes outweigh
// inputs so similarity reacts to structure before input details.
struct TreeWeights {
  double flow = 1.0;
  double trigger = 1.0;
  double components = 1.0;
  double component = 1.0;
  double input = 0.25;

  static TreeWeights unit() { return TreeWeights{1.0, 1.0, 1.0, 1.0, 1.0}; }
  double of(NodeKind kind) const;
};

struct TreeNode {
  std::string label;
  NodeKind kind = NodeKind::flow;
  double weight = 1.0;
  std::vector<TreeNode> children;

  bool operator==(const TreeNode&) const = default;
};

struct FlowTree {
  TreeNode root;

  bool operator==(const FlowTree&) const = default;
};

// One internal node with its ordered child labels.
struct Subtree1 {
  std::string parent_label;
  std::vector<std::string> child_labels;

  bool operator==(const Subtree1&) const = default;
  auto operator<=>(const Subtree1&) const = default;
};

// Deterministic decomposition of a canonicalized flow. Labels:
// root "flow", "trigger:<type>", "components", "<category>:<definition>:<scope>"
// and "input:<name>=<value>". Children keep source order: trigger before
// components, inputs before nested components, components by order.
FlowTree build_tree(const Flow& flow, const TreeWeights& weights = TreeWeights{});

// Copy of the tree with every input node removed.
FlowTree without_inputs(const FlowTree& tree);

// All (parent, ordered children) pairs except the one rooted at the flow
// node, deduplicated and sorted. Childless nodes contribute nothing.
std::vector<Subtree1> subtrees_height1(const FlowTree& tree);

// Sum of node weights; the node count under unit weights.
double tree_size(const FlowTree& tree);

std::size_t node_count(const FlowTree& tree);

}  // namespace flowkit
