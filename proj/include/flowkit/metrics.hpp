#pragma once

#include <stdexcept>
#include <string>

#include "flowkit/flow.hpp"
#include "flowkit/tree.hpp"

namespace flowkit {

// Edit operation costs over tree nodes: insert/delete charge the node weight,
// relabel is free on equal labels and max(weight) otherwise. Symmetric.
struct EditCosts {
  double insert_cost(const TreeNode& node) const { return node.weight; }
  double delete_cost(const TreeNode& node) const { return node.weight; }
  double relabel_cost(const TreeNode& a, const TreeNode& b) const {
    return a.label == b.label ? 0.0 : std::max(a.weight, b.weight);
  }
};

struct MetricResult {
  double flow_sim_with_inputs = 0.0;
  double flow_sim_no_inputs = 0.0;
  double tree_bleu_with_inputs = 0.0;
  double tree_bleu_no_inputs = 0.0;
  int trigger_match = 0;
  double component_match = 0.0;

  bool operator==(const MetricResult&) const = default;
};

struct SizeExceededError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Minimum edit cost transforming a into b, Zhang-Shasha ordered-tree dynamic
// program over keyroots.
double ted(const FlowTree& a, const FlowTree& b, const EditCosts& costs = EditCosts{});

// Exact reference distance by memoized forest-distance recursion without
// keyroot pruning. Test oracle; rejects pairs above 12 combined nodes.
double ted_oracle(const FlowTree& a, const FlowTree& b, const EditCosts& costs = EditCosts{});

// 1 - TED/(|F| + |F_r|) over weighted tree sizes, in [0, 1]. With
// include_inputs=false input nodes are dropped from both trees first.
double flow_sim(const Flow& flow, const Flow& reference, bool include_inputs,
                const TreeWeights& weights = TreeWeights{});

// Share of the candidate's 1-height subtrees found in the reference. The
// always-present root subtree is excluded, so an empty candidate scores 0.
double tree_bleu(const Flow& flow, const Flow& reference, bool include_inputs);

// 1 iff trigger presence agrees and trigger types are equal. With
// strict=true the trigger inputs must match as well.
int trigger_match(const Flow& flow, const Flow& reference, bool strict = false);

// Jaccard overlap of (category, definition, scope) identities. Multiset
// counting by default (duplicates matter); use_multiset=false compares sets.
// Two empty component lists score 1.
double component_match(const Flow& flow, const Flow& reference, bool use_multiset = true);

// All six metrics for one candidate/reference pair; a candidate that failed
// to parse scores zero everywhere.
MetricResult evaluate_pair(const ParseResult& candidate, const Flow& reference,
                           const TreeWeights& weights = TreeWeights{});

std::string metric_result_to_json(const MetricResult& result);

}  // namespace flowkit
