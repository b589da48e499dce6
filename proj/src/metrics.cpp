#include "flowkit/metrics.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace flowkit {

namespace {

// Left-to-right postorder flattening with leftmost-leaf indices, the frame
// the Zhang-Shasha recurrence runs on. Indices are 1-based.
struct Postorder {
  std::vector<const TreeNode*> nodes;  // nodes[0] unused
  std::vector<int> leftmost;           // leftmost[i]: leftmost leaf of subtree i
  std::vector<int> keyroots;

  explicit Postorder(const TreeNode& root) {
    nodes.push_back(nullptr);
    leftmost.push_back(0);
    flatten(root);
    std::vector<bool> seen(leftmost.size(), false);
    for (int i = size(); i >= 1; --i) {
      if (!seen[static_cast<std::size_t>(leftmost[static_cast<std::size_t>(i)])]) {
        seen[static_cast<std::size_t>(leftmost[static_cast<std::size_t>(i)])] = true;
        keyroots.push_back(i);
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
  }

  int size() const { return static_cast<int>(nodes.size()) - 1; }
  const TreeNode& node(int i) const { return *nodes[static_cast<std::size_t>(i)]; }
  int lml(int i) const { return leftmost[static_cast<std::size_t>(i)]; }

 private:
  int flatten(const TreeNode& node) {
    int first_leaf = 0;
    for (const auto& child : node.children) {
      int leaf = flatten(child);
      if (first_leaf == 0) first_leaf = leaf;
    }
    nodes.push_back(&node);
    int index = size();
    if (first_leaf == 0) first_leaf = index;
    leftmost.push_back(first_leaf);
    return first_leaf;
  }
};

double zhang_shasha(const Postorder& a, const Postorder& b, const EditCosts& costs) {
  int n = a.size();
  int m = b.size();
  std::vector<std::vector<double>> treedist(
      static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  std::vector<std::vector<double>> forest(
      static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));

  auto fd = [&forest](int i, int j) -> double& {
    return forest[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };

  for (int ki : a.keyroots) {
    for (int kj : b.keyroots) {
      int li = a.lml(ki);
      int lj = b.lml(kj);
      fd(li - 1, lj - 1) = 0.0;
      for (int di = li; di <= ki; ++di)
        fd(di, lj - 1) = fd(di - 1, lj - 1) + costs.delete_cost(a.node(di));
      for (int dj = lj; dj <= kj; ++dj)
        fd(li - 1, dj) = fd(li - 1, dj - 1) + costs.insert_cost(b.node(dj));
      for (int di = li; di <= ki; ++di) {
        for (int dj = lj; dj <= kj; ++dj) {
          double del = fd(di - 1, dj) + costs.delete_cost(a.node(di));
          double ins = fd(di, dj - 1) + costs.insert_cost(b.node(dj));
          if (a.lml(di) == li && b.lml(dj) == lj) {
            double rel = fd(di - 1, dj - 1) + costs.relabel_cost(a.node(di), b.node(dj));
            double best = std::min({del, ins, rel});
            fd(di, dj) = best;
            treedist[static_cast<std::size_t>(di)][static_cast<std::size_t>(dj)] = best;
          } else {
            double match = fd(a.lml(di) - 1, b.lml(dj) - 1) +
                           treedist[static_cast<std::size_t>(di)][static_cast<std::size_t>(dj)];
            fd(di, dj) = std::min({del, ins, match});
          }
        }
      }
    }
  }
  return treedist[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

// Oracle state: forests are contiguous postorder intervals [i, j].
struct OracleContext {
  const Postorder& a;
  const Postorder& b;
  const EditCosts& costs;
  std::map<std::tuple<int, int, int, int>, double> memo;

  double delete_all(int i1, int j1) {
    double total = 0.0;
    for (int k = i1; k <= j1; ++k) total += costs.delete_cost(a.node(k));
    return total;
  }

  double insert_all(int i2, int j2) {
    double total = 0.0;
    for (int k = i2; k <= j2; ++k) total += costs.insert_cost(b.node(k));
    return total;
  }

  double forest(int i1, int j1, int i2, int j2) {
    if (i1 > j1) return insert_all(i2, j2);
    if (i2 > j2) return delete_all(i1, j1);
    auto key = std::make_tuple(i1, j1, i2, j2);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    // rightmost root of each forest is its last postorder node
    double remove_a = forest(i1, j1 - 1, i2, j2) + costs.delete_cost(a.node(j1));
    double remove_b = forest(i1, j1, i2, j2 - 1) + costs.insert_cost(b.node(j2));
    double match = forest(a.lml(j1), j1 - 1, b.lml(j2), j2 - 1) +
                   forest(i1, a.lml(j1) - 1, i2, b.lml(j2) - 1) +
                   costs.relabel_cost(a.node(j1), b.node(j2));
    double best = std::min({remove_a, remove_b, match});
    memo.emplace(key, best);
    return best;
  }
};

std::vector<ComponentIdentity> identities(const Flow& flow) {
  std::vector<ComponentIdentity> out;
  out.reserve(flow.components.size());
  for (const auto& component : flow.components) out.push_back(identity_of(component));
  return out;
}

FlowTree metric_tree(const Flow& flow, bool include_inputs, const TreeWeights& weights) {
  FlowTree tree = build_tree(canonicalize(flow), weights);
  return include_inputs ? tree : without_inputs(tree);
}

double flow_sim_on_trees(const FlowTree& a, const FlowTree& b) {
  double distance = ted(a, b);
  return 1.0 - distance / (tree_size(a) + tree_size(b));
}

double tree_bleu_on_trees(const FlowTree& candidate, const FlowTree& reference) {
  std::vector<Subtree1> s_candidate = subtrees_height1(candidate);
  if (s_candidate.empty()) return 0.0;
  std::vector<Subtree1> s_reference = subtrees_height1(reference);
  std::vector<Subtree1> common;
  std::set_intersection(s_candidate.begin(), s_candidate.end(), s_reference.begin(),
                        s_reference.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(s_candidate.size());
}

}  // namespace

double ted(const FlowTree& a, const FlowTree& b, const EditCosts& costs) {
  Postorder pa(a.root);
  Postorder pb(b.root);
  return zhang_shasha(pa, pb, costs);
}

double ted_oracle(const FlowTree& a, const FlowTree& b, const EditCosts& costs) {
  Postorder pa(a.root);
  Postorder pb(b.root);
  if (pa.size() + pb.size() > 12)
    throw SizeExceededError("ted_oracle: combined node count exceeds 12");
  OracleContext ctx{pa, pb, costs, {}};
  return ctx.forest(1, pa.size(), 1, pb.size());
}

double flow_sim(const Flow& flow, const Flow& reference, bool include_inputs,
                const TreeWeights& weights) {
  return flow_sim_on_trees(metric_tree(flow, include_inputs, weights),
                           metric_tree(reference, include_inputs, weights));
}

double tree_bleu(const Flow& flow, const Flow& reference, bool include_inputs) {
  return tree_bleu_on_trees(metric_tree(flow, include_inputs, TreeWeights{}),
                            metric_tree(reference, include_inputs, TreeWeights{}));
}

int trigger_match(const Flow& flow, const Flow& reference, bool strict) {
  Flow f = canonicalize(flow);
  Flow r = canonicalize(reference);
  if (f.trigger.has_value() != r.trigger.has_value()) return 0;
  if (!f.trigger) return 1;  // subflow vs subflow
  if (f.trigger->trigger_type != r.trigger->trigger_type) return 0;
  if (strict && f.trigger->inputs != r.trigger->inputs) return 0;
  return 1;
}

double component_match(const Flow& flow, const Flow& reference, bool use_multiset) {
  std::vector<ComponentIdentity> f = identities(canonicalize(flow));
  std::vector<ComponentIdentity> r = identities(canonicalize(reference));
  if (f.empty() && r.empty()) return 1.0;

  std::map<ComponentIdentity, std::size_t> f_counts;
  std::map<ComponentIdentity, std::size_t> r_counts;
  for (const auto& id : f) ++f_counts[id];
  for (const auto& id : r) ++r_counts[id];
  if (!use_multiset) {
    for (auto& [id, count] : f_counts) count = 1;
    for (auto& [id, count] : r_counts) count = 1;
  }

  std::size_t intersection = 0;
  std::size_t union_size = 0;
  for (const auto& [id, count] : f_counts) {
    auto it = r_counts.find(id);
    std::size_t other = it == r_counts.end() ? 0 : it->second;
    intersection += std::min(count, other);
    union_size += std::max(count, other);
  }
  for (const auto& [id, count] : r_counts)
    if (!f_counts.count(id)) union_size += count;
  return static_cast<double>(intersection) / static_cast<double>(union_size);
}

MetricResult evaluate_pair(const ParseResult& candidate, const Flow& reference,
                           const TreeWeights& weights) {
  MetricResult result;
  const Flow* flow = std::get_if<Flow>(&candidate);
  if (!flow) return result;  // parse failure scores zero everywhere

  Flow f = canonicalize(*flow);
  Flow r = canonicalize(reference);
  FlowTree tf = build_tree(f, weights);
  FlowTree tr = build_tree(r, weights);
  FlowTree tf_stripped = without_inputs(tf);
  FlowTree tr_stripped = without_inputs(tr);

  result.flow_sim_with_inputs = flow_sim_on_trees(tf, tr);
  result.flow_sim_no_inputs = flow_sim_on_trees(tf_stripped, tr_stripped);
  result.tree_bleu_with_inputs = tree_bleu_on_trees(tf, tr);
  result.tree_bleu_no_inputs = tree_bleu_on_trees(tf_stripped, tr_stripped);
  result.trigger_match = trigger_match(f, r);
  result.component_match = component_match(f, r);
  return result;
}

std::string metric_result_to_json(const MetricResult& result) {
  nlohmann::ordered_json obj;
  obj["flow_sim_with_inputs"] = result.flow_sim_with_inputs;
  obj["flow_sim_no_inputs"] = result.flow_sim_no_inputs;
  obj["tree_bleu_with_inputs"] = result.tree_bleu_with_inputs;
  obj["tree_bleu_no_inputs"] = result.tree_bleu_no_inputs;
  obj["trigger_match"] = result.trigger_match;
  obj["component_match"] = result.component_match;
  return obj.dump();
}

}  // namespace flowkit
