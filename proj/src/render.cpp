#include "flowkit/render.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <vector>

#include "flowkit/rng.hpp"

namespace flowkit {

namespace {

std::string escape_label(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string splines_attr(EdgeStyle style) {
  switch (style) {
    case EdgeStyle::straight: return "line";
    case EdgeStyle::curved: return "curved";
    case EdgeStyle::orthogonal: return "ortho";
  }
  return "line";
}

std::string upper(std::string text) {
  for (char& c : text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return text;
}

const std::string& shape_for(const Component& component, const NodeShapeMap& shapes) {
  switch (component.category) {
    case Category::action: return shapes.action;
    case Category::flowlogic: return shapes.flowlogic;
    case Category::subflow: return shapes.subflow;
  }
  return shapes.action;
}

// Label for the edge from a flowlogic component into its first nested child.
std::string enter_label(const std::string& definition) {
  std::string def = upper(definition);
  if (def == "IF" || def == "ELSEIF") return "then";
  if (def == "FOREACH" || def == "DOUNTIL") return "loop";
  if (def == "PARALLEL") return "branch";
  return "";
}

bool is_branch_opener(const std::string& def, const std::string& opener) {
  if (opener == "else") return def == "IF" || def == "ELSEIF";
  if (opener == "catch") return def == "TRY";
  return false;
}

}  // namespace

std::string to_dot(const Flow& flow, const RenderStyle& style) {
  std::ostringstream out;
  out << "digraph flow {\n";
  out << "  rankdir=" << (style.orientation == Orientation::top_to_bottom ? "TB" : "LR")
      << ";\n";
  out << "  splines=" << splines_attr(style.edge_style) << ";\n";
  out << "  node [fontname=\"Helvetica\"];\n";

  if (flow.trigger) {
    std::string label = flow.trigger->annotation.empty() ? flow.trigger->trigger_type
                                                         : flow.trigger->annotation;
    out << "  t [label=\"" << escape_label(label) << "\", shape=" << style.node_shape_map.trigger
        << "];\n";
  }
  for (const auto& component : flow.components) {
    std::string label =
        component.annotation.empty() ? component.definition : component.annotation;
    out << "  c" << component.order << " [label=\"" << escape_label(label)
        << "\", shape=" << shape_for(component, style.node_shape_map) << "];\n";
  }

  // children_by_block[order] = components whose block is that order;
  // key 0 collects the top-level sequence.
  std::map<int, std::vector<const Component*>> children_by_block;
  std::map<int, const Component*> by_order;
  for (const auto& component : flow.components) {
    children_by_block[component.block.value_or(0)].push_back(&component);
    by_order[component.order] = &component;
  }

  struct Edge {
    std::string from;
    std::string to;
    std::string label;
  };
  std::vector<Edge> edges;
  for (const auto& [block, children] : children_by_block) {
    const Component* parent = block == 0 ? nullptr : by_order.at(block);
    bool parallel = parent != nullptr && upper(parent->definition) == "PARALLEL";
    for (std::size_t i = 0; i < children.size(); ++i) {
      const Component& child = *children[i];
      std::string to = "c" + std::to_string(child.order);
      std::string def = upper(child.definition);
      bool is_else = child.category == Category::flowlogic && (def == "ELSE" || def == "ELSEIF");
      bool is_catch = child.category == Category::flowlogic && def == "CATCH";
      if (is_else || is_catch) {
        // branch alternatives hang off their opener, not the previous sibling
        std::string opener_label = is_else ? "else" : "catch";
        for (std::size_t j = i; j-- > 0;) {
          if (is_branch_opener(upper(children[j]->definition), opener_label)) {
            edges.push_back({"c" + std::to_string(children[j]->order), to, opener_label});
            break;
          }
        }
        continue;
      }
      if (parallel) {
        edges.push_back({"c" + std::to_string(parent->order), to, "branch"});
      } else if (i == 0) {
        if (parent == nullptr) {
          if (flow.trigger) edges.push_back({"t", to, ""});
        } else {
          edges.push_back({"c" + std::to_string(parent->order), to,
                           enter_label(parent->definition)});
        }
      } else {
        // skip back over branch alternatives to the previous sequential sibling
        std::size_t prev = i;
        while (prev-- > 0) {
          std::string prev_def = upper(children[prev]->definition);
          if (prev_def != "ELSE" && prev_def != "ELSEIF" && prev_def != "CATCH") break;
        }
        edges.push_back({"c" + std::to_string(children[prev]->order), to, ""});
      }
    }
  }

  for (const auto& edge : edges) {
    out << "  " << edge.from << " -> " << edge.to;
    if (!edge.label.empty()) out << " [label=\"" << edge.label << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

RenderStyle sample_style(std::uint64_t seed) {
  Rng rng = Rng(seed).stream("style");
  RenderStyle style;
  style.orientation =
      rng.pick_index(2) == 0 ? Orientation::top_to_bottom : Orientation::left_to_right;
  switch (rng.pick_index(3)) {
    case 0: style.edge_style = EdgeStyle::straight; break;
    case 1: style.edge_style = EdgeStyle::curved; break;
    default: style.edge_style = EdgeStyle::orthogonal; break;
  }
  style.seed = seed;
  return style;
}

PageOrientation classify_orientation(int width, int height) {
  return width >= 2 * height ? PageOrientation::landscape : PageOrientation::portrait;
}

Resolution classify_resolution(int width, int height) {
  long long pixels = static_cast<long long>(width) * height;
  if (pixels < 400'000) return Resolution::small;
  if (pixels > 1'000'000) return Resolution::large;
  return Resolution::medium;
}

std::string to_string(Orientation orientation) {
  return orientation == Orientation::top_to_bottom ? "top_to_bottom" : "left_to_right";
}

std::string to_string(EdgeStyle edge_style) {
  switch (edge_style) {
    case EdgeStyle::straight: return "straight";
    case EdgeStyle::curved: return "curved";
    case EdgeStyle::orthogonal: return "orthogonal";
  }
  return "straight";
}

std::string to_string(PageOrientation orientation) {
  return orientation == PageOrientation::landscape ? "landscape" : "portrait";
}

std::string to_string(Resolution resolution) {
  switch (resolution) {
    case Resolution::small: return "small";
    case Resolution::medium: return "medium";
    case Resolution::large: return "large";
  }
  return "medium";
}

}  // namespace flowkit
