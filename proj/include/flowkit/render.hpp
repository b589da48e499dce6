#pragma once

#include <cstdint>
#include <string>

#include "flowkit/flow.hpp"

// Graphviz DOT emission for flows. The library contract ends at DOT text;
// rasterization shells out to an external `dot` binary at the CLI level.

namespace flowkit {

enum class Orientation { top_to_bottom, left_to_right };
enum class EdgeStyle { straight, curved, orthogonal };
enum class PageOrientation { landscape, portrait };
enum class Resolution { small, medium, large };

struct NodeShapeMap {
  std::string trigger = "ellipse";
  std::string action = "box";
  std::string flowlogic = "diamond";
  std::string subflow = "component";

  bool operator==(const NodeShapeMap&) const = default;
};

struct RenderStyle {
  Orientation orientation = Orientation::top_to_bottom;
  EdgeStyle edge_style = EdgeStyle::straight;
  NodeShapeMap node_shape_map;
  std::uint64_t seed = 0;

  bool operator==(const RenderStyle&) const = default;
};

// One node per trigger ("t") and per component ("c<order>"), labeled with the
// annotation (falling back to the definition). Edges follow execution order;
// branch edges out of flowlogic carry labels ("then", "else", "loop", ...).
std::string to_dot(const Flow& flow, const RenderStyle& style);

// Deterministic style per seed; orientations are drawn uniformly and all edge
// styles are reachable.
RenderStyle sample_style(std::uint64_t seed);

// landscape iff width >= 2 * height.
PageOrientation classify_orientation(int width, int height);

// small < 400k pixels, large > 1M pixels, medium in between (boundaries
// inclusive on the medium side).
Resolution classify_resolution(int width, int height);

std::string to_string(Orientation orientation);
std::string to_string(EdgeStyle edge_style);
std::string to_string(PageOrientation orientation);
std::string to_string(Resolution resolution);

}  // namespace flowkit
