#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "proxflow/group_model.hpp"

namespace proxflow {

using NodeId = std::uint32_t;
using ArcId = std::uint32_t;

inline constexpr double kInfiniteCapacity = std::numeric_limits<double>::infinity();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr ArcId kNoArc = std::numeric_limits<ArcId>::max();

enum class NodeKind : std::uint8_t { kSource, kSink, kVariable, kGroup };

struct Arc {
  NodeId tail;
  NodeId head;
  double capacity;
};

/// Directed network with a distinguished source (node 0) and sink (node 1).
/// Variable and group nodes remember the variable / group index they stand
/// for, so subgraphs extracted from a larger network can be mapped back.
class FlowNetwork {
 public:
  static constexpr NodeId kSource = 0;
  static constexpr NodeId kSink = 1;

  FlowNetwork();

  NodeId add_node(NodeKind kind, std::size_t index);
  ArcId add_arc(NodeId tail, NodeId head, double capacity);
  void set_capacity(ArcId a, double capacity) { arcs_[a].capacity = capacity; }

  std::size_t num_nodes() const noexcept { return kinds_.size(); }
  std::size_t num_arcs() const noexcept { return arcs_.size(); }
  NodeKind kind(NodeId v) const { return kinds_[v]; }
  /// Variable or group index of `v` (0-based); meaningless for s and t.
  std::size_t index(NodeId v) const { return indices_[v]; }
  const Arc& arc(ArcId a) const { return arcs_[a]; }
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  std::span<const ArcId> out_arcs(NodeId v) const { return out_[v]; }
  std::span<const ArcId> in_arcs(NodeId v) const { return in_[v]; }

  std::size_t count(NodeKind kind) const;

 private:
  std::vector<NodeKind> kinds_;
  std::vector<std::size_t> indices_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
};

/// Canonical graph of a group structure: arcs (s,g) with capacity
/// lambda*eta_g, (g,j) for j in g and (j,t) for every variable, the last two
/// with infinite capacity. Node layout: s, t, variables 0..p-1, groups.
/// Arc layout: source arcs, then group->variable arcs group by group, then
/// sink arcs.
FlowNetwork build_canonical(const GroupStructure& gs, double lambda);

/// Replaces, for every strict inclusion h < g kept in the reduced inclusion
/// diagram, the arcs (g,j), j in h, by a single arc (g,h). A group's chosen
/// sub-groups are pairwise disjoint, so every (g,j) pair of the canonical
/// graph is represented by exactly one path.
FlowNetwork simplify_nested(const FlowNetwork& canonical, const GroupStructure& gs);

/// Maximal sets of non-terminal nodes connected by arcs (ignoring direction
/// and ignoring s, t). Each returned network has its own s and t plus the
/// arcs incident to its nodes; node kinds/indices are preserved.
std::vector<FlowNetwork> connected_components(const FlowNetwork& net);

/// One arc per line: `tail head capacity`, with nodes named s, t, u<j>, g<k>
/// (1-based j and k) and infinite capacities written as `inf`.
void dump(std::ostream& out, const FlowNetwork& net);

}  // namespace proxflow
