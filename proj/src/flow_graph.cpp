#include "proxflow/flow_graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "proxflow/errors.hpp"
#include "proxflow/io.hpp"

namespace proxflow {

FlowNetwork::FlowNetwork() {
  add_node(NodeKind::kSource, 0);
  add_node(NodeKind::kSink, 0);
}

NodeId FlowNetwork::add_node(NodeKind kind, std::size_t index) {
  kinds_.push_back(kind);
  indices_.push_back(index);
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<NodeId>(kinds_.size() - 1);
}

ArcId FlowNetwork::add_arc(NodeId tail, NodeId head, double capacity) {
  const auto a = static_cast<ArcId>(arcs_.size());
  arcs_.push_back({tail, head, capacity});
  out_[tail].push_back(a);
  in_[head].push_back(a);
  return a;
}

std::size_t FlowNetwork::count(NodeKind kind) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), kind));
}

FlowNetwork build_canonical(const GroupStructure& gs, double lambda) {
  const std::size_t p = gs.num_variables();
  FlowNetwork net;
  for (std::size_t j = 0; j < p; ++j) net.add_node(NodeKind::kVariable, j);
  for (std::size_t k = 0; k < gs.num_groups(); ++k) net.add_node(NodeKind::kGroup, k);
  const auto var_node = [](std::size_t j) { return static_cast<NodeId>(2 + j); };
  const auto group_node = [p](std::size_t k) { return static_cast<NodeId>(2 + p + k); };

  for (std::size_t k = 0; k < gs.num_groups(); ++k) {
    net.add_arc(FlowNetwork::kSource, group_node(k), lambda * gs.group(k).weight);
  }
  for (std::size_t k = 0; k < gs.num_groups(); ++k) {
    for (auto j : gs.group(k).members) net.add_arc(group_node(k), var_node(j), kInfiniteCapacity);
  }
  for (std::size_t j = 0; j < p; ++j) net.add_arc(var_node(j), FlowNetwork::kSink, kInfiniteCapacity);
  return net;
}

namespace {

bool strict_subset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big) {
  return small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

}  // namespace

FlowNetwork simplify_nested(const FlowNetwork& canonical, const GroupStructure& gs) {
  const std::size_t p = gs.num_variables();
  const std::size_t ng = gs.num_groups();
  std::vector<NodeId> var_node(p, kNoNode), group_node(ng, kNoNode);
  for (NodeId v = 0; v < canonical.num_nodes(); ++v) {
    if (canonical.kind(v) == NodeKind::kVariable) var_node[canonical.index(v)] = v;
    if (canonical.kind(v) == NodeKind::kGroup) group_node[canonical.index(v)] = v;
  }

  // Strict supersets are found among groups containing the subset's smallest
  // member, which keeps the pair scan local for sparse overlaps.
  std::vector<std::vector<std::size_t>> groups_of(p);
  for (std::size_t k = 0; k < ng; ++k)
    for (auto j : gs.group(k).members) groups_of[j].push_back(k);
  std::vector<std::vector<std::size_t>> strict_subs(ng);
  for (std::size_t h = 0; h < ng; ++h) {
    const auto& mh = gs.group(h).members;
    for (auto g : groups_of[mh.front()]) {
      if (g != h && strict_subset(mh, gs.group(g).members)) strict_subs[g].push_back(h);
    }
  }

  FlowNetwork out;
  for (NodeId v = 2; v < canonical.num_nodes(); ++v) out.add_node(canonical.kind(v), canonical.index(v));
  for (const auto& a : canonical.arcs())
    if (a.tail == FlowNetwork::kSource) out.add_arc(a.tail, a.head, a.capacity);

  std::vector<char> covered(p, 0);
  for (std::size_t g = 0; g < ng; ++g) {
    auto& subs = strict_subs[g];
    // Hasse children: strict subsets not strictly inside another strict subset.
    std::vector<std::size_t> children;
    for (auto h : subs) {
      bool direct = true;
      for (auto k : subs) {
        if (k != h && strict_subset(gs.group(h).members, gs.group(k).members)) {
          direct = false;
          break;
        }
      }
      if (direct) children.push_back(h);
    }
    // Keep a pairwise-disjoint selection, largest first, so paths stay unique.
    std::stable_sort(children.begin(), children.end(), [&](std::size_t a, std::size_t b) {
      return gs.group(a).members.size() > gs.group(b).members.size();
    });
    std::vector<std::size_t> chosen;
    for (auto h : children) {
      bool ok = true;
      for (auto c : chosen) {
        if (!disjoint(gs.group(h).members, gs.group(c).members)) {
          ok = false;
          break;
        }
      }
      if (ok) chosen.push_back(h);
    }
    std::sort(chosen.begin(), chosen.end());
    for (auto h : chosen)
      for (auto j : gs.group(h).members) covered[j] = 1;
    for (auto j : gs.group(g).members) {
      if (!covered[j]) out.add_arc(group_node[g], var_node[j], kInfiniteCapacity);
    }
    for (auto h : chosen) {
      out.add_arc(group_node[g], group_node[h], kInfiniteCapacity);
      for (auto j : gs.group(h).members) covered[j] = 0;
    }
  }

  for (const auto& a : canonical.arcs())
    if (a.head == FlowNetwork::kSink) out.add_arc(a.tail, a.head, a.capacity);
  return out;
}

std::vector<FlowNetwork> connected_components(const FlowNetwork& net) {
  const std::size_t n = net.num_nodes();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const auto& a : net.arcs()) {
    if (a.tail < 2 || a.head < 2) continue;
    NodeId x = find(a.tail), y = find(a.head);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }

  // Components are ordered by their smallest node id.
  std::vector<std::size_t> comp_of(n, 0);
  std::vector<NodeId> local(n, kNoNode);
  std::vector<FlowNetwork> out;
  std::vector<std::size_t> root_comp(n, static_cast<std::size_t>(-1));
  for (NodeId v = 2; v < n; ++v) {
    const NodeId r = find(v);
    if (root_comp[r] == static_cast<std::size_t>(-1)) {
      root_comp[r] = out.size();
      out.emplace_back();
    }
    comp_of[v] = root_comp[r];
    local[v] = out[comp_of[v]].add_node(net.kind(v), net.index(v));
  }
  for (const auto& a : net.arcs()) {
    if (a.tail < 2 && a.head < 2) continue;  // direct s-t arc: belongs to no component
    const NodeId inner = a.tail >= 2 ? a.tail : a.head;
    auto& c = out[comp_of[inner]];
    const NodeId tail = a.tail < 2 ? a.tail : local[a.tail];
    const NodeId head = a.head < 2 ? a.head : local[a.head];
    c.add_arc(tail, head, a.capacity);
  }
  return out;
}

void dump(std::ostream& out, const FlowNetwork& net) {
  auto name = [&](NodeId v) -> std::string {
    switch (net.kind(v)) {
      case NodeKind::kSource: return "s";
      case NodeKind::kSink: return "t";
      case NodeKind::kVariable: return "u" + std::to_string(net.index(v) + 1);
      case NodeKind::kGroup: return "g" + std::to_string(net.index(v) + 1);
    }
    return "?";
  };
  for (const auto& a : net.arcs()) {
    out << name(a.tail) << ' ' << name(a.head) << ' '
        << (a.capacity == kInfiniteCapacity ? std::string("inf") : io::format_double(a.capacity)) << '\n';
  }
}

}  // namespace proxflow
