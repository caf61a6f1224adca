#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "proxflow/flow_graph.hpp"

namespace proxflow {

struct FlowCounters {
  std::uint64_t pushes = 0;
  std::uint64_t relabels = 0;
  std::uint64_t global_relabels = 0;
  std::uint64_t gaps = 0;

  FlowCounters& operator+=(const FlowCounters& o) {
    pushes += o.pushes;
    relabels += o.relabels;
    global_relabels += o.global_relabels;
    gaps += o.gaps;
    return *this;
  }
};

/// Snapshot of a (pre)flow on a FlowNetwork, indexed like the network's arcs
/// and nodes.
struct FlowState {
  std::vector<double> flow;
  std::vector<double> excess;
  std::vector<std::uint32_t> height;
  FlowCounters counters;
  /// Total flow entering the sink.
  double value = 0.0;
};

/// Node partition of a minimum (s,t)-cut. `source_side[v]` is true for V+.
struct MinCut {
  std::vector<char> source_side;
  double capacity = 0.0;
};

/// Per-instance tolerance used for saturation and equality tests:
/// 1e-10 * (1 + largest finite capacity).
double flow_tolerance(const FlowNetwork& net);

/// Push-relabel engine with highest-active selection, gap relabeling and
/// periodic global relabeling. The engine owns a residual copy of the network
/// and can run on a subset ("region") of the non-terminal nodes: arcs leading
/// outside the region are ignored, which is how divide-and-conquer callers
/// delete the arcs of a cut without rebuilding the graph.
///
/// Flows persist between solves, so every solve is warm-started from the
/// previous one. Before solving, flows are clamped to the current
/// capacities, source arcs are saturated and node deficits created by the
/// clamping are pushed downstream, which always yields a valid preflow.
class PushRelabel {
 public:
  enum class Event : std::uint8_t { kPush, kRelabel, kGap, kGlobalRelabel };
  struct LogEntry {
    Event event;
    NodeId node;    // pushing, relabeled or gap-lifted node; target for kGlobalRelabel
    NodeId other;   // receiving node for kPush, gap height for kGap
  };

  explicit PushRelabel(const FlowNetwork& net);

  std::size_t num_nodes() const noexcept { return first_.size() - 1; }
  std::size_t num_arcs() const noexcept { return arc_pos_.size(); }

  void set_capacity(ArcId a, double capacity);
  double capacity(ArcId a) const;
  double flow(ArcId a) const { return flow_[arc_pos_[a]]; }
  /// Overwrites the flow of an arc (used to load a warm start).
  void set_flow(ArcId a, double value);
  void reset_flows();

  /// Maximum flow over every non-terminal node.
  void solve();
  /// Maximum flow restricted to `region` (non-terminal nodes only). Every
  /// node in `region` must carry the label `region_id` (see assign_region).
  void solve(std::span<const NodeId> region, std::uint32_t region_id);

  /// Labels nodes; solve(region, id) only sees nodes labelled `id`.
  void assign_region(std::span<const NodeId> nodes, std::uint32_t region_id);
  std::uint32_t region_of(NodeId v) const { return region_[v]; }
  /// Zeroes flow on arcs between `nodes` and nodes carrying another label.
  void drop_cross_flow(std::span<const NodeId> nodes);

  /// Nodes of `region` reachable from the source through arcs of positive
  /// residual capacity inside the region. Sets `mark[v] = 1` for them.
  void source_reachable(std::span<const NodeId> region, std::vector<char>& mark) const;

  double excess(NodeId v) const { return excess_[v]; }
  std::uint32_t height(NodeId v) const { return height_[v]; }
  const FlowCounters& counters() const noexcept { return counters_; }
  void reset_counters() { counters_ = {}; }

  void enable_log(bool on) { logging_ = on; log_.clear(); }
  const std::vector<LogEntry>& log() const noexcept { return log_; }

  /// Finite value standing for infinite capacity; always exceeds the sum of
  /// all finite capacities.
  double infinity_value() const noexcept { return sentinel_; }

  FlowState snapshot() const;

 private:
  using Edge = std::uint32_t;

  double residual(Edge e) const { return cap_[e] - flow_[e]; }
  bool in_scope(NodeId w, NodeId target) const {
    return w == target || region_[w] == current_region_;
  }

  void prepare(std::span<const NodeId> region);
  void run_phase(std::span<const NodeId> region, NodeId target, bool use_gap);
  void global_relabel(std::span<const NodeId> region, NodeId target);
  void discharge(NodeId v, NodeId target, bool use_gap, std::span<const NodeId> region);
  void push(Edge e, NodeId v, NodeId w, double delta);
  void relabel(NodeId v, NodeId target, bool use_gap);
  void gap(std::uint32_t h);

  void bucket_insert(NodeId v, std::uint32_t h);
  void bucket_remove(NodeId v);
  void activate(NodeId v);
  void grow_sentinel();

  // CSR residual graph: every network arc contributes a forward edge and a
  // reverse edge of zero capacity; flow_[rev] == -flow_[fwd].
  std::vector<Edge> first_;
  std::vector<NodeId> head_;
  std::vector<Edge> rev_;
  std::vector<double> cap_;
  std::vector<double> flow_;
  std::vector<char> infinite_;
  std::vector<char> forward_;
  std::vector<Edge> arc_pos_;
  std::vector<double> arc_capacity_;  // as requested, +inf allowed

  std::vector<double> excess_;
  std::vector<std::uint32_t> height_;
  std::vector<Edge> current_;
  std::vector<std::uint32_t> region_;
  std::uint32_t current_region_ = 0;

  // Height buckets: doubly linked list of all labelled nodes per height and a
  // stack of (possibly stale) active nodes per height.
  std::vector<NodeId> all_head_;
  std::vector<NodeId> all_next_;
  std::vector<NodeId> all_prev_;
  std::vector<NodeId> active_head_;
  std::vector<NodeId> active_next_;
  std::uint32_t unreachable_ = 0;
  std::int64_t max_active_ = -1;
  std::int64_t max_height_ = -1;
  std::uint64_t relabels_since_global_ = 0;

  double finite_total_ = 0.0;
  double sentinel_ = 1.0;

  FlowCounters counters_;
  bool logging_ = false;
  std::vector<LogEntry> log_;
  std::vector<NodeId> scratch_;
};

/// Maximum flow of `net`, optionally warm-started. Throws InvalidWarmStart if
/// the warm state has the wrong shape or violates a capacity by more than
/// flow_tolerance(net).
FlowState max_flow(const FlowNetwork& net, const FlowState* warm = nullptr);

/// Canonical minimum cut: V+ is the set reachable from s in the residual
/// graph. Throws NotMaximal if t is reachable.
MinCut min_cut(const FlowNetwork& net, const FlowState& state);

}  // namespace proxflow
