#include "proxflow/max_flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "proxflow/errors.hpp"

namespace proxflow {

namespace {

constexpr std::uint32_t kNoRegion = std::numeric_limits<std::uint32_t>::max();

}  // namespace

double flow_tolerance(const FlowNetwork& net) {
  double largest = 0.0;
  for (const auto& a : net.arcs())
    if (std::isfinite(a.capacity)) largest = std::max(largest, a.capacity);
  return 1e-10 * (1.0 + largest);
}

PushRelabel::PushRelabel(const FlowNetwork& net) {
  const std::size_t n = net.num_nodes();
  const std::size_t m = net.num_arcs();
  first_.assign(n + 1, 0);
  for (const auto& a : net.arcs()) {
    ++first_[a.tail + 1];
    ++first_[a.head + 1];
  }
  for (std::size_t v = 0; v < n; ++v) first_[v + 1] += first_[v];
  std::vector<Edge> pos(first_.begin(), first_.end() - 1);
  head_.resize(2 * m);
  rev_.resize(2 * m);
  cap_.assign(2 * m, 0.0);
  flow_.assign(2 * m, 0.0);
  infinite_.assign(2 * m, 0);
  forward_.assign(2 * m, 0);
  arc_pos_.resize(m);
  arc_capacity_.resize(m);
  for (ArcId a = 0; a < m; ++a) {
    const auto& arc = net.arc(a);
    const Edge fwd = pos[arc.tail]++;
    const Edge bwd = pos[arc.head]++;
    head_[fwd] = arc.head;
    head_[bwd] = arc.tail;
    rev_[fwd] = bwd;
    rev_[bwd] = fwd;
    arc_pos_[a] = fwd;
    forward_[fwd] = 1;
    arc_capacity_[a] = arc.capacity;
    if (std::isinf(arc.capacity)) {
      infinite_[fwd] = 1;
    } else {
      cap_[fwd] = arc.capacity;
      finite_total_ += arc.capacity;
    }
  }
  sentinel_ = 2.0 * finite_total_ + 1.0;
  for (Edge e = 0; e < 2 * m; ++e)
    if (infinite_[e]) cap_[e] = sentinel_;

  excess_.assign(n, 0.0);
  height_.assign(n, 0);
  current_.assign(n, 0);
  region_.assign(n, 0);
  region_[FlowNetwork::kSource] = kNoRegion;
  region_[FlowNetwork::kSink] = kNoRegion;
  all_next_.assign(n, kNoNode);
  all_prev_.assign(n, kNoNode);
  active_next_.assign(n, kNoNode);
}

void PushRelabel::set_capacity(ArcId a, double capacity) {
  const Edge e = arc_pos_[a];
  if (!infinite_[e]) finite_total_ -= cap_[e];
  arc_capacity_[a] = capacity;
  if (std::isinf(capacity)) {
    infinite_[e] = 1;
    cap_[e] = sentinel_;
  } else {
    infinite_[e] = 0;
    cap_[e] = capacity;
    finite_total_ += capacity;
    if (finite_total_ >= sentinel_) grow_sentinel();
  }
}

void PushRelabel::grow_sentinel() {
  sentinel_ = 2.0 * finite_total_ + 1.0;
  for (std::size_t e = 0; e < cap_.size(); ++e)
    if (infinite_[e]) cap_[e] = sentinel_;
}

double PushRelabel::capacity(ArcId a) const { return arc_capacity_[a]; }

void PushRelabel::set_flow(ArcId a, double value) {
  const Edge e = arc_pos_[a];
  flow_[e] = value;
  flow_[rev_[e]] = -value;
}

void PushRelabel::reset_flows() {
  std::fill(flow_.begin(), flow_.end(), 0.0);
  std::fill(excess_.begin(), excess_.end(), 0.0);
}

void PushRelabel::assign_region(std::span<const NodeId> nodes, std::uint32_t region_id) {
  for (NodeId v : nodes) region_[v] = region_id;
}

void PushRelabel::drop_cross_flow(std::span<const NodeId> nodes) {
  for (NodeId v : nodes) {
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      const NodeId w = head_[e];
      if (w < 2 || region_[w] == region_[v] || flow_[e] == 0.0) continue;
      flow_[e] = 0.0;
      flow_[rev_[e]] = 0.0;
    }
  }
}

void PushRelabel::solve() {
  scratch_.clear();
  for (NodeId v = 2; v < num_nodes(); ++v) scratch_.push_back(v);
  std::vector<NodeId> all;
  all.swap(scratch_);
  assign_region(all, 0);
  // Direct source-sink arcs belong to no region.
  constexpr NodeId s = FlowNetwork::kSource;
  for (Edge e = first_[s]; e < first_[s + 1]; ++e) {
    if (forward_[e] && head_[e] == FlowNetwork::kSink) {
      flow_[e] = cap_[e];
      flow_[rev_[e]] = -cap_[e];
    }
  }
  solve(all, 0);
}

void PushRelabel::solve(std::span<const NodeId> region, std::uint32_t region_id) {
  current_region_ = region_id;
  prepare(region);
  run_phase(region, FlowNetwork::kSink, true);
  bool stranded = false;
  for (NodeId v : region) {
    if (excess_[v] > 0.0) {
      stranded = true;
      break;
    }
  }
  if (stranded) run_phase(region, FlowNetwork::kSource, false);
}

void PushRelabel::prepare(std::span<const NodeId> region) {
  constexpr NodeId s = FlowNetwork::kSource;
  for (NodeId v : region) {
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      const NodeId w = head_[e];
      if (w == s && !forward_[e]) {
        // Reverse edge of (s, v): saturate the source arc.
        const Edge fwd = rev_[e];
        flow_[fwd] = cap_[fwd];
        flow_[e] = -cap_[fwd];
        continue;
      }
      if (w != FlowNetwork::kSink && w != s && region_[w] != current_region_) continue;
      if (flow_[e] > cap_[e]) {
        flow_[e] = cap_[e];
        flow_[rev_[e]] = -cap_[e];
      }
    }
  }
  for (NodeId v : region) {
    double ex = 0.0;
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      const NodeId w = head_[e];
      if (w < 2 || region_[w] == current_region_) ex -= flow_[e];
    }
    excess_[v] = ex;
  }
  // Clamping may leave a node with more outflow than inflow; cancel outflow
  // until every deficit has been pushed to the sink.
  std::deque<NodeId> deficits;
  for (NodeId v : region)
    if (excess_[v] < 0.0) deficits.push_back(v);
  while (!deficits.empty()) {
    const NodeId v = deficits.front();
    deficits.pop_front();
    for (Edge e = first_[v]; e < first_[v + 1] && excess_[v] < 0.0; ++e) {
      const NodeId w = head_[e];
      if (flow_[e] <= 0.0) continue;
      if (w >= 2 && region_[w] != current_region_) continue;
      const double r = std::min(flow_[e], -excess_[v]);
      flow_[e] -= r;
      flow_[rev_[e]] = -flow_[e];
      excess_[v] += r;
      if (w >= 2) {
        const bool was_ok = excess_[w] >= 0.0;
        excess_[w] -= r;
        if (was_ok && excess_[w] < 0.0) deficits.push_back(w);
      }
    }
    if (excess_[v] < 0.0) excess_[v] = 0.0;  // rounding residue only
  }
}

void PushRelabel::bucket_insert(NodeId v, std::uint32_t h) {
  all_prev_[v] = kNoNode;
  all_next_[v] = all_head_[h];
  if (all_head_[h] != kNoNode) all_prev_[all_head_[h]] = v;
  all_head_[h] = v;
  if (static_cast<std::int64_t>(h) > max_height_) max_height_ = h;
}

void PushRelabel::bucket_remove(NodeId v) {
  const std::uint32_t h = height_[v];
  if (all_prev_[v] != kNoNode) {
    all_next_[all_prev_[v]] = all_next_[v];
  } else {
    all_head_[h] = all_next_[v];
  }
  if (all_next_[v] != kNoNode) all_prev_[all_next_[v]] = all_prev_[v];
  all_next_[v] = all_prev_[v] = kNoNode;
}

void PushRelabel::activate(NodeId v) {
  const std::uint32_t h = height_[v];
  active_next_[v] = active_head_[h];
  active_head_[h] = v;
  if (static_cast<std::int64_t>(h) > max_active_) max_active_ = h;
}

void PushRelabel::global_relabel(std::span<const NodeId> region, NodeId target) {
  ++counters_.global_relabels;
  if (logging_) log_.push_back({Event::kGlobalRelabel, target, kNoNode});
  relabels_since_global_ = 0;
  std::fill(all_head_.begin(), all_head_.end(), kNoNode);
  std::fill(active_head_.begin(), active_head_.end(), kNoNode);
  for (NodeId v : region) height_[v] = unreachable_;
  height_[target] = 0;

  scratch_.clear();
  for (NodeId v : region) {
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      if (head_[e] == target && residual(e) > 0.0) {
        height_[v] = 1;
        scratch_.push_back(v);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < scratch_.size(); ++i) {
    const NodeId v = scratch_[i];
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      const NodeId w = head_[e];
      if (w < 2 || region_[w] != current_region_ || height_[w] != unreachable_) continue;
      if (residual(rev_[e]) > 0.0) {
        height_[w] = height_[v] + 1;
        scratch_.push_back(w);
      }
    }
  }

  max_active_ = -1;
  max_height_ = -1;
  for (NodeId v : region) {
    if (height_[v] >= unreachable_) continue;
    bucket_insert(v, height_[v]);
    current_[v] = first_[v];
    if (excess_[v] > 0.0) activate(v);
  }
}

void PushRelabel::run_phase(std::span<const NodeId> region, NodeId target, bool use_gap) {
  unreachable_ = static_cast<std::uint32_t>(region.size()) + 1;
  all_head_.assign(unreachable_ + 1, kNoNode);
  active_head_.assign(unreachable_ + 1, kNoNode);
  global_relabel(region, target);
  while (max_active_ >= 0) {
    const NodeId v = active_head_[max_active_];
    if (v == kNoNode) {
      --max_active_;
      continue;
    }
    active_head_[max_active_] = active_next_[v];
    if (height_[v] != max_active_ || excess_[v] <= 0.0) continue;
    discharge(v, target, use_gap, region);
    if (relabels_since_global_ >= region.size()) global_relabel(region, target);
  }
}

void PushRelabel::discharge(NodeId v, NodeId target, bool use_gap, std::span<const NodeId> region) {
  (void)region;
  while (excess_[v] > 0.0) {
    const std::uint32_t h = height_[v];
    const Edge end = first_[v + 1];
    Edge e = current_[v];
    for (; e < end; ++e) {
      const NodeId w = head_[e];
      if (!in_scope(w, target)) continue;
      if (height_[w] + 1 != h) continue;
      const double r = residual(e);
      if (r <= 0.0) continue;
      push(e, v, w, std::min(excess_[v], r));
      if (excess_[v] <= 0.0) break;
    }
    if (excess_[v] <= 0.0) {
      current_[v] = e;
      return;
    }
    relabel(v, target, use_gap);
    if (height_[v] >= unreachable_) return;
  }
}

void PushRelabel::push(Edge e, NodeId v, NodeId w, double delta) {
  if (delta == residual(e)) {
    flow_[e] = cap_[e];
  } else {
    flow_[e] += delta;
  }
  flow_[rev_[e]] = -flow_[e];
  const bool was_idle = excess_[w] <= 0.0;
  if (delta == excess_[v]) {
    excess_[v] = 0.0;
  } else {
    excess_[v] -= delta;
  }
  excess_[w] += delta;
  ++counters_.pushes;
  if (logging_) log_.push_back({Event::kPush, v, w});
  if (w >= 2 && was_idle && excess_[w] > 0.0 && height_[w] < unreachable_) activate(w);
}

void PushRelabel::relabel(NodeId v, NodeId target, bool use_gap) {
  ++counters_.relabels;
  ++relabels_since_global_;
  if (logging_) log_.push_back({Event::kRelabel, v, kNoNode});
  const std::uint32_t old = height_[v];
  bucket_remove(v);
  if (use_gap && all_head_[old] == kNoNode) {
    gap(old);
    height_[v] = unreachable_;
    return;
  }
  std::uint32_t next = unreachable_;
  for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
    const NodeId w = head_[e];
    if (!in_scope(w, target) || residual(e) <= 0.0) continue;
    next = std::min(next, height_[w] + 1);
  }
  height_[v] = next;
  if (next >= unreachable_) {
    height_[v] = unreachable_;
    return;
  }
  bucket_insert(v, next);
  current_[v] = first_[v];
}

void PushRelabel::gap(std::uint32_t h) {
  ++counters_.gaps;
  for (std::int64_t k = h + 1; k <= max_height_; ++k) {
    for (NodeId v = all_head_[k]; v != kNoNode;) {
      const NodeId next = all_next_[v];
      height_[v] = unreachable_;
      all_next_[v] = all_prev_[v] = kNoNode;
      if (logging_) log_.push_back({Event::kGap, v, h});
      v = next;
    }
    all_head_[k] = kNoNode;
  }
  max_height_ = static_cast<std::int64_t>(h) - 1;
}

void PushRelabel::source_reachable(std::span<const NodeId> region, std::vector<char>& mark) const {
  if (region.empty()) return;
  const std::uint32_t id = region_[region.front()];
  std::vector<NodeId> queue;
  for (NodeId v : region) {
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      if (head_[e] != FlowNetwork::kSource) continue;
      if (residual(rev_[e]) > 0.0 && !mark[v]) {
        mark[v] = 1;
        queue.push_back(v);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const NodeId v = queue[i];
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) {
      const NodeId w = head_[e];
      if (w < 2 || region_[w] != id || mark[w] || residual(e) <= 0.0) continue;
      mark[w] = 1;
      queue.push_back(w);
    }
  }
}

FlowState PushRelabel::snapshot() const {
  FlowState st;
  const std::size_t n = num_nodes();
  st.flow.resize(num_arcs());
  for (ArcId a = 0; a < num_arcs(); ++a) st.flow[a] = flow_[arc_pos_[a]];
  st.excess.assign(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    double ex = 0.0;
    for (Edge e = first_[v]; e < first_[v + 1]; ++e) ex -= flow_[e];
    st.excess[v] = ex;
  }
  st.value = st.excess[FlowNetwork::kSink];
  st.excess[FlowNetwork::kSource] = 0.0;
  st.height = height_;
  st.counters = counters_;
  return st;
}

FlowState max_flow(const FlowNetwork& net, const FlowState* warm) {
  PushRelabel engine(net);
  if (warm) {
    if (warm->flow.size() != net.num_arcs()) throw InvalidWarmStart("warm flow has wrong number of arcs");
    const double tol = flow_tolerance(net);
    for (ArcId a = 0; a < net.num_arcs(); ++a) {
      const double f = warm->flow[a];
      if (!std::isfinite(f) || f < -tol || f > net.arc(a).capacity + tol) {
        throw InvalidWarmStart("warm flow violates the capacity of arc " + std::to_string(a));
      }
      engine.set_flow(a, std::clamp(f, 0.0, net.arc(a).capacity));
    }
  }
  engine.solve();
  return engine.snapshot();
}

MinCut min_cut(const FlowNetwork& net, const FlowState& state) {
  if (state.flow.size() != net.num_arcs()) throw DimensionMismatch("flow state does not match network");
  MinCut cut;
  cut.source_side.assign(net.num_nodes(), 0);
  cut.source_side[FlowNetwork::kSource] = 1;
  std::vector<NodeId> queue{FlowNetwork::kSource};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const NodeId v = queue[i];
    for (ArcId a : net.out_arcs(v)) {
      const NodeId w = net.arc(a).head;
      if (!cut.source_side[w] && net.arc(a).capacity - state.flow[a] > 0.0) {
        cut.source_side[w] = 1;
        queue.push_back(w);
      }
    }
    for (ArcId a : net.in_arcs(v)) {
      const NodeId w = net.arc(a).tail;
      if (!cut.source_side[w] && state.flow[a] > 0.0) {
        cut.source_side[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (cut.source_side[FlowNetwork::kSink]) throw NotMaximal("sink is reachable in the residual graph");
  for (const auto& a : net.arcs())
    if (cut.source_side[a.tail] && !cut.source_side[a.head]) cut.capacity += a.capacity;
  return cut;
}

}  // namespace proxflow
