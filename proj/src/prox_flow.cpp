#include "proxflow/prox_flow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <random>

#include "proxflow/errors.hpp"
#include "proxflow/flow_graph.hpp"

namespace proxflow {

std::vector<double> project_l1_box(const ProjectionSpec& spec) {
  const auto& u = spec.targets;
  const std::size_t n = u.size();
  const bool has_box = !spec.box.empty();
  if (has_box && spec.box.size() != n) throw DimensionMismatch("box and targets differ in length");
  if (!(spec.radius >= 0.0)) throw InvalidArgument("projection radius must be nonnegative");
  const double inf = std::numeric_limits<double>::infinity();
  auto bound = [&](std::size_t i) { return has_box ? spec.box[i] : inf; };

  std::vector<double> out(n, 0.0);
  double capped = 0.0;
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    capped += std::clamp(u[i], 0.0, bound(i));
    top = std::max(top, u[i]);
  }
  if (capped <= spec.radius) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(u[i], 0.0, bound(i));
    return out;
  }

  // phi(tau) = sum_i clamp(u_i - tau, 0, b_i) is nonincreasing with
  // breakpoints u_i - b_i and u_i. Keep phi(lo) > radius >= phi(hi); elements
  // without a breakpoint inside (lo, hi) are folded into the accumulators.
  double lo = 0.0, hi = top;
  double constant = 0.0, linear_sum = 0.0;
  std::size_t linear_count = 0;
  std::vector<std::size_t> open;
  open.reserve(n);
  auto settle = [&](std::size_t i) {
    const double upper = u[i];
    const double lower = u[i] - bound(i);
    if (upper <= lo) return true;
    if (lower >= hi) {
      constant += bound(i);
      return true;
    }
    if (lower <= lo && upper >= hi) {
      linear_sum += u[i];
      ++linear_count;
      return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (!settle(i)) open.push_back(i);

  std::minstd_rand rng(0x5eed);
  while (!open.empty()) {
    const std::size_t i = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    const double lower = u[i] - bound(i);
    double pivot = u[i];
    if (lower > lo && lower < hi && (!(u[i] < hi) || (rng() & 1))) pivot = lower;
    double phi = constant + linear_sum - static_cast<double>(linear_count) * pivot;
    for (auto k : open) phi += std::clamp(u[k] - pivot, 0.0, bound(k));
    if (phi > spec.radius) {
      lo = pivot;
    } else {
      hi = pivot;
    }
    std::erase_if(open, settle);
  }
  double tau = hi;
  if (linear_count > 0) tau = (constant + linear_sum - spec.radius) / static_cast<double>(linear_count);
  tau = std::clamp(tau, lo, hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(u[i] - tau, 0.0, bound(i));
  return out;
}

namespace {

struct Component {
  FlowNetwork net;
  std::unique_ptr<PushRelabel> engine;
  std::vector<NodeId> nodes;
  std::vector<ArcId> source_arc;  // per local node, kNoArc if none
  std::vector<ArcId> sink_arc;
  std::vector<double> scratch;    // per local node

  struct Stats {
    std::size_t depth = 0;
    std::size_t splits = 0;
    std::size_t calls = 0;
    FlowCounters counters;
  };
};

struct RegionTask {
  std::vector<NodeId> nodes;
  std::uint32_t id;
  std::size_t depth;
};

}  // namespace

struct ProxOperator::Impl {
  GroupStructure gs;
  ProxOptions opts;
  std::vector<Component> comps;
  std::vector<std::size_t> var_comp;
  std::vector<NodeId> var_local;
  std::vector<std::size_t> group_comp;
  std::vector<NodeId> group_local;

  Component::Stats solve_component(Component& c, const std::vector<double>& mag, double lambda);
  void group_flows(const Component& c, std::vector<std::vector<double>>& out) const;
};

ProxOperator::ProxOperator(const GroupStructure& gs, ProxOptions opts) : impl_(std::make_unique<Impl>()) {
  gs.validate();
  impl_->gs = gs;
  impl_->opts = opts;
  FlowNetwork net = build_canonical(gs, 1.0);
  if (opts.simplify) net = simplify_nested(net, gs);
  auto parts = connected_components(net);
  const std::size_t p = gs.num_variables();
  impl_->var_comp.assign(p, 0);
  impl_->var_local.assign(p, kNoNode);
  impl_->group_comp.assign(gs.num_groups(), 0);
  impl_->group_local.assign(gs.num_groups(), kNoNode);
  impl_->comps.resize(parts.size());
  for (std::size_t ci = 0; ci < parts.size(); ++ci) {
    Component& c = impl_->comps[ci];
    c.net = std::move(parts[ci]);
    const std::size_t n = c.net.num_nodes();
    c.source_arc.assign(n, kNoArc);
    c.sink_arc.assign(n, kNoArc);
    c.scratch.assign(n, 0.0);
    for (NodeId v = 2; v < n; ++v) {
      c.nodes.push_back(v);
      if (c.net.kind(v) == NodeKind::kVariable) {
        impl_->var_comp[c.net.index(v)] = ci;
        impl_->var_local[c.net.index(v)] = v;
      } else {
        impl_->group_comp[c.net.index(v)] = ci;
        impl_->group_local[c.net.index(v)] = v;
      }
    }
    for (ArcId a = 0; a < c.net.num_arcs(); ++a) {
      const auto& arc = c.net.arc(a);
      if (arc.tail == FlowNetwork::kSource) c.source_arc[arc.head] = a;
      if (arc.head == FlowNetwork::kSink) {
        c.sink_arc[arc.tail] = a;
        c.net.set_capacity(a, 0.0);
      }
    }
    c.engine = std::make_unique<PushRelabel>(c.net);
  }
}

ProxOperator::~ProxOperator() = default;
ProxOperator::ProxOperator(ProxOperator&&) noexcept = default;
ProxOperator& ProxOperator::operator=(ProxOperator&&) noexcept = default;

const GroupStructure& ProxOperator::groups() const noexcept { return impl_->gs; }
const ProxOptions& ProxOperator::options() const noexcept { return impl_->opts; }

std::size_t ProxOperator::num_nodes() const noexcept {
  std::size_t n = 0;
  for (const auto& c : impl_->comps) n += c.net.num_nodes() - 2;
  return n + 2;
}

std::size_t ProxOperator::num_arcs() const noexcept {
  std::size_t m = 0;
  for (const auto& c : impl_->comps) m += c.net.num_arcs();
  return m;
}

Component::Stats ProxOperator::Impl::solve_component(Component& c, const std::vector<double>& mag,
                                                     double lambda) {
  Component::Stats stats;
  PushRelabel& eng = *c.engine;
  const FlowCounters before = eng.counters();

  double largest = 0.0;
  for (NodeId v : c.nodes) {
    if (c.net.kind(v) == NodeKind::kGroup) {
      const double cap = lambda * gs.group(c.net.index(v)).weight;
      eng.set_capacity(c.source_arc[v], cap);
      largest = std::max(largest, cap);
    } else {
      largest = std::max(largest, mag[c.net.index(v)]);
    }
  }
  const double eps = 1e-10 * (1.0 + largest);
  const std::size_t limit = c.nodes.size();
  const std::size_t ci = static_cast<std::size_t>(&c - comps.data());

  std::uint32_t next_id = 1;
  eng.assign_region(c.nodes, 0);
  std::vector<RegionTask> stack;
  stack.push_back({c.nodes, 0, 0});
  std::vector<char> mark(c.net.num_nodes(), 0);
  ProjectionSpec spec;
  std::vector<NodeId> vars;

  while (!stack.empty()) {
    RegionTask task = std::move(stack.back());
    stack.pop_back();
    stats.depth = std::max(stats.depth, task.depth);

    vars.clear();
    double weight = 0.0;
    for (NodeId v : task.nodes) {
      if (c.net.kind(v) == NodeKind::kVariable) {
        vars.push_back(v);
        c.scratch[v] = 0.0;
      } else {
        weight += gs.group(c.net.index(v)).weight;
      }
    }
    if (opts.box_projection) {
      for (NodeId v : task.nodes) {
        if (c.net.kind(v) != NodeKind::kGroup) continue;
        const auto& g = gs.group(c.net.index(v));
        for (auto j : g.members) {
          const NodeId x = var_local[j];
          if (var_comp[j] == ci && eng.region_of(x) == task.id) c.scratch[x] += lambda * g.weight;
        }
      }
    }
    spec.targets.resize(vars.size());
    spec.box.clear();
    for (std::size_t i = 0; i < vars.size(); ++i) spec.targets[i] = mag[c.net.index(vars[i])];
    if (opts.box_projection) {
      spec.box.resize(vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i) spec.box[i] = c.scratch[vars[i]];
    }
    spec.radius = lambda * weight;
    const auto gamma = project_l1_box(spec);

    for (std::size_t i = 0; i < vars.size(); ++i) eng.set_capacity(c.sink_arc[vars[i]], gamma[i]);
    eng.solve(task.nodes, task.id);
    ++stats.calls;

    bool done = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (gamma[i] - eng.flow(c.sink_arc[vars[i]]) > eps) {
        done = false;
        break;
      }
    }
    if (done) continue;

    for (NodeId v : task.nodes) mark[v] = 0;
    eng.source_reachable(task.nodes, mark);
    RegionTask plus{{}, next_id++, task.depth + 1};
    RegionTask minus{{}, next_id++, task.depth + 1};
    for (NodeId v : task.nodes) (mark[v] ? plus : minus).nodes.push_back(v);
    if (plus.nodes.empty() || minus.nodes.empty()) {
      throw TerminationError("min-cut split produced an empty side");
    }
    if (++stats.splits > limit) throw TerminationError("number of splits exceeds the node count");
    eng.assign_region(plus.nodes, plus.id);
    eng.assign_region(minus.nodes, minus.id);
    eng.drop_cross_flow(plus.nodes);
    stack.push_back(std::move(minus));
    stack.push_back(std::move(plus));
  }

  stats.counters = eng.counters();
  stats.counters.pushes -= before.pushes;
  stats.counters.relabels -= before.relabels;
  stats.counters.global_relabels -= before.global_relabels;
  stats.counters.gaps -= before.gaps;
  return stats;
}

void ProxOperator::Impl::group_flows(const Component& c, std::vector<std::vector<double>>& out) const {
  // Group nodes are visited parents first (strictly larger groups); each node
  // splits its outflow proportionally to the origins of its inflow.
  std::vector<NodeId> order;
  for (NodeId v : c.nodes)
    if (c.net.kind(v) == NodeKind::kGroup) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return gs.group(c.net.index(a)).members.size() > gs.group(c.net.index(b)).members.size();
  });
  std::vector<std::map<std::size_t, double>> origin(c.net.num_nodes());
  for (NodeId v : order) {
    const std::size_t k = c.net.index(v);
    origin[v][k] += c.engine->flow(c.source_arc[v]);
    double total = 0.0;
    for (const auto& [g, amount] : origin[v]) total += amount;
    if (total <= 0.0) continue;
    for (ArcId a : c.net.out_arcs(v)) {
      const double f = c.engine->flow(a);
      if (f <= 0.0) continue;
      const NodeId w = c.net.arc(a).head;
      for (const auto& [g, amount] : origin[v]) {
        const double share = f * amount / total;
        if (c.net.kind(w) == NodeKind::kGroup) {
          origin[w][g] += share;
        } else {
          const auto& mem = gs.group(g).members;
          const auto pos = std::lower_bound(mem.begin(), mem.end(), c.net.index(w)) - mem.begin();
          out[g][static_cast<std::size_t>(pos)] += share;
        }
      }
    }
  }
}

ProxResult ProxOperator::operator()(const std::vector<double>& u, double lambda) {
  Impl& m = *impl_;
  const std::size_t p = m.gs.num_variables();
  if (u.size() != p) throw DimensionMismatch("input has length " + std::to_string(u.size()) + ", expected " + std::to_string(p));
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be a finite nonnegative number");
  for (double x : u)
    if (!std::isfinite(x)) throw InvalidArgument("input contains a non-finite value");

  ProxResult res;
  res.xi_bar.assign(p, 0.0);
  std::vector<double> mag(p);
  for (std::size_t j = 0; j < p; ++j) mag[j] = std::fabs(u[j]);

  if (lambda > 0.0) {
    std::vector<Component::Stats> stats(m.comps.size());
    if (m.opts.parallel_components && m.comps.size() > 1) {
      std::vector<std::future<Component::Stats>> jobs;
      jobs.reserve(m.comps.size());
      for (auto& c : m.comps)
        jobs.push_back(std::async(std::launch::async, [&m, &c, &mag, lambda] { return m.solve_component(c, mag, lambda); }));
      for (std::size_t i = 0; i < jobs.size(); ++i) stats[i] = jobs[i].get();
    } else {
      for (std::size_t i = 0; i < m.comps.size(); ++i) stats[i] = m.solve_component(m.comps[i], mag, lambda);
    }
    for (std::size_t i = 0; i < m.comps.size(); ++i) {
      res.recursion_depth = std::max(res.recursion_depth, stats[i].depth);
      res.splits += stats[i].splits;
      res.maxflow_calls += stats[i].calls;
      res.counters += stats[i].counters;
      res.max_component_nodes = std::max(res.max_component_nodes, m.comps[i].nodes.size());
    }
    for (const auto& c : m.comps) {
      for (NodeId v : c.nodes)
        if (c.net.kind(v) == NodeKind::kVariable) res.xi_bar[c.net.index(v)] = c.engine->flow(c.sink_arc[v]);
    }
  }

  res.w.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double r = std::max(mag[j] - res.xi_bar[j], 0.0);
    res.w[j] = u[j] < 0.0 ? -r : r;
  }

  if (m.opts.keep_group_flows || m.opts.check) {
    std::vector<std::vector<double>> flows(m.gs.num_groups());
    for (std::size_t k = 0; k < flows.size(); ++k) flows[k].assign(m.gs.group(k).members.size(), 0.0);
    if (lambda > 0.0)
      for (const auto& c : m.comps) m.group_flows(c, flows);
    for (std::size_t k = 0; k < flows.size(); ++k) {
      const auto& mem = m.gs.group(k).members;
      for (std::size_t i = 0; i < mem.size(); ++i)
        if (u[mem[i]] < 0.0) flows[k][i] = -flows[k][i];
    }
    res.group_flows = std::move(flows);
  }
  if (m.opts.check) res.optimality_residual = check_optimality(u, m.gs, lambda, res);
  return res;
}

ProxResult prox(const std::vector<double>& u, const GroupStructure& gs, double lambda, const ProxOptions& opts) {
  if (u.size() != gs.num_variables()) throw DimensionMismatch("input length does not match the group structure");
  ProxOperator op(gs, opts);
  return op(u, lambda);
}

double check_optimality(const std::vector<double>& u, const GroupStructure& gs, double lambda,
                        const ProxResult& result) {
  if (!result.group_flows) throw InvalidArgument("optimality check needs per-group flows");
  const auto& flows = *result.group_flows;
  const std::size_t p = gs.num_variables();
  if (u.size() != p || result.w.size() != p || flows.size() != gs.num_groups()) {
    throw DimensionMismatch("result does not match the group structure");
  }
  double worst = 0.0;
  std::vector<double> total(p, 0.0);
  for (std::size_t k = 0; k < gs.num_groups(); ++k) {
    const auto& g = gs.group(k);
    double l1 = 0.0, inner = 0.0, wmax = 0.0;
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      const std::size_t j = g.members[i];
      const double xi = flows[k][i];
      total[j] += xi;
      l1 += std::fabs(xi);
      inner += result.w[j] * xi;
      wmax = std::max(wmax, std::fabs(result.w[j]));
    }
    const double budget = lambda * g.weight;
    worst = std::max(worst, l1 - budget);
    const double active = std::max(std::fabs(inner - wmax * l1), std::fabs(l1 - budget));
    worst = std::max(worst, std::min(active, wmax));
  }
  for (std::size_t j = 0; j < p; ++j) worst = std::max(worst, std::fabs(result.w[j] - (u[j] - total[j])));
  return std::max(worst, 0.0);
}

double flow_rule_violation(const GroupStructure& gs, const ProxResult& result, double tol) {
  if (!result.group_flows) throw InvalidArgument("flow rule check needs per-group flows");
  const auto& flows = *result.group_flows;
  double worst = 0.0;
  for (std::size_t k = 0; k < gs.num_groups(); ++k) {
    const auto& mem = gs.group(k).members;
    double wmax = 0.0;
    for (auto j : mem) wmax = std::max(wmax, std::fabs(result.w[j]));
    for (std::size_t i = 0; i < mem.size(); ++i)
      if (std::fabs(flows[k][i]) > tol) worst = std::max(worst, wmax - std::fabs(result.w[mem[i]]));
  }
  return worst;
}

}  // namespace proxflow
