#include "proxflow/dual_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxflow/errors.hpp"
#include "proxflow/flow_graph.hpp"
#include "proxflow/max_flow.hpp"

namespace proxflow {

double penalty(const std::vector<double>& w, const GroupStructure& gs) {
  if (w.size() != gs.num_variables()) throw DimensionMismatch("vector length does not match the group structure");
  double total = 0.0;
  for (const auto& g : gs.groups()) {
    double m = 0.0;
    for (auto j : g.members) m = std::max(m, std::fabs(w[j]));
    total += g.weight * m;
  }
  return total;
}

namespace {

struct Part {
  FlowNetwork net;
  std::unique_ptr<PushRelabel> engine;
  std::vector<NodeId> nodes;
  std::vector<ArcId> source_arc;
  std::vector<ArcId> sink_arc;
};

}  // namespace

struct DualNorm::Impl {
  GroupStructure gs;
  std::vector<Part> parts;
  std::vector<char> covered;
};

DualNorm::DualNorm(const GroupStructure& gs) : impl_(std::make_unique<Impl>()) {
  gs.validate();
  impl_->gs = gs;
  impl_->covered.assign(gs.num_variables(), 0);
  for (const auto& g : gs.groups())
    for (auto j : g.members) impl_->covered[j] = 1;
  auto comps = connected_components(simplify_nested(build_canonical(gs, 1.0), gs));
  for (auto& net : comps) {
    Part part;
    part.net = std::move(net);
    const std::size_t n = part.net.num_nodes();
    part.source_arc.assign(n, kNoArc);
    part.sink_arc.assign(n, kNoArc);
    bool has_group = false;
    for (NodeId v = 2; v < n; ++v) {
      part.nodes.push_back(v);
      has_group |= part.net.kind(v) == NodeKind::kGroup;
    }
    if (!has_group) continue;  // lone uncovered variable
    for (ArcId a = 0; a < part.net.num_arcs(); ++a) {
      const auto& arc = part.net.arc(a);
      if (arc.tail == FlowNetwork::kSource) part.source_arc[arc.head] = a;
      if (arc.head == FlowNetwork::kSink) {
        part.sink_arc[arc.tail] = a;
        part.net.set_capacity(a, 0.0);
      }
    }
    part.engine = std::make_unique<PushRelabel>(part.net);
    impl_->parts.push_back(std::move(part));
  }
}

DualNorm::~DualNorm() = default;
DualNorm::DualNorm(DualNorm&&) noexcept = default;
DualNorm& DualNorm::operator=(DualNorm&&) noexcept = default;

DualNormResult DualNorm::operator()(const std::vector<double>& kappa) {
  const auto& gs = impl_->gs;
  if (kappa.size() != gs.num_variables()) throw DimensionMismatch("vector length does not match the group structure");
  DualNormResult res;
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    if (!std::isfinite(kappa[j])) throw InvalidArgument("kappa contains a non-finite value");
    if (!impl_->covered[j] && kappa[j] != 0.0) res.tau = std::numeric_limits<double>::infinity();
  }
  if (std::isinf(res.tau)) return res;

  std::vector<char> mark;
  for (auto& part : impl_->parts) {
    PushRelabel& eng = *part.engine;
    double largest = 0.0;
    for (NodeId v : part.nodes) {
      if (part.net.kind(v) != NodeKind::kVariable) continue;
      const double d = std::fabs(kappa[part.net.index(v)]);
      eng.set_capacity(part.sink_arc[v], d);
      largest = std::max(largest, d);
    }
    if (largest == 0.0) continue;
    const double eps = 1e-10 * (1.0 + largest);

    std::vector<NodeId> region = part.nodes;
    std::uint32_t id = 0;
    eng.assign_region(region, id);
    mark.assign(part.net.num_nodes(), 0);
    while (true) {
      double demand = 0.0, weight = 0.0;
      for (NodeId v : region) {
        if (part.net.kind(v) == NodeKind::kVariable) {
          demand += std::fabs(kappa[part.net.index(v)]);
        } else {
          weight += gs.group(part.net.index(v)).weight;
        }
      }
      const double tau = demand / weight;
      for (NodeId v : region)
        if (part.net.kind(v) == NodeKind::kGroup) eng.set_capacity(part.source_arc[v], tau * gs.group(part.net.index(v)).weight);
      eng.solve(region, id);

      bool saturated = true;
      for (NodeId v : region) {
        if (part.net.kind(v) == NodeKind::kVariable &&
            std::fabs(kappa[part.net.index(v)]) - eng.flow(part.sink_arc[v]) > eps) {
          saturated = false;
          break;
        }
      }
      if (saturated) {
        res.tau = std::max(res.tau, tau);
        break;
      }
      for (NodeId v : region) mark[v] = 0;
      eng.source_reachable(region, mark);
      std::vector<NodeId> rest;
      for (NodeId v : region)
        if (!mark[v]) rest.push_back(v);
      if (rest.size() == region.size() || rest.empty()) {
        throw TerminationError("dual norm descent did not shrink the node set");
      }
      region = std::move(rest);
      eng.assign_region(region, ++id);
      eng.drop_cross_flow(region);
      ++res.iterations;
    }
  }
  return res;
}

DualNormResult dual_norm(const std::vector<double>& kappa, const GroupStructure& gs) {
  DualNorm eval(gs);
  return eval(kappa);
}

}  // namespace proxflow
