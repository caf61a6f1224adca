#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "proxflow/group_model.hpp"
#include "proxflow/max_flow.hpp"

namespace proxflow {

/// Projection of nonnegative targets onto {0 <= g <= box, sum(g) <= radius}.
/// An empty `box` means no upper bounds.
struct ProjectionSpec {
  std::vector<double> targets;
  double radius = 0.0;
  std::vector<double> box;
};

/// Randomized pivot over the breakpoints of the piecewise-linear threshold
/// function; expected linear time.
std::vector<double> project_l1_box(const ProjectionSpec& spec);

struct ProxOptions {
  /// Adds the per-variable upper bounds to each projection.
  bool box_projection = true;
  /// Collapses nested groups before solving.
  bool simplify = true;
  /// Recovers per-group flows (needed by check_optimality).
  bool keep_group_flows = false;
  /// Solves connected components on separate threads.
  bool parallel_components = false;
  /// Computes the optimality residual; implies keep_group_flows.
  bool check = false;
};

struct ProxResult {
  std::vector<double> w;
  /// Total flow into each variable, before sign restoration.
  std::vector<double> xi_bar;
  std::size_t recursion_depth = 0;
  std::size_t splits = 0;
  std::size_t maxflow_calls = 0;
  /// Largest node count of any component; splits never exceed it.
  std::size_t max_component_nodes = 0;
  FlowCounters counters;
  /// Signed flow of group k on its members, aligned with group(k).members.
  std::optional<std::vector<std::vector<double>>> group_flows;
  std::optional<double> optimality_residual;
};

/// Reusable proximal operator for a fixed group structure. The flow network
/// and its push-relabel state survive between calls, so consecutive calls
/// with nearby inputs are warm-started. Not safe for concurrent calls.
class ProxOperator {
 public:
  ProxOperator(const GroupStructure& gs, ProxOptions opts = {});
  ~ProxOperator();
  ProxOperator(ProxOperator&&) noexcept;
  ProxOperator& operator=(ProxOperator&&) noexcept;

  /// argmin_w 0.5*||u - w||^2 + lambda * Omega(w).
  ProxResult operator()(const std::vector<double>& u, double lambda);

  const GroupStructure& groups() const noexcept;
  const ProxOptions& options() const noexcept;
  /// Total nodes and arcs over all component networks.
  std::size_t num_nodes() const noexcept;
  std::size_t num_arcs() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ProxResult prox(const std::vector<double>& u, const GroupStructure& gs, double lambda,
                const ProxOptions& opts = {});

/// Largest violation of the optimality conditions (feasibility of the group
/// flows, reconstruction of w, and per-group complementarity). Requires
/// result.group_flows.
double check_optimality(const std::vector<double>& u, const GroupStructure& gs, double lambda,
                        const ProxResult& result);

/// Largest amount by which a group sends flow (more than `tol`) to a member
/// whose |w_j| is below the group maximum, measured as max|w_g| - |w_j|.
double flow_rule_violation(const GroupStructure& gs, const ProxResult& result, double tol = 1e-9);

}  // namespace proxflow
