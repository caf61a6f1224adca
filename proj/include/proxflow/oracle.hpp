#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

// Slow reference implementations used by tests. They take plain data and do
// not depend on the solver library.
namespace proxflow::oracle {

struct Groups {
  std::size_t p = 0;
  std::vector<std::vector<std::size_t>> members;
  std::vector<double> weights;
};

struct ProxOracleOptions {
  /// Target distance to the exact solution in the Euclidean norm.
  double tol = 1e-8;
  std::size_t max_sweeps = 2'000'000;
  /// Visits blocks in a shuffled order per sweep when set.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Block-coordinate descent on the dual of the proximal problem. Each block
/// update projects one group's flow onto its scaled simplex.
/// Throws ToleranceNotReached when max_sweeps is exhausted.
std::vector<double> prox_oracle(const std::vector<double>& u, const Groups& groups, double lambda,
                                const ProxOracleOptions& opts = {});

/// Euclidean projection of v onto {x >= 0, sum(x) <= radius} by sorting.
std::vector<double> project_simplex_sorted(const std::vector<double>& v, double radius);

struct Network {
  std::size_t num_nodes = 0;
  std::size_t source = 0;
  std::size_t sink = 1;
  struct Arc {
    std::size_t tail, head;
    double capacity;  // +inf allowed
  };
  std::vector<Arc> arcs;
};

/// Edmonds-Karp on a dense residual matrix.
double maxflow_oracle(const Network& net);

/// Bisection on tau; each probe checks by max-flow whether demands |kappa_j|
/// can be routed through source capacities tau * eta_g.
double dualnorm_oracle(const std::vector<double>& kappa, const Groups& groups, double tol = 1e-10);

/// Solution of the normal equations X^T X w = X^T y.
Eigen::VectorXd least_squares_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace proxflow::oracle
