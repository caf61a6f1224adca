#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <memory>
#include <vector>

#include "proxflow/group_model.hpp"
#include "proxflow/prox_flow.hpp"

namespace proxflow {

/// min_w f(Xw) + lambda * Omega(w) with f the squared loss 0.5*||y - z||^2.
struct Problem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  GroupStructure groups;
  double lambda = 0.0;

  /// Throws DimensionMismatch, InvalidArgument or GroupError.
  void validate() const;
};

/// Differentiable loss f(z) with its Fenchel conjugate.
class Loss {
 public:
  virtual ~Loss() = default;
  virtual double value(const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& z) const = 0;
  virtual double conjugate(const Eigen::VectorXd& kappa) const = 0;
};

class SquaredLoss final : public Loss {
 public:
  explicit SquaredLoss(const Eigen::VectorXd& y) : y_(y) {}
  double value(const Eigen::VectorXd& z) const override { return 0.5 * (y_ - z).squaredNorm(); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& z) const override { return z - y_; }
  double conjugate(const Eigen::VectorXd& kappa) const override { return 0.5 * kappa.squaredNorm() + y_.dot(kappa); }

 private:
  const Eigen::VectorXd& y_;
};

struct SolverConfig {
  /// Stop once gap <= gap_tol * max(1, |primal|).
  double gap_tol = 1e-4;
  /// Backtracking factor, > 1.
  double nu = 2.0;
  /// Initial Lipschitz estimate; <= 0 means 10 power iterations on X^T X.
  double L0 = 0.0;
  std::size_t max_iter = 10000;
  /// The gap is evaluated (and a trace record written) every this many
  /// iterations.
  std::size_t gap_period = 10;
  /// Wall-clock budget in seconds.
  double time_budget = std::numeric_limits<double>::infinity();
  ProxOptions prox;
};

struct TraceRecord {
  std::size_t iter = 0;
  double time_s = 0.0;
  double primal = 0.0;
  double gap = 0.0;
};
using SolveTrace = std::vector<TraceRecord>;

struct SolveResult {
  Eigen::VectorXd w;
  SolveTrace trace;
  /// False when max_iter or the time budget ran out first.
  bool converged = false;
  std::size_t iterations = 0;
  double primal = 0.0;
  double gap = 0.0;
  double lipschitz = 0.0;
};

double primal_objective(const Problem& prob, const Eigen::VectorXd& w);

/// Fenchel duality gap evaluator; keeps its dual-norm networks between calls.
class DualityGap {
 public:
  struct Value {
    double primal = 0.0;
    /// Clamped at zero.
    double gap = 0.0;
    /// Before clamping; at least -1e-9 * max(1, |primal|) up to rounding.
    double raw_gap = 0.0;
    /// Omega*(X^T grad f(Xw)).
    double dual_norm = 0.0;
  };

  explicit DualityGap(const Problem& prob);
  ~DualityGap();
  DualityGap(DualityGap&&) noexcept;
  DualityGap& operator=(DualityGap&&) noexcept;

  Value operator()(const Eigen::VectorXd& w);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double duality_gap(const Problem& prob, const Eigen::VectorXd& w);

/// Squared spectral norm of X from `iters` power iterations (deterministic
/// start vector).
double lipschitz_estimate(const Eigen::MatrixXd& X, int iters = 10);

/// Accelerated proximal gradient with backtracking on the Lipschitz constant.
SolveResult fista(const Problem& prob, const SolverConfig& cfg = {});

/// A subgradient of Omega at w: per group, eta_g * sign(w_j) on the first
/// coordinate of largest magnitude (nothing when the group is zero).
Eigen::VectorXd penalty_subgradient(const Eigen::VectorXd& w, const GroupStructure& gs);

/// w <- w - a/(k+b) * (X^T grad f(Xw) + lambda * subgradient), k from 0.
SolveResult subgradient_baseline(const Problem& prob, double a, double b, const SolverConfig& cfg = {});

struct StepSizeChoice {
  double a = 0.0;
  double b = 0.0;
  double primal = 0.0;
};

/// Grid search over a in {1e-3, ..., 10} and b in {1e2, 1e3, 1e4}; each pair
/// runs `iters` iterations and the lowest final primal value wins.
StepSizeChoice tune_subgradient(const Problem& prob, std::size_t iters);

}  // namespace proxflow
