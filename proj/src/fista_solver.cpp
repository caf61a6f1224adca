#include "proxflow/fista_solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "proxflow/dual_norm.hpp"
#include "proxflow/errors.hpp"

namespace proxflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

bool reached(double gap, double primal, double tol) { return gap <= tol * std::max(1.0, std::fabs(primal)); }

}  // namespace

void Problem::validate() const {
  if (X.rows() != y.size()) throw DimensionMismatch("X has " + std::to_string(X.rows()) + " rows but y has " + std::to_string(y.size()) + " entries");
  if (static_cast<std::size_t>(X.cols()) != groups.num_variables()) {
    throw DimensionMismatch("X has " + std::to_string(X.cols()) + " columns but the groups cover " + std::to_string(groups.num_variables()) + " variables");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be a finite nonnegative number");
  if (!X.allFinite() || !y.allFinite()) throw InvalidArgument("design or targets contain non-finite values");
  groups.validate();
}

double primal_objective(const Problem& prob, const Eigen::VectorXd& w) {
  return 0.5 * (prob.y - prob.X * w).squaredNorm() + prob.lambda * penalty(to_std(w), prob.groups);
}

double lipschitz_estimate(const Eigen::MatrixXd& X, int iters) {
  if (X.cols() == 0 || X.rows() == 0) return 0.0;
  std::mt19937_64 rng(0);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(X.cols());
  for (auto& x : v) x = normal(rng);
  v.normalize();
  double est = 0.0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd next = X.transpose() * (X * v);
    est = next.norm();
    if (est == 0.0) return 0.0;
    v = next / est;
  }
  return std::max(est, (X * v).squaredNorm());
}

struct DualityGap::Impl {
  const Problem* prob;
  DualNorm dual;
  double lipschitz = -1.0;
};

DualityGap::DualityGap(const Problem& prob) : impl_(std::make_unique<Impl>(Impl{&prob, DualNorm(prob.groups)})) {}
DualityGap::~DualityGap() = default;
DualityGap::DualityGap(DualityGap&&) noexcept = default;
DualityGap& DualityGap::operator=(DualityGap&&) noexcept = default;

DualityGap::Value DualityGap::operator()(const Eigen::VectorXd& w) {
  const Problem& prob = *impl_->prob;
  const SquaredLoss loss(prob.y);
  const Eigen::VectorXd z = prob.X * w;
  const Eigen::VectorXd grad = loss.gradient(z);
  const Eigen::VectorXd pulled = prob.X.transpose() * grad;
  Value v;
  v.primal = loss.value(z) + prob.lambda * penalty(to_std(w), prob.groups);
  v.dual_norm = impl_->dual(to_std(pulled)).tau;
  if (prob.lambda > 0.0) {
    // kappa = -grad/rho is dual feasible; f*(-kappa) vanishes when rho is
    // infinite (gradient mass on a variable outside every group).
    const double rho = std::max(v.dual_norm / prob.lambda, 1.0);
    v.raw_gap = v.primal + (std::isinf(rho) ? 0.0 : loss.conjugate(grad / rho));
  } else {
    // Without a penalty no finite rho exists; use the gradient-mapping
    // stationarity measure ||X^T grad||^2 / (2L) instead.
    if (impl_->lipschitz < 0.0) impl_->lipschitz = lipschitz_estimate(prob.X);
    v.raw_gap = impl_->lipschitz > 0.0 ? pulled.squaredNorm() / (2.0 * impl_->lipschitz) : 0.0;
  }
  v.gap = std::max(v.raw_gap, 0.0);
  return v;
}

double duality_gap(const Problem& prob, const Eigen::VectorXd& w) {
  DualityGap eval(prob);
  return eval(w).gap;
}

SolveResult fista(const Problem& prob, const SolverConfig& cfg) {
  prob.validate();
  if (!(cfg.nu > 1.0)) throw InvalidArgument("backtracking factor must exceed 1");
  if (!(cfg.gap_tol > 0.0)) throw InvalidArgument("gap tolerance must be positive");
  const auto start = Clock::now();
  const SquaredLoss loss(prob.y);
  const Eigen::Index p = prob.X.cols();
  const std::size_t period = std::max<std::size_t>(cfg.gap_period, 1);

  SolveResult res;
  res.w = Eigen::VectorXd::Zero(p);
  double L = cfg.L0 > 0.0 ? cfg.L0 : lipschitz_estimate(prob.X);
  if (!(L > 0.0)) L = 1.0;

  DualityGap gap_eval(prob);
  ProxOperator prox_op(prob.groups, cfg.prox);
  auto record = [&](std::size_t iter) {
    const auto v = gap_eval(res.w);
    res.trace.push_back({iter, seconds_since(start), v.primal, v.gap});
    res.primal = v.primal;
    res.gap = v.gap;
    res.converged = reached(v.gap, v.primal, cfg.gap_tol);
  };
  record(0);

  Eigen::VectorXd w_prev = res.w;
  Eigen::VectorXd yk = res.w;
  double t = 1.0;
  std::size_t k = 0;
  while (!res.converged && k < cfg.max_iter && seconds_since(start) < cfg.time_budget) {
    ++k;
    const Eigen::VectorXd zy = prob.X * yk;
    const double fy = loss.value(zy);
    const Eigen::VectorXd gy = prob.X.transpose() * loss.gradient(zy);
    Eigen::VectorXd next;
    for (int s = 0;; ++s) {
      if (s > 200) throw Error("backtracking did not find an admissible step");
      next = to_eigen(prox_op(to_std(yk - gy / L), prob.lambda / L).w);
      const Eigen::VectorXd delta = next - yk;
      const double fn = loss.value(prob.X * next);
      const double bound = fy + delta.dot(gy) + 0.5 * L * delta.squaredNorm();
      if (fn <= bound + 1e-12 * std::max(1.0, std::fabs(fy))) break;
      L *= cfg.nu;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    w_prev = res.w;
    res.w = next;
    yk = res.w + ((t - 1.0) / t_next) * (res.w - w_prev);
    t = t_next;
    if (k % period == 0) record(k);
  }
  if (res.trace.back().iter != k) record(k);
  res.iterations = k;
  res.lipschitz = L;
  return res;
}

Eigen::VectorXd penalty_subgradient(const Eigen::VectorXd& w, const GroupStructure& gs) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  for (const auto& grp : gs.groups()) {
    std::size_t best = grp.members.front();
    for (auto j : grp.members)
      if (std::fabs(w[static_cast<Eigen::Index>(j)]) > std::fabs(w[static_cast<Eigen::Index>(best)])) best = j;
    const double x = w[static_cast<Eigen::Index>(best)];
    if (x != 0.0) g[static_cast<Eigen::Index>(best)] += grp.weight * (x > 0.0 ? 1.0 : -1.0);
  }
  return g;
}

SolveResult subgradient_baseline(const Problem& prob, double a, double b, const SolverConfig& cfg) {
  prob.validate();
  if (!(a > 0.0) || !(b >= 0.0)) throw InvalidArgument("step parameters need a > 0 and b >= 0");
  const auto start = Clock::now();
  const std::size_t period = std::max<std::size_t>(cfg.gap_period, 1);
  SolveResult res;
  res.w = Eigen::VectorXd::Zero(prob.X.cols());
  DualityGap gap_eval(prob);
  auto record = [&](std::size_t iter) {
    const auto v = gap_eval(res.w);
    res.trace.push_back({iter, seconds_since(start), v.primal, v.gap});
    res.primal = v.primal;
    res.gap = v.gap;
    res.converged = reached(v.gap, v.primal, cfg.gap_tol);
  };
  record(0);
  std::size_t k = 0;
  while (!res.converged && k < cfg.max_iter && seconds_since(start) < cfg.time_budget) {
    const Eigen::VectorXd grad = prob.X.transpose() * (prob.X * res.w - prob.y);
    const double step = a / (static_cast<double>(k) + b);
    res.w -= step * (grad + prob.lambda * penalty_subgradient(res.w, prob.groups));
    ++k;
    if (!res.w.allFinite()) break;
    if (k % period == 0) record(k);
  }
  if (res.trace.back().iter != k && res.w.allFinite()) record(k);
  res.iterations = k;
  return res;
}

StepSizeChoice tune_subgradient(const Problem& prob, std::size_t iters) {
  StepSizeChoice best;
  best.primal = std::numeric_limits<double>::infinity();
  SolverConfig cfg;
  cfg.max_iter = iters;
  cfg.gap_period = std::max<std::size_t>(iters, 1);
  cfg.gap_tol = 1e-300;
  for (double a : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    for (double b : {1e2, 1e3, 1e4}) {
      const auto run = subgradient_baseline(prob, a, b, cfg);
      if (!run.w.allFinite()) continue;
      const double f = primal_objective(prob, run.w);
      if (std::isfinite(f) && f < best.primal) best = {a, b, f};
    }
  }
  if (!std::isfinite(best.primal)) throw Error("every subgradient step size diverged");
  return best;
}

}  // namespace proxflow
