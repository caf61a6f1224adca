#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "proxflow/dual_norm.hpp"
#include "proxflow/errors.hpp"
#include "proxflow/fista_solver.hpp"
#include "proxflow/synthetic.hpp"

using namespace proxflow;

namespace {

Problem small_problem(std::mt19937_64& rng, Eigen::Index n, std::size_t p, double lambda) {
  std::normal_distribution<double> normal;
  Problem prob;
  prob.X.resize(n, static_cast<Eigen::Index>(p));
  for (auto& x : prob.X.reshaped()) x = normal(rng);
  prob.y.resize(n);
  for (auto& x : prob.y) x = normal(rng);
  prob.groups = sliding_windows(p, 3);
  prob.lambda = lambda;
  return prob;
}

}  // namespace

TEST_CASE("identity design reduces to one prox") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = 12;
    Problem prob;
    prob.X = Eigen::MatrixXd::Identity(p, p);
    prob.y = Eigen::VectorXd::Random(p);
    // A group over everything keeps the dual norm finite.
    const auto random = testing::random_groups(rng, p, 5, 5);
    std::vector<Group> groups(random.groups().begin(), random.groups().end());
    Group all{0.5, {}};
    for (std::size_t j = 0; j < p; ++j) all.members.push_back(j);
    groups.push_back(all);
    prob.groups = GroupStructure(p, std::move(groups));
    prob.lambda = 0.2;
    SolverConfig cfg;
    cfg.gap_tol = 1e-12;
    cfg.gap_period = 1;
    const auto res = fista(prob, cfg);
    const auto ref = prox({prob.y.data(), prob.y.data() + p}, prob.groups, prob.lambda).w;
    CHECK(res.converged);
    CHECK(res.iterations <= 5);
    CHECK(testing::max_abs_diff({res.w.data(), res.w.data() + p}, ref) <= 1e-8);
    CHECK(duality_gap(prob, res.w) <= 1e-10);
  }
}

TEST_CASE("lambda above lambda_max stops at zero") {
  std::mt19937_64 rng(3);
  Problem prob = small_problem(rng, 8, 15, 0.0);
  prob.lambda = lambda_max(prob) * 1.0001;
  const auto res = fista(prob);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.w.isZero());
  CHECK(res.trace.size() == 1);
}

TEST_CASE("lambda zero converges to least squares") {
  std::mt19937_64 rng(5);
  Problem prob = small_problem(rng, 20, 6, 0.0);
  SolverConfig cfg;
  cfg.gap_tol = 1e-16;
  cfg.max_iter = 20000;
  const auto res = fista(prob, cfg);
  const Eigen::VectorXd ref = oracle::least_squares_oracle(prob.X, prob.y);
  CHECK((res.w - ref).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("gap examples") {
  Problem prob;
  prob.X = Eigen::MatrixXd::Identity(3, 3);
  prob.y = Eigen::VectorXd::Zero(3);
  prob.groups = sliding_windows(3, 2);
  prob.lambda = 0.1;
  CHECK(duality_gap(prob, Eigen::VectorXd::Zero(3)) == 0.0);
  const Eigen::VectorXd y = Eigen::VectorXd::Random(4);
  CHECK(SquaredLoss(y).conjugate(Eigen::VectorXd::Zero(4)) == 0.0);
}

TEST_CASE("gap is nonnegative and its dual point is feasible") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 50; ++rep) {
    Problem prob = small_problem(rng, 10, 14, 0.05 + 0.1 * (rep % 5));
    Eigen::VectorXd w(14);
    for (auto& x : w) x = normal(rng);
    DualityGap eval(prob);
    const auto v = eval(w);
    CHECK(v.gap >= 0.0);
    CHECK(v.raw_gap >= -1e-9 * std::max(1.0, std::fabs(v.primal)));
    const Eigen::VectorXd grad = prob.X * w - prob.y;
    const double rho = std::max(v.dual_norm / prob.lambda, 1.0);
    const Eigen::VectorXd pulled = prob.X.transpose() * (grad / rho);
    CHECK(dual_norm({pulled.data(), pulled.data() + pulled.size()}, prob.groups).tau <= prob.lambda + 1e-9);
  }
}

TEST_CASE("fista reaches the requested relative gap") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    Problem prob = small_problem(rng, 15, 30, 0.0);
    prob.lambda = 0.1 * lambda_max(prob);
    SolverConfig cfg;
    cfg.gap_tol = 1e-6;
    const auto res = fista(prob, cfg);
    CHECK(res.converged);
    CHECK(res.gap <= 1e-6 * std::max(1.0, std::fabs(res.primal)));
    for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i].iter > res.trace[i - 1].iter);
  }
}

TEST_CASE("max_iter leaves the flag unset") {
  std::mt19937_64 rng(4);
  Problem prob = small_problem(rng, 15, 30, 0.0);
  prob.lambda = 0.01 * lambda_max(prob);
  SolverConfig cfg;
  cfg.gap_tol = 1e-14;
  cfg.max_iter = 3;
  const auto res = fista(prob, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 3);
  CHECK(res.trace.back().iter == 3);
}

TEST_CASE("solver input validation") {
  std::mt19937_64 rng(1);
  Problem prob = small_problem(rng, 4, 6, 0.1);
  prob.y.resize(3);
  CHECK_THROWS_AS(fista(prob), DimensionMismatch);
  prob = small_problem(rng, 4, 6, -1.0);
  CHECK_THROWS_AS(fista(prob), InvalidArgument);
  prob.lambda = 0.1;
  SolverConfig cfg;
  cfg.nu = 1.0;
  CHECK_THROWS_AS(fista(prob, cfg), InvalidArgument);
  CHECK_THROWS_AS(subgradient_baseline(prob, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("penalty subgradient picks the lowest index on ties") {
  GroupStructure gs(4, {{2.0, {0, 1, 2}}, {1.0, {2, 3}}});
  Eigen::VectorXd w(4);
  w << 0.5, -0.5, 0.1, 0.0;
  Eigen::VectorXd g = penalty_subgradient(w, gs);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 1.0);
  CHECK(g[3] == 0.0);
  CHECK(penalty_subgradient(Eigen::VectorXd::Zero(4), gs).isZero());
}

TEST_CASE("subgradient baseline on a small quadratic") {
  std::mt19937_64 rng(13);
  Problem prob = small_problem(rng, 5, 5, 0.0);
  const double L = lipschitz_estimate(prob.X, 50);
  SolverConfig cfg;
  cfg.max_iter = 20;
  cfg.gap_period = 1;
  cfg.gap_tol = 1e-300;
  const double b = 100.0;
  const auto run = subgradient_baseline(prob, 0.5 * b / L, b, cfg);
  REQUIRE(run.trace.size() == 21);
  for (std::size_t i = 1; i < run.trace.size(); ++i) CHECK(run.trace[i].primal <= run.trace[i - 1].primal);

  cfg.max_iter = 1;
  const auto one = subgradient_baseline(prob, 0.3, 1e3, cfg);
  const Eigen::VectorXd expected = (0.3 / 1e3) * prob.X.transpose() * prob.y;
  CHECK((one.w - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("subgradient tuning returns a grid point") {
  std::mt19937_64 rng(17);
  Problem prob = small_problem(rng, 10, 20, 0.0);
  prob.lambda = 0.1 * lambda_max(prob);
  const auto best = tune_subgradient(prob, 50);
  CHECK(std::isfinite(best.primal));
  CHECK(best.primal <= primal_objective(prob, Eigen::VectorXd::Zero(20)));
  bool on_grid = false;
  for (double a : {1e-3, 1e-2, 1e-1, 1.0, 10.0})
    for (double b : {1e2, 1e3, 1e4}) on_grid = on_grid || (a == best.a && b == best.b);
  CHECK(on_grid);
}

TEST_CASE("synthetic generator") {
  SyntheticOptions opts;
  const auto a = generate_synthetic(opts);
  const auto b = generate_synthetic(opts);
  CHECK(a.problem.X.rows() == 100);
  CHECK(a.problem.X.cols() == 1000);
  CHECK(a.problem.groups.num_groups() == 998);
  CHECK(a.problem.X == b.problem.X);
  CHECK(a.problem.y == b.problem.y);
  CHECK(a.w0 == b.w0);
  CHECK((a.problem.X.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);
  const double nnz = static_cast<double>((a.w0.array() != 0.0).count());
  CHECK(nnz >= 200.0);
  CHECK(nnz <= 203.0);
  CHECK(a.w0.cwiseAbs().maxCoeff() <= 1.0);

  opts.seed = 2;
  CHECK(generate_synthetic(opts).problem.y != a.problem.y);

  opts.kind = DesignKind::kDct2d;
  opts.n = 16;
  opts.p = 64;
  opts.group_size = 2;
  const auto c = generate_synthetic(opts);
  CHECK(c.problem.X.rows() == 16);
  CHECK(c.problem.groups.num_groups() == 49);
  CHECK((c.problem.X.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);
  opts.p = 60;
  CHECK_THROWS_AS(generate_synthetic(opts), InvalidArgument);

  opts.kind = DesignKind::kGaussian;
  opts.n = 10;
  opts.p = 30;
  CHECK((generate_synthetic(opts).problem.X.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-12);

  CHECK(parse_design_kind("dct-2d") == DesignKind::kDct2d);
  CHECK(to_string(DesignKind::kGaussian) == "gaussian");
  CHECK_THROWS_AS(parse_design_kind("wavelet"), InvalidArgument);
}

TEST_CASE("noise variance follows the signal energy") {
  SyntheticOptions opts;
  opts.noise = 0.0;
  const auto clean = generate_synthetic(opts);
  CHECK((clean.problem.y - clean.problem.X * clean.w0).norm() == 0.0);
  opts.noise = 0.01;
  const auto noisy = generate_synthetic(opts);
  const Eigen::VectorXd signal = noisy.problem.X * noisy.w0;
  const double ratio = (noisy.problem.y - signal).squaredNorm() / (0.01 * signal.squaredNorm());
  CHECK(ratio > 0.5);
  CHECK(ratio < 1.5);
}

TEST_CASE("lambda calibration hits the target density roughly") {
  SyntheticOptions opts;
  opts.n = 30;
  opts.p = 120;
  auto gen = generate_synthetic(opts);
  const double lam = calibrate_lambda(gen.problem, 0.2, 10);
  CHECK(lam > 0.0);
  CHECK(lam < lambda_max(gen.problem));
}
