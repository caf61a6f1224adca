#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "manifest.hpp"
#include "proxflow/dual_norm.hpp"
#include "proxflow/errors.hpp"
#include "proxflow/fista_solver.hpp"
#include "proxflow/group_model.hpp"
#include "proxflow/io.hpp"
#include "proxflow/oracle.hpp"
#include "proxflow/prox_flow.hpp"
#include "proxflow/synthetic.hpp"

namespace proxflow::cli {

namespace {

namespace fs = std::filesystem;
using io::format_double;

constexpr double kOptimalityTol = 1e-8;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Problem load_problem(const std::string& X, const std::string& y, const std::string& groups, double lambda,
                     RunManifest& manifest) {
  Problem prob;
  prob.X = io::read_matrix_file(X);
  const auto yv = io::read_vector_file(y);
  prob.y = Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
  prob.groups = read_groups_file(groups);
  prob.lambda = lambda;
  prob.validate();
  manifest.add_input(X);
  manifest.add_input(y);
  manifest.add_input(groups);
  return prob;
}

void write_trace(const std::string& path, const SolveTrace& trace) {
  auto out = open_out(path);
  out << "iter,time_s,primal,gap\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << format_double(r.time_s) << ',' << format_double(r.primal) << ','
        << format_double(r.gap) << '\n';
  }
}

SolveResult run_solver(const Problem& prob, const std::string& solver, SolverConfig cfg, double sg_a, double sg_b,
                       std::size_t tune_iters, nlohmann::ordered_json& record) {
  if (solver == "fista") return fista(prob, cfg);
  if (solver != "sg") throw UsageError("unknown solver '" + solver + "' (expected fista or sg)");
  if (sg_a <= 0.0) {
    const auto best = tune_subgradient(prob, tune_iters);
    sg_a = best.a;
    sg_b = best.b;
  }
  record["sg_a"] = sg_a;
  record["sg_b"] = sg_b;
  return subgradient_baseline(prob, sg_a, sg_b, cfg);
}

}  // namespace

int run_gen(const GenOptions& opts, std::ostream& out) {
  SyntheticOptions so;
  so.n = opts.n;
  so.p = opts.p;
  so.kind = parse_design_kind(opts.kind);
  so.group_size = opts.group_size;
  so.density = opts.density;
  so.noise = opts.noise;
  so.seed = opts.seed;
  const auto gen = generate_synthetic(so);

  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  io::write_matrix_file((dir / "X.txt").string(), gen.problem.X);
  io::write_vector_file((dir / "y.txt").string(), to_std(gen.problem.y));
  io::write_vector_file((dir / "w0.txt").string(), to_std(gen.w0));
  {
    auto g = open_out((dir / "groups.txt").string());
    write_groups(g, gen.problem.groups);
  }
  const double lmax = lambda_max(gen.problem);
  out << "lambda_max " << format_double(lmax) << '\n';
  if (opts.calibrate) {
    const double lam = calibrate_lambda(gen.problem, opts.density);
    io::write_vector_file((dir / "lambda.txt").string(), {lam});
    out << "lambda " << format_double(lam) << '\n';
  }

  RunManifest m;
  m.subcommand = "gen";
  m.seed = opts.seed;
  m.options = {{"n", opts.n},           {"p", opts.p},         {"kind", opts.kind},
               {"group_size", opts.group_size}, {"density", opts.density}, {"noise", opts.noise},
               {"calibrate", opts.calibrate}};
  m.write((dir / "manifest.json").string());
  return kOk;
}

int run_prox(const ProxCmdOptions& opts, std::ostream& out) {
  const auto gs = read_groups_file(opts.groups);
  const auto u = io::read_vector_file(opts.input);
  RunManifest m;
  m.subcommand = "prox";
  m.add_input(opts.groups);
  m.add_input(opts.input);
  m.options = {{"lambda", opts.lambda},
               {"check", opts.check},
               {"box_projection", !opts.no_box_projection},
               {"simplify", !opts.no_simplify},
               {"keep_group_flows", opts.keep_group_flows},
               {"parallel_components", opts.parallel_components},
               {"oracle", opts.oracle}};

  std::vector<double> w;
  std::optional<double> residual;
  std::optional<std::vector<std::vector<double>>> flows;
  if (opts.oracle) {
    oracle::Groups og;
    og.p = gs.num_variables();
    for (const auto& g : gs.groups()) {
      og.members.push_back(g.members);
      og.weights.push_back(g.weight);
    }
    w = oracle::prox_oracle(u, og, opts.lambda);
  } else {
    ProxOptions po;
    po.box_projection = !opts.no_box_projection;
    po.simplify = !opts.no_simplify;
    po.keep_group_flows = opts.keep_group_flows;
    po.parallel_components = opts.parallel_components;
    po.check = opts.check;
    auto res = prox(u, gs, opts.lambda, po);
    w = std::move(res.w);
    residual = res.optimality_residual;
    flows = std::move(res.group_flows);
  }

  if (opts.out.empty()) {
    io::write_vector(out, w);
  } else {
    io::write_vector_file(opts.out, w);
    m.write(opts.out + ".manifest.json");
  }
  if (opts.keep_group_flows && flows) {
    std::ofstream file;
    if (!opts.out.empty()) file = open_out(opts.out + ".flows");
    std::ostream& dest = opts.out.empty() ? out : file;
    for (std::size_t k = 0; k < flows->size(); ++k) {
      dest << "group " << k + 1;
      for (double x : (*flows)[k]) dest << ' ' << format_double(x);
      dest << '\n';
    }
  }
  if (!opts.manifest.empty()) m.write(opts.manifest);
  if (opts.check && residual) {
    out << "residual " << format_double(*residual) << '\n';
    if (*residual > kOptimalityTol) return kNonConvergence;
  }
  return kOk;
}

int run_dualnorm(const DualNormCmdOptions& opts, std::ostream& out) {
  const auto gs = read_groups_file(opts.groups);
  const auto kappa = io::read_vector_file(opts.input);
  out << format_double(dual_norm(kappa, gs).tau) << '\n';
  if (!opts.manifest.empty()) {
    RunManifest m;
    m.subcommand = "dualnorm";
    m.add_input(opts.groups);
    m.add_input(opts.input);
    m.write(opts.manifest);
  }
  return kOk;
}

int run_solve(const SolveCmdOptions& opts, std::ostream& out) {
  RunManifest m;
  m.subcommand = "solve";
  const Problem prob = load_problem(opts.X, opts.y, opts.groups, opts.lambda, m);
  SolverConfig cfg;
  cfg.gap_tol = opts.gap_tol;
  cfg.max_iter = opts.max_iter;
  cfg.gap_period = opts.gap_period;
  if (opts.time_budget > 0.0) cfg.time_budget = opts.time_budget;
  m.options = {{"lambda", opts.lambda},       {"solver", opts.solver},         {"gap_tol", opts.gap_tol},
               {"max_iter", opts.max_iter},   {"gap_period", opts.gap_period}, {"time_budget", opts.time_budget}};
  const auto res = run_solver(prob, opts.solver, cfg, opts.sg_a, opts.sg_b, opts.tune_iters, m.options);

  out << "converged " << (res.converged ? 1 : 0) << '\n'
      << "iterations " << res.iterations << '\n'
      << "primal " << format_double(res.primal) << '\n'
      << "gap " << format_double(res.gap) << '\n';
  if (!opts.trace.empty()) {
    write_trace(opts.trace, res.trace);
    m.write(opts.trace + ".manifest.json");
  }
  if (!opts.out.empty()) {
    io::write_vector_file(opts.out, to_std(res.w));
    m.write(opts.out + ".manifest.json");
  }
  if (!opts.manifest.empty()) m.write(opts.manifest);
  return res.converged ? kOk : kNonConvergence;
}

std::vector<BenchRow> bench_prox(const BenchOptions& opts) {
  if (opts.kind != "windows-1d" && opts.kind != "squares-2d") {
    throw UsageError("unknown structure '" + opts.kind + "' (expected windows-1d or squares-2d)");
  }
  if (opts.repeats == 0) throw UsageError("repeats must be positive");
  std::vector<BenchRow> rows;
  for (std::size_t p : opts.sizes) {
    GroupStructure gs;
    if (opts.kind == "windows-1d") {
      gs = sliding_windows(p, opts.group_size);
    } else {
      const auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(p)));
      gs = grid_squares(side, side, opts.group_size);
    }
    BenchRow row;
    row.p = gs.num_variables();
    row.V = gs.num_groups() + row.p + 2;
    row.E = gs.num_groups() + gs.total_membership() + row.p;

    std::vector<double> times;
    for (std::size_t r = 0; r < opts.repeats; ++r) {
      std::mt19937_64 rng(opts.seed + r);
      std::normal_distribution<double> normal;
      std::vector<double> u(row.p);
      for (auto& x : u) x = normal(rng);
      const auto start = std::chrono::steady_clock::now();
      ProxOperator op(gs);
      const auto res = op(u, opts.lambda);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      if (r == 0) {
        row.pushes = res.counters.pushes;
        row.relabels = res.counters.relabels;
      }
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    row.time_s = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "p,V,E,time_s,pushes,relabels\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.V << ',' << r.E << ',' << format_double(r.time_s) << ',' << r.pushes << ',' << r.relabels
        << '\n';
  }
}

int run_bench(const BenchOptions& opts, std::ostream& out) {
  const auto rows = bench_prox(opts);
  if (opts.out.empty()) {
    write_bench_csv(out, rows);
    return kOk;
  }
  auto file = open_out(opts.out);
  write_bench_csv(file, rows);
  RunManifest m;
  m.subcommand = "bench-prox";
  m.seed = opts.seed;
  m.options = {{"sizes", opts.sizes},         {"kind", opts.kind},      {"group_size", opts.group_size},
               {"repeats", opts.repeats},     {"lambda", opts.lambda}};
  m.write(opts.out + ".manifest.json");
  return kOk;
}

int run_compare(const CompareCmdOptions& opts, std::ostream& out) {
  for (const auto& s : opts.solvers) {
    if (s != "fista" && s != "sg") throw UsageError("unknown solver '" + s + "' (expected fista or sg)");
  }
  RunManifest m;
  m.subcommand = "compare";
  const Problem prob = load_problem(opts.X, opts.y, opts.groups, opts.lambda, m);
  m.options = {{"lambda", opts.lambda}, {"solvers", opts.solvers}, {"budget", opts.budget},
               {"gap_period", opts.gap_period}};

  SolverConfig cfg;
  cfg.time_budget = std::max(opts.budget, 0.0);
  cfg.max_iter = std::numeric_limits<std::size_t>::max();
  cfg.gap_period = opts.gap_period;
  // Run for the whole budget; the traces are the product here.
  cfg.gap_tol = std::numeric_limits<double>::min();

  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  std::vector<std::pair<std::string, SolveResult>> runs;
  for (const auto& s : opts.solvers) {
    auto res = run_solver(prob, s, cfg, opts.sg_a, opts.sg_b, opts.tune_iters, m.options);
    write_trace((dir / ("trace_" + s + ".csv")).string(), res.trace);
    out << s << " iterations " << res.iterations << " primal " << format_double(res.primal) << " gap "
        << format_double(res.gap) << '\n';
    runs.emplace_back(s, std::move(res));
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& [s, res] : runs)
    for (const auto& r : res.trace) best = std::min(best, r.primal);
  auto plot = open_out((dir / "plot.csv").string());
  plot << "solver,time_s,primal_minus_best\n";
  for (const auto& [s, res] : runs)
    for (const auto& r : res.trace) plot << s << ',' << format_double(r.time_s) << ',' << format_double(r.primal - best) << '\n';
  m.write((dir / "manifest.json").string());
  return kOk;
}

}  // namespace proxflow::cli
