#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "proxflow/errors.hpp"

using namespace proxflow::cli;

namespace {

void add_problem_options(CLI::App* cmd, std::string& X, std::string& y, std::string& groups, double& lambda) {
  cmd->add_option("--X", X, "Design matrix file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--y", y, "Target vector file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--groups", groups, "Groups file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lambda", lambda, "Regularization weight")->required()->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal operators and sparse regression with overlapping group l-infinity penalties"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic regression problem");
  gen_cmd->add_option("--n", gen.n, "Observations")->capture_default_str();
  gen_cmd->add_option("--p", gen.p, "Variables")->capture_default_str();
  gen_cmd->add_option("--kind", gen.kind, "Design")
      ->check(CLI::IsMember({"dct-1d", "dct-2d", "gaussian"}))
      ->capture_default_str();
  gen_cmd->add_option("--group-size", gen.group_size, "Window length or square side")->capture_default_str();
  gen_cmd->add_option("--density", gen.density, "Target fraction of nonzeros in w0")->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Noise level relative to signal energy")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();
  gen_cmd->add_flag("--calibrate", gen.calibrate, "Also pick lambda for the target density");

  ProxCmdOptions px;
  auto* prox_cmd = app.add_subcommand("prox", "Evaluate the proximal operator");
  prox_cmd->add_option("--groups", px.groups, "Groups file")->required()->check(CLI::ExistingFile);
  prox_cmd->add_option("--input", px.input, "Input vector file")->required()->check(CLI::ExistingFile);
  prox_cmd->add_option("--lambda", px.lambda, "Regularization weight")->required()->check(CLI::NonNegativeNumber);
  prox_cmd->add_option("--out", px.out, "Output vector file (default: stdout)");
  prox_cmd->add_flag("--check", px.check, "Print the optimality residual; exit 4 above 1e-8");
  prox_cmd->add_flag("--no-box-projection", px.no_box_projection, "Drop the upper bounds from the projections");
  prox_cmd->add_flag("--no-simplify", px.no_simplify, "Keep the canonical graph for nested groups");
  prox_cmd->add_flag("--keep-group-flows", px.keep_group_flows, "Emit per-group flows");
  prox_cmd->add_flag("--parallel-components", px.parallel_components, "Solve components concurrently");
  prox_cmd->add_flag("--oracle", px.oracle)->group("");
  prox_cmd->add_option("--manifest", px.manifest, "Write the run manifest here");

  DualNormCmdOptions dn;
  auto* dn_cmd = app.add_subcommand("dualnorm", "Evaluate the dual norm");
  dn_cmd->add_option("--groups", dn.groups, "Groups file")->required()->check(CLI::ExistingFile);
  dn_cmd->add_option("--input", dn.input, "Input vector file")->required()->check(CLI::ExistingFile);
  dn_cmd->add_option("--manifest", dn.manifest, "Write the run manifest here");

  SolveCmdOptions sv;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a penalized least-squares problem");
  add_problem_options(solve_cmd, sv.X, sv.y, sv.groups, sv.lambda);
  solve_cmd->add_option("--solver", sv.solver, "fista or sg")->check(CLI::IsMember({"fista", "sg"}))->capture_default_str();
  solve_cmd->add_option("--gap-tol", sv.gap_tol, "Relative duality-gap tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--max-iter", sv.max_iter, "Iteration cap")->capture_default_str();
  solve_cmd->add_option("--gap-period", sv.gap_period, "Iterations between gap checks")->capture_default_str();
  solve_cmd->add_option("--time-budget", sv.time_budget, "Seconds; 0 means unlimited")->capture_default_str();
  solve_cmd->add_option("--trace", sv.trace, "Trace CSV");
  solve_cmd->add_option("--out", sv.out, "Solution vector file");
  solve_cmd->add_option("--sg-a", sv.sg_a, "Subgradient step numerator; 0 tunes it")->capture_default_str();
  solve_cmd->add_option("--sg-b", sv.sg_b, "Subgradient step offset")->capture_default_str();
  solve_cmd->add_option("--tune-iters", sv.tune_iters, "Iterations per grid point when tuning")->capture_default_str();
  solve_cmd->add_option("--manifest", sv.manifest, "Write the run manifest here");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench-prox", "Time the proximal operator on growing problems");
  bench_cmd->add_option("--sizes", bench.sizes, "Values of p")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--kind", bench.kind, "windows-1d or squares-2d")
      ->check(CLI::IsMember({"windows-1d", "squares-2d"}))
      ->capture_default_str();
  bench_cmd->add_option("--group-size", bench.group_size, "Window length or square side")->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Runs per size (median reported)")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--lambda", bench.lambda, "Regularization weight")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "CSV file (default: stdout)");

  CompareCmdOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Run solvers under a time budget and write traces");
  add_problem_options(cmp_cmd, cmp.X, cmp.y, cmp.groups, cmp.lambda);
  cmp_cmd->add_option("--solvers", cmp.solvers, "Subset of fista,sg")
      ->delimiter(',')
      ->check(CLI::IsMember({"fista", "sg"}))
      ->capture_default_str();
  cmp_cmd->add_option("--budget", cmp.budget, "Seconds per solver")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmp_cmd->add_option("--gap-period", cmp.gap_period, "Iterations between trace records")->capture_default_str();
  cmp_cmd->add_option("--sg-a", cmp.sg_a, "Subgradient step numerator; 0 tunes it")->capture_default_str();
  cmp_cmd->add_option("--sg-b", cmp.sg_b, "Subgradient step offset")->capture_default_str();
  cmp_cmd->add_option("--tune-iters", cmp.tune_iters, "Iterations per grid point when tuning")->capture_default_str();
  cmp_cmd->add_option("--out-dir", cmp.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen, std::cout);
    if (*prox_cmd) return run_prox(px, std::cout);
    if (*dn_cmd) return run_dualnorm(dn, std::cout);
    if (*solve_cmd) return run_solve(sv, std::cout);
    if (*bench_cmd) return run_bench(bench, std::cout);
    if (*cmp_cmd) return run_compare(cmp, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const proxflow::ToleranceNotReached& e) {
    std::cerr << "not converged: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const proxflow::TerminationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const proxflow::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
