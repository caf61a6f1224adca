#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxflow::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kValidation = 3, kNonConvergence = 4 };

/// Thrown for option combinations CLI11 cannot reject on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  std::size_t n = 100;
  std::size_t p = 1000;
  std::string kind = "dct-1d";
  std::size_t group_size = 3;
  double density = 0.2;
  double noise = 0.01;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  /// Also writes lambda.txt with a lambda giving about `density` nonzeros.
  bool calibrate = false;
};

struct ProxCmdOptions {
  std::string groups;
  std::string input;
  double lambda = 0.0;
  std::string out;
  bool check = false;
  bool no_box_projection = false;
  bool keep_group_flows = false;
  bool no_simplify = false;
  bool parallel_components = false;
  bool oracle = false;
  std::string manifest;
};

struct DualNormCmdOptions {
  std::string groups;
  std::string input;
  std::string manifest;
};

struct SolveCmdOptions {
  std::string X;
  std::string y;
  std::string groups;
  double lambda = 0.0;
  std::string solver = "fista";
  double gap_tol = 1e-4;
  std::size_t max_iter = 10000;
  std::size_t gap_period = 10;
  double time_budget = 0.0;  // <= 0: unlimited
  std::string trace;
  std::string out;
  /// Subgradient step a/(k+b); a <= 0 runs the grid search first.
  double sg_a = 0.0;
  double sg_b = 1e3;
  std::size_t tune_iters = 200;
  std::string manifest;
};

struct BenchOptions {
  std::vector<std::size_t> sizes{1000, 10000};
  std::string kind = "windows-1d";
  std::size_t group_size = 3;
  std::size_t repeats = 3;
  double lambda = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

struct BenchRow {
  std::size_t p = 0;
  std::size_t V = 0;
  std::size_t E = 0;
  double time_s = 0.0;
  std::uint64_t pushes = 0;
  std::uint64_t relabels = 0;
};

struct CompareCmdOptions {
  std::string X;
  std::string y;
  std::string groups;
  double lambda = 0.0;
  std::vector<std::string> solvers{"fista", "sg"};
  double budget = 60.0;
  std::size_t gap_period = 10;
  double sg_a = 0.0;
  double sg_b = 1e3;
  std::size_t tune_iters = 200;
  std::string out_dir = ".";
};

int run_gen(const GenOptions& opts, std::ostream& out);
int run_prox(const ProxCmdOptions& opts, std::ostream& out);
int run_dualnorm(const DualNormCmdOptions& opts, std::ostream& out);
int run_solve(const SolveCmdOptions& opts, std::ostream& out);
int run_bench(const BenchOptions& opts, std::ostream& out);
int run_compare(const CompareCmdOptions& opts, std::ostream& out);

/// One row per size: median wall time of a cold prox (graph construction
/// included) on u ~ N(0, 1), canonical graph sizes, counters of the first
/// repeat. squares-2d rounds p down to a perfect square.
std::vector<BenchRow> bench_prox(const BenchOptions& opts);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace proxflow::cli
