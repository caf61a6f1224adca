#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "proxflow/fista_solver.hpp"

namespace proxflow {

enum class DesignKind { kDct1d, kDct2d, kGaussian };

/// "dct-1d", "dct-2d" or "gaussian"; throws InvalidArgument otherwise.
DesignKind parse_design_kind(const std::string& name);
std::string to_string(DesignKind kind);

struct SyntheticOptions {
  std::size_t n = 100;
  std::size_t p = 1000;
  DesignKind kind = DesignKind::kDct1d;
  /// Window length (1-D) or square side (2-D) of the groups.
  std::size_t group_size = 3;
  /// Fraction of nonzero entries targeted in w0.
  double density = 0.2;
  /// Noise variance per entry is noise * ||X w0||^2 / n.
  double noise = 0.01;
  std::uint64_t seed = 1;
};

struct SyntheticProblem {
  Problem problem;  // lambda left at 0
  Eigen::VectorXd w0;
};

/// Overcomplete cosine dictionary: column k of the n x p matrix samples
/// cos(pi * (2i + 1) * k / (2p)) for i < n, normalized to unit length. The
/// 2-D design is the Kronecker product of two 1-D dictionaries and needs n
/// and p to be perfect squares; groups are then k x k squares on the
/// sqrt(p) x sqrt(p) grid. w0 is supported on a random union of groups.
SyntheticProblem generate_synthetic(const SyntheticOptions& opts);

Eigen::MatrixXd cosine_dictionary(std::size_t n, std::size_t p);

/// Smallest lambda with a zero solution: Omega*(X^T y).
double lambda_max(const Problem& prob);

/// Searches lambda on a log scale below lambda_max so that the FISTA solution
/// (solved to a loose gap) has about `density` nonzero entries.
double calibrate_lambda(const Problem& prob, double density, int steps = 14);

}  // namespace proxflow
