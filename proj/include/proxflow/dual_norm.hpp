#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "proxflow/group_model.hpp"

namespace proxflow {

/// Omega(w) = sum_g eta_g * max_{j in g} |w_j|.
double penalty(const std::vector<double>& w, const GroupStructure& gs);

struct DualNormResult {
  double tau = 0.0;
  /// Number of descents onto the sink side of a cut, summed over components.
  std::size_t iterations = 0;
};

/// Dual norm evaluator that keeps its flow networks between calls.
/// Variables outside every group make the dual norm infinite unless the
/// corresponding entry of kappa is zero.
class DualNorm {
 public:
  explicit DualNorm(const GroupStructure& gs);
  ~DualNorm();
  DualNorm(DualNorm&&) noexcept;
  DualNorm& operator=(DualNorm&&) noexcept;

  DualNormResult operator()(const std::vector<double>& kappa);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DualNormResult dual_norm(const std::vector<double>& kappa, const GroupStructure& gs);

}  // namespace proxflow
