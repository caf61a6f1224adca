#include "proxflow/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "proxflow/dual_norm.hpp"
#include "proxflow/errors.hpp"

namespace proxflow {

DesignKind parse_design_kind(const std::string& name) {
  if (name == "dct-1d") return DesignKind::kDct1d;
  if (name == "dct-2d") return DesignKind::kDct2d;
  if (name == "gaussian") return DesignKind::kGaussian;
  throw InvalidArgument("unknown design kind '" + name + "' (expected dct-1d, dct-2d or gaussian)");
}

std::string to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::kDct1d: return "dct-1d";
    case DesignKind::kDct2d: return "dct-2d";
    case DesignKind::kGaussian: return "gaussian";
  }
  return "?";
}

Eigen::MatrixXd cosine_dictionary(std::size_t n, std::size_t p) {
  Eigen::MatrixXd D(n, p);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          std::cos(M_PI * static_cast<double>((2 * i + 1) * k) / static_cast<double>(2 * p));
    }
    D.col(static_cast<Eigen::Index>(k)).normalize();
  }
  return D;
}

namespace {

std::size_t exact_sqrt(std::size_t v, const char* what) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v))));
  if (r * r != v) throw InvalidArgument(std::string(what) + " must be a perfect square for dct-2d");
  return r;
}

}  // namespace

SyntheticProblem generate_synthetic(const SyntheticOptions& opts) {
  if (opts.n == 0 || opts.p == 0) throw InvalidArgument("n and p must be positive");
  if (!(opts.density > 0.0 && opts.density <= 1.0)) throw InvalidArgument("density must lie in (0, 1]");
  if (!(opts.noise >= 0.0)) throw InvalidArgument("noise must be nonnegative");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  SyntheticProblem out;
  Problem& prob = out.problem;
  const auto n = static_cast<Eigen::Index>(opts.n);
  const auto p = static_cast<Eigen::Index>(opts.p);

  switch (opts.kind) {
    case DesignKind::kDct1d:
      prob.X = cosine_dictionary(opts.n, opts.p);
      prob.groups = sliding_windows(opts.p, opts.group_size);
      break;
    case DesignKind::kDct2d: {
      const std::size_t side_n = exact_sqrt(opts.n, "n");
      const std::size_t side_p = exact_sqrt(opts.p, "p");
      const Eigen::MatrixXd D = cosine_dictionary(side_n, side_p);
      prob.X.resize(n, p);
      const auto sn = static_cast<Eigen::Index>(side_n);
      const auto sp = static_cast<Eigen::Index>(side_p);
      for (Eigen::Index a = 0; a < sn; ++a)
        for (Eigen::Index b = 0; b < sp; ++b) prob.X.block(a * sn, b * sp, sn, sp) = D(a, b) * D;
      prob.groups = grid_squares(side_p, side_p, opts.group_size);
      break;
    }
    case DesignKind::kGaussian:
      prob.X.resize(n, p);
      for (Eigen::Index k = 0; k < p; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) prob.X(i, k) = normal(rng);
        prob.X.col(k).normalize();
      }
      prob.groups = sliding_windows(opts.p, opts.group_size);
      break;
  }

  std::vector<std::size_t> order(prob.groups.num_groups());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> support(opts.p, 0);
  std::size_t count = 0;
  const auto target = static_cast<std::size_t>(std::ceil(opts.density * static_cast<double>(opts.p)));
  for (auto k : order) {
    if (count >= target) break;
    for (auto j : prob.groups.group(k).members) count += support[j] ? 0 : 1, support[j] = 1;
  }
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  out.w0 = Eigen::VectorXd::Zero(p);
  for (std::size_t j = 0; j < opts.p; ++j)
    if (support[j]) out.w0[static_cast<Eigen::Index>(j)] = value(rng);

  const Eigen::VectorXd clean = prob.X * out.w0;
  const double sigma = std::sqrt(opts.noise * clean.squaredNorm() / static_cast<double>(opts.n));
  prob.y = clean;
  for (Eigen::Index i = 0; i < n; ++i) prob.y[i] += sigma * normal(rng);
  return out;
}

double lambda_max(const Problem& prob) {
  const Eigen::VectorXd g = prob.X.transpose() * prob.y;
  return dual_norm({g.data(), g.data() + g.size()}, prob.groups).tau;
}

double calibrate_lambda(const Problem& prob, double density, int steps) {
  const double top = lambda_max(prob);
  if (!(top > 0.0) || !std::isfinite(top)) throw InvalidArgument("lambda_max is zero or infinite; nothing to calibrate");
  double lo = std::log(top * 1e-4), hi = std::log(top);
  double best = top, best_err = std::numeric_limits<double>::infinity();
  Problem trial = prob;
  SolverConfig cfg;
  cfg.gap_tol = 1e-3;
  cfg.max_iter = 500;
  for (int s = 0; s < steps; ++s) {
    const double mid = 0.5 * (lo + hi);
    trial.lambda = std::exp(mid);
    const auto sol = fista(trial, cfg);
    const double scale = sol.w.cwiseAbs().maxCoeff();
    std::size_t nnz = 0;
    for (double x : sol.w)
      if (std::fabs(x) > 1e-9 * std::max(scale, 1e-300)) ++nnz;
    const double got = static_cast<double>(nnz) / static_cast<double>(sol.w.size());
    if (std::fabs(got - density) < best_err) {
      best_err = std::fabs(got - density);
      best = trial.lambda;
    }
    if (got > density) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace proxflow
