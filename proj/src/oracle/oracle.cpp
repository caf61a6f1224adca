#include "proxflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "proxflow/errors.hpp"

namespace proxflow::oracle {

std::vector<double> project_simplex_sorted(const std::vector<double>& v, double radius) {
  std::vector<double> out(v.size());
  double positive = 0.0;
  for (double x : v) positive += std::max(x, 0.0);
  if (positive <= radius) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i], 0.0);
    return out;
  }
  std::vector<double> s(v);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - radius) / static_cast<double>(k + 1);
    if (k + 1 == s.size() || s[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

std::vector<double> prox_oracle(const std::vector<double>& u, const Groups& groups, double lambda,
                                const ProxOracleOptions& opts) {
  const std::size_t p = groups.p;
  const std::size_t ng = groups.members.size();
  if (u.size() != p) throw DimensionMismatch("oracle: input length mismatch");
  if (lambda == 0.0) return u;

  std::vector<double> r(p);
  for (std::size_t j = 0; j < p; ++j) r[j] = std::fabs(u[j]);
  std::vector<std::vector<double>> xi(ng);
  for (std::size_t g = 0; g < ng; ++g) xi[g].assign(groups.members[g].size(), 0.0);

  std::vector<std::size_t> order(ng);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opts.shuffle_seed.value_or(0));
  auto objective = [&] {
    double s = 0.0;
    for (double x : r) s += x * x;
    return 0.5 * s;
  };

  double obj = objective();
  const double slack = 1e-13 * (obj + 1e-300);
  double scale = 1.0;
  for (double x : r) scale = std::max(scale, x);
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (opts.shuffle_seed) std::shuffle(order.begin(), order.end(), rng);
    double moved = 0.0;
    for (std::size_t g : order) {
      const auto& mem = groups.members[g];
      std::vector<double> v(mem.size());
      for (std::size_t i = 0; i < mem.size(); ++i) v[i] = r[mem[i]] + xi[g][i];
      const auto next = project_simplex_sorted(v, lambda * groups.weights[g]);
      for (std::size_t i = 0; i < mem.size(); ++i) {
        moved = std::max(moved, std::fabs(next[i] - xi[g][i]));
        r[mem[i]] = v[i] - next[i];
      }
      xi[g] = next;
      const double now = objective();
      if (now > obj + slack) throw Error("oracle: block update increased the objective");
      obj = now;
    }
    // Duality gap of the prox at w = r: sum_g lambda*eta_g*max|r_g| - r_g.xi_g.
    // Strong convexity bounds the squared distance to the solution by twice it.
    double gap = 0.0, gap_scale = 0.0;
    for (std::size_t g = 0; g < ng; ++g) {
      const auto& mem = groups.members[g];
      double m = 0.0, dot = 0.0;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        m = std::max(m, r[mem[i]]);
        dot += r[mem[i]] * xi[g][i];
      }
      gap += lambda * groups.weights[g] * m - dot;
      gap_scale += lambda * groups.weights[g] * m;
    }
    // Below the rounding floor of the gap sum, or once a sweep no longer
    // moves the iterate, further sweeps cannot improve the answer.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * gap_scale;
    if (2.0 * gap <= std::max(opts.tol * opts.tol, floor) || moved <= roundoff) {
      std::vector<double> w(p);
      for (std::size_t j = 0; j < p; ++j) w[j] = u[j] < 0.0 ? -r[j] : r[j];
      return w;
    }
  }
  throw ToleranceNotReached("oracle: block-coordinate descent did not converge");
}

double maxflow_oracle(const Network& net) {
  const std::size_t n = net.num_nodes;
  double finite = 0.0;
  for (const auto& a : net.arcs)
    if (std::isfinite(a.capacity)) finite += a.capacity;
  std::vector<std::vector<double>> res(n, std::vector<double>(n, 0.0));
  for (const auto& a : net.arcs) res[a.tail][a.head] += std::isfinite(a.capacity) ? a.capacity : finite + 1.0;

  double value = 0.0;
  std::vector<std::size_t> parent(n);
  while (true) {
    std::fill(parent.begin(), parent.end(), n);
    parent[net.source] = net.source;
    std::deque<std::size_t> queue{net.source};
    while (!queue.empty() && parent[net.sink] == n) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        if (parent[w] == n && res[v][w] > 0.0) {
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
    if (parent[net.sink] == n) break;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t w = net.sink; w != net.source; w = parent[w]) push = std::min(push, res[parent[w]][w]);
    for (std::size_t w = net.sink; w != net.source; w = parent[w]) {
      res[parent[w]][w] -= push;
      res[w][parent[w]] += push;
    }
    value += push;
  }
  return value;
}

double dualnorm_oracle(const std::vector<double>& kappa, const Groups& groups, double tol) {
  const std::size_t p = groups.p;
  if (kappa.size() != p) throw DimensionMismatch("oracle: kappa length mismatch");
  std::vector<char> covered(p, 0);
  for (const auto& mem : groups.members)
    for (auto j : mem) covered[j] = 1;
  double demand = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    if (!covered[j] && kappa[j] != 0.0) return std::numeric_limits<double>::infinity();
    demand += std::fabs(kappa[j]);
  }
  if (demand == 0.0) return 0.0;

  // Nodes: 0 source, 1 sink, 2.. groups, then variables.
  const std::size_t ng = groups.members.size();
  auto feasible = [&](double tau) {
    Network net;
    net.num_nodes = 2 + ng + p;
    for (std::size_t g = 0; g < ng; ++g) {
      net.arcs.push_back({0, 2 + g, tau * groups.weights[g]});
      for (auto j : groups.members[g]) net.arcs.push_back({2 + g, 2 + ng + j, demand + 1.0});
    }
    for (std::size_t j = 0; j < p; ++j) net.arcs.push_back({2 + ng + j, 1, std::fabs(kappa[j])});
    return maxflow_oracle(net) >= demand * (1.0 - 1e-13);
  };
  double lo = 0.0;
  double hi = demand / *std::min_element(groups.weights.begin(), groups.weights.end());
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd least_squares_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd gram = X.transpose() * X;
  return gram.ldlt().solve(X.transpose() * y);
}

}  // namespace proxflow::oracle
