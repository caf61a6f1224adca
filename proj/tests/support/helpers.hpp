#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "proxflow/flow_graph.hpp"
#include "proxflow/group_model.hpp"
#include "proxflow/oracle.hpp"

namespace testing {

inline proxflow::oracle::Groups to_oracle(const proxflow::GroupStructure& gs) {
  proxflow::oracle::Groups out;
  out.p = gs.num_variables();
  for (const auto& g : gs.groups()) {
    out.members.push_back(g.members);
    out.weights.push_back(g.weight);
  }
  return out;
}

inline proxflow::oracle::Network to_oracle(const proxflow::FlowNetwork& net) {
  proxflow::oracle::Network out;
  out.num_nodes = net.num_nodes();
  out.source = proxflow::FlowNetwork::kSource;
  out.sink = proxflow::FlowNetwork::kSink;
  for (const auto& a : net.arcs()) out.arcs.push_back({a.tail, a.head, a.capacity});
  return out;
}

/// Random overlapping groups: each group is a random subset of 1..max_size
/// indices; weights in [0.5, 2].
inline proxflow::GroupStructure random_groups(std::mt19937_64& rng, std::size_t p, std::size_t ng,
                                              std::size_t max_size) {
  std::vector<proxflow::Group> groups;
  std::uniform_int_distribution<std::size_t> size_dist(1, std::min(max_size, p));
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  std::vector<std::size_t> idx(p);
  for (std::size_t j = 0; j < p; ++j) idx[j] = j;
  for (std::size_t k = 0; k < ng; ++k) {
    std::shuffle(idx.begin(), idx.end(), rng);
    proxflow::Group g;
    g.weight = weight_dist(rng);
    g.members.assign(idx.begin(), idx.begin() + static_cast<long>(size_dist(rng)));
    groups.push_back(std::move(g));
  }
  return proxflow::GroupStructure(p, std::move(groups));
}

/// Random tree-structured (nested or disjoint) groups built by recursive
/// interval splitting.
inline proxflow::GroupStructure random_tree_groups(std::mt19937_64& rng, std::size_t p) {
  std::vector<proxflow::Group> groups;
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, p}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    proxflow::Group g;
    g.weight = weight_dist(rng);
    for (std::size_t j = lo; j < hi; ++j) g.members.push_back(j);
    groups.push_back(std::move(g));
    if (hi - lo < 2) continue;
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(lo + 1, hi - 1)(rng);
    if (rng() % 4 != 0) stack.push_back({lo, cut});
    if (rng() % 4 != 0) stack.push_back({cut, hi});
  }
  return proxflow::GroupStructure(p, std::move(groups));
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace testing
