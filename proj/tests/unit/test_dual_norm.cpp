#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "proxflow/dual_norm.hpp"
#include "proxflow/errors.hpp"

using namespace proxflow;

TEST_CASE("penalty") {
  GroupStructure gs(3, {{2.0, {0, 1}}, {1.0, {1, 2}}});
  CHECK(penalty({0.5, -1.0, 0.25}, gs) == doctest::Approx(3.0));
  CHECK(penalty({0.0, 0.0, 0.0}, gs) == 0.0);
  CHECK_THROWS_AS(penalty({1.0}, gs), DimensionMismatch);
}

TEST_CASE("dual norm examples") {
  CHECK(dual_norm({0.3, -0.7}, singletons(2)).tau == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(dual_norm({0.3, 0.7}, GroupStructure(2, {{1.0, {0, 1}}})).tau == doctest::Approx(1.0).epsilon(1e-12));
  auto r = dual_norm({0.4, 0.6, 0.4}, GroupStructure(3, {{1.0, {0, 1}}, {1.0, {1, 2}}}));
  CHECK(r.tau == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(dual_norm({0.0, 0.0}, singletons(2)).tau == 0.0);
  CHECK_THROWS_AS(dual_norm({1.0}, singletons(2)), DimensionMismatch);
}

TEST_CASE("descent onto the sink side") {
  // The first guess 1.1/2 cannot serve variable 1 through {1,2} alone; the
  // descent keeps {1,2} and the answer is 1.
  GroupStructure gs(3, {{1.0, {0, 1}}, {1.0, {1, 2}}});
  auto r = dual_norm({1.0, 0.05, 0.05}, gs);
  CHECK(r.iterations >= 1);
  CHECK(r.tau == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uncovered variables") {
  GroupStructure gs(3, {{1.0, {0, 1}}});
  CHECK(std::isinf(dual_norm({0.1, 0.1, 0.5}, gs).tau));
  CHECK(dual_norm({0.1, 0.1, 0.0}, gs).tau == doctest::Approx(0.2));
}

TEST_CASE("dual norm matches the bisection oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 1 + rng() % 20;
    auto gs = testing::random_groups(rng, p, 1 + rng() % 8, p);
    auto kappa = testing::uniform_vector(rng, p);
    std::vector<char> covered(p, 0);
    for (const auto& g : gs.groups())
      for (auto j : g.members) covered[j] = 1;
    for (std::size_t j = 0; j < p; ++j)
      if (!covered[j]) kappa[j] = 0.0;
    const double got = dual_norm(kappa, gs).tau;
    const double ref = oracle::dualnorm_oracle(kappa, testing::to_oracle(gs));
    CHECK(std::fabs(got - ref) <= 1e-8);
  }
}

TEST_CASE("dual norm properties") {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 1 + rng() % 15;
    auto gs = testing::random_groups(rng, p, 1 + rng() % 6, p);
    std::vector<char> covered(p, 0);
    for (const auto& g : gs.groups())
      for (auto j : g.members) covered[j] = 1;
    auto kappa = testing::uniform_vector(rng, p);
    for (std::size_t j = 0; j < p; ++j)
      if (!covered[j]) kappa[j] = 0.0;
    DualNorm eval(gs);
    const double tau = eval(kappa).tau;
    const double c = std::uniform_real_distribution<double>(0.01, 100.0)(rng);
    auto scaled = kappa;
    for (auto& x : scaled) x *= c;
    CHECK(std::fabs(eval(scaled).tau - c * tau) <= 1e-10 * c * std::max(tau, 1.0));

    auto z = testing::uniform_vector(rng, p);
    double dot = 0.0;
    for (std::size_t j = 0; j < p; ++j) dot += z[j] * kappa[j];
    CHECK(dot <= penalty(z, gs) * tau + 1e-9);
  }
}
