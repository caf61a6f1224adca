#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "proxflow/errors.hpp"
#include "proxflow/max_flow.hpp"

using namespace proxflow;

namespace {

FlowNetwork random_network(std::mt19937_64& rng, std::size_t n, double density) {
  FlowNetwork net;
  for (std::size_t v = 2; v < n; ++v) net.add_node(NodeKind::kVariable, v);
  std::uniform_real_distribution<double> cap(0.0, 1.0);
  std::bernoulli_distribution keep(density);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      if (a == b || b == FlowNetwork::kSource || a == FlowNetwork::kSink) continue;
      if (keep(rng)) net.add_arc(a, b, rng() % 10 == 0 ? kInfiniteCapacity : cap(rng));
    }
  }
  return net;
}

void check_conservation(const FlowNetwork& net, const FlowState& st) {
  const double eps = flow_tolerance(net);
  std::vector<double> balance(net.num_nodes(), 0.0);
  for (ArcId a = 0; a < net.num_arcs(); ++a) {
    const auto& arc = net.arc(a);
    CHECK(st.flow[a] >= -eps);
    CHECK(st.flow[a] <= arc.capacity + eps);
    balance[arc.head] += st.flow[a];
    balance[arc.tail] -= st.flow[a];
  }
  for (NodeId v = 2; v < net.num_nodes(); ++v) CHECK(std::fabs(balance[v]) <= eps);
  CHECK(std::fabs(balance[FlowNetwork::kSink] - st.value) <= eps);
}

}  // namespace

TEST_CASE("bottleneck path") {
  FlowNetwork net;
  const NodeId a = net.add_node(NodeKind::kVariable, 0);
  net.add_arc(FlowNetwork::kSource, a, 2.0);
  net.add_arc(a, FlowNetwork::kSink, 1.0);
  auto st = max_flow(net);
  CHECK(st.value == doctest::Approx(1.0));
  check_conservation(net, st);
}

TEST_CASE("single group graph saturates every sink arc") {
  GroupStructure gs(3, {{1.0, {0, 1, 2}}});
  auto net = build_canonical(gs, 0.3);
  for (ArcId a = 0; a < net.num_arcs(); ++a)
    if (net.arc(a).head == FlowNetwork::kSink) net.set_capacity(a, 0.1);
  auto st = max_flow(net);
  CHECK(st.value == doctest::Approx(0.3).epsilon(1e-12));
  for (ArcId a = 0; a < net.num_arcs(); ++a)
    if (net.arc(a).head == FlowNetwork::kSink) CHECK(st.flow[a] == doctest::Approx(0.1));
  CHECK(st.value == doctest::Approx(proxflow::oracle::maxflow_oracle(testing::to_oracle(net))));
}

TEST_CASE("two singleton groups and their cut") {
  GroupStructure gs(2, {{1.0, {0}}, {1.0, {1}}});
  auto net = build_canonical(gs, 0.2);
  // Arc layout: (s,g1), (s,g2), (g1,u1), (g2,u2), (u1,t), (u2,t).
  net.set_capacity(4, 0.4);
  net.set_capacity(5, 0.0);
  auto st = max_flow(net);
  CHECK(st.value == doctest::Approx(0.2));
  CHECK(st.flow[4] == doctest::Approx(0.2));
  auto cut = min_cut(net, st);
  const NodeId u1 = 2, u2 = 3, g1 = 4, g2 = 5;
  CHECK(cut.source_side[FlowNetwork::kSource]);
  CHECK_FALSE(cut.source_side[FlowNetwork::kSink]);
  CHECK(cut.source_side[g2]);
  CHECK(cut.source_side[u2]);
  CHECK_FALSE(cut.source_side[g1]);
  CHECK_FALSE(cut.source_side[u1]);
  CHECK(cut.capacity == doctest::Approx(0.2));
}

TEST_CASE("degenerate cuts") {
  GroupStructure gs(3, {{1.0, {0, 1}}, {1.0, {1, 2}}});
  auto zero_sink = build_canonical(gs, 1.0);
  for (ArcId a = 0; a < zero_sink.num_arcs(); ++a)
    if (zero_sink.arc(a).head == FlowNetwork::kSink) zero_sink.set_capacity(a, 0.0);
  auto cut = min_cut(zero_sink, max_flow(zero_sink));
  for (NodeId v = 0; v < zero_sink.num_nodes(); ++v) CHECK(bool(cut.source_side[v]) == (v != FlowNetwork::kSink));

  auto zero_source = build_canonical(gs, 0.0);
  for (ArcId a = 0; a < zero_source.num_arcs(); ++a)
    if (zero_source.arc(a).head == FlowNetwork::kSink) zero_source.set_capacity(a, 1.0);
  auto cut2 = min_cut(zero_source, max_flow(zero_source));
  for (NodeId v = 1; v < zero_source.num_nodes(); ++v) CHECK_FALSE(cut2.source_side[v]);
  CHECK(cut2.capacity == 0.0);
}

TEST_CASE("min_cut rejects a non-maximal flow") {
  FlowNetwork net;
  const NodeId a = net.add_node(NodeKind::kVariable, 0);
  net.add_arc(FlowNetwork::kSource, a, 1.0);
  net.add_arc(a, FlowNetwork::kSink, 1.0);
  FlowState st;
  st.flow = {0.0, 0.0};
  CHECK_THROWS_AS(min_cut(net, st), NotMaximal);
}

TEST_CASE("warm start validation") {
  FlowNetwork net;
  const NodeId a = net.add_node(NodeKind::kVariable, 0);
  net.add_arc(FlowNetwork::kSource, a, 1.0);
  net.add_arc(a, FlowNetwork::kSink, 1.0);
  FlowState bad;
  bad.flow = {2.0, 0.0};
  CHECK_THROWS_AS(max_flow(net, &bad), InvalidWarmStart);
  FlowState wrong_shape;
  wrong_shape.flow = {0.0};
  CHECK_THROWS_AS(max_flow(net, &wrong_shape), InvalidWarmStart);
  FlowState partial;
  partial.flow = {0.5, 0.5};
  CHECK(max_flow(net, &partial).value == doctest::Approx(1.0));
}

TEST_CASE("random networks agree with the augmenting-path oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 48;
    auto net = random_network(rng, n, 0.05 + 0.3 * static_cast<double>(rng() % 100) / 100.0);
    auto st = max_flow(net);
    const double ref = proxflow::oracle::maxflow_oracle(testing::to_oracle(net));
    double finite = 0.0;
    for (const auto& a : net.arcs())
      if (std::isfinite(a.capacity)) finite += a.capacity;
    if (ref > finite) continue;  // an all-infinite path makes the value unbounded
    CHECK(std::fabs(st.value - ref) <= 1e-9);
    check_conservation(net, st);
    auto cut = min_cut(net, st);
    CHECK(std::fabs(cut.capacity - st.value) <= flow_tolerance(net));
  }
}

TEST_CASE("warm restarts after capacity perturbation match cold starts") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = random_network(rng, 4 + rng() % 30, 0.2);
    PushRelabel engine(net);
    engine.solve();
    for (ArcId a = 0; a < net.num_arcs(); ++a) {
      if (std::isinf(net.arc(a).capacity)) continue;
      net.set_capacity(a, net.arc(a).capacity * scale(rng));
      engine.set_capacity(a, net.arc(a).capacity);
    }
    engine.solve();
    const auto warm = engine.snapshot();
    const auto cold = max_flow(net);
    double finite = 0.0;
    for (const auto& a : net.arcs())
      if (std::isfinite(a.capacity)) finite += a.capacity;
    if (cold.value > finite) continue;
    CHECK(std::fabs(warm.value - cold.value) <= 1e-9);
    check_conservation(net, warm);
  }
}

TEST_CASE("gap relabeling never lets lifted nodes push before a relabel") {
  std::mt19937_64 rng(9);
  std::size_t gaps_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto net = random_network(rng, 5 + rng() % 12, 0.3);
    PushRelabel engine(net);
    engine.enable_log(true);
    // A node lifted by a gap must not push or receive flow until the next
    // global relabel.
    engine.solve();
    std::vector<char> frozen(net.num_nodes(), 0);
    bool phase_one = true;
    for (const auto& e : engine.log()) {
      using Ev = PushRelabel::Event;
      if (e.event == Ev::kGlobalRelabel) {
        std::fill(frozen.begin(), frozen.end(), 0);
        phase_one = e.node == FlowNetwork::kSink;
      } else if (e.event == Ev::kGap) {
        ++gaps_seen;
        CHECK(phase_one);
        frozen[e.node] = 1;
      } else if (e.event == Ev::kRelabel) {
        frozen[e.node] = 0;
      } else if (e.event == Ev::kPush && phase_one) {
        CHECK_FALSE(frozen[e.node]);
        CHECK_FALSE(frozen[e.other]);
      }
    }
  }
  CHECK(gaps_seen > 0);
}

TEST_CASE("counters and regions") {
  GroupStructure gs(4, {{1.0, {0, 1}}, {1.0, {2, 3}}});
  auto net = build_canonical(gs, 1.0);
  for (ArcId a = 0; a < net.num_arcs(); ++a)
    if (net.arc(a).head == FlowNetwork::kSink) net.set_capacity(a, 0.25);
  PushRelabel engine(net);
  std::vector<NodeId> left{2, 3, 6}, right{4, 5, 7};
  engine.assign_region(left, 1);
  engine.assign_region(right, 2);
  engine.solve(left, 1);
  CHECK(engine.snapshot().value == doctest::Approx(0.5));
  CHECK(engine.counters().pushes > 0);
  engine.solve(right, 2);
  CHECK(engine.snapshot().value == doctest::Approx(1.0));
  CHECK(engine.infinity_value() > 3.0);
}
