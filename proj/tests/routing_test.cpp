#include <random>

#include <gtest/gtest.h>

#include "dlife/routing.hpp"

namespace dlife {
namespace {

PeerSummary node(NodeId id, std::map<NodeId, double> weights = {}, double importance = 0.2) {
  PeerSummary s;
  s.id = id;
  s.weights = std::move(weights);
  s.importance = importance;
  return s;
}

CarrierState carrier_with(PeerSummary self, std::vector<std::pair<MessageId, NodeId>> msgs) {
  CarrierState c;
  c.self = std::move(self);
  for (auto [id, dest] : msgs) c.buffer.push_back({id, dest, static_cast<Time>(id)});
  return c;
}

using Ids = std::vector<MessageId>;

TEST(DlifeRouterTest, HigherWeightReplicates) {
  const auto c = carrier_with(node(0, {{9, 2.0}}), {{1, 9}});
  const auto d = dlife_on_contact(c, node(1, {{9, 5.0}}));
  EXPECT_EQ(d.replicate, Ids{1});
  EXPECT_TRUE(d.delete_after.empty());
}

TEST(DlifeRouterTest, TiesKeep) {
  const auto c = carrier_with(node(0, {}, 0.6), {{1, 9}});
  EXPECT_TRUE(dlife_on_contact(c, node(1, {}, 0.6)).empty());
  EXPECT_EQ(dlife_on_contact(c, node(1, {}, 0.61)).replicate, Ids{1});
}

TEST(DlifeRouterTest, LowerWeightFallsBackToImportance) {
  const auto c = carrier_with(node(0, {{9, 5.0}}, 0.3), {{1, 9}});
  EXPECT_EQ(dlife_on_contact(c, node(1, {{9, 1.0}}, 0.9)).replicate, Ids{1});
  EXPECT_TRUE(dlife_on_contact(c, node(1, {{9, 1.0}}, 0.2)).empty());
}

TEST(DlifeRouterTest, FallbackLimitedToUnknownDestinations) {
  const auto known = carrier_with(node(0, {{9, 5.0}}, 0.3), {{1, 9}, {2, 8}});
  const auto d = dlife_on_contact(known, node(1, {}, 0.9), ImportanceFallback::unknown_destination);
  EXPECT_EQ(d.replicate, Ids{2});  // only destination 8 is unknown to both
  EXPECT_EQ(dlife_on_contact(known, node(1, {}, 0.9)).replicate, (Ids{1, 2}));
  EXPECT_EQ(parse_importance_fallback("unknown_destination"), ImportanceFallback::unknown_destination);
  EXPECT_FALSE(parse_importance_fallback("never"));
}

TEST(DlifeRouterTest, DestinationAlwaysGetsItsMessage) {
  const auto c = carrier_with(node(0, {{1, 100.0}}, 5.0), {{1, 1}});
  EXPECT_EQ(dlife_on_contact(c, node(1, {}, 0.2)).replicate, Ids{1});
}

TEST(DlifeCommRouterTest, Examples) {
  const CommunityMap comm({{1, 2, 9}, {0, 3}}, 10);
  const auto c = carrier_with(node(0, {{9, 1.0}}, 0.5), {{1, 9}});
  // Peer inside the destination's community with higher weight: hand-off.
  const auto inside = dlifecomm_on_contact(c, node(1, {{9, 2.0}}), comm);
  EXPECT_EQ(inside.replicate, Ids{1});
  EXPECT_EQ(inside.delete_after, Ids{1});
  // Inside but lower weight: nothing, even with higher importance.
  EXPECT_TRUE(dlifecomm_on_contact(c, node(1, {{9, 0.5}}, 9.0), comm).empty());
  // Outside with lower importance.
  EXPECT_TRUE(dlifecomm_on_contact(c, node(3, {{9, 9.0}}, 0.1), comm).empty());
  // Outside with higher importance: copy, carrier keeps it.
  const auto out = dlifecomm_on_contact(c, node(3, {}, 0.9), comm);
  EXPECT_EQ(out.replicate, Ids{1});
  EXPECT_TRUE(out.delete_after.empty());
}

TEST(DlifeCommRouterTest, CarrierInsideKeepsCopy) {
  const CommunityMap comm({{0, 1, 9}}, 10);
  const auto c = carrier_with(node(0, {{9, 1.0}}), {{1, 9}});
  const auto d = dlifecomm_on_contact(c, node(1, {{9, 2.0}}), comm);
  EXPECT_EQ(d.replicate, Ids{1});
  EXPECT_TRUE(d.delete_after.empty());
}

TEST(DlifeCommRouterTest, DestinationWithoutCommunityUsesImportance) {
  const CommunityMap comm({{0, 1, 2}}, 10);
  const auto c = carrier_with(node(0, {{9, 1.0}}, 0.5), {{1, 9}});
  EXPECT_TRUE(dlifecomm_on_contact(c, node(1, {{9, 50.0}}, 0.4), comm).empty());
  EXPECT_EQ(dlifecomm_on_contact(c, node(1, {}, 0.7), comm).replicate, Ids{1});
}

PeerSummary central(NodeId id, double global, std::map<std::size_t, double> local = {}) {
  auto s = node(id);
  s.global_centrality = global;
  s.local_centrality = std::move(local);
  return s;
}

TEST(BubbleRapRouterTest, GlobalClimbOutsideDestinationCommunity) {
  const CommunityMap comm({{5, 9}}, 10);
  const auto c = carrier_with(central(0, 3), {{1, 9}});
  EXPECT_EQ(bubblerap_on_contact(c, central(1, 10), comm).replicate, Ids{1});
  EXPECT_TRUE(bubblerap_on_contact(c, central(1, 3), comm).empty());
}

TEST(BubbleRapRouterTest, LocalClimbInsideDestinationCommunity) {
  const CommunityMap comm({{0, 1, 9}}, 10);
  const auto c = carrier_with(central(0, 0, {{0, 5}}), {{1, 9}});
  EXPECT_TRUE(bubblerap_on_contact(c, central(1, 100, {{0, 2}}), comm).empty());
  EXPECT_EQ(bubblerap_on_contact(c, central(1, 0, {{0, 6}}), comm).replicate, Ids{1});
}

TEST(BubbleRapRouterTest, EnteringDestinationCommunityHandsOff) {
  const CommunityMap comm({{1, 9}}, 10);
  const auto c = carrier_with(central(0, 50), {{1, 9}});
  const auto d = bubblerap_on_contact(c, central(1, 0, {{0, 0}}), comm);
  EXPECT_EQ(d.replicate, Ids{1});
  EXPECT_EQ(d.delete_after, Ids{1});
}

TEST(BubbleRapRouterTest, NeverLeavesDestinationCommunity) {
  const CommunityMap comm({{0, 9}}, 10);
  const auto c = carrier_with(central(0, 1, {{0, 1}}), {{1, 9}});
  EXPECT_TRUE(bubblerap_on_contact(c, central(1, 100), comm).empty());
}

TEST(EpidemicRouterTest, FloodsWhatThePeerLacks) {
  const auto c = carrier_with(node(0), {{1, 9}, {2, 9}, {3, 9}, {4, 9}, {5, 9}});
  auto peer = node(1);
  peer.holds = {2, 4};
  EXPECT_EQ(epidemic_on_contact(c, peer).replicate, (Ids{1, 3, 5}));
  peer.holds = {1, 2, 3, 4, 5};
  EXPECT_TRUE(epidemic_on_contact(c, peer).empty());
  EXPECT_TRUE(epidemic_on_contact(carrier_with(node(0), {}), peer).empty());
}

// Random carrier/peer pairs for the invariants below.
struct Scenario {
  CarrierState carrier;
  PeerSummary peer;
  CommunityMap communities;
};

Scenario random_scenario(std::mt19937_64& rng) {
  const std::uint32_t n = 8;
  std::uniform_real_distribution<double> u(0, 10);
  auto summary = [&](NodeId id) {
    auto s = node(id, {}, 0.2 + u(rng));
    for (NodeId x = 0; x < n; ++x)
      if (x != id && rng() % 2) s.weights[x] = u(rng);
    s.global_centrality = u(rng);
    for (std::size_t c = 0; c < 3; ++c) s.local_centrality[c] = u(rng);
    return s;
  };
  Scenario sc;
  const NodeId self = rng() % n;
  NodeId other = rng() % n;
  if (other == self) other = (other + 1) % n;
  sc.carrier.self = summary(self);
  sc.peer = summary(other);
  for (MessageId id = 0; id < 12; ++id) {
    sc.carrier.buffer.push_back({id, static_cast<NodeId>(rng() % n), static_cast<Time>(id)});
    if (rng() % 4 == 0) sc.peer.holds.insert(id);
  }
  std::vector<std::vector<NodeId>> comms(3);
  for (NodeId x = 0; x < n; ++x)
    for (auto& c : comms)
      if (rng() % 3 == 0) c.push_back(x);
  sc.communities = CommunityMap(comms, n);
  return sc;
}

constexpr RouterKind kAll[] = {RouterKind::dlife, RouterKind::dlifecomm, RouterKind::bubblerap,
                               RouterKind::epidemic};

TEST(RouterInvariantTest, DecisionsRespectHoldingsAndDelivery) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto sc = random_scenario(rng);
    for (const auto kind : kAll) {
      const auto d = decide(kind, sc.carrier, sc.peer, sc.communities);
      std::set<MessageId> sent(d.replicate.begin(), d.replicate.end());
      ASSERT_EQ(sent.size(), d.replicate.size());
      for (const auto id : d.delete_after) ASSERT_TRUE(sent.contains(id));
      for (const auto& m : sc.carrier.buffer) {
        if (sc.peer.holds.contains(m.id) || m.destination == sc.carrier.self.id) {
          ASSERT_FALSE(sent.contains(m.id)) << router_name(kind);
        } else if (m.destination == sc.peer.id) {
          ASSERT_TRUE(sent.contains(m.id)) << router_name(kind);
        }
      }
      if (kind == RouterKind::dlife || kind == RouterKind::epidemic) {
        ASSERT_TRUE(d.delete_after.empty());
      }
      // Same inputs, same answer.
      ASSERT_EQ(d, decide(kind, sc.carrier, sc.peer, sc.communities));
      // Epidemic sends a superset.
      const auto flood = epidemic_on_contact(sc.carrier, sc.peer);
      ASSERT_TRUE(std::includes(flood.replicate.begin(), flood.replicate.end(),
                                d.replicate.begin(), d.replicate.end()));
    }
  }
}

TEST(RouterInvariantTest, DlifeIgnoresWeightScale) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 2000; ++trial) {
    auto sc = random_scenario(rng);
    const double c = std::uniform_real_distribution<double>(0.001, 1000)(rng);
    const auto before = dlife_on_contact(sc.carrier, sc.peer);
    for (auto& [n, w] : sc.carrier.self.weights) w *= c;
    for (auto& [n, w] : sc.peer.weights) w *= c;
    ASSERT_EQ(before, dlife_on_contact(sc.carrier, sc.peer));
  }
}

TEST(RouterNamesTest, RoundTrip) {
  for (const auto kind : kAll) EXPECT_EQ(parse_router(router_name(kind)), kind);
  EXPECT_FALSE(parse_router("prophet"));
}

}  // namespace
}  // namespace dlife
