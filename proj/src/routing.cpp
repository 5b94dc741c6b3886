#include "dlife/routing.hpp"

#include <algorithm>

namespace dlife {
namespace {

// Candidate messages: not held by the peer and not addressed to the carrier.
// `rule` returns {replicate, delete_after} for a message not destined to the
// peer; delivery to the peer always replicates.
template <typename Rule>
RouterDecision decide_each(const CarrierState& carrier, const PeerSummary& peer, Rule rule) {
  RouterDecision d;
  for (const auto& m : carrier.buffer) {
    if (m.destination == carrier.self.id || peer.holds.contains(m.id)) continue;
    if (m.destination == peer.id) {
      d.replicate.push_back(m.id);
      continue;
    }
    const auto [send, drop] = rule(m);
    if (send) {
      d.replicate.push_back(m.id);
      if (drop) d.delete_after.push_back(m.id);
    }
  }
  return d;
}

// Best local centrality of `node` among the communities it shares with
// `destination`; nullopt when it shares none.
std::optional<double> local_towards(const PeerSummary& node, NodeId destination,
                                    const CommunityMap& communities) {
  std::optional<double> best;
  for (const std::size_t c : communities.memberships(destination)) {
    if (!communities.contains(c, node.id)) continue;
    const auto it = node.local_centrality.find(c);
    const double value = it == node.local_centrality.end() ? 0.0 : it->second;
    best = best ? std::max(*best, value) : value;
  }
  return best;
}

}  // namespace

double PeerSummary::weight_to(NodeId n) const {
  const auto it = weights.find(n);
  return it == weights.end() ? 0.0 : it->second;
}

std::string_view router_name(RouterKind kind) {
  switch (kind) {
    case RouterKind::dlife: return "dlife";
    case RouterKind::dlifecomm: return "dlifecomm";
    case RouterKind::bubblerap: return "bubblerap";
    case RouterKind::epidemic: return "epidemic";
  }
  return "?";
}

std::optional<RouterKind> parse_router(std::string_view name) {
  for (auto kind : {RouterKind::dlife, RouterKind::dlifecomm, RouterKind::bubblerap,
                    RouterKind::epidemic}) {
    if (router_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<ImportanceFallback> parse_importance_fallback(std::string_view name) {
  if (name == "always") return ImportanceFallback::always;
  if (name == "unknown_destination") return ImportanceFallback::unknown_destination;
  return std::nullopt;
}

std::string_view importance_fallback_name(ImportanceFallback mode) {
  return mode == ImportanceFallback::always ? "always" : "unknown_destination";
}

RouterDecision dlife_on_contact(const CarrierState& carrier, const PeerSummary& peer,
                                ImportanceFallback fallback) {
  const auto& self = carrier.self;
  return decide_each(carrier, peer, [&](const BufferedMessage& m) {
    const double peer_w = peer.weight_to(m.destination);
    const double self_w = self.weight_to(m.destination);
    if (peer_w > self_w) return std::pair{true, false};
    if (fallback == ImportanceFallback::unknown_destination && (peer_w > 0 || self_w > 0)) {
      return std::pair{false, false};
    }
    return std::pair{peer.importance > self.importance, false};
  });
}

RouterDecision dlifecomm_on_contact(const CarrierState& carrier, const PeerSummary& peer,
                                    const CommunityMap& communities) {
  const auto& self = carrier.self;
  return decide_each(carrier, peer, [&](const BufferedMessage& m) {
    if (communities.share_community(peer.id, m.destination)) {
      const bool send = peer.weight_to(m.destination) > self.weight_to(m.destination);
      // A carrier outside the destination's community hands the message into
      // it and forgets it.
      const bool drop = send && !communities.share_community(self.id, m.destination);
      return std::pair{send, drop};
    }
    return std::pair{peer.importance > self.importance, false};
  });
}

RouterDecision bubblerap_on_contact(const CarrierState& carrier, const PeerSummary& peer,
                                    const CommunityMap& communities) {
  const auto& self = carrier.self;
  return decide_each(carrier, peer, [&](const BufferedMessage& m) {
    const auto peer_local = local_towards(peer, m.destination, communities);
    const auto self_local = local_towards(self, m.destination, communities);
    if (peer_local) {
      if (!self_local) return std::pair{true, true};
      return std::pair{*peer_local > *self_local, false};
    }
    // Once inside the destination's community the message only moves within it.
    if (self_local) return std::pair{false, false};
    return std::pair{peer.global_centrality > self.global_centrality, false};
  });
}

RouterDecision epidemic_on_contact(const CarrierState& carrier, const PeerSummary& peer) {
  return decide_each(carrier, peer, [](const BufferedMessage&) { return std::pair{true, false}; });
}

RouterDecision decide(RouterKind kind, const CarrierState& carrier, const PeerSummary& peer,
                      const CommunityMap& communities, ImportanceFallback fallback) {
  switch (kind) {
    case RouterKind::dlife: return dlife_on_contact(carrier, peer, fallback);
    case RouterKind::dlifecomm: return dlifecomm_on_contact(carrier, peer, communities);
    case RouterKind::bubblerap: return bubblerap_on_contact(carrier, peer, communities);
    case RouterKind::epidemic: return epidemic_on_contact(carrier, peer);
  }
  return {};
}

}  // namespace dlife
