#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "dlife/contact.hpp"
#include "dlife/graph.hpp"

namespace dlife {

using MessageId = std::uint64_t;

enum class RouterKind { dlife, dlifecomm, bubblerap, epidemic };

std::string_view router_name(RouterKind kind);
std::optional<RouterKind> parse_router(std::string_view name);
inline constexpr std::string_view kRouterNames = "dlife, dlifecomm, bubblerap, epidemic";

// What one endpoint tells the other when a contact comes up.
struct PeerSummary {
  NodeId id = 0;
  // TECD weight towards every neighbor with a non-zero weight in the current
  // sample. Missing entries weigh 0.
  std::map<NodeId, double> weights;
  // TECDi importance. Routers only compare it, so any increasing transform
  // works; the engine passes the natural logarithm.
  double importance = 0.0;
  // Messages the node already has: buffered, in flight towards it, or
  // delivered to it as destination.
  std::set<MessageId> holds;
  double global_centrality = 0.0;
  std::map<std::size_t, double> local_centrality;  // community -> value

  double weight_to(NodeId n) const;
};

struct BufferedMessage {
  MessageId id = 0;
  NodeId destination = 0;
  Time created_at = 0;
};

// The deciding node: its own summary plus its buffer, oldest message first.
struct CarrierState {
  PeerSummary self;
  std::vector<BufferedMessage> buffer;
};

// When dLife falls back to comparing importance. `always`: whenever the
// peer's weight to the destination is not higher. `unknown_destination`:
// only when neither side has any weight to the destination.
enum class ImportanceFallback { always, unknown_destination };

std::optional<ImportanceFallback> parse_importance_fallback(std::string_view name);
std::string_view importance_fallback_name(ImportanceFallback mode);

struct RouterDecision {
  std::vector<MessageId> replicate;     // in buffer order
  std::vector<MessageId> delete_after;  // subset of replicate

  bool empty() const { return replicate.empty(); }
  friend bool operator==(const RouterDecision&, const RouterDecision&) = default;
};

RouterDecision dlife_on_contact(const CarrierState& carrier, const PeerSummary& peer,
                                ImportanceFallback fallback = ImportanceFallback::always);

RouterDecision dlifecomm_on_contact(const CarrierState& carrier, const PeerSummary& peer,
                                    const CommunityMap& communities);

RouterDecision bubblerap_on_contact(const CarrierState& carrier, const PeerSummary& peer,
                                    const CommunityMap& communities);

RouterDecision epidemic_on_contact(const CarrierState& carrier, const PeerSummary& peer);

RouterDecision decide(RouterKind kind, const CarrierState& carrier, const PeerSummary& peer,
                      const CommunityMap& communities,
                      ImportanceFallback fallback = ImportanceFallback::always);

}  // namespace dlife
