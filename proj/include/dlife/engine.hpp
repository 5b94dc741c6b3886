#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dlife/buffer.hpp"
#include "dlife/contact.hpp"
#include "dlife/event_log.hpp"
#include "dlife/graph.hpp"
#include "dlife/ledger.hpp"
#include "dlife/message.hpp"
#include "dlife/routing.hpp"

namespace dlife {

struct RouterParams {
  double damping = 0.8;                 // d in the importance update
  int k = 5;                            // clique size for communities
  double familiar_threshold = 43200.0;  // seconds of cumulative contact
  Time centrality_window = seconds(6 * 3600);
  Time recompute_interval = seconds(86400);
  ImportanceFallback importance_fallback = ImportanceFallback::always;  // dLife only
};

struct SimConfig {
  RouterKind router = RouterKind::dlife;
  RouterParams params;
  SampleConfig samples;
  std::optional<std::int64_t> buffer_capacity = 2'000'000;  // bytes; nullopt = unbounded
  std::optional<double> bandwidth_bps;                      // nullopt = unlimited
  EvictionPolicy eviction = EvictionPolicy::oldest_created;
  // Bytes charged on the link for each summary exchange at contact start.
  // Only meaningful with finite bandwidth.
  std::int64_t summary_bytes = 0;

  void validate() const;
};

inline constexpr double kWifiBandwidthBps = 11e6;

// Ticks needed to push `bytes` over the link, rounded up. 0 when unlimited.
Time transfer_duration(std::int64_t bytes, std::optional<double> bandwidth_bps);

struct TransferOutcome {
  MessageId id = 0;
  Time start = 0;
  Time finish = 0;
  bool completed = false;

  friend bool operator==(const TransferOutcome&, const TransferOutcome&) = default;
};

// Sends `messages` (id, size) back to back from `now` over a contact that
// ends at `contact_end`. The first transfer that cannot finish by the end is
// aborted and holds the link, so nothing after it is attempted.
std::vector<TransferOutcome> plan_transfers(
    Time now, Time contact_end, const std::vector<std::pair<MessageId, std::int64_t>>& messages,
    std::optional<double> bandwidth_bps);

// Social state when the run ends. Communities and centralities stay empty
// for routers that do not use them.
struct SimSnapshot {
  std::vector<SocialLedger> ledgers;
  CommunityMap communities;
  CentralityTable centrality;
};

// Replays `trace` against `workload` (already bound to dense ids, ids unique)
// and returns the complete event log. Single-threaded and deterministic.
// Throws ConfigError when the workload references nodes outside the trace.
EventLog run_simulation(const ContactTrace& trace, const std::vector<Message>& workload,
                        const SimConfig& cfg, SimSnapshot* final_state = nullptr);

}  // namespace dlife
