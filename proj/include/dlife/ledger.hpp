#pragma once

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "dlife/contact.hpp"

namespace dlife {

// Contact statistics of one peer for one daily sample.
struct PeerSampleStats {
  double tct_current_day = 0.0;  // seconds of contact so far in this sample today
  double ad = 0.0;               // cumulative moving average of daily TCT, seconds
  std::int64_t days_counted = 0;
};

// Per-node social state: contact time accumulators, their per-sample moving
// averages, the time-evolving contact duration (TECD) weight towards each
// peer and the node's own TECD importance.
//
// The ledger has a clock: the slot it is currently accumulating. Fragments
// may be recorded for that slot or any earlier one; roll_sample closes the
// current slot and moves the clock to the next.
class SocialLedger {
 public:
  SocialLedger(NodeId owner, SampleConfig cfg, double damping = 0.8);

  NodeId owner() const { return owner_; }
  const SampleConfig& config() const { return cfg_; }
  double damping() const { return damping_; }
  SampleSlot clock() const { return clock_; }

  // Adds `duration_seconds` of contact with `peer` during `slot`. A fragment
  // for an already rolled slot is folded straight into that sample's average
  // (the average counts every day, so a late day's TCT contributes
  // duration / days_counted). Throws OrderingError for future slots and
  // RecordError for non-positive durations.
  void record_contact_fragment(NodeId peer, SampleSlot slot, double duration_seconds);

  // Marks `peer` as met in the current slot and caches the importance it
  // advertised. N_x for the importance update is the set of peers marked
  // since the last roll.
  void note_encounter(NodeId peer, double peer_importance);
  // Same, with the importance given as its natural logarithm.
  void note_encounter_log(NodeId peer, double peer_log_importance);

  // Closes `finished`, which must equal clock(). Every peer's average for the
  // sample is updated, including peers not met today.
  void roll_sample(SampleSlot finished);

  // Sum over the t samples starting at `sample` (wrapping) of
  // t / (t + offset) * ad. Unknown peers weigh 0.
  double tecd_weight(NodeId peer, int sample) const;

  // Weights towards every peer with a non-zero weight. Cached per sample
  // until an average changes.
  const std::map<NodeId, double>& weights_to_all_neighbors(int sample) const;

  // (1 - d) + d * sum_{y in N_x} w(x, y) * I_y / |N_x|, using the cached
  // importance of each neighbor. Stores and returns the value for `sample`.
  //
  // Weights are in seconds, so every encounter can multiply importance by
  // thousands and values pass the double range within weeks. Importance is
  // therefore kept as a logarithm; the natural-scale accessors may return
  // inf where the logarithm is still exact.
  double update_importance(int sample);

  double importance(int sample) const { return std::exp(log_importance(sample)); }
  double log_importance(int sample) const { return log_importance_.at(sample); }

  // Cached importance last advertised by `peer`, or (1 - d) if never seen.
  double known_importance(NodeId peer) const { return std::exp(known_log_importance(peer)); }
  double known_log_importance(NodeId peer) const;

  const std::set<NodeId>& current_neighbors() const { return neighbors_; }

  // nullptr for peers never recorded.
  const std::vector<PeerSampleStats>* peer_stats(NodeId peer) const;
  const std::map<NodeId, std::vector<PeerSampleStats>>& peers() const { return peers_; }

  // Test and tooling hook: sets the rolled average directly.
  void set_average(NodeId peer, int sample, double ad);

 private:
  std::vector<PeerSampleStats>& stats_for(NodeId peer);

  NodeId owner_;
  SampleConfig cfg_;
  double damping_;
  SampleSlot clock_{};
  std::vector<std::int64_t> rolls_;  // rolls completed per sample index
  std::map<NodeId, std::vector<PeerSampleStats>> peers_;
  std::vector<double> log_importance_;
  std::map<NodeId, double> known_log_importance_;
  std::set<NodeId> neighbors_;

  std::uint64_t averages_version_ = 1;
  struct WeightCache {
    std::uint64_t version = 0;
    std::map<NodeId, double> weights;
  };
  mutable std::vector<WeightCache> weight_cache_;
};

}  // namespace dlife
