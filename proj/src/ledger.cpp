#include "dlife/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dlife/errors.hpp"

namespace dlife {

SocialLedger::SocialLedger(NodeId owner, SampleConfig cfg, double damping)
    : owner_(owner),
      cfg_(cfg),
      damping_(damping),
      rolls_(static_cast<std::size_t>(cfg.samples_per_day), 0),
      log_importance_(static_cast<std::size_t>(cfg.samples_per_day), std::log(1.0 - damping)),
      weight_cache_(static_cast<std::size_t>(cfg.samples_per_day)) {
  cfg_.validate();
  if (!(damping >= 0.0 && damping <= 1.0)) {
    throw ConfigError("damping", "must be in [0, 1]");
  }
}

std::vector<PeerSampleStats>& SocialLedger::stats_for(NodeId peer) {
  auto [it, inserted] = peers_.try_emplace(peer);
  if (inserted) {
    it->second.resize(rolls_.size());
    for (std::size_t s = 0; s < rolls_.size(); ++s) it->second[s].days_counted = rolls_[s];
  }
  return it->second;
}

void SocialLedger::record_contact_fragment(NodeId peer, SampleSlot slot,
                                           double duration_seconds) {
  if (!(duration_seconds > 0.0)) {
    throw RecordError("contact fragment duration must be positive");
  }
  if (slot > clock_) {
    throw OrderingError("fragment for slot (" + std::to_string(slot.day) + "," +
                        std::to_string(slot.sample) + ") is ahead of the ledger clock");
  }
  auto& stats = stats_for(peer)[static_cast<std::size_t>(slot.sample)];
  if (slot == clock_) {
    stats.tct_current_day += duration_seconds;
    neighbors_.insert(peer);
  } else if (stats.days_counted > 0) {
    stats.ad += duration_seconds / static_cast<double>(stats.days_counted);
    ++averages_version_;
  }
}

void SocialLedger::note_encounter(NodeId peer, double peer_importance) {
  note_encounter_log(peer, std::log(peer_importance));
}

void SocialLedger::note_encounter_log(NodeId peer, double peer_log_importance) {
  stats_for(peer);
  neighbors_.insert(peer);
  known_log_importance_[peer] = peer_log_importance;
}

void SocialLedger::roll_sample(SampleSlot finished) {
  if (finished != clock_) {
    throw OrderingError("roll of slot (" + std::to_string(finished.day) + "," +
                        std::to_string(finished.sample) + ") does not match the ledger clock");
  }
  const auto s = static_cast<std::size_t>(finished.sample);
  for (auto& [peer, samples] : peers_) {
    auto& st = samples[s];
    const auto j = static_cast<double>(st.days_counted + 1);
    st.ad = (st.tct_current_day + (j - 1.0) * st.ad) / j;
    st.tct_current_day = 0.0;
    ++st.days_counted;
  }
  ++rolls_[s];
  ++averages_version_;
  neighbors_.clear();
  clock_ = next_slot(clock_, cfg_);
}

double SocialLedger::tecd_weight(NodeId peer, int sample) const {
  const auto it = peers_.find(peer);
  if (it == peers_.end()) return 0.0;
  const int t = cfg_.samples_per_day;
  double weight = 0.0;
  for (int offset = 0; offset < t; ++offset) {
    const double coeff = static_cast<double>(t) / static_cast<double>(t + offset);
    weight += coeff * it->second[static_cast<std::size_t>((sample + offset) % t)].ad;
  }
  return weight;
}

const std::map<NodeId, double>& SocialLedger::weights_to_all_neighbors(int sample) const {
  auto& cache = weight_cache_.at(static_cast<std::size_t>(sample));
  if (cache.version == averages_version_) return cache.weights;
  cache.weights.clear();
  for (const auto& [peer, stats] : peers_) {
    const double w = tecd_weight(peer, sample);
    if (w > 0.0) cache.weights.emplace(peer, w);
  }
  cache.version = averages_version_;
  return cache.weights;
}

namespace {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

double SocialLedger::update_importance(int sample) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  // log(w * I_y) per neighbor; zero weights contribute nothing.
  std::vector<double> terms;
  for (const NodeId y : neighbors_) {
    const double w = tecd_weight(y, sample);
    if (w > 0.0) terms.push_back(std::log(w) + known_log_importance(y));
  }
  double log_sum = kNegInf;
  if (!terms.empty() && damping_ > 0.0) {
    const double top = *std::max_element(terms.begin(), terms.end());
    double scaled = 0.0;
    for (const double t : terms) scaled += std::exp(t - top);
    log_sum = std::log(damping_) - std::log(static_cast<double>(neighbors_.size())) + top +
              std::log(scaled);
  }
  const double value = log_add(std::log(1.0 - damping_), log_sum);
  log_importance_.at(static_cast<std::size_t>(sample)) = value;
  return std::exp(value);
}

double SocialLedger::known_log_importance(NodeId peer) const {
  const auto it = known_log_importance_.find(peer);
  return it == known_log_importance_.end() ? std::log(1.0 - damping_) : it->second;
}

const std::vector<PeerSampleStats>* SocialLedger::peer_stats(NodeId peer) const {
  const auto it = peers_.find(peer);
  return it == peers_.end() ? nullptr : &it->second;
}

void SocialLedger::set_average(NodeId peer, int sample, double ad) {
  stats_for(peer).at(static_cast<std::size_t>(sample)).ad = ad;
  ++averages_version_;
}

}  // namespace dlife
