#include "dlife/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include "dlife/errors.hpp"
#include "dlife/graph.hpp"
#include "dlife/ledger.hpp"

namespace dlife {

void SimConfig::validate() const {
  samples.validate();
  if (!(params.damping >= 0.0 && params.damping <= 1.0)) {
    throw ConfigError("router_params.damping", "must be in [0, 1]");
  }
  if (params.k < 3) throw ConfigError("router_params.k", "must be >= 3");
  if (params.familiar_threshold < 0) {
    throw ConfigError("router_params.familiar_threshold", "must be >= 0");
  }
  if (params.centrality_window <= 0) {
    throw ConfigError("router_params.centrality_window", "must be positive");
  }
  if (params.recompute_interval <= 0) {
    throw ConfigError("router_params.recompute_interval", "must be positive");
  }
  if (buffer_capacity && *buffer_capacity <= 0) {
    throw ConfigError("buffer_bytes", "must be positive");
  }
  if (bandwidth_bps && !(*bandwidth_bps > 0.0)) {
    throw ConfigError("bandwidth_bps", "must be positive");
  }
  if (summary_bytes < 0) throw ConfigError("summary_bytes", "must be >= 0");
}

Time transfer_duration(std::int64_t bytes, std::optional<double> bandwidth_bps) {
  if (!bandwidth_bps) return 0;
  const double secs = static_cast<double>(bytes) * 8.0 / *bandwidth_bps;
  return static_cast<Time>(std::ceil(secs * static_cast<double>(kTicksPerSecond) - 1e-6));
}

std::vector<TransferOutcome> plan_transfers(
    Time now, Time contact_end, const std::vector<std::pair<MessageId, std::int64_t>>& messages,
    std::optional<double> bandwidth_bps) {
  std::vector<TransferOutcome> out;
  Time cursor = now;
  for (const auto& [id, size] : messages) {
    const Time finish = cursor + transfer_duration(size, bandwidth_bps);
    const bool completed = finish <= contact_end;
    out.push_back({id, cursor, completed ? finish : contact_end, completed});
    if (!completed) break;
    cursor = finish;
  }
  return out;
}

namespace {

// Same-time events run in this order.
enum class Step : int {
  transfer_done = 0,
  contact_down = 1,
  sample_roll = 2,
  recompute = 3,
  centrality = 4,
  expire = 5,
  create = 6,
  contact_up = 7,
};

struct Event {
  Time time;
  Step step;
  NodeId a;
  NodeId b;
  MessageId message;
  std::size_t index;

  auto key() const { return std::tie(time, step, a, b, message, index); }
};

struct EventAfter {
  bool operator()(const Event& l, const Event& r) const { return l.key() > r.key(); }
};

struct Transfer {
  NodeId from;
  NodeId to;
  Message message;
  bool delete_after;
  Time finish;
};

struct Link {
  ContactEvent contact;
  bool active = false;
  bool stalled = false;  // holds a transfer that cannot finish before contact end
  std::optional<Transfer> inflight;
  Time busy_until = 0;
  int next_direction = 0;  // 0: a -> b first
  // Messages already sent per direction during this contact. A copy the
  // receiver refused or later evicted is not offered again until the next
  // contact.
  std::set<MessageId> sent[2];
};

struct NodeState {
  MessageBuffer buffer;
  SocialLedger ledger;
  std::set<MessageId> delivered;
  std::set<MessageId> incoming;
  // Copies given up under the community rule; never taken back.
  std::set<MessageId> released;
  std::set<std::size_t> links;
};

constexpr MessageId kNoMessage = std::numeric_limits<MessageId>::max();

class Simulation {
 public:
  Simulation(const ContactTrace& trace, const std::vector<Message>& workload,
             const SimConfig& cfg)
      : cfg_(cfg), workload_(workload), horizon_(trace.duration) {
    cfg_.validate();
    node_count_ = trace.node_count;
    std::set<MessageId> ids;
    for (std::size_t i = 0; i < workload.size(); ++i) {
      const auto& m = workload[i];
      const std::string field = "workload[" + std::to_string(i) + "]";
      if (m.source >= node_count_ || m.destination >= node_count_) {
        throw ConfigError(field, "node outside the trace");
      }
      if (m.source == m.destination || m.size <= 0 || m.ttl <= 0 || m.created_at < 0) {
        throw ConfigError(field, "invalid message");
      }
      if (m.id == kNoMessage || !ids.insert(m.id).second) {
        throw ConfigError(field, "duplicate message id");
      }
    }
    nodes_.reserve(node_count_);
    for (NodeId n = 0; n < node_count_; ++n) {
      nodes_.push_back(NodeState{MessageBuffer(cfg_.buffer_capacity, cfg_.eviction),
                                 SocialLedger(n, cfg_.samples, cfg_.params.damping),
                                 {}, {}, {}, {}});
    }
    contacts_ = merge_overlapping(trace.events);
    links_.reserve(contacts_.size());
    for (std::size_t i = 0; i < contacts_.size(); ++i) {
      const auto& c = contacts_[i];
      Link link;
      link.contact = c;
      links_.push_back(std::move(link));
      push({c.start, Step::contact_up, c.a, c.b, kNoMessage, i});
      push({c.end, Step::contact_down, c.a, c.b, kNoMessage, i});
    }
    for (std::size_t i = 0; i < workload.size(); ++i) {
      const auto& m = workload[i];
      push({m.created_at, Step::create, std::min(m.source, m.destination),
            std::max(m.source, m.destination), m.id, i});
    }
    const Time sample = cfg_.samples.sample_length();
    if (sample <= horizon_) push({sample, Step::sample_roll, 0, 0, kNoMessage, 0});
    if (uses_communities() && cfg_.params.recompute_interval <= horizon_) {
      push({cfg_.params.recompute_interval, Step::recompute, 0, 0, kNoMessage, 0});
    }
    if (cfg_.router == RouterKind::bubblerap && cfg_.params.centrality_window <= horizon_) {
      push({cfg_.params.centrality_window, Step::centrality, 0, 0, kNoMessage, 0});
    }
  }

  EventLog run() {
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      switch (ev.step) {
        case Step::transfer_done: on_transfer_done(ev); break;
        case Step::contact_down: on_contact_down(ev); break;
        case Step::sample_roll: on_sample_roll(ev); break;
        case Step::recompute: on_recompute(ev); break;
        case Step::centrality: on_centrality(ev); break;
        case Step::expire: on_expire(ev); break;
        case Step::create: on_create(ev); break;
        case Step::contact_up: on_contact_up(ev); break;
      }
      drain(ev.time);
    }
    return std::move(log_);
  }

  SimSnapshot snapshot() const {
    SimSnapshot snap{{}, communities_, centrality_};
    for (const auto& node : nodes_) snap.ledgers.push_back(node.ledger);
    return snap;
  }

 private:
  bool uses_communities() const {
    return cfg_.router == RouterKind::dlifecomm || cfg_.router == RouterKind::bubblerap;
  }
  bool uses_ledger_summary() const {
    return cfg_.router == RouterKind::dlife || cfg_.router == RouterKind::dlifecomm;
  }

  void push(const Event& ev) { queue_.push(ev); }

  void record(Time t, EventKind kind, MessageId id, NodeId from, NodeId to,
              std::int64_t size = 0, Time ttl = 0) {
    log_.append(LogRecord{t, kind, id, from, to, size, ttl});
  }

  int current_sample(Time now) const { return sample_slot_of(now, cfg_.samples).sample; }

  // The peer's `holds` stays empty: carrier_of already leaves out what the
  // peer has, which is equivalent because routers judge messages one by one.
  PeerSummary summary_of(NodeId n, int sample) const {
    const auto& node = nodes_[n];
    PeerSummary s;
    s.id = n;
    if (uses_ledger_summary()) s.weights = node.ledger.weights_to_all_neighbors(sample);
    s.importance = node.ledger.log_importance(sample);
    if (cfg_.router == RouterKind::bubblerap && n < centrality_.global.size()) {
      s.global_centrality = centrality_.global[n];
      s.local_centrality = centrality_.local[n];
    }
    return s;
  }

  bool has_seen(NodeId n, MessageId id) const {
    const auto& node = nodes_[n];
    return node.buffer.contains(id) || node.delivered.contains(id) ||
           node.incoming.contains(id) || node.released.contains(id);
  }

  // Unexpired messages of `n` that `peer` has not seen and was not already
  // sent on this link direction.
  CarrierState carrier_of(NodeId n, NodeId peer, const std::set<MessageId>& sent, int sample,
                          Time now) const {
    CarrierState c{summary_of(n, sample), {}};
    for (const auto* m : nodes_[n].buffer.ordered()) {
      if (m->expires_at() <= now || sent.contains(m->id) || has_seen(peer, m->id)) continue;
      c.buffer.push_back({m->id, m->destination, m->created_at});
    }
    return c;
  }

  void enqueue_links_of(NodeId n) {
    for (const std::size_t li : nodes_[n].links) pending_.push_back(li);
  }

  void drain(Time now) {
    while (!pending_.empty()) {
      const std::size_t li = pending_.front();
      pending_.pop_front();
      pump(li, now);
    }
  }

  // Starts transfers on an idle link until it is busy or neither side has
  // anything to send. Directions alternate between transfers.
  void pump(std::size_t li, Time now) {
    while (true) {
      Link& link = links_[li];
      if (!link.active || link.stalled || link.inflight || link.busy_until > now) return;
      const int sample = current_sample(now);
      bool sent = false;
      for (int attempt = 0; attempt < 2 && !sent; ++attempt) {
        const int dir = (link.next_direction + attempt) % 2;
        const NodeId from = dir == 0 ? link.contact.a : link.contact.b;
        const NodeId to = link.contact.other(from);
        const CarrierState carrier = carrier_of(from, to, link.sent[dir], sample, now);
        if (carrier.buffer.empty()) continue;
        const RouterDecision d = decide(cfg_.router, carrier, summary_of(to, sample), communities_,
                                        cfg_.params.importance_fallback);
        if (d.replicate.empty()) continue;
        sent = true;
        const MessageId id = d.replicate.front();
        const bool drop = std::find(d.delete_after.begin(), d.delete_after.end(), id) !=
                          d.delete_after.end();
        link.next_direction = 1 - dir;
        link.sent[dir].insert(id);
        const Message& m = *nodes_[from].buffer.find(id);
        const Time duration = transfer_duration(m.size, cfg_.bandwidth_bps);
        Transfer t{from, to, m, drop, now + duration};
        nodes_[to].incoming.insert(id);
        if (duration == 0) {
          complete(li, t, now);
        } else {
          link.inflight = t;
          if (t.finish <= link.contact.end) {
            push({t.finish, Step::transfer_done, link.contact.a, link.contact.b, id, li});
          } else {
            link.stalled = true;
          }
          return;
        }
      }
      if (!sent) return;
    }
  }

  void complete(std::size_t li, const Transfer& t, Time now) {
    auto& receiver = nodes_[t.to];
    const MessageId id = t.message.id;
    receiver.incoming.erase(id);
    pending_.push_back(li);
    if (now >= t.message.expires_at()) {
      record(now, EventKind::transfer_aborted, id, t.from, t.to);
      return;
    }
    bool landed = false;
    if (t.to == t.message.destination) {
      if (receiver.delivered.insert(id).second) {
        record(now, EventKind::replicated, id, t.from, t.to);
        record(now, EventKind::delivered, id, t.from, t.to);
        landed = true;
      }
    } else if (!receiver.buffer.contains(id)) {
      const auto result = receiver.buffer.admit(t.message, now);
      for (const MessageId evicted : result.evicted) {
        holders_[evicted].erase(t.to);
        record(now, EventKind::dropped_buffer_full, evicted, t.to, t.to);
      }
      if (result.accepted) {
        holders_[id].insert(t.to);
        record(now, EventKind::replicated, id, t.from, t.to);
        landed = true;
      } else {
        record(now, EventKind::dropped_buffer_full, id, t.to, t.to);
      }
    }
    if (!landed) return;
    if (t.delete_after && nodes_[t.from].buffer.remove(id)) {
      nodes_[t.from].released.insert(id);
      holders_[id].erase(t.from);
      record(now, EventKind::deleted_by_community_rule, id, t.from, t.from);
    }
    enqueue_links_of(t.to);
  }

  void on_transfer_done(const Event& ev) {
    Link& link = links_[ev.index];
    if (ev.message == kNoMessage) {  // summary exchange finished
      pending_.push_back(ev.index);
      return;
    }
    const Transfer t = *link.inflight;
    link.inflight.reset();
    complete(ev.index, t, ev.time);
  }

  void on_contact_up(const Event& ev) {
    Link& link = links_[ev.index];
    const NodeId a = link.contact.a;
    const NodeId b = link.contact.b;
    link.active = true;
    nodes_[a].links.insert(ev.index);
    nodes_[b].links.insert(ev.index);

    const int sample = current_sample(ev.time);
    auto& la = nodes_[a].ledger;
    auto& lb = nodes_[b].ledger;
    const double ia = la.log_importance(sample);
    const double ib = lb.log_importance(sample);
    la.note_encounter_log(b, ib);
    lb.note_encounter_log(a, ia);
    la.update_importance(sample);
    lb.update_importance(sample);

    if (cfg_.summary_bytes > 0 && cfg_.bandwidth_bps) {
      link.busy_until = ev.time + 2 * transfer_duration(cfg_.summary_bytes, cfg_.bandwidth_bps);
      if (link.busy_until > link.contact.end) {
        link.stalled = true;
        return;
      }
      push({link.busy_until, Step::transfer_done, a, b, kNoMessage, ev.index});
      return;
    }
    pending_.push_back(ev.index);
  }

  void on_contact_down(const Event& ev) {
    Link& link = links_[ev.index];
    if (link.inflight) {
      const auto& t = *link.inflight;
      nodes_[t.to].incoming.erase(t.message.id);
      record(ev.time, EventKind::transfer_aborted, t.message.id, t.from, t.to);
      link.inflight.reset();
    }
    link.active = false;
    link.sent[0].clear();
    link.sent[1].clear();
    const NodeId a = link.contact.a;
    const NodeId b = link.contact.b;
    nodes_[a].links.erase(ev.index);
    nodes_[b].links.erase(ev.index);
    for (const auto& f : split_contact_by_samples(link.contact, cfg_.samples)) {
      nodes_[a].ledger.record_contact_fragment(b, f.slot, to_seconds(f.duration));
      nodes_[b].ledger.record_contact_fragment(a, f.slot, to_seconds(f.duration));
    }
  }

  void on_sample_roll(const Event& ev) {
    const SampleSlot finished = sample_slot_of(ev.time - 1, cfg_.samples);
    for (auto& node : nodes_) node.ledger.roll_sample(finished);
    // Contacts still up carry over into the new sample's neighbor sets.
    const int sample = current_sample(ev.time);
    std::set<NodeId> touched;
    for (NodeId n = 0; n < node_count_; ++n) {
      for (const std::size_t li : nodes_[n].links) {
        const NodeId peer = links_[li].contact.other(n);
        nodes_[n].ledger.note_encounter_log(peer, nodes_[peer].ledger.log_importance(sample));
        touched.insert(n);
      }
    }
    for (const NodeId n : touched) nodes_[n].ledger.update_importance(sample);
    const Time next = ev.time + cfg_.samples.sample_length();
    if (next <= horizon_) push({next, Step::sample_roll, 0, 0, kNoMessage, 0});
  }

  void on_recompute(const Event& ev) {
    const auto durations = cumulative_pair_durations(contacts_, ev.time);
    const auto graph = build_familiar_graph(durations, cfg_.params.familiar_threshold, node_count_);
    communities_ = k_clique_communities(graph, cfg_.params.k);
    if (cfg_.router == RouterKind::bubblerap) refresh_centrality(ev.time);
    const Time next = ev.time + cfg_.params.recompute_interval;
    if (next <= horizon_) push({next, Step::recompute, 0, 0, kNoMessage, 0});
  }

  // Centralities follow every completed window; local values use the latest
  // community snapshot.
  void on_centrality(const Event& ev) {
    refresh_centrality(ev.time);
    const Time next = ev.time + cfg_.params.centrality_window;
    if (next <= horizon_) push({next, Step::centrality, 0, 0, kNoMessage, 0});
  }

  void refresh_centrality(Time now) {
    centrality_ = cumulative_window_centrality(contacts_, now, cfg_.params.centrality_window,
                                               communities_, node_count_);
  }

  void on_create(const Event& ev) {
    const Message& m = workload_[ev.index];
    auto& node = nodes_[m.source];
    const auto result = node.buffer.admit(m, ev.time);
    for (const MessageId evicted : result.evicted) {
      holders_[evicted].erase(m.source);
      record(ev.time, EventKind::dropped_buffer_full, evicted, m.source, m.source);
    }
    record(ev.time, EventKind::created, m.id, m.source, m.destination, m.size, m.ttl);
    if (!result.accepted) {
      record(ev.time, EventKind::dropped_buffer_full, m.id, m.source, m.source);
    } else {
      holders_[m.id].insert(m.source);
    }
    push({m.expires_at(), Step::expire, ev.a, ev.b, m.id, ev.index});
    enqueue_links_of(m.source);
  }

  void on_expire(const Event& ev) {
    const auto it = holders_.find(ev.message);
    if (it == holders_.end()) return;
    for (const NodeId n : it->second) {
      nodes_[n].buffer.remove(ev.message);
      record(ev.time, EventKind::expired_ttl, ev.message, n, n);
    }
    holders_.erase(it);
  }

  SimConfig cfg_;
  const std::vector<Message>& workload_;
  Time horizon_;
  std::uint32_t node_count_ = 0;
  std::vector<NodeState> nodes_;
  std::vector<ContactEvent> contacts_;
  std::vector<Link> links_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::deque<std::size_t> pending_;
  std::map<MessageId, std::set<NodeId>> holders_;
  CommunityMap communities_;
  CentralityTable centrality_;
  EventLog log_;
};

}  // namespace

EventLog run_simulation(const ContactTrace& trace, const std::vector<Message>& workload,
                        const SimConfig& cfg, SimSnapshot* final_state) {
  Simulation sim(trace, workload, cfg);
  EventLog log = sim.run();
  if (final_state) *final_state = sim.snapshot();
  return log;
}

}  // namespace dlife
