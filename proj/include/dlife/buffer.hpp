#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <tuple>
#include <vector>

#include "dlife/message.hpp"

namespace dlife {

enum class EvictionPolicy {
  oldest_created,   // drop-head by creation time
  oldest_received,  // FIFO by arrival at this node
};

std::optional<EvictionPolicy> parse_eviction(std::string_view name);
std::string_view eviction_name(EvictionPolicy policy);

// A node's message store with a byte capacity (nullopt = unbounded).
class MessageBuffer {
 public:
  explicit MessageBuffer(std::optional<std::int64_t> capacity = std::nullopt,
                         EvictionPolicy policy = EvictionPolicy::oldest_created);

  struct AdmitResult {
    bool accepted = false;
    std::vector<MessageId> evicted;  // in eviction order
  };

  // Admits `m`, evicting per policy until it fits. A message larger than the
  // whole capacity is rejected and nothing is evicted. `m` must not already
  // be buffered.
  AdmitResult admit(const Message& m, Time now);

  bool contains(MessageId id) const { return index_.contains(id); }
  bool remove(MessageId id);
  const Message* find(MessageId id) const;

  std::int64_t occupancy() const { return occupancy_; }
  std::optional<std::int64_t> capacity() const { return capacity_; }
  std::size_t size() const { return index_.size(); }

  // Buffered messages, oldest created first (ties by id).
  std::vector<const Message*> ordered() const;

 private:
  using Key = std::tuple<Time, MessageId>;
  struct Entry {
    Message message;
    Time received_at;
  };

  std::optional<MessageId> victim() const;

  std::optional<std::int64_t> capacity_;
  EvictionPolicy policy_;
  std::int64_t occupancy_ = 0;
  std::map<Key, Entry> by_creation_;
  std::map<MessageId, Key> index_;
};

}  // namespace dlife
