#include "dlife/buffer.hpp"

#include <stdexcept>

namespace dlife {

std::optional<EvictionPolicy> parse_eviction(std::string_view name) {
  if (name == "oldest_created") return EvictionPolicy::oldest_created;
  if (name == "oldest_received") return EvictionPolicy::oldest_received;
  return std::nullopt;
}

std::string_view eviction_name(EvictionPolicy policy) {
  return policy == EvictionPolicy::oldest_created ? "oldest_created" : "oldest_received";
}

MessageBuffer::MessageBuffer(std::optional<std::int64_t> capacity, EvictionPolicy policy)
    : capacity_(capacity), policy_(policy) {}

std::optional<MessageId> MessageBuffer::victim() const {
  if (by_creation_.empty()) return std::nullopt;
  if (policy_ == EvictionPolicy::oldest_created) return by_creation_.begin()->second.message.id;
  const Entry* oldest = nullptr;
  for (const auto& [key, entry] : by_creation_) {
    if (oldest == nullptr || entry.received_at < oldest->received_at) oldest = &entry;
  }
  return oldest->message.id;
}

MessageBuffer::AdmitResult MessageBuffer::admit(const Message& m, Time now) {
  if (contains(m.id)) throw std::logic_error("message already buffered");
  AdmitResult result;
  if (capacity_ && m.size > *capacity_) return result;
  while (capacity_ && occupancy_ + m.size > *capacity_) {
    const auto id = victim();
    result.evicted.push_back(*id);
    remove(*id);
  }
  const Key key{m.created_at, m.id};
  by_creation_.emplace(key, Entry{m, now});
  index_.emplace(m.id, key);
  occupancy_ += m.size;
  result.accepted = true;
  return result;
}

bool MessageBuffer::remove(MessageId id) {
  const auto it = index_.find(id);
  if (it == index_.end()) return false;
  const auto entry = by_creation_.find(it->second);
  occupancy_ -= entry->second.message.size;
  by_creation_.erase(entry);
  index_.erase(it);
  return true;
}

const Message* MessageBuffer::find(MessageId id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &by_creation_.at(it->second).message;
}

std::vector<const Message*> MessageBuffer::ordered() const {
  std::vector<const Message*> out;
  out.reserve(by_creation_.size());
  for (const auto& [key, entry] : by_creation_) out.push_back(&entry.message);
  return out;
}

}  // namespace dlife
