#include "dlife/contact.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>

#include "dlife/errors.hpp"

namespace dlife {

ContactEvent make_contact(NodeId x, NodeId y, Time start, Time end) {
  if (x == y) {
    throw RecordError("self-contact for node " + std::to_string(x));
  }
  if (start >= end) {
    throw RecordError("contact start " + format_seconds(start) +
                      " is not before end " + format_seconds(end));
  }
  return ContactEvent{std::min(x, y), std::max(x, y), start, end};
}

bool contact_before(const ContactEvent& lhs, const ContactEvent& rhs) {
  return std::tie(lhs.start, lhs.a, lhs.b, lhs.end) <
         std::tie(rhs.start, rhs.a, rhs.b, rhs.end);
}

void SampleConfig::validate() const {
  if (samples_per_day < 1) {
    throw ConfigError("samples_per_day", "must be >= 1");
  }
  if (seconds_per_day < 1) {
    throw ConfigError("seconds_per_day", "must be >= 1");
  }
  if (seconds_per_day % samples_per_day != 0) {
    throw ConfigError("samples_per_day", "must divide seconds_per_day (" +
                                             std::to_string(seconds_per_day) + ")");
  }
}

SampleSlot sample_slot_of(Time timestamp, const SampleConfig& cfg) {
  const Time day = cfg.day_length();
  const std::int64_t day_index = floor_div(timestamp, day);
  const Time offset = timestamp - day_index * day;
  return SampleSlot{day_index, static_cast<int>(offset / cfg.sample_length())};
}

Time slot_start(SampleSlot slot, const SampleConfig& cfg) {
  return slot.day * cfg.day_length() + slot.sample * cfg.sample_length();
}

SampleSlot next_slot(SampleSlot slot, const SampleConfig& cfg) {
  if (slot.sample + 1 < cfg.samples_per_day) return {slot.day, slot.sample + 1};
  return {slot.day + 1, 0};
}

std::vector<SampleFragment> split_contact_by_samples(const ContactEvent& c,
                                                     const SampleConfig& cfg) {
  std::vector<SampleFragment> out;
  SampleSlot slot = sample_slot_of(c.start, cfg);
  Time cursor = c.start;
  while (cursor < c.end) {
    const SampleSlot next = next_slot(slot, cfg);
    const Time boundary = std::min(slot_start(next, cfg), c.end);
    out.push_back({slot, boundary - cursor});
    cursor = boundary;
    slot = next;
  }
  return out;
}

ContactTrace make_trace(std::vector<ContactEvent> events, std::uint32_t node_count,
                        std::vector<std::int64_t> labels) {
  if (labels.empty()) {
    labels.resize(node_count);
    std::iota(labels.begin(), labels.end(), std::int64_t{0});
  }
  if (labels.size() != node_count) {
    throw RecordError("label count does not match node count");
  }
  if (std::adjacent_find(labels.begin(), labels.end(), std::greater_equal<>()) != labels.end()) {
    throw RecordError("node labels must be strictly ascending");
  }
  ContactTrace trace;
  for (const auto& e : events) {
    if (e.a >= e.b || e.start >= e.end) throw RecordError("non-canonical contact");
    if (e.b >= node_count) {
      throw RecordError("node id " + std::to_string(e.b) + " outside node count " +
                        std::to_string(node_count));
    }
    trace.duration = std::max(trace.duration, e.end);
  }
  std::sort(events.begin(), events.end(), contact_before);
  trace.events = std::move(events);
  trace.node_count = node_count;
  trace.node_labels = std::move(labels);
  return trace;
}

std::vector<ContactEvent> merge_overlapping(std::vector<ContactEvent> events) {
  std::sort(events.begin(), events.end(), [](const ContactEvent& l, const ContactEvent& r) {
    return std::tie(l.a, l.b, l.start, l.end) < std::tie(r.a, r.b, r.start, r.end);
  });
  std::vector<ContactEvent> merged;
  for (const auto& e : events) {
    if (!merged.empty()) {
      auto& last = merged.back();
      if (last.a == e.a && last.b == e.b && e.start <= last.end) {
        last.end = std::max(last.end, e.end);
        continue;
      }
    }
    merged.push_back(e);
  }
  std::sort(merged.begin(), merged.end(), contact_before);
  return merged;
}

}  // namespace dlife
