#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "dlife/time.hpp"

namespace dlife {

using NodeId = std::uint32_t;

// Undirected contact between two nodes over [start, end). Always canonical:
// a < b and start < end.
struct ContactEvent {
  NodeId a = 0;
  NodeId b = 0;
  Time start = 0;
  Time end = 0;

  Time duration() const { return end - start; }
  bool involves(NodeId n) const { return a == n || b == n; }
  NodeId other(NodeId n) const { return n == a ? b : a; }

  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

// Builds a canonical contact. Throws RecordError on a self-contact or when
// start >= end.
ContactEvent make_contact(NodeId x, NodeId y, Time start, Time end);

// Trace order: start, then node pair, then end.
bool contact_before(const ContactEvent& lhs, const ContactEvent& rhs);

// Partition of each day into `samples_per_day` equal daily samples.
struct SampleConfig {
  int samples_per_day = 24;
  std::int64_t seconds_per_day = 86400;

  // Throws ConfigError unless samples_per_day >= 1 and it divides
  // seconds_per_day.
  void validate() const;

  Time day_length() const { return seconds(seconds_per_day); }
  Time sample_length() const { return day_length() / samples_per_day; }
};

struct SampleSlot {
  std::int64_t day = 0;
  int sample = 0;

  friend auto operator<=>(const SampleSlot&, const SampleSlot&) = default;
};

SampleSlot sample_slot_of(Time timestamp, const SampleConfig& cfg);
Time slot_start(SampleSlot slot, const SampleConfig& cfg);
SampleSlot next_slot(SampleSlot slot, const SampleConfig& cfg);

struct SampleFragment {
  SampleSlot slot;
  Time duration = 0;

  friend bool operator==(const SampleFragment&, const SampleFragment&) = default;
};

// Splits a contact at every sample (and therefore day) boundary it crosses.
// Fragments are returned in time order and their durations sum exactly to
// the contact's duration.
std::vector<SampleFragment> split_contact_by_samples(const ContactEvent& c,
                                                     const SampleConfig& cfg);

struct ContactTrace {
  std::vector<ContactEvent> events;  // sorted by contact_before
  std::uint32_t node_count = 0;
  Time duration = 0;                 // latest contact end, relative to the epoch
  // Original identifier of each dense node id, ascending.
  std::vector<std::int64_t> node_labels;

  friend bool operator==(const ContactTrace&, const ContactTrace&) = default;
};

// Sorts the events, checks ids against node_count, and fills in duration.
// Labels default to the identity mapping. Throws RecordError.
ContactTrace make_trace(std::vector<ContactEvent> events, std::uint32_t node_count,
                        std::vector<std::int64_t> labels = {});

// Unions overlapping or touching contacts of the same pair. Output is sorted.
std::vector<ContactEvent> merge_overlapping(std::vector<ContactEvent> events);

}  // namespace dlife
