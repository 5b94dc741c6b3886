#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dlife/contact.hpp"
#include "dlife/routing.hpp"

namespace dlife {

struct Message {
  MessageId id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  Time created_at = 0;
  Time ttl = 0;
  std::int64_t size = 0;  // bytes

  Time expires_at() const { return created_at + ttl; }
  friend bool operator==(const Message&, const Message&) = default;
};

// One row of a workload file. Node ids are trace labels.
struct WorkloadEntry {
  Time created_at = 0;
  std::int64_t source = 0;
  std::int64_t destination = 0;
  std::int64_t size = 0;

  friend bool operator==(const WorkloadEntry&, const WorkloadEntry&) = default;
};

// CSV with header "created_at,source,destination,size_bytes". Throws
// ParseError / RecordError with line numbers.
std::vector<WorkloadEntry> parse_workload(std::istream& in);
void write_workload(std::ostream& out, const std::vector<WorkloadEntry>& workload);

struct WorkloadSpec {
  std::size_t count = 6000;
  std::vector<std::int64_t> nodes;  // labels to draw pairs from
  Time start = 0;
  Time end = seconds(86400);
  std::int64_t min_size = 1000;
  std::int64_t max_size = 100000;

  void validate() const;
};

// `count` messages at uniform times in [start, end), sorted by time, with
// distinct uniform source/destination pairs and sizes uniform in
// [min_size, max_size].
std::vector<WorkloadEntry> generate_workload(const WorkloadSpec& spec, std::uint64_t seed);

// Resolves labels against the trace and assigns ids in file order. Throws
// ConfigError for unknown nodes, self-addressed or empty messages.
std::vector<Message> bind_workload(const std::vector<WorkloadEntry>& workload,
                                   const ContactTrace& trace, Time ttl);

}  // namespace dlife
