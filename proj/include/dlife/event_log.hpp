#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlife/contact.hpp"
#include "dlife/routing.hpp"

namespace dlife {

enum class EventKind : std::uint8_t {
  created,
  replicated,
  delivered,
  dropped_buffer_full,
  expired_ttl,
  deleted_by_community_rule,
  transfer_aborted,
};

std::string_view event_name(EventKind kind);
std::optional<EventKind> parse_event_name(std::string_view name);

// Field use by kind:
//   created      from = source, to = destination, size, ttl
//   replicated   from -> to (a copy landed at `to`, including the destination)
//   delivered    from -> to = destination
//   dropped_buffer_full / expired_ttl / deleted_by_community_rule
//                from = to = the node losing its copy
//   transfer_aborted  from -> to
struct LogRecord {
  Time time = 0;
  EventKind kind = EventKind::created;
  MessageId message = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::int64_t size = 0;
  Time ttl = 0;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct EventLog {
  std::vector<LogRecord> records;

  void append(const LogRecord& r) { records.push_back(r); }
  friend bool operator==(const EventLog&, const EventLog&) = default;
};

// One JSON object per line, fixed key order, times in decimal seconds.
void write_ndjson(std::ostream& out, const EventLog& log);
EventLog read_ndjson(std::istream& in);

// "time,event,msg,from,to,size,ttl"
void write_csv(std::ostream& out, const EventLog& log);

// Replays a log and reports every violated invariant: nondecreasing time,
// Delivered/Replicated preceded by Created, senders that never held the
// message, repeated deliveries, and buffer occupancy above `capacity`.
std::vector<std::string> check_event_log(const EventLog& log,
                                         std::optional<std::int64_t> capacity);

}  // namespace dlife
