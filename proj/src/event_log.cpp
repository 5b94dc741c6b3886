#include "dlife/event_log.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "dlife/errors.hpp"

namespace dlife {

std::string_view event_name(EventKind kind) {
  switch (kind) {
    case EventKind::created: return "created";
    case EventKind::replicated: return "replicated";
    case EventKind::delivered: return "delivered";
    case EventKind::dropped_buffer_full: return "dropped_buffer_full";
    case EventKind::expired_ttl: return "expired_ttl";
    case EventKind::deleted_by_community_rule: return "deleted_by_community_rule";
    case EventKind::transfer_aborted: return "transfer_aborted";
  }
  return "?";
}

std::optional<EventKind> parse_event_name(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(EventKind::transfer_aborted); ++k) {
    const auto kind = static_cast<EventKind>(k);
    if (event_name(kind) == name) return kind;
  }
  return std::nullopt;
}

void write_ndjson(std::ostream& out, const EventLog& log) {
  for (const auto& r : log.records) {
    out << "{\"time\":" << format_seconds(r.time) << ",\"event\":\"" << event_name(r.kind)
        << "\",\"msg\":" << r.message << ",\"from\":" << r.from << ",\"to\":" << r.to;
    if (r.kind == EventKind::created) {
      out << ",\"size\":" << r.size << ",\"ttl\":" << format_seconds(r.ttl);
    }
    out << "}\n";
  }
}

EventLog read_ndjson(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LogRecord r;
      // Times go through their decimal text so the round trip stays exact.
      if (!parse_seconds(j.at("time").dump(), r.time)) throw ParseError(line_no, "bad time");
      const auto kind = parse_event_name(j.at("event").get<std::string>());
      if (!kind) throw ParseError(line_no, "unknown event");
      r.kind = *kind;
      r.message = j.at("msg").get<MessageId>();
      r.from = j.at("from").get<NodeId>();
      r.to = j.at("to").get<NodeId>();
      if (r.kind == EventKind::created) {
        r.size = j.at("size").get<std::int64_t>();
        if (!parse_seconds(j.at("ttl").dump(), r.ttl)) throw ParseError(line_no, "bad ttl");
      }
      log.append(r);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return log;
}

void write_csv(std::ostream& out, const EventLog& log) {
  out << "time,event,msg,from,to,size,ttl\n";
  for (const auto& r : log.records) {
    out << format_seconds(r.time) << ',' << event_name(r.kind) << ',' << r.message << ','
        << r.from << ',' << r.to << ',' << r.size << ',' << format_seconds(r.ttl) << '\n';
  }
}

std::vector<std::string> check_event_log(const EventLog& log,
                                         std::optional<std::int64_t> capacity) {
  struct Info {
    NodeId destination;
    std::int64_t size;
  };
  std::vector<std::string> problems;
  std::map<MessageId, Info> created;
  std::set<MessageId> delivered;
  std::set<std::pair<MessageId, NodeId>> ever_held;
  std::map<NodeId, std::map<MessageId, std::int64_t>> buffers;
  std::map<NodeId, std::int64_t> occupancy;
  Time last = 0;

  auto fail = [&problems](std::size_t i, const std::string& what) {
    problems.push_back("record " + std::to_string(i) + ": " + what);
  };
  auto add = [&](std::size_t i, NodeId node, MessageId id, std::int64_t size) {
    auto& buf = buffers[node];
    if (!buf.emplace(id, size).second) {
      fail(i, "node " + std::to_string(node) + " already holds message " + std::to_string(id));
      return;
    }
    occupancy[node] += size;
    if (capacity && occupancy[node] > *capacity) {
      fail(i, "node " + std::to_string(node) + " over capacity");
    }
  };
  auto drop = [&](NodeId node, MessageId id) {
    auto& buf = buffers[node];
    const auto it = buf.find(id);
    if (it == buf.end()) return;
    occupancy[node] -= it->second;
    buf.erase(it);
  };

  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    if (r.time < last) fail(i, "time goes backwards");
    last = std::max(last, r.time);
    const auto info = created.find(r.message);
    if (r.kind != EventKind::created && info == created.end()) {
      fail(i, "message " + std::to_string(r.message) + " used before creation");
      continue;
    }
    switch (r.kind) {
      case EventKind::created:
        if (!created.emplace(r.message, Info{r.to, r.size}).second) fail(i, "created twice");
        ever_held.emplace(r.message, r.from);
        if (!capacity || r.size <= *capacity) add(i, r.from, r.message, r.size);
        break;
      case EventKind::replicated:
        if (!ever_held.contains({r.message, r.from})) {
          fail(i, "sender " + std::to_string(r.from) + " never held message " +
                      std::to_string(r.message));
        }
        ever_held.emplace(r.message, r.to);
        if (r.to != info->second.destination) add(i, r.to, r.message, info->second.size);
        break;
      case EventKind::delivered:
        if (r.to != info->second.destination) fail(i, "delivered to a non-destination");
        if (!ever_held.contains({r.message, r.to})) fail(i, "delivery without replication");
        if (!delivered.insert(r.message).second) fail(i, "message delivered twice");
        break;
      case EventKind::dropped_buffer_full:
      case EventKind::expired_ttl:
      case EventKind::deleted_by_community_rule:
        drop(r.from, r.message);
        break;
      case EventKind::transfer_aborted:
        break;
    }
  }
  return problems;
}

}  // namespace dlife
