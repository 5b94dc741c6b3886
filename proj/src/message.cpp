#include "dlife/message.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <string_view>

#include "dlife/errors.hpp"

namespace dlife {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(std::string_view field, std::size_t line, const char* what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  return v;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps the result uniform and stdlib-independent.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace

std::vector<WorkloadEntry> parse_workload(std::istream& in) {
  std::vector<WorkloadEntry> out;
  std::string buffer;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, buffer)) {
    ++line_no;
    const std::string_view line = trim(buffer);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      fields.push_back(trim(line.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!header) {
      if (fields.size() != 4 || fields[0] != "created_at" || fields[1] != "source" ||
          fields[2] != "destination" || fields[3] != "size_bytes") {
        throw ParseError(line_no, "expected header 'created_at,source,destination,size_bytes'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    WorkloadEntry e;
    if (!parse_seconds(fields[0], e.created_at)) {
      throw ParseError(line_no, "invalid created_at '" + std::string(fields[0]) + "'");
    }
    e.source = parse_int(fields[1], line_no, "source");
    e.destination = parse_int(fields[2], line_no, "destination");
    e.size = parse_int(fields[3], line_no, "size_bytes");
    if (e.source == e.destination) {
      throw RecordError("line " + std::to_string(line_no) + ": source equals destination");
    }
    if (e.size <= 0) {
      throw RecordError("line " + std::to_string(line_no) + ": size must be positive");
    }
    out.push_back(e);
  }
  if (!header) throw ParseError(0, "missing workload header");
  return out;
}

void write_workload(std::ostream& out, const std::vector<WorkloadEntry>& workload) {
  out << "created_at,source,destination,size_bytes\n";
  for (const auto& e : workload) {
    out << format_seconds(e.created_at) << ',' << e.source << ',' << e.destination << ','
        << e.size << '\n';
  }
}

void WorkloadSpec::validate() const {
  if (nodes.size() < 2) throw ConfigError("nodes", "need at least two nodes");
  if (start >= end) throw ConfigError("end", "must be after start");
  if (min_size <= 0) throw ConfigError("min_size", "must be positive");
  if (max_size < min_size) throw ConfigError("max_size", "must be >= min_size");
}

std::vector<WorkloadEntry> generate_workload(const WorkloadSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(spec.nodes.size());
  const auto span = static_cast<std::uint64_t>(spec.end - spec.start);
  const auto sizes = static_cast<std::uint64_t>(spec.max_size - spec.min_size + 1);
  std::vector<WorkloadEntry> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    WorkloadEntry e;
    e.created_at = spec.start + static_cast<Time>(bounded(rng, span));
    // Round creation times to whole seconds so files stay readable.
    e.created_at -= e.created_at % kTicksPerSecond;
    const auto src = bounded(rng, n);
    auto dst = bounded(rng, n - 1);
    if (dst >= src) ++dst;
    e.source = spec.nodes[src];
    e.destination = spec.nodes[dst];
    e.size = spec.min_size + static_cast<std::int64_t>(bounded(rng, sizes));
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const WorkloadEntry& l, const WorkloadEntry& r) {
    return l.created_at < r.created_at;
  });
  return out;
}

std::vector<Message> bind_workload(const std::vector<WorkloadEntry>& workload,
                                   const ContactTrace& trace, Time ttl) {
  if (ttl <= 0) throw ConfigError("ttl", "must be positive");
  const auto& labels = trace.node_labels;
  auto dense = [&labels](std::int64_t label, std::size_t row) {
    const auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
      throw ConfigError("workload[" + std::to_string(row) + "]",
                        "node " + std::to_string(label) + " does not appear in the trace");
    }
    return static_cast<NodeId>(it - labels.begin());
  };
  std::vector<Message> out;
  out.reserve(workload.size());
  for (std::size_t i = 0; i < workload.size(); ++i) {
    const auto& e = workload[i];
    if (e.source == e.destination || e.size <= 0) {
      throw ConfigError("workload[" + std::to_string(i) + "]", "invalid message");
    }
    if (e.created_at < 0) {
      throw ConfigError("workload[" + std::to_string(i) + "]", "created before the epoch");
    }
    out.push_back(Message{i, dense(e.source, i), dense(e.destination, i), e.created_at, ttl, e.size});
  }
  return out;
}

}  // namespace dlife
