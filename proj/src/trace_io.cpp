#include "dlife/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dlife/errors.hpp"

namespace dlife {
namespace {

struct RawContact {
  std::int64_t x;
  std::int64_t y;
  Time start;
  Time end;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, bool csv) {
  std::vector<std::string_view> fields;
  if (csv) {
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      fields.push_back(trim(line.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  } else {
    std::size_t pos = 0;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      const auto stop = line.find_first_of(" \t\r", pos);
      fields.push_back(line.substr(pos, stop - pos));
      pos = stop;
    }
  }
  return fields;
}

std::int64_t parse_id(std::string_view field, std::size_t line) {
  std::int64_t id = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), id);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "invalid node id '" + std::string(field) + "'");
  }
  return id;
}

Time parse_time(std::string_view field, std::size_t line) {
  Time t = 0;
  if (!parse_seconds(field, t)) {
    throw ParseError(line, "invalid timestamp '" + std::string(field) + "'");
  }
  return t;
}

}  // namespace

std::optional<TraceFormat> parse_trace_format(std::string_view name) {
  if (name == "csv") return TraceFormat::csv;
  if (name == "haggle") return TraceFormat::haggle;
  return std::nullopt;
}

ContactTrace parse_contact_trace(std::istream& in, TraceFormat format,
                                 const TraceParseOptions& options) {
  const bool csv = format == TraceFormat::csv;
  std::vector<RawContact> raw;
  std::string buffer;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, buffer)) {
    ++line_no;
    std::string_view line = trim(buffer);
    if (line.empty()) continue;
    if (!csv && line.front() == '#') continue;
    const auto fields = split_fields(line, csv);
    if (csv && !header_seen) {
      if (fields.size() != 4 || fields[0] != "a" || fields[1] != "b" ||
          fields[2] != "start" || fields[3] != "end") {
        throw ParseError(line_no, "expected header 'a,b,start,end'");
      }
      header_seen = true;
      continue;
    }
    // Real Cambridge/Haggle dumps carry extra trailing columns (contact count,
    // inter-contact gap); only the first four are used.
    if (csv ? fields.size() != 4 : fields.size() < 4) {
      throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    RawContact rc{parse_id(fields[0], line_no), parse_id(fields[1], line_no),
                  parse_time(fields[2], line_no), parse_time(fields[3], line_no), line_no};
    if (rc.x == rc.y) {
      throw RecordError("line " + std::to_string(line_no) + ": self-contact for node " +
                        std::to_string(rc.x));
    }
    if (rc.start >= rc.end) {
      throw RecordError("line " + std::to_string(line_no) + ": start " +
                        std::string(fields[2]) + " is not before end " + std::string(fields[3]));
    }
    raw.push_back(rc);
  }
  if (csv && !header_seen) throw ParseError(0, "missing CSV header");

  std::vector<std::int64_t> labels;
  labels.reserve(raw.size() * 2);
  for (const auto& rc : raw) {
    labels.push_back(rc.x);
    labels.push_back(rc.y);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const auto dense = [&labels](std::int64_t label) {
    return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), label) -
                               labels.begin());
  };

  Time epoch = 0;
  if (options.epoch) {
    epoch = *options.epoch;
  } else if (!raw.empty()) {
    const Time first = std::min_element(raw.begin(), raw.end(), [](const auto& l, const auto& r) {
                         return l.start < r.start;
                       })->start;
    const Time day = seconds(options.seconds_per_day);
    epoch = floor_div(first, day) * day;
  }

  std::vector<ContactEvent> events;
  events.reserve(raw.size());
  for (const auto& rc : raw) {
    if (rc.start < epoch) {
      throw RecordError("line " + std::to_string(rc.line) + ": contact starts before epoch");
    }
    events.push_back(make_contact(dense(rc.x), dense(rc.y), rc.start - epoch, rc.end - epoch));
  }
  const auto node_count = static_cast<std::uint32_t>(labels.size());
  return make_trace(std::move(events), node_count, std::move(labels));
}

void write_trace_csv(std::ostream& out, const ContactTrace& trace) {
  out << "a,b,start,end\n";
  for (const auto& e : trace.events) {
    out << trace.node_labels.at(e.a) << ',' << trace.node_labels.at(e.b) << ','
        << format_seconds(e.start) << ',' << format_seconds(e.end) << '\n';
  }
}

}  // namespace dlife
