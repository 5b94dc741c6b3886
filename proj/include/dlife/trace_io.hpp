#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "dlife/contact.hpp"

namespace dlife {

enum class TraceFormat {
  csv,     // header "a,b,start,end"
  haggle,  // "id id start end [...]" per line, '#' comments
};

std::optional<TraceFormat> parse_trace_format(std::string_view name);

struct TraceParseOptions {
  // Absolute time mapped to simulation time 0. When unset, the first contact
  // start rounded down to a day boundary.
  std::optional<Time> epoch;
  std::int64_t seconds_per_day = 86400;
};

// Reads a trace, remaps ids to a dense 0-based range (ascending by original
// id), shifts times to the epoch, and sorts. Throws ParseError for malformed
// lines and RecordError for invalid contacts; both carry the line number.
ContactTrace parse_contact_trace(std::istream& in, TraceFormat format,
                                 const TraceParseOptions& options = {});

// Canonical CSV using original labels. parse_contact_trace(csv) of the output
// reproduces `trace` exactly.
void write_trace_csv(std::ostream& out, const ContactTrace& trace);

}  // namespace dlife
