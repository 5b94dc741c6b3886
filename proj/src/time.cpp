#include "dlife/time.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace dlife {

Time from_seconds(double s) {
  return static_cast<Time>(std::llround(s * static_cast<double>(kTicksPerSecond)));
}

bool parse_seconds(std::string_view text, Time& out) {
  if (text.empty()) return false;
  if (text.find_first_of("eE") != std::string_view::npos) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
      return false;
    }
    out = from_seconds(value);
    return true;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  const std::string_view body = text.substr(pos);
  const std::size_t dot = body.find('.');
  const std::string_view whole = body.substr(0, dot);
  const std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;

  std::int64_t int_part = 0;
  if (!whole.empty()) {
    const auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), int_part);
    if (ec != std::errc{} || ptr != whole.data() + whole.size()) return false;
  }
  std::int64_t frac_ticks = 0;
  std::int64_t scale = kTicksPerSecond / 10;
  bool round_up = false;
  for (std::size_t i = 0; i < frac.size(); ++i) {
    const char c = frac[i];
    if (c < '0' || c > '9') return false;
    if (i < 6) {
      frac_ticks += (c - '0') * scale;
      scale /= 10;
    } else if (i == 6) {
      round_up = c >= '5';
    }
  }
  Time ticks = int_part * kTicksPerSecond + frac_ticks + (round_up ? 1 : 0);
  out = negative ? -ticks : ticks;
  return true;
}

std::string format_seconds(Time t) {
  const bool negative = t < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(t + 1)) + 1
                                     : static_cast<std::uint64_t>(t);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / kTicksPerSecond);
  std::uint64_t frac = mag % kTicksPerSecond;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

}  // namespace dlife
