#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dlife {

// Simulation time in integer microseconds. Keeping time integral makes
// sample splitting exact and trace serialization round-trippable.
using Time = std::int64_t;

inline constexpr Time kTicksPerSecond = 1'000'000;

constexpr Time seconds(std::int64_t s) { return s * kTicksPerSecond; }
constexpr double to_seconds(Time t) {
  return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

// Rounds to the nearest microsecond.
Time from_seconds(double s);

// Parses a decimal seconds value ("12", "-3.5", "1e3") into ticks. Digits past
// the sixth fractional place are rounded half away from zero. Returns false
// on malformed input.
bool parse_seconds(std::string_view text, Time& out);

// Shortest decimal form that parse_seconds maps back to the same value:
// "100", "100.5", "0.000001".
std::string format_seconds(Time t);

// floor(a / b) for b > 0.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

}  // namespace dlife
