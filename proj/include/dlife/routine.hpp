#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dlife/contact.hpp"
#include <json.hpp>

namespace dlife {

// What a node is doing during a daily sample. Pairs sharing the group of the
// current activity meet under that activity's group parameters.
enum class Activity : std::uint8_t { home, work, social, commute };
inline constexpr std::size_t kActivityCount = 4;

std::string_view activity_name(Activity a);

struct ContactParams {
  double probability = 0.0;    // chance a pair meets once in a sample
  double mean_duration = 0.0;  // seconds
  // Durations are uniform in mean * [1 - jitter, 1 + jitter], clipped to the
  // sample. jitter 0 gives fixed-length contacts.
  double jitter = 0.5;
};

struct GroupAssignment {
  int home = 0;
  int work = 0;
  int social = 0;
};

// Synthetic daily routine: every day repeats the same activity schedule, so
// pairwise contact time is concentrated in the samples of their shared
// activities.
struct RoutineSpec {
  std::uint32_t node_count = 0;
  int days = 1;
  SampleConfig samples;
  std::vector<GroupAssignment> groups;  // one per node
  std::vector<Activity> schedule;       // one per daily sample
  // Indexed by Activity. Commute has no group relation; its group entry is
  // ignored.
  std::array<ContactParams, kActivityCount> same_group{};
  std::array<ContactParams, kActivityCount> background{};

  // Throws ConfigError with the offending field path.
  void validate() const;
};

// Deterministic for a fixed (spec, seed), independent of the standard
// library's distribution implementations.
ContactTrace generate_routine_trace(const RoutineSpec& spec, std::uint64_t seed);

// 30 nodes in three work groups over a week, hourly samples: nights at home,
// office hours with the work group, evening social groups, commutes between.
RoutineSpec desk_scale_routine(std::uint32_t node_count = 30, int work_groups = 3,
                               int days = 7);

RoutineSpec routine_from_json(const nlohmann::json& j);
nlohmann::json routine_to_json(const RoutineSpec& spec);

}  // namespace dlife
