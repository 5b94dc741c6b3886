#include "dlife/routine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dlife/errors.hpp"

namespace dlife {
namespace {

// mt19937_64's output sequence is fixed by the standard; the distributions
// are not, so draws are derived by hand.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool shares_group(const GroupAssignment& x, const GroupAssignment& y, Activity a) {
  switch (a) {
    case Activity::home: return x.home == y.home;
    case Activity::work: return x.work == y.work;
    case Activity::social: return x.social == y.social;
    case Activity::commute: return false;
  }
  return false;
}

Activity activity_from_name(const std::string& name, const std::string& field) {
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    if (activity_name(static_cast<Activity>(i)) == name) return static_cast<Activity>(i);
  }
  throw ConfigError(field, "unknown activity '" + name + "'");
}

void validate_params(const ContactParams& p, double sample_seconds, const std::string& field) {
  if (!(p.probability >= 0.0 && p.probability <= 1.0)) {
    throw ConfigError(field + ".probability", "must be in [0, 1]");
  }
  if (!(p.mean_duration > 0.0 && p.mean_duration <= sample_seconds)) {
    throw ConfigError(field + ".mean_duration", "must be in (0, sample length]");
  }
  if (!(p.jitter >= 0.0 && p.jitter <= 1.0)) {
    throw ConfigError(field + ".jitter", "must be in [0, 1]");
  }
}

ContactParams params_from_json(const nlohmann::json& j, const std::string& field) {
  ContactParams p;
  try {
    p.probability = j.at("probability").get<double>();
    p.mean_duration = j.at("mean_duration").get<double>();
    p.jitter = j.value("jitter", p.jitter);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(field, e.what());
  }
  return p;
}

nlohmann::json params_to_json(const ContactParams& p) {
  return {{"probability", p.probability}, {"mean_duration", p.mean_duration}, {"jitter", p.jitter}};
}

}  // namespace

std::string_view activity_name(Activity a) {
  switch (a) {
    case Activity::home: return "home";
    case Activity::work: return "work";
    case Activity::social: return "social";
    case Activity::commute: return "commute";
  }
  return "?";
}

void RoutineSpec::validate() const {
  samples.validate();
  if (node_count < 2) throw ConfigError("node_count", "must be >= 2");
  if (days < 1) throw ConfigError("days", "must be >= 1");
  if (groups.size() != node_count) {
    throw ConfigError("groups", "need one entry per node (" + std::to_string(node_count) + ")");
  }
  if (schedule.size() != static_cast<std::size_t>(samples.samples_per_day)) {
    throw ConfigError("schedule", "need one activity per daily sample");
  }
  const double sample_seconds = to_seconds(samples.sample_length());
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    const std::string name(activity_name(static_cast<Activity>(i)));
    if (static_cast<Activity>(i) != Activity::commute) {
      validate_params(same_group[i], sample_seconds, "same_group." + name);
    }
    validate_params(background[i], sample_seconds, "background." + name);
  }
}

ContactTrace generate_routine_trace(const RoutineSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const Time sample_len = spec.samples.sample_length();
  std::vector<ContactEvent> events;
  for (int day = 0; day < spec.days; ++day) {
    for (int s = 0; s < spec.samples.samples_per_day; ++s) {
      const Activity activity = spec.schedule[s];
      const Time begin = slot_start({day, s}, spec.samples);
      for (NodeId a = 0; a < spec.node_count; ++a) {
        for (NodeId b = a + 1; b < spec.node_count; ++b) {
          const auto idx = static_cast<std::size_t>(activity);
          const ContactParams& p = shares_group(spec.groups[a], spec.groups[b], activity)
                                       ? spec.same_group[idx]
                                       : spec.background[idx];
          // Always draw three numbers per pair so one pair's parameters do not
          // shift every later pair's stream.
          const double meet = uniform01(rng);
          const double len_u = uniform01(rng);
          const double pos_u = uniform01(rng);
          if (meet >= p.probability) continue;
          const double secs = p.mean_duration * (1.0 + p.jitter * (2.0 * len_u - 1.0));
          const Time len = std::clamp(from_seconds(secs), Time{1}, sample_len);
          const auto slack = static_cast<double>(sample_len - len);
          const Time offset = std::min(static_cast<Time>(pos_u * (slack + 1.0)), sample_len - len);
          events.push_back(make_contact(a, b, begin + offset, begin + offset + len));
        }
      }
    }
  }
  return make_trace(std::move(events), spec.node_count);
}

RoutineSpec desk_scale_routine(std::uint32_t node_count, int work_groups, int days) {
  RoutineSpec spec;
  spec.node_count = node_count;
  spec.days = days;
  spec.samples = SampleConfig{24, 86400};
  spec.groups.resize(node_count);
  for (NodeId i = 0; i < node_count; ++i) {
    spec.groups[i] = GroupAssignment{static_cast<int>(i / 3), static_cast<int>(i) % work_groups,
                                     static_cast<int>(i % 5)};
  }
  spec.schedule.assign(24, Activity::home);
  spec.schedule[7] = Activity::commute;
  for (int h = 8; h < 17; ++h) spec.schedule[h] = Activity::work;
  spec.schedule[17] = Activity::commute;
  for (int h = 18; h < 21; ++h) spec.schedule[h] = Activity::social;

  using A = Activity;
  spec.same_group[static_cast<std::size_t>(A::home)] = {0.7, 2400, 0.5};
  spec.same_group[static_cast<std::size_t>(A::work)] = {0.5, 1500, 0.5};
  spec.same_group[static_cast<std::size_t>(A::social)] = {0.4, 1800, 0.5};
  spec.same_group[static_cast<std::size_t>(A::commute)] = {0.0, 300, 0.5};
  spec.background[static_cast<std::size_t>(A::home)] = {0.001, 300, 0.5};
  spec.background[static_cast<std::size_t>(A::work)] = {0.01, 300, 0.5};
  spec.background[static_cast<std::size_t>(A::social)] = {0.01, 600, 0.5};
  spec.background[static_cast<std::size_t>(A::commute)] = {0.03, 300, 0.5};
  return spec;
}

RoutineSpec routine_from_json(const nlohmann::json& j) {
  RoutineSpec spec;
  try {
    spec.node_count = j.at("node_count").get<std::uint32_t>();
    spec.days = j.value("days", 1);
    spec.samples.samples_per_day = j.value("samples_per_day", 24);
    spec.samples.seconds_per_day = j.value("seconds_per_day", std::int64_t{86400});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("", e.what());
  }
  if (!j.contains("groups")) throw ConfigError("groups", "missing");
  const auto& groups = j.at("groups");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    try {
      spec.groups.push_back({g.at("home").get<int>(), g.at("work").get<int>(),
                             g.at("social").get<int>()});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("groups[" + std::to_string(i) + "]", e.what());
    }
  }
  if (!j.contains("schedule")) throw ConfigError("schedule", "missing");
  for (std::size_t i = 0; i < j.at("schedule").size(); ++i) {
    spec.schedule.push_back(activity_from_name(j.at("schedule")[i].get<std::string>(),
                                               "schedule[" + std::to_string(i) + "]"));
  }
  for (const char* table : {"same_group", "background"}) {
    auto& dest = std::string_view(table) == "same_group" ? spec.same_group : spec.background;
    if (!j.contains(table)) continue;
    for (const auto& [key, value] : j.at(table).items()) {
      const std::string field = std::string(table) + "." + key;
      const auto a = activity_from_name(key, field);
      dest[static_cast<std::size_t>(a)] = params_from_json(value, field);
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json routine_to_json(const RoutineSpec& spec) {
  nlohmann::json j;
  j["node_count"] = spec.node_count;
  j["days"] = spec.days;
  j["samples_per_day"] = spec.samples.samples_per_day;
  j["seconds_per_day"] = spec.samples.seconds_per_day;
  j["groups"] = nlohmann::json::array();
  for (const auto& g : spec.groups) {
    j["groups"].push_back({{"home", g.home}, {"work", g.work}, {"social", g.social}});
  }
  j["schedule"] = nlohmann::json::array();
  for (const auto a : spec.schedule) j["schedule"].push_back(std::string(activity_name(a)));
  for (std::size_t i = 0; i < kActivityCount; ++i) {
    const std::string name(activity_name(static_cast<Activity>(i)));
    if (static_cast<Activity>(i) != Activity::commute) {
      j["same_group"][name] = params_to_json(spec.same_group[i]);
    }
    j["background"][name] = params_to_json(spec.background[i]);
  }
  return j;
}

}  // namespace dlife
