#include "dlife/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dlife/dumps.hpp"
#include "dlife/errors.hpp"

namespace dlife {
namespace {

template <typename T>
T get_field(const nlohmann::json& j, const char* key, const std::string& path, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.empty() ? key : path + "." + key, e.what());
  }
}

Time seconds_field(const nlohmann::json& j, const char* key, const std::string& path,
                   Time fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const std::string field = path.empty() ? key : path + "." + key;
  if (!j.at(key).is_number()) throw ConfigError(field, "must be a number of seconds");
  return from_seconds(j.at(key).get<double>());
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : "NA";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s == "NA" || s.empty()) return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, "invalid number '" + s + "'");
  }
  return v;
}

std::string fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}


}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void ExperimentPlan::validate() const {
  if (routers.empty()) throw ConfigError("routers", "need at least one router");
  if (ttls.empty()) throw ConfigError("ttls", "need at least one TTL");
  if (seeds.empty()) throw ConfigError("seeds", "need at least one seed");
  for (std::size_t i = 0; i < ttls.size(); ++i) {
    if (ttls[i] <= 0) throw ConfigError("ttls[" + std::to_string(i) + "]", "must be positive");
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds", "seeds must be distinct");
  }
  if (std::set<RouterKind>(routers.begin(), routers.end()).size() != routers.size()) {
    throw ConfigError("routers", "routers must be distinct");
  }
  sim.validate();
  if (!trace.path) trace.routine.validate();
  if (!workload.path) {
    if (workload.min_size <= 0 || workload.max_size < workload.min_size) {
      throw ConfigError("workload.min_size", "need 0 < min_size <= max_size");
    }
  }
}

ExperimentPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  ExperimentPlan plan;
  static const std::set<std::string> known{
      "trace", "workload", "routers", "ttls", "seeds", "samples_per_day", "seconds_per_day",
      "buffer_bytes", "bandwidth_bps", "eviction", "summary_bytes", "router_params",
      "write_logs", "write_dumps"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError(key, "unknown key");
  }

  if (j.contains("trace")) {
    const auto& t = j.at("trace");
    if (t.contains("path")) {
      plan.trace.path = base_dir / get_field<std::string>(t, "path", "trace", "");
      const auto name = get_field<std::string>(t, "format", "trace", "csv");
      const auto format = parse_trace_format(name);
      if (!format) throw ConfigError("trace.format", "expected csv or haggle, got '" + name + "'");
      plan.trace.format = *format;
    } else if (t.contains("routine")) {
      plan.trace.routine = routine_from_json(t.at("routine"));
    } else {
      const auto& d = t.contains("desk_scale") ? t.at("desk_scale") : t;
      plan.trace.routine = desk_scale_routine(get_field<std::uint32_t>(d, "nodes", "trace", 30),
                                              get_field<int>(d, "groups", "trace", 3),
                                              get_field<int>(d, "days", "trace", 7));
    }
  }

  if (j.contains("workload")) {
    const auto& w = j.at("workload");
    if (w.contains("path")) {
      plan.workload.path = base_dir / get_field<std::string>(w, "path", "workload", "");
    } else {
      plan.workload.count = get_field<std::size_t>(w, "count", "workload", plan.workload.count);
      plan.workload.start = seconds_field(w, "start", "workload", plan.workload.start);
      if (w.contains("end")) plan.workload.end = seconds_field(w, "end", "workload", 0);
      plan.workload.min_size = get_field<std::int64_t>(w, "min_size", "workload", plan.workload.min_size);
      plan.workload.max_size = get_field<std::int64_t>(w, "max_size", "workload", plan.workload.max_size);
    }
  }

  if (j.contains("routers")) {
    plan.routers.clear();
    const auto& r = j.at("routers");
    if (!r.is_array()) throw ConfigError("routers", "must be an array");
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto name = r[i].is_string() ? r[i].get<std::string>() : r[i].dump();
      const auto kind = parse_router(name);
      if (!kind) {
        throw ConfigError("routers[" + std::to_string(i) + "]",
                          "unknown router '" + name + "' (valid: " + std::string(kRouterNames) + ")");
      }
      plan.routers.push_back(*kind);
    }
  }
  if (j.contains("ttls")) {
    plan.ttls.clear();
    const auto& t = j.at("ttls");
    if (!t.is_array()) throw ConfigError("ttls", "must be an array of seconds");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!t[i].is_number()) throw ConfigError("ttls[" + std::to_string(i) + "]", "must be a number");
      plan.ttls.push_back(from_seconds(t[i].get<double>()));
    }
  }
  if (j.contains("seeds")) {
    plan.seeds.clear();
    const auto& s = j.at("seeds");
    if (!s.is_array()) throw ConfigError("seeds", "must be an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_number_integer() || s[i].get<std::int64_t>() < 0) {
        throw ConfigError("seeds[" + std::to_string(i) + "]", "must be a non-negative integer");
      }
      plan.seeds.push_back(s[i].get<std::uint64_t>());
    }
  }

  auto& sim = plan.sim;
  sim.samples.samples_per_day = get_field<int>(j, "samples_per_day", "", 24);
  sim.samples.seconds_per_day = get_field<std::int64_t>(j, "seconds_per_day", "", 86400);
  if (j.contains("buffer_bytes")) {
    sim.buffer_capacity = j.at("buffer_bytes").is_null()
                              ? std::nullopt
                              : std::optional(get_field<std::int64_t>(j, "buffer_bytes", "", 0));
  }
  if (j.contains("bandwidth_bps") && !j.at("bandwidth_bps").is_null()) {
    sim.bandwidth_bps = get_field<double>(j, "bandwidth_bps", "", 0.0);
  }
  if (j.contains("eviction")) {
    const auto name = get_field<std::string>(j, "eviction", "", "");
    const auto policy = parse_eviction(name);
    if (!policy) {
      throw ConfigError("eviction", "expected oldest_created or oldest_received, got '" + name + "'");
    }
    sim.eviction = *policy;
  }
  sim.summary_bytes = get_field<std::int64_t>(j, "summary_bytes", "", 0);
  if (j.contains("router_params")) {
    const auto& p = j.at("router_params");
    const std::string path = "router_params";
    sim.params.damping = get_field<double>(p, "damping", path, sim.params.damping);
    sim.params.k = get_field<int>(p, "k", path, sim.params.k);
    sim.params.familiar_threshold =
        get_field<double>(p, "familiar_threshold", path, sim.params.familiar_threshold);
    sim.params.centrality_window =
        seconds_field(p, "centrality_window", path, sim.params.centrality_window);
    sim.params.recompute_interval =
        seconds_field(p, "recompute_interval", path, sim.params.recompute_interval);
    if (p.contains("importance_fallback")) {
      const auto name = get_field<std::string>(p, "importance_fallback", path, "");
      const auto mode = parse_importance_fallback(name);
      if (!mode) {
        throw ConfigError("router_params.importance_fallback",
                          "expected always or unknown_destination, got '" + name + "'");
      }
      sim.params.importance_fallback = *mode;
    }
  }
  plan.write_logs = get_field<bool>(j, "write_logs", "", true);
  plan.write_dumps = get_field<bool>(j, "write_dumps", "", false);
  plan.validate();
  return plan;
}

nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  nlohmann::json j;
  if (plan.trace.path) {
    j["trace"] = {{"path", plan.trace.path->string()},
                  {"format", plan.trace.format == TraceFormat::csv ? "csv" : "haggle"}};
  } else {
    j["trace"] = {{"routine", routine_to_json(plan.trace.routine)}};
  }
  if (plan.workload.path) {
    j["workload"] = {{"path", plan.workload.path->string()}};
  } else {
    j["workload"] = {{"count", plan.workload.count},
                     {"start", to_seconds(plan.workload.start)},
                     {"min_size", plan.workload.min_size},
                     {"max_size", plan.workload.max_size}};
    if (plan.workload.end) j["workload"]["end"] = to_seconds(*plan.workload.end);
  }
  j["routers"] = nlohmann::json::array();
  for (const auto r : plan.routers) j["routers"].push_back(std::string(router_name(r)));
  j["ttls"] = nlohmann::json::array();
  for (const auto t : plan.ttls) j["ttls"].push_back(to_seconds(t));
  j["seeds"] = plan.seeds;
  const auto& sim = plan.sim;
  j["samples_per_day"] = sim.samples.samples_per_day;
  j["seconds_per_day"] = sim.samples.seconds_per_day;
  j["buffer_bytes"] = sim.buffer_capacity ? nlohmann::json(*sim.buffer_capacity) : nlohmann::json();
  j["bandwidth_bps"] = sim.bandwidth_bps ? nlohmann::json(*sim.bandwidth_bps) : nlohmann::json();
  j["eviction"] = std::string(eviction_name(sim.eviction));
  j["summary_bytes"] = sim.summary_bytes;
  j["router_params"] = {{"damping", sim.params.damping},
                        {"k", sim.params.k},
                        {"familiar_threshold", sim.params.familiar_threshold},
                        {"centrality_window", to_seconds(sim.params.centrality_window)},
                        {"recompute_interval", to_seconds(sim.params.recompute_interval)},
                        {"importance_fallback",
                         std::string(importance_fallback_name(sim.params.importance_fallback))}};
  j["write_logs"] = plan.write_logs;
  j["write_dumps"] = plan.write_dumps;
  return j;
}

std::string cell_name(RouterKind router, Time ttl, std::uint64_t seed) {
  return std::string(router_name(router)) + "_" + format_seconds(ttl) + "_" + std::to_string(seed);
}

ContactTrace load_trace(const TraceSource& source, std::uint64_t seed) {
  if (!source.path) return generate_routine_trace(source.routine, seed);
  std::ifstream in(*source.path);
  if (!in) throw ConfigError("trace.path", "cannot open " + source.path->string());
  return parse_contact_trace(in, source.format);
}

std::vector<WorkloadEntry> load_workload(const WorkloadSource& source, const ContactTrace& trace,
                                         std::uint64_t seed) {
  if (source.path) {
    std::ifstream in(*source.path);
    if (!in) throw ConfigError("workload.path", "cannot open " + source.path->string());
    return parse_workload(in);
  }
  WorkloadSpec spec;
  spec.count = source.count;
  spec.nodes = trace.node_labels;
  spec.start = source.start;
  spec.end = source.end.value_or(trace.duration);
  spec.min_size = source.min_size;
  spec.max_size = source.max_size;
  // Separate stream from the trace generator.
  return generate_workload(spec, seed ^ 0x9e3779b97f4a7c15ULL);
}

std::vector<CellResult> run_plan(const ExperimentPlan& plan, const std::filesystem::path& out,
                                 unsigned jobs) {
  plan.validate();
  struct SeedInputs {
    ContactTrace trace;
    std::vector<WorkloadEntry> workload;
  };
  std::map<std::uint64_t, SeedInputs> inputs;
  for (const auto seed : plan.seeds) {
    auto trace = load_trace(plan.trace, seed);
    auto workload = load_workload(plan.workload, trace, seed);
    inputs.emplace(seed, SeedInputs{std::move(trace), std::move(workload)});
  }

  std::vector<CellResult> results;
  for (const auto router : plan.routers) {
    for (const auto ttl : plan.ttls) {
      for (const auto seed : plan.seeds) results.push_back({router, ttl, seed, {}});
    }
  }
  if (plan.write_logs || plan.write_dumps) std::filesystem::create_directories(out);

  std::atomic<std::size_t> next{0};
  std::mutex failures_mu;
  std::vector<std::string> failures;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= results.size()) return;
      auto& cell = results[i];
      const std::string name = cell_name(cell.router, cell.ttl, cell.seed);
      try {
        const auto& in = inputs.at(cell.seed);
        SimConfig cfg = plan.sim;
        cfg.router = cell.router;
        const auto messages = bind_workload(in.workload, in.trace, cell.ttl);
        SimSnapshot snap;
        const EventLog log =
            run_simulation(in.trace, messages, cfg, plan.write_dumps ? &snap : nullptr);
        cell.metrics = compute_run_metrics(log);
        const auto dir = out / name;
        if (plan.write_logs || plan.write_dumps) std::filesystem::create_directories(dir);
        if (plan.write_dumps) {
          std::ofstream weights(dir / "ledger_weights.csv");
          write_ledger_weights_csv(weights, snap.ledgers);
          std::ofstream importance(dir / "ledger_importance.csv");
          write_ledger_importance_csv(importance, snap.ledgers);
          std::ofstream comms(dir / "communities.json");
          write_communities_json(comms, snap.communities);
          std::ofstream cent(dir / "centrality.csv");
          write_centrality_csv(cent, snap.centrality, snap.communities);
          if (!weights || !importance || !comms || !cent) {
            throw std::runtime_error("cannot write dumps under " + dir.string());
          }
        }
        if (plan.write_logs) {
          std::ofstream nd(dir / "events.ndjson");
          write_ndjson(nd, log);
          std::ofstream csv(dir / "events.csv");
          write_csv(csv, log);
          if (!nd || !csv) throw std::runtime_error("cannot write logs under " + dir.string());
        }
      } catch (const std::exception& e) {
        const std::lock_guard lock(failures_mu);
        failures.push_back(name + ": " + e.what());
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(results.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::string msg = std::to_string(failures.size()) + " run(s) failed";
    for (const auto& f : failures) msg += "\n  " + f;
    throw std::runtime_error(msg);
  }
  return results;
}

void write_results_csv(std::ostream& out, const std::vector<CellResult>& results) {
  out << "router,ttl,seed,delivery,cost,latency\n";
  for (const auto& r : results) {
    out << router_name(r.router) << ',' << format_seconds(r.ttl) << ',' << r.seed << ','
        << format_number(r.metrics.delivery_probability) << ','
        << optional_number(r.metrics.avg_cost) << ',' << optional_number(r.metrics.avg_latency)
        << '\n';
  }
}

std::vector<CellResult> read_results_csv(std::istream& in) {
  std::vector<CellResult> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    if (!header) {
      if (fields != std::vector<std::string>{"router", "ttl", "seed", "delivery", "cost", "latency"}) {
        throw ParseError(line_no, "expected header 'router,ttl,seed,delivery,cost,latency'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 6) throw ParseError(line_no, "expected 6 fields");
    CellResult r;
    const auto router = parse_router(fields[0]);
    if (!router) throw ParseError(line_no, "unknown router '" + fields[0] + "'");
    r.router = *router;
    if (!parse_seconds(fields[1], r.ttl)) throw ParseError(line_no, "invalid ttl");
    const auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), r.seed);
    if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size()) {
      throw ParseError(line_no, "invalid seed");
    }
    const auto delivery = parse_optional(fields[3], line_no);
    if (!delivery) throw ParseError(line_no, "delivery is required");
    r.metrics.delivery_probability = *delivery;
    r.metrics.avg_cost = parse_optional(fields[4], line_no);
    r.metrics.avg_latency = parse_optional(fields[5], line_no);
    out.push_back(r);
  }
  if (!header) throw ParseError(0, "missing results header");
  return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<CellResult>& results) {
  out << "router,ttl,runs,delivery_mean,delivery_ci,cost_mean,cost_ci,latency_mean,latency_ci\n";
  std::map<std::pair<std::string, Time>, std::vector<RunMetrics>> cells;
  std::vector<std::pair<std::string, Time>> order;
  for (const auto& r : results) {
    const auto key = std::pair{std::string(router_name(r.router)), r.ttl};
    if (!cells.contains(key)) order.push_back(key);
    cells[key].push_back(r.metrics);
  }
  auto mean_of = [](const MetricSummary& s) {
    return s.runs == 0 ? std::string("NA") : format_number(s.mean);
  };
  for (const auto& key : order) {
    const auto agg = aggregate_runs(cells[key]);
    out << key.first << ',' << format_seconds(key.second) << ',' << agg.delivery.runs << ','
        << mean_of(agg.delivery) << ',' << optional_number(agg.delivery.ci_half_width) << ','
        << mean_of(agg.cost) << ',' << optional_number(agg.cost.ci_half_width) << ','
        << mean_of(agg.latency) << ',' << optional_number(agg.latency.ci_half_width) << '\n';
  }
}

std::vector<ComparisonRow> compare_results(const std::vector<CellResult>& results,
                                           const std::string& baseline) {
  std::map<std::string, std::map<Time, std::vector<const CellResult*>>> by_router;
  std::vector<std::string> order;
  for (const auto& r : results) {
    const std::string name(router_name(r.router));
    if (!by_router.contains(name)) order.push_back(name);
    by_router[name][r.ttl].push_back(&r);
  }
  if (!by_router.contains(baseline)) {
    throw std::invalid_argument("baseline router '" + baseline + "' not present in the results");
  }
  if (by_router.size() < 2) throw std::invalid_argument("need at least two result sets to compare");

  auto cells_of = [](const std::map<Time, std::vector<const CellResult*>>& groups) {
    std::set<std::pair<Time, std::uint64_t>> cells;
    for (const auto& [ttl, rows] : groups) {
      for (const auto* r : rows) {
        if (!cells.emplace(ttl, r->seed).second) {
          throw std::invalid_argument("duplicate cell for ttl " + format_seconds(ttl) + " seed " +
                                      std::to_string(r->seed));
        }
      }
    }
    return cells;
  };
  const auto& base = by_router.at(baseline);
  const auto base_cells = cells_of(base);

  std::vector<ComparisonRow> rows;
  for (const auto& name : order) {
    if (name == baseline) continue;
    const auto& groups = by_router.at(name);
    if (cells_of(groups) != base_cells) {
      throw std::invalid_argument("plans differ: '" + name + "' and '" + baseline +
                                  "' do not cover the same (ttl, seed) cells");
    }
    for (const auto& [ttl, cells] : groups) {
      std::vector<RunMetrics> mine;
      std::vector<RunMetrics> theirs;
      for (const auto* c : cells) mine.push_back(c->metrics);
      for (const auto* c : base.at(ttl)) theirs.push_back(c->metrics);
      const auto a = aggregate_runs(mine);
      const auto b = aggregate_runs(theirs);
      const std::pair<const char*, std::pair<MetricSummary, MetricSummary>> metrics[] = {
          {"delivery", {a.delivery, b.delivery}},
          {"cost", {a.cost, b.cost}},
          {"latency", {a.latency, b.latency}}};
      for (const auto& [metric, pair] : metrics) {
        const auto& [va, vb] = pair;
        if (va.runs == 0 || vb.runs == 0) continue;
        ComparisonRow row;
        row.router = name;
        row.baseline = baseline;
        row.ttl = ttl;
        row.metric = metric;
        row.value = va;
        row.baseline_value = vb;
        const double diff = va.mean - vb.mean;
        if (vb.mean != 0.0) row.relative_percent = diff / vb.mean * 100.0;
        if (std::string_view(metric) == "delivery") {
          row.difference = diff * 100.0;
          row.summary = (row.difference >= 0 ? "+" : "") + fixed1(row.difference) + " pp";
        } else {
          row.difference = diff;
          if (row.relative_percent) {
            const double pct = *row.relative_percent;
            const char* noun = std::string_view(metric) == "cost" ? " replicas" : " latency";
            row.summary = fixed1(std::abs(pct)) + "% " +
                          (pct <= 0 ? (std::string_view(metric) == "cost" ? "fewer" : "lower")
                                    : (std::string_view(metric) == "cost" ? "more" : "higher")) +
                          noun;
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "router,baseline,ttl,metric,mean,ci,baseline_mean,baseline_ci,difference,"
         "relative_percent,summary\n";
  for (const auto& r : rows) {
    out << r.router << ',' << r.baseline << ',' << format_seconds(r.ttl) << ',' << r.metric << ','
        << format_number(r.value.mean) << ',' << optional_number(r.value.ci_half_width) << ','
        << format_number(r.baseline_value.mean) << ','
        << optional_number(r.baseline_value.ci_half_width) << ',' << format_number(r.difference)
        << ',' << optional_number(r.relative_percent) << ',' << r.summary << '\n';
  }
}

}  // namespace dlife
