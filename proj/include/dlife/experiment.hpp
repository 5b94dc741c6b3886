#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlife/engine.hpp"
#include "dlife/metrics.hpp"
#include "dlife/routine.hpp"
#include "dlife/trace_io.hpp"

namespace dlife {

// Where a cell's contacts come from: a trace file (same for every seed) or a
// routine spec regenerated per seed.
struct TraceSource {
  std::optional<std::filesystem::path> path;
  TraceFormat format = TraceFormat::csv;
  RoutineSpec routine = desk_scale_routine();
};

// A workload file, or `count` messages generated per seed over
// [start, end) (end defaults to the trace duration).
struct WorkloadSource {
  std::optional<std::filesystem::path> path;
  std::size_t count = 6000;
  Time start = 0;
  std::optional<Time> end;
  std::int64_t min_size = 1000;
  std::int64_t max_size = 100000;
};

// routers x ttls x seeds over one trace and workload source.
struct ExperimentPlan {
  TraceSource trace;
  WorkloadSource workload;
  std::vector<RouterKind> routers{RouterKind::dlife, RouterKind::dlifecomm,
                                  RouterKind::bubblerap, RouterKind::epidemic};
  std::vector<Time> ttls{seconds(86400), seconds(2 * 86400), seconds(4 * 86400),
                         seconds(7 * 86400), seconds(21 * 86400)};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  SimConfig sim;
  bool write_logs = true;
  bool write_dumps = false;  // end-of-run ledger, community and centrality dumps

  void validate() const;
  std::size_t cell_count() const { return routers.size() * ttls.size() * seeds.size(); }
};

// Reads the JSON config document. Relative paths resolve against
// `base_dir`. Missing keys keep their defaults. Throws ConfigError naming the
// field.
ExperimentPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json plan_to_json(const ExperimentPlan& plan);

struct CellResult {
  RouterKind router = RouterKind::dlife;
  Time ttl = 0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

std::string cell_name(RouterKind router, Time ttl, std::uint64_t seed);

// Contacts and workload for one seed.
ContactTrace load_trace(const TraceSource& source, std::uint64_t seed);
std::vector<WorkloadEntry> load_workload(const WorkloadSource& source, const ContactTrace& trace,
                                         std::uint64_t seed);

// Runs every cell on up to `jobs` threads. With write_logs, each cell writes
// <out>/<router>_<ttl>_<seed>/events.{ndjson,csv}; with write_dumps it also
// writes ledger_weights.csv, ledger_importance.csv, communities.json and
// centrality.csv there. Results come back in plan
// order (router, ttl, seed). Throws std::runtime_error listing failed cells.
std::vector<CellResult> run_plan(const ExperimentPlan& plan, const std::filesystem::path& out,
                                 unsigned jobs);

// "router,ttl,seed,delivery,cost,latency"; ttl in seconds, NA for undefined.
void write_results_csv(std::ostream& out, const std::vector<CellResult>& results);
std::vector<CellResult> read_results_csv(std::istream& in);

// "router,ttl,runs,delivery_mean,delivery_ci,cost_mean,cost_ci,latency_mean,latency_ci"
void write_aggregate_csv(std::ostream& out, const std::vector<CellResult>& results);

struct ComparisonRow {
  std::string router;
  std::string baseline;
  Time ttl = 0;
  std::string metric;  // delivery | cost | latency
  MetricSummary value;
  MetricSummary baseline_value;
  // router - baseline; percentage points for delivery, metric units otherwise.
  double difference = 0.0;
  std::optional<double> relative_percent;  // (router - baseline) / baseline * 100
  std::string summary;
};

// Compares every router against `baseline` per TTL and metric. Each router
// must cover exactly the baseline's (ttl, seed) cells. Throws
// std::invalid_argument on mismatched plans or an unknown baseline.
std::vector<ComparisonRow> compare_results(const std::vector<CellResult>& results,
                                           const std::string& baseline);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

// Shortest round-trip decimal for a double.
std::string format_number(double v);

}  // namespace dlife
