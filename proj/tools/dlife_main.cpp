// dlife: contact-trace-driven simulator for social opportunistic routing.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlife/errors.hpp"
#include "dlife/experiment.hpp"
#include "dlife/message.hpp"
#include "dlife/routine.hpp"
#include "dlife/trace_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Writes to `path`, or stdout when empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dlife - social opportunistic routing simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment plan (routers x TTLs x seeds)");
  std::string config_path;
  std::string out_dir = "results";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> run_seed;
  run->add_option("--config", config_path, "JSON config; defaults reproduce the desk-scale setup")
      ->envname("DLIFE_CONFIG");
  run->add_option("--out", out_dir, "Output directory")->envname("DLIFE_OUT");
  run->add_option("--jobs", jobs, "Parallel cells")->envname("DLIFE_JOBS")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed, "Run only this seed")->envname("DLIFE_SEED");

  // compare
  auto* compare = app.add_subcommand("compare", "Compare routers across result CSVs");
  std::vector<std::string> result_files;
  std::string baseline;
  std::string compare_out;
  compare->add_option("results", result_files, "results.csv files")->required()->check(CLI::ExistingFile);
  compare->add_option("--baseline", baseline, "Baseline router (default: last router seen)");
  compare->add_option("--out", compare_out, "Output CSV (default stdout)")->envname("DLIFE_OUT");

  // gen-trace
  auto* gen_trace = app.add_subcommand("gen-trace", "Generate a routine-driven contact trace");
  std::string routine_path;
  std::uint64_t seed = 1;
  std::string trace_out;
  gen_trace->add_option("--config", routine_path, "Routine spec JSON (default: desk-scale routine)")
      ->check(CLI::ExistingFile);
  gen_trace->add_option("--seed", seed, "RNG seed")->envname("DLIFE_SEED");
  gen_trace->add_option("--out", trace_out, "Output CSV (default stdout)")->envname("DLIFE_OUT");

  // gen-workload
  auto* gen_workload = app.add_subcommand("gen-workload", "Generate a message workload");
  std::size_t count = 6000;
  std::string workload_trace;
  std::string workload_trace_format = "csv";
  std::string workload_out;
  double start = 0;
  std::optional<double> end;
  std::int64_t min_size = 1000;
  std::int64_t max_size = 100000;
  gen_workload->add_option("--count", count, "Number of messages");
  gen_workload->add_option("--trace", workload_trace, "Trace providing node ids and duration")
      ->required()
      ->check(CLI::ExistingFile);
  gen_workload->add_option("--format", workload_trace_format, "Trace format: csv | haggle");
  gen_workload->add_option("--start", start, "First creation time, seconds");
  gen_workload->add_option("--end", end, "Creation window end, seconds (default: trace duration)");
  gen_workload->add_option("--min-size", min_size, "Minimum size, bytes");
  gen_workload->add_option("--max-size", max_size, "Maximum size, bytes");
  gen_workload->add_option("--seed", seed, "RNG seed")->envname("DLIFE_SEED");
  gen_workload->add_option("--out", workload_out, "Output CSV (default stdout)")->envname("DLIFE_OUT");

  // convert-trace
  auto* convert = app.add_subcommand("convert-trace", "Convert a trace to canonical CSV");
  std::string convert_in;
  std::string convert_format = "haggle";
  std::string convert_out;
  convert->add_option("input", convert_in, "Input trace")->required()->check(CLI::ExistingFile);
  convert->add_option("--format", convert_format, "Input format: csv | haggle");
  convert->add_option("--out", convert_out, "Output CSV (default stdout)")->envname("DLIFE_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      const nlohmann::json cfg = config_path.empty() ? nlohmann::json::object() : read_json(config_path);
      const auto base_dir = config_path.empty()
                                ? std::filesystem::current_path()
                                : std::filesystem::absolute(config_path).parent_path();
      auto plan = dlife::plan_from_json(cfg, base_dir);
      if (run_seed) plan.seeds = {*run_seed};
      std::vector<dlife::CellResult> results;
      try {
        results = dlife::run_plan(plan, out_dir, jobs);
      } catch (const dlife::ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRunFailure;
      }
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path out(out_dir);
      with_output((out / "results.csv").string(), [&](std::ostream& os) {
        dlife::write_results_csv(os, results);
      });
      with_output((out / "aggregate.csv").string(), [&](std::ostream& os) {
        dlife::write_aggregate_csv(os, results);
      });
      with_output((out / "plan.json").string(), [&](std::ostream& os) {
        os << dlife::plan_to_json(plan).dump(2) << '\n';
      });
      dlife::write_aggregate_csv(std::cout, results);
    } else if (*compare) {
      std::vector<dlife::CellResult> rows;
      std::string last_router;
      for (const auto& path : result_files) {
        std::ifstream in(path);
        auto part = dlife::read_results_csv(in);
        for (auto& r : part) {
          last_router = std::string(dlife::router_name(r.router));
          rows.push_back(r);
        }
      }
      if (baseline.empty()) baseline = last_router;
      const auto table = dlife::compare_results(rows, baseline);
      with_output(compare_out, [&](std::ostream& os) { dlife::write_comparison_csv(os, table); });
    } else if (*gen_trace) {
      const auto spec = routine_path.empty() ? dlife::desk_scale_routine()
                                             : dlife::routine_from_json(read_json(routine_path));
      const auto trace = dlife::generate_routine_trace(spec, seed);
      with_output(trace_out, [&](std::ostream& os) { dlife::write_trace_csv(os, trace); });
    } else if (*gen_workload) {
      const auto format = dlife::parse_trace_format(workload_trace_format);
      if (!format) throw UsageError("--format must be csv or haggle");
      std::ifstream in(workload_trace);
      const auto trace = dlife::parse_contact_trace(in, *format);
      dlife::WorkloadSpec spec;
      spec.count = count;
      spec.nodes = trace.node_labels;
      spec.start = dlife::from_seconds(start);
      spec.end = end ? dlife::from_seconds(*end) : trace.duration;
      spec.min_size = min_size;
      spec.max_size = max_size;
      const auto workload = dlife::generate_workload(spec, seed);
      with_output(workload_out, [&](std::ostream& os) { dlife::write_workload(os, workload); });
    } else if (*convert) {
      const auto format = dlife::parse_trace_format(convert_format);
      if (!format) throw UsageError("--format must be csv or haggle");
      std::ifstream in(convert_in);
      const auto trace = dlife::parse_contact_trace(in, *format);
      with_output(convert_out, [&](std::ostream& os) { dlife::write_trace_csv(os, trace); });
    }
  } catch (const dlife::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const dlife::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }
  return kOk;
}
