#pragma once

#include <optional>
#include <vector>

#include "dlife/event_log.hpp"

namespace dlife {

// Ratio of distinct delivered messages to created messages. nullopt when
// nothing was created.
std::optional<double> delivery_probability(const EventLog& log);

// All replications ever made (delivered or not, the delivering hop
// included) per distinct delivered message. nullopt when nothing was
// delivered.
std::optional<double> average_cost(const EventLog& log);

// Mean seconds from creation to first delivery. nullopt when nothing was
// delivered.
std::optional<double> average_latency(const EventLog& log);

struct RunMetrics {
  std::size_t created = 0;
  std::size_t delivered = 0;
  double delivery_probability = 0.0;
  std::optional<double> avg_cost;
  std::optional<double> avg_latency;
};

// Throws std::invalid_argument if the log has no Created records.
RunMetrics compute_run_metrics(const EventLog& log);

struct MetricSummary {
  double mean = 0.0;
  std::optional<double> ci_half_width;  // 95%, Student-t; needs >= 2 runs
  std::size_t runs = 0;
};

// Student-t 95% interval half-width: t(0.975, n-1) * s / sqrt(n).
MetricSummary summarize(const std::vector<double>& values);

struct AggregateMetrics {
  MetricSummary delivery;
  MetricSummary cost;     // over runs with at least one delivery
  MetricSummary latency;  // idem
};

AggregateMetrics aggregate_runs(const std::vector<RunMetrics>& runs);

// Two-sided 95% Student-t critical value for `dof` degrees of freedom.
double student_t_975(std::size_t dof);

}  // namespace dlife
