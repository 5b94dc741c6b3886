#include "dlife/metrics.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace dlife {
namespace {

struct Tally {
  std::size_t created = 0;
  std::size_t replications = 0;
  std::map<MessageId, Time> created_at;
  std::map<MessageId, Time> first_delivery;
};

Tally tally(const EventLog& log) {
  Tally t;
  for (const auto& r : log.records) {
    switch (r.kind) {
      case EventKind::created:
        ++t.created;
        t.created_at.emplace(r.message, r.time);
        break;
      case EventKind::replicated:
        ++t.replications;
        break;
      case EventKind::delivered: {
        auto [it, inserted] = t.first_delivery.emplace(r.message, r.time);
        if (!inserted) it->second = std::min(it->second, r.time);
        break;
      }
      default:
        break;
    }
  }
  return t;
}

}  // namespace

std::optional<double> delivery_probability(const EventLog& log) {
  const Tally t = tally(log);
  if (t.created == 0) return std::nullopt;
  return static_cast<double>(t.first_delivery.size()) / static_cast<double>(t.created);
}

std::optional<double> average_cost(const EventLog& log) {
  const Tally t = tally(log);
  if (t.first_delivery.empty()) return std::nullopt;
  return static_cast<double>(t.replications) / static_cast<double>(t.first_delivery.size());
}

std::optional<double> average_latency(const EventLog& log) {
  const Tally t = tally(log);
  if (t.first_delivery.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [id, at] : t.first_delivery) {
    const auto created = t.created_at.find(id);
    if (created == t.created_at.end()) {
      throw std::invalid_argument("delivery of message " + std::to_string(id) +
                                  " without a Created record");
    }
    total += to_seconds(at - created->second);
  }
  return total / static_cast<double>(t.first_delivery.size());
}

RunMetrics compute_run_metrics(const EventLog& log) {
  const auto delivery = delivery_probability(log);
  if (!delivery) throw std::invalid_argument("delivery probability undefined: no messages created");
  RunMetrics m;
  const Tally t = tally(log);
  m.created = t.created;
  m.delivered = t.first_delivery.size();
  m.delivery_probability = *delivery;
  m.avg_cost = average_cost(log);
  m.avg_latency = average_latency(log);
  return m;
}

double student_t_975(std::size_t dof) {
  if (dof == 0) throw std::invalid_argument("Student-t needs at least one degree of freedom");
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  s.runs = values.size();
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (const double v : values) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  s.ci_half_width = student_t_975(values.size() - 1) * sd / std::sqrt(n);
  return s;
}

AggregateMetrics aggregate_runs(const std::vector<RunMetrics>& runs) {
  std::vector<double> delivery;
  std::vector<double> cost;
  std::vector<double> latency;
  for (const auto& r : runs) {
    delivery.push_back(r.delivery_probability);
    if (r.avg_cost) cost.push_back(*r.avg_cost);
    if (r.avg_latency) latency.push_back(*r.avg_latency);
  }
  return {summarize(delivery), summarize(cost), summarize(latency)};
}

}  // namespace dlife
