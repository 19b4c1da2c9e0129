#include "coalesce/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace coalesce {

unsigned default_thread_count() {
  if (const char* env = std::getenv("COALESCE_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

SampleStats summarize(std::span<const double> values) {
  SampleStats stats;
  stats.count = values.size();
  if (values.empty()) return stats;
  stats.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - stats.mean) * (values[i] - stats.mean);
    stats.stddev = std::sqrt(pairwise_sum(dev) / static_cast<double>(values.size() - 1));
    stats.stderr_of_mean = stats.stddev / std::sqrt(static_cast<double>(values.size()));
  }
  return stats;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

ExperimentResult make_result(std::string estimator, std::size_t n, std::uint64_t seed,
                             std::span<const double> samples) {
  const SampleStats stats = summarize(samples);
  ExperimentResult result;
  result.estimator = std::move(estimator);
  result.n = n;
  result.reps = samples.size();
  result.seed = seed;
  result.mean = stats.mean;
  result.stddev = stats.stddev;
  result.stderr_of_mean = stats.stderr_of_mean;
  return result;
}

nlohmann::json ExperimentResult::to_json(bool include_elapsed) const {
  nlohmann::json j;
  j["estimator"] = estimator;
  j["n"] = n;
  j["reps"] = reps;
  j["seed"] = seed;
  j["generator_id"] = generator_id;
  j["mean"] = mean;
  j["stderr"] = stderr_of_mean;
  j["stddev"] = stddev;
  for (const auto& [key, value] : extra) j[key] = value;
  j["spec"] = spec;
  if (include_elapsed) j["elapsed_seconds"] = elapsed_seconds;
  return j;
}

}  // namespace coalesce
