#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "coalesce/rng.hpp"

namespace coalesce {

// Thread count from COALESCE_THREADS, else the hardware concurrency.
unsigned default_thread_count();

// Sum by recursive halving in a fixed order, independent of thread count.
double pairwise_sum(std::span<const double> values);

struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1 denominator)
  double stderr_of_mean = 0.0;
};

SampleStats summarize(std::span<const double> values);
double median(std::vector<double> values);

struct ExperimentResult {
  std::string estimator;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::string generator_id = kGeneratorId;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  double stddev = 0.0;
  std::map<std::string, double> extra;
  nlohmann::json spec = nlohmann::json::object();
  double elapsed_seconds = 0.0;

  nlohmann::json to_json(bool include_elapsed = true) const;
};

ExperimentResult make_result(std::string estimator, std::size_t n, std::uint64_t seed,
                             std::span<const double> samples);

// Runs fn(rng, index) for every replicate index with rng = derive_stream(master_seed, index).
// Replicates are handed to worker threads from a shared counter; results land
// at their own index, so the output never depends on scheduling.
template <class T, class Fn>
std::vector<T> run_replicates(std::size_t reps, std::uint64_t master_seed, unsigned threads, Fn&& fn) {
  std::vector<T> results(reps);
  if (threads == 0) threads = default_thread_count();
  if (threads > reps) threads = static_cast<unsigned>(reps);
  auto work = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i = next++; i < reps; i = next++) {
      Rng rng = derive_stream(master_seed, i);
      results[i] = fn(rng, i);
    }
  };
  std::atomic<std::size_t> next{0};
  if (threads <= 1) {
    work(next);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&] { work(next); });
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace coalesce
