#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalesce/rng.hpp"

namespace coalesce {

struct ExperimentSpec {
  std::string subcommand;
  std::size_t n = 1000;
  std::size_t reps = 10;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";  // json | csv
  std::string output;           // empty: stdout
  std::uint64_t record_every = 1;
  unsigned threads = 0;         // 0: COALESCE_THREADS or hardware concurrency
  std::size_t n_max = 7;
  std::string kernel = "multiplicative";  // simulate / heights; "er" selects the graph process
  std::vector<double> c = {0.5, 1.5, 2.0, 3.0};
  std::uint64_t m_max = 0;      // simulate --kernel er; 0: run to connectivity

  void validate() const;  // throws CoalesceError(InvalidArgument)
  nlohmann::json to_json() const;
};

struct RunOutput {
  nlohmann::json json;
  std::string csv;     // filled when the subcommand has a tabular form and format == csv
  bool passed = true;  // false when a built-in check of the subcommand failed
  double elapsed_seconds = 0.0;

  // The formatted output; JSON omits elapsed time when include_elapsed is false.
  std::string render(const std::string& format, bool include_elapsed = true) const;
};

RunOutput run(const ExperimentSpec& spec);

const std::vector<std::string>& subcommands();

}  // namespace coalesce
