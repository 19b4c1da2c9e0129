#include "coalesce/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "coalesce/coalescent.hpp"
#include "coalesce/entropy.hpp"
#include "coalesce/er_process.hpp"
#include "coalesce/exact.hpp"
#include "coalesce/experiment.hpp"
#include "coalesce/kruskal.hpp"
#include "coalesce/numerics.hpp"

namespace coalesce {

using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"simulate", "verify-exact", "estimate-frieze", "estimate-zmc",
                                                 "susceptibility-profile", "integrals", "heights"};
  return names;
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& msg) { throw CoalesceError(ErrorCode::InvalidArgument, msg); };
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
    fail("unknown subcommand '" + subcommand + "'");
  if (reps < 1) fail("reps must be at least 1");
  if (n < 1) fail("n must be at least 1");
  if (format != "json" && format != "csv") fail("format must be json or csv");
  if (record_every < 1) fail("record-every must be positive");
  if (kernel != "er") parse_kernel(kernel);
  for (double x : c)
    if (!(x >= 0.0)) fail("c values must be non-negative");
}

json ExperimentSpec::to_json() const {
  return json{{"subcommand", subcommand}, {"n", n},         {"reps", reps},       {"seed", seed},
              {"format", format},         {"record_every", record_every},        {"n_max", n_max},
              {"kernel", kernel},         {"c", c},         {"m_max", m_max}};
}

std::string RunOutput::render(const std::string& format, bool include_elapsed) const {
  if (format == "csv" && !csv.empty()) return csv;
  nlohmann::json j = this->json;
  if (include_elapsed) j["elapsed_seconds"] = elapsed_seconds;
  return j.dump(2) + "\n";
}

namespace {

json stats_json(const SampleStats& s) { return json{{"mean", s.mean}, {"stderr", s.stderr_of_mean}, {"stddev", s.stddev}}; }

std::string big_str(const BigInt& x) { return x.str(); }

RunOutput run_simulate(const ExperimentSpec& spec) {
  RunOutput out;
  Rng rng(spec.seed);
  std::ostringstream csv;
  if (spec.kernel == "er") {
    const std::uint64_t m_max = spec.m_max == 0 ? choose2(spec.n) : spec.m_max;
    GraphRunOptions options;
    options.stop_at_connectivity = spec.m_max == 0;
    const GraphProcessRun run = run_graph_process(spec.n, m_max, rng, options);
    write_trajectory_csv(csv, run, spec.record_every);
    const GraphStep& last = run.steps.back();
    out.json = {{"process", "erdos-renyi"}, {"m", last.m},          {"tau", last.tau},
                {"chi_num", last.chi_num},  {"L", last.largest},    {"S", last.second}};
    out.json["connect_time"] = run.connect_time ? json(*run.connect_time) : json(nullptr);
  } else {
    const KernelKind kernel = parse_kernel(spec.kernel);
    const MergeTrace trace = run_uniform(kernel, spec.n, rng);
    write_trace_csv(csv, trace);
    out.json = {{"kernel", to_string(kernel)}, {"merges", trace.records.size()},
                {"height", height(trace.final_tree())}, {"root", trace.final_tree().root() + 1}};
    if (kernel == KernelKind::Multiplicative && spec.n >= 2)
      out.json["log_z"] = empirical_log_partition(trace, spec.n).log_z;
    if (kernel == KernelKind::Additive) out.json["additive_constant_check"] = additive_empirical_constant_check(trace);
  }
  out.csv = csv.str();
  return out;
}

RunOutput run_verify_exact(const ExperimentSpec& spec) {
  RunOutput out;
  if (spec.n_max > 60) throw CoalesceError(ErrorCode::UnsupportedSize, "verify-exact: n-max must be at most 60");
  json entries = json::array();
  std::ostringstream csv;
  csv << "kernel,n,k,brute,dp,closed,pass\n";
  bool all = true;
  for (KernelKind kernel : {KernelKind::Kingman, KernelKind::Additive, KernelKind::Multiplicative}) {
    for (std::size_t n = 2; n <= spec.n_max; ++n) {
      const auto dp = dp_partition_profile(kernel, n);
      std::vector<BigInt> brute;
      if (n <= 8) brute = brute_force_enumerate(kernel, n).z_by_k;
      for (std::size_t k = 1; k <= n; ++k) {
        const BigInt closed = closed_form_Z(kernel, n, k);
        bool pass = dp[k] == closed;
        json e = {{"kernel", to_string(kernel)}, {"n", n}, {"k", k}, {"dp", big_str(dp[k])}, {"closed", big_str(closed)}};
        if (!brute.empty()) {
          pass = pass && brute[k] == closed;
          e["brute"] = big_str(brute[k]);
        }
        e["pass"] = pass;
        all = all && pass;
        csv << to_string(kernel) << ',' << n << ',' << k << ',' << (brute.empty() ? "" : big_str(brute[k])) << ','
            << big_str(dp[k]) << ',' << big_str(closed) << ',' << (pass ? "true" : "false") << '\n';
        entries.push_back(std::move(e));
      }
    }
  }
  json chains = json::array();
  for (std::size_t n = 1; n <= std::min<std::size_t>(spec.n_max, 8); ++n) {
    const BigInt counted = brute_force_enumerate(KernelKind::Multiplicative, n).chains;
    const bool pass = counted == chain_count(n);
    all = all && pass;
    chains.push_back({{"n", n}, {"enumerated", big_str(counted)}, {"formula", big_str(chain_count(n))}, {"pass", pass}});
  }
  out.json = {{"matrix", entries}, {"chain_counts", chains}, {"all_pass", all}};
  out.csv = csv.str();
  out.passed = all;
  return out;
}

RunOutput run_frieze(const ExperimentSpec& spec) {
  RunOutput out;
  if (spec.n < 2) throw CoalesceError(ErrorCode::InvalidArgument, "estimate-frieze: n must be at least 2");
  const ExperimentResult r = frieze_estimate(spec.n, spec.reps, spec.seed, spec.threads);
  const double failures = r.extra.at("identity_failures");
  out.json = {{"n", r.n},        {"reps", r.reps},     {"mean", r.mean},
              {"stderr", r.stderr_of_mean},            {"seed", r.seed},
              {"generator_id", r.generator_id},        {"stddev", r.stddev},
              {"target", constants().zeta3},           {"identity_failures", failures}};
  std::ostringstream csv;
  csv.precision(17);
  csv << "n,reps,mean,stderr,seed,generator_id\n"
      << r.n << ',' << r.reps << ',' << r.mean << ',' << r.stderr_of_mean << ',' << r.seed << ',' << r.generator_id
      << '\n';
  out.csv = csv.str();
  out.passed = failures == 0;
  return out;
}

RunOutput run_zmc(const ExperimentSpec& spec) {
  RunOutput out;
  if (spec.n < 2) throw CoalesceError(ErrorCode::InvalidArgument, "estimate-zmc: n must be at least 2");
  const ExperimentResult r = estimate_zeta_mc(spec.n, spec.reps, spec.seed, spec.threads);
  out.json = {{"n", r.n},
              {"reps", r.reps},
              {"mean_normalized", r.mean},
              {"stderr", r.stderr_of_mean},
              {"target", -1.14237},
              {"zeta_mc", constants().zeta_mc},
              {"both_normalizations",
               {{"two_n_log_n", {{"mean", r.mean}, {"stderr", r.stderr_of_mean}}},
                {"two_n_minus_1_log_n",
                 {{"mean", r.extra.at("mean_n_minus_1")}, {"stderr", r.extra.at("stderr_n_minus_1")}}}}},
              {"seed", r.seed},
              {"generator_id", r.generator_id}};
  std::ostringstream csv;
  csv.precision(17);
  csv << "n,reps,mean_normalized,stderr,mean_n_minus_1,stderr_n_minus_1,seed,generator_id\n"
      << r.n << ',' << r.reps << ',' << r.mean << ',' << r.stderr_of_mean << ',' << r.extra.at("mean_n_minus_1")
      << ',' << r.extra.at("stderr_n_minus_1") << ',' << r.seed << ',' << r.generator_id << '\n';
  out.csv = csv.str();
  return out;
}

RunOutput run_susceptibility(const ExperimentSpec& spec) {
  RunOutput out;
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "c,alpha_sq,mean_chi_over_n,stderr,fraction_within_0.02\n";
  for (std::size_t i = 0; i < spec.c.size(); ++i) {
    const double c = spec.c[i];
    const auto samples = chi_over_n_samples(spec.n, c, spec.reps, derive_seed(spec.seed, i), spec.threads);
    const double a = alpha(c);
    const double target = a * a;
    std::size_t within = 0;
    for (double x : samples)
      if (std::fabs(x - target) <= 0.02) ++within;
    const double fraction = static_cast<double>(within) / static_cast<double>(samples.size());
    const SampleStats s = summarize(samples);
    rows.push_back({{"c", c}, {"alpha_sq", target}, {"mean_chi_over_n", s.mean}, {"stderr", s.stderr_of_mean},
                    {"fraction_within_0.02", fraction}});
    csv << c << ',' << target << ',' << s.mean << ',' << s.stderr_of_mean << ',' << fraction << '\n';
  }
  out.json = {{"n", spec.n}, {"reps", spec.reps}, {"rows", rows}, {"seed", spec.seed}, {"generator_id", kGeneratorId}};
  out.csv = csv.str();
  return out;
}

RunOutput run_integrals(const ExperimentSpec&) {
  RunOutput out;
  const Constants& k = constants();
  const auto z3 = zeta3_integral();
  const auto zm = zmc_integral();
  const double e3 = std::fabs(z3.value - k.two_zeta3);
  const double em = std::fabs(zm.value - k.zmc_integral_target);
  out.json = {{"zeta3_integral",
               {{"value", z3.value}, {"target", k.two_zeta3}, {"abs_error", e3}, {"tolerance", 1e-6},
                {"tail_bound", z3.tail_bound}, {"evaluations", z3.evaluations}}},
              {"zmc_integral",
               {{"value", zm.value}, {"target", k.zmc_integral_target}, {"abs_error", em}, {"tolerance", 1e-5},
                {"tail_bound", zm.tail_bound}, {"evaluations", zm.evaluations}}},
              {"zeta3", k.zeta3},
              {"zeta_mc", k.zeta_mc}};
  out.passed = e3 <= 1e-6 && em <= 1e-5;
  return out;
}

RunOutput run_heights(const ExperimentSpec& spec) {
  RunOutput out;
  const KernelKind kernel = parse_kernel(spec.kernel);
  struct Sample {
    double height = 0.0;
    double depth_of_1 = 0.0;
  };
  const auto samples = run_replicates<Sample>(spec.reps, spec.seed, spec.threads, [&](Rng& rng, std::size_t) {
    const RootedTree tree = run_uniform(kernel, spec.n, rng).final_tree();
    const auto d = root_distances(tree);
    return Sample{static_cast<double>(*std::max_element(d.begin(), d.end())), static_cast<double>(d[0])};
  });
  std::vector<double> heights, depths;
  for (const auto& s : samples) {
    heights.push_back(s.height);
    depths.push_back(s.depth_of_1);
  }
  const double nd = static_cast<double>(spec.n);
  const double ln_n = std::log(nd);
  const SampleStats h = summarize(heights);
  const SampleStats d = summarize(depths);
  const double max_h = *std::max_element(heights.begin(), heights.end());
  const double min_h = *std::min_element(heights.begin(), heights.end());
  out.json = {{"kernel", to_string(kernel)},
              {"n", spec.n},
              {"reps", spec.reps},
              {"height", stats_json(h)},
              {"height_median", median(heights)},
              {"height_max", max_h},
              {"height_min", min_h},
              {"ln_n", ln_n},
              {"max_height_over_ln_n", spec.n > 1 ? max_h / ln_n : 0.0},
              {"n_pow_1_8", std::pow(nd, 0.125)},
              {"depth_of_vertex_1", stats_json(d)},
              {"mean_depth_of_vertex_1_over_sqrt_n", d.mean / std::sqrt(nd)},
              {"seed", spec.seed},
              {"generator_id", kGeneratorId}};
  std::ostringstream csv;
  csv << "replicate,height,depth_of_vertex_1\n";
  for (std::size_t i = 0; i < samples.size(); ++i) csv << i << ',' << heights[i] << ',' << depths[i] << '\n';
  out.csv = csv.str();
  return out;
}

}  // namespace

RunOutput run(const ExperimentSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  const std::string& s = spec.subcommand;
  if (s == "simulate") out = run_simulate(spec);
  else if (s == "verify-exact") out = run_verify_exact(spec);
  else if (s == "estimate-frieze") out = run_frieze(spec);
  else if (s == "estimate-zmc") out = run_zmc(spec);
  else if (s == "susceptibility-profile") out = run_susceptibility(spec);
  else if (s == "integrals") out = run_integrals(spec);
  else out = run_heights(spec);
  out.json["spec"] = spec.to_json();
  out.json["passed"] = out.passed;
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace coalesce
