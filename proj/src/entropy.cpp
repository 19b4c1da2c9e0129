#include "coalesce/entropy.hpp"

#include <cmath>
#include <numbers>

namespace coalesce {

EntropySample entropy_from_trace(const MergeTrace& trace) {
  if (trace.kernel != KernelKind::Multiplicative)
    throw CoalesceError(ErrorCode::WrongKernel, "entropy_from_trace: multiplicative trace required");
  const std::size_t n = trace.n;
  if (trace.records.size() + 1 != n)
    throw CoalesceError(ErrorCode::TruncatedRun, "entropy_from_trace: incomplete trace");
  EntropySample s;
  s.n = n;
  const double nd = static_cast<double>(n);
  const double ln_n = std::log(nd);
  for (const auto& r : trace.records) s.chi_sum += log_one_minus_fraction(r.pre_sum_sq, n);
  s.leading = (nd - 1.0) * (2.0 * ln_n - std::numbers::ln2);
  s.log_z = s.leading + s.chi_sum;
  s.log_z_arrow = 2.0 * (nd - 1.0) * ln_n + s.chi_sum;
  s.normalized = (s.log_z - 2.0 * nd * ln_n) / nd;
  s.normalized_n_minus_1 = n > 1 ? (s.log_z - 2.0 * (nd - 1.0) * ln_n) / (nd - 1.0) : 0.0;
  return s;
}

EntropySample sample_log_zmc(std::size_t n, Rng& rng) {
  if (n < 2) throw CoalesceError(ErrorCode::InvalidArgument, "sample_log_zmc: n must be at least 2");
  EntropySample s = entropy_from_trace(coupled_mc_trace(n, rng));
  s.seed = rng.seed();
  return s;
}

ExperimentResult estimate_zeta_mc(std::size_t n, std::size_t reps, std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw CoalesceError(ErrorCode::InvalidArgument, "estimate_zeta_mc: reps must be positive");
  const auto samples =
      run_replicates<EntropySample>(reps, seed, threads, [&](Rng& rng, std::size_t) { return sample_log_zmc(n, rng); });
  std::vector<double> primary, alt;
  for (const auto& s : samples) {
    primary.push_back(s.normalized);
    alt.push_back(s.normalized_n_minus_1);
  }
  ExperimentResult result = make_result("zeta_mc", n, seed, primary);
  const SampleStats a = summarize(alt);
  result.extra["mean_n_minus_1"] = a.mean;
  result.extra["stderr_n_minus_1"] = a.stderr_of_mean;
  return result;
}

double exp_decay_check(std::size_t n, std::size_t reps, std::uint64_t seed, double margin, unsigned threads) {
  if (reps == 0) throw CoalesceError(ErrorCode::InvalidArgument, "exp_decay_check: reps must be positive");
  const double nd = static_cast<double>(n);
  const double log_mean = (nd - 2.0) * std::log(nd) + std::lgamma(nd);
  const auto below = run_replicates<int>(reps, seed, threads, [&](Rng& rng, std::size_t) {
    return sample_log_zmc(n, rng).log_z < log_mean - margin * nd ? 1 : 0;
  });
  std::size_t count = 0;
  for (int b : below) count += static_cast<std::size_t>(b);
  return static_cast<double>(count) / static_cast<double>(reps);
}

XiAudit xi_term_audit(const GraphProcessRun& run) {
  const MergeTrace trace = extract_coupled_mc(run);
  const std::uint64_t n = run.n;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  XiAudit audit;
  for (const auto& r : trace.records) audit.sum_over_k += log_one_minus_fraction(r.pre_sum_sq, n);
  for (std::uint64_t m = 0; m + 1 < run.steps.size(); ++m) {
    XiRow row;
    row.m = m;
    row.chi_num = run.steps[m].chi_num;
    row.increases = run.did_chi_increase(m);
    const bool connected = row.chi_num == n * n;
    row.log_term = connected ? 0.0 : log_one_minus_fraction(row.chi_num, n);
    row.x_log_x = connected ? 0.0 : (1.0 - static_cast<double>(row.chi_num) / n2) * row.log_term;
    row.weight = n2 / (n2 - static_cast<double>(n) - 2.0 * static_cast<double>(m));
    if (row.increases) audit.sum_over_m += row.log_term;
    audit.xi += row.x_log_x * row.weight;
    audit.rows.push_back(row);
  }
  return audit;
}

}  // namespace coalesce
