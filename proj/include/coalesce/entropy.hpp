#pragma once

#include <cstdint>
#include <vector>

#include "coalesce/coalescent.hpp"
#include "coalesce/er_process.hpp"
#include "coalesce/experiment.hpp"
#include "coalesce/rng.hpp"

namespace coalesce {

// One realization of log Z_MC(n) = sum_{k<n} ln(n^2 - S_k) - (n - 1) ln 2
// along the multiplicative coalescent read off the Erdos-Renyi process.
struct EntropySample {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double log_z = 0.0;
  double log_z_arrow = 0.0;
  // log_z = leading + chi_sum with leading = 2(n-1) ln n - (n-1) ln 2 and
  // chi_sum = sum_k ln(1 - chi(F_k)/n).
  double leading = 0.0;
  double chi_sum = 0.0;
  double normalized = 0.0;        // (log_z - 2 n ln n) / n
  double normalized_n_minus_1 = 0.0;  // (log_z - 2 (n-1) ln n) / (n - 1)
};

EntropySample entropy_from_trace(const MergeTrace& trace);
EntropySample sample_log_zmc(std::size_t n, Rng& rng);

// Mean of `normalized`; extra carries the (n-1) normalization as
// mean_n_minus_1 / stderr_n_minus_1.
ExperimentResult estimate_zeta_mc(std::size_t n, std::size_t reps, std::uint64_t seed, unsigned threads = 0);

// Fraction of samples with log_z < ln(n^{n-2} (n-1)!) - margin * n.
double exp_decay_check(std::size_t n, std::size_t reps, std::uint64_t seed, double margin = 0.1,
                       unsigned threads = 0);

struct XiRow {
  std::uint64_t m = 0;
  std::uint64_t chi_num = 0;
  double log_term = 0.0;  // ln(1 - chi(G_m)/n); 0 once connected (never used then)
  double x_log_x = 0.0;   // (1 - chi/n) ln(1 - chi/n), with 0 ln 0 = 0
  double weight = 0.0;    // (1 - (n + 2m)/n^2)^{-1}
  bool increases = false; // e_{m+1} joins two components
};

struct XiAudit {
  std::vector<XiRow> rows;   // m = 0 .. last step before the end of the run
  double sum_over_k = 0.0;   // sum_{k=1}^{n-1} ln(1 - chi(F_k)/n) from the coupled trace
  double sum_over_m = 0.0;   // sum_m ln(1 - chi(G_m)/n) 1[increase at m]
  double xi = 0.0;           // sum_m (1 - chi/n) ln(1 - chi/n) weight(m)
};

// Requires a run that reached connectivity.
XiAudit xi_term_audit(const GraphProcessRun& run);

}  // namespace coalesce
