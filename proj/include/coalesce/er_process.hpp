#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coalesce/coalescent.hpp"
#include "coalesce/forest.hpp"
#include "coalesce/rng.hpp"
#include "coalesce/types.hpp"

namespace coalesce {

// Uniformly random ordering of the C(n,2) edges of K_n, drawn one edge at a
// time by Fisher-Yates over the edge index space. Either the whole index array
// is kept (`materialize`, only for C(n,2) <= kMaterializeLimit) or just the
// displaced slots. Both modes consume the generator identically, so the
// emitted order depends only on the seed.
class EdgePermutation {
 public:
  static constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 22;

  EdgePermutation(std::size_t n, Rng& rng, bool materialize = false);

  std::uint64_t total() const { return total_; }
  std::uint64_t position() const { return position_; }
  bool exhausted() const { return position_ == total_; }
  Edge next();

 private:
  std::uint64_t slot(std::uint64_t i) const;

  Rng& rng_;
  std::uint64_t total_ = 0;
  std::uint64_t position_ = 0;
  std::vector<std::uint64_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> displaced_;
};

// State of G_m after the m-th edge. For m = 0 `edge` is unset and joined is false.
struct GraphStep {
  std::uint64_t m = 0;
  Edge edge;
  bool joined = false;        // e_m joined two components, i.e. tau_m > tau_{m-1}
  std::uint64_t chi_num = 0;  // sum of squared component sizes
  std::uint64_t tau = 0;
  std::uint64_t largest = 0;
  std::uint64_t second = 0;
};

// Erdos-Renyi coalescent: adds the edges of a random permutation of K_n one
// at a time and tracks components with a Forest (cycle edges change nothing).
class GraphProcess {
 public:
  GraphProcess(std::size_t n, Rng& rng, bool materialize = false);

  std::size_t n() const { return forest_.size(); }
  const Forest& forest() const { return forest_; }
  const GraphStep& current() const { return current_; }
  bool connected() const { return forest_.component_count() == 1; }
  bool exhausted() const { return permutation_.exhausted(); }
  // The merge made by the last step, if that step joined two components.
  const std::optional<MergeRecord>& last_merge() const { return last_merge_; }

  const GraphStep& advance();

 private:
  void add_size(std::uint64_t s);
  void remove_size(std::uint64_t s);

  EdgePermutation permutation_;
  Forest forest_;
  GraphStep current_;
  std::optional<MergeRecord> last_merge_;
  std::map<std::uint64_t, std::uint64_t> size_count_;
};

struct GraphProcessRun {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<GraphStep> steps;  // steps[m] describes G_m, m = 0..m_max
  // coupling_times[k-1] = I_k: I_1 = 0, I_k = first m with tau_m = k - 1.
  std::vector<std::uint64_t> coupling_times;
  std::optional<std::uint64_t> connect_time;
  std::vector<MergeRecord> merges;

  std::uint64_t m_max() const { return steps.empty() ? 0 : steps.size() - 1; }
  // Whether e_{m+1} joins distinct components of G_m.
  bool did_chi_increase(std::uint64_t m) const { return steps.at(m + 1).joined; }
};

struct GraphRunOptions {
  bool stop_at_connectivity = false;
};

// Runs up to m_max edges (capped at C(n,2)).
GraphProcessRun run_graph_process(std::size_t n, std::uint64_t m_max, Rng& rng,
                                  GraphRunOptions options = {});
// Same statistics for a prescribed edge order (distinct edges of K_n).
GraphProcessRun run_graph_process(std::size_t n, std::span<const Edge> order, GraphRunOptions options = {});

// The multiplicative coalescent inside a run: F_k has edges e_{I_2}, ..., e_{I_k}.
// Requires the run to reach connectivity.
MergeTrace extract_coupled_mc(const GraphProcessRun& run);

// Same coupling without storing the graph stream.
MergeTrace coupled_mc_trace(std::size_t n, Rng& rng);

// CSV columns m,tau,chi_num,L,S; keeps m = 0, every record_every-th step and
// the final step.
void write_trajectory_csv(std::ostream& out, const GraphProcessRun& run, std::uint64_t record_every = 1);

struct SimpleGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  std::vector<std::vector<Vertex>> adjacency() const;
};

// Each of the C(n,2) edges present independently with probability p, by
// geometric skipping over the edge slots.
SimpleGraph sample_gnp(std::size_t n, double p, Rng& rng);
// First m edges of a uniform edge permutation.
SimpleGraph sample_gm(std::size_t n, std::uint64_t m, Rng& rng);

// Component sizes (ordered by representative) and sum of their squares.
std::vector<std::uint64_t> component_sizes(const SimpleGraph& graph);
std::uint64_t chi_numerator(const SimpleGraph& graph);

struct ConditioningCheck {
  double ks_statistic = 0.0;
  double p_value = 0.0;
  std::size_t reps = 0;
  std::uint64_t gnp_draws = 0;  // G(n,p) samples drawn to collect `reps` with m edges
};

// Compares chi of G(n,p) conditioned on m edges with chi of G_m by a
// two-sample Kolmogorov-Smirnov test.
ConditioningCheck edge_count_conditioning_check(std::size_t n, double p, std::uint64_t m, std::size_t reps,
                                                Rng& rng);

struct ExplorationResult {
  std::vector<std::uint64_t> component_sizes;     // per component, in order of first exploration
  std::vector<std::uint64_t> conclusion_times;    // t with v_t, v_{t+1} in distinct components, plus the last t
  std::vector<std::uint64_t> u_trajectory;        // |U_i|, i = 0, 1, ...
  bool completed = true;                          // false when the step cap stopped the search
};

struct ExploreOptions {
  // Step cap; 0 means run until every vertex is explored (capped at n steps when p = 0).
  std::size_t max_steps = 0;
  // Pad u_trajectory with its final value to at least this many entries.
  std::size_t min_trajectory = 0;
};

// Depth-first search with re-seeding: starts from D_0 = {vertex 0}; explores
// the highest-priority (latest discovered, then smallest label) vertex; when
// D is empty, D_{i+1} = Bin(U_i, p) drawn from `rng`. Sizes of components not
// reached before the cap are appended in order of smallest label.
ExplorationResult explore(const SimpleGraph& graph, double p, Rng& rng, ExploreOptions options = {});
ExplorationResult explore(std::size_t n, double p, Rng& rng, ExploreOptions options = {});

// Largest and second-largest of a component-size list (0 when absent).
std::pair<std::uint64_t, std::uint64_t> two_largest(const std::vector<std::uint64_t>& sizes);

// L^2/n <= chi <= L^2/n + S, checked in integers.
bool susceptibility_bounds_check(const std::vector<std::uint64_t>& sizes);
bool susceptibility_bounds_check(const SimpleGraph& graph);

// P(e_{m+1} joins two components | G_m) = (1 - chi/n) (1 - (n + 2m)/n^2)^{-1}.
Rational chi_increase_probability(std::uint64_t n, std::uint64_t chi_num, std::uint64_t m);
// Same probability by counting cross-component non-edges among the remaining pairs.
Rational chi_increase_probability_direct(const SimpleGraph& graph);

// chi(G(n, c/n)) / n for `reps` independent replicates of stream `master_seed`.
std::vector<double> chi_over_n_samples(std::size_t n, double c, std::size_t reps, std::uint64_t master_seed,
                                       unsigned threads = 0);

}  // namespace coalesce
