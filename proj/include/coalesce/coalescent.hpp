#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "coalesce/forest.hpp"
#include "coalesce/rng.hpp"
#include "coalesce/types.hpp"

namespace coalesce {

// Merge kernels. Counting one execution per admissible choice gives the
// per-merge weights 2 (ordered root pair), a + b and a * b respectively.
enum class KernelKind { Kingman, Additive, Multiplicative };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel(std::string_view name);
bool is_rooted(KernelKind kind);

// Partition-function weight of merging blocks of sizes a and b.
std::uint64_t kernel_weight(KernelKind kind, std::uint64_t a, std::uint64_t b);

struct MergeTrace {
  std::size_t n = 0;
  KernelKind kernel = KernelKind::Multiplicative;
  std::vector<MergeRecord> records;
  // Root of the merged tree after each step; empty for the multiplicative kernel.
  std::vector<Vertex> roots_history;

  // Final tree. Rooted kernels use their tracked root; the multiplicative
  // tree is rooted at vertex 0 (external label 1).
  RootedTree final_tree() const;
  std::vector<Edge> edges() const;
};

// Version 1: each step picks uniformly among the kernel's admissible choices
//   Kingman        ordered pairs of distinct roots       (r)(r - 1)
//   Additive       (vertex, root of another tree)        n (r - 1)
//   Multiplicative cross-component vertex pairs          (n^2 - S) / 2
// where r is the current number of trees.
MergeTrace run_uniform(KernelKind kernel, std::size_t n, Rng& rng);

// Number of admissible Version-1 choices in a forest with the given sizes.
std::uint64_t admissible_count(KernelKind kernel, std::size_t n, std::size_t trees,
                               std::uint64_t sum_sq);

// Flat weight layouts.
//  directed:   index of (k, l), k != l, is k * (n - 1) + (l < k ? l : l - 1)
//  undirected: index of {i, j}, i < j, is j * (j - 1) / 2 + i
std::size_t directed_index(std::size_t n, Vertex k, Vertex l);
Edge directed_edge(std::size_t n, std::size_t index);
std::uint64_t undirected_index(Vertex i, Vertex j);
Edge undirected_edge(std::uint64_t index);
// Number of weights a kernel consumes: n(n-1) for rooted kernels, C(n,2) otherwise.
std::size_t weight_count(KernelKind kernel, std::size_t n);

// Version 2. For rooted kernels a directed weight (k, l) requires k to be a
// root; Kingman additionally requires l to be a root and makes k the new root,
// while Additive hangs k's tree below l. For Multiplicative this is Kruskal's
// algorithm. Weights must be pairwise distinct.
MergeTrace run_weight_driven(KernelKind kernel, std::size_t n, std::span<const double> weights);

// Version 3: each step picks an admissible edge with probability proportional
// to its rate (same layouts and admissibility rules as Version 2).
MergeTrace run_rate_driven(KernelKind kernel, std::size_t n, std::span<const double> rates, Rng& rng);

// Step-1 probability of each admissible edge under rate-driven dynamics;
// entries for inadmissible edges are zero.
std::vector<double> first_step_rate_probabilities(KernelKind kernel, std::size_t n,
                                                  std::span<const double> rates);

struct EmpiricalLogPartition {
  std::size_t n = 0;
  std::size_t k = 0;
  double log_z_arrow = 0.0;  // sum_{i<k} ln(n^2 - S_i)
  double log_z = 0.0;        // log_z_arrow - (k - 1) ln 2
};

// Multiplicative traces only.
EmpiricalLogPartition empirical_log_partition(const MergeTrace& trace, std::size_t k);
// Exact product prod_{i<k} (n^2 - S_i); for cross-checking the log-space value.
BigInt empirical_partition_arrow_exact(const MergeTrace& trace, std::size_t k);

// ln(1 - S / n^2), accurate both for small S / n^2 and near 1.
double log_one_minus_fraction(std::uint64_t sum_sq, std::uint64_t n);

// Replays an additive trace and checks that the product of admissible counts
// over the first k - 1 steps equals n^{k-1} (n-1)_{k-1}.
bool additive_empirical_constant_check(const MergeTrace& trace, std::size_t k);
bool additive_empirical_constant_check(const MergeTrace& trace);

// Trace CSV: step,u,v,size_a,size_b,pre_sum_sq (1-based vertices).
void write_trace_csv(std::ostream& out, const MergeTrace& trace);

}  // namespace coalesce
