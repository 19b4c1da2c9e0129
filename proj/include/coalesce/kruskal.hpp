#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coalesce/coalescent.hpp"
#include "coalesce/experiment.hpp"
#include "coalesce/rng.hpp"
#include "coalesce/types.hpp"

namespace coalesce {

enum class WeightDistribution { Uniform01, Exponential1 };

struct ExaminedEdge {
  Edge edge;
  double weight = 0.0;
  bool accepted = false;
};

struct WeightedEdge {
  Edge edge;
  double weight = 0.0;
};

// One Kruskal run on K_n. `examined` lists the edges in increasing weight up
// to the (n-1)-th acceptance; `weights` is the user list when one was given.
struct WeightedRun {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<ExaminedEdge> examined;
  std::vector<WeightedEdge> mst_edges;
  double total_weight = 0.0;
  std::vector<double> weights;
};

// Weights are generated already sorted: uniform order statistics from
// normalized exponential spacings (1 - U_(k) = exp(-sum_{j<k} E_j / (N - j))),
// exponential order statistics from X_(k+1) = X_(k) + E / (N - k), each rank
// attached to the next edge of an independent uniform edge permutation.
WeightedRun kruskal(std::size_t n, WeightDistribution dist, Rng& rng);

// User weights in the undirected layout of undirected_index(); must be distinct.
WeightedRun kruskal(std::size_t n, std::span<const double> weights);

// Draws all C(n,2) iid weights and sorts them (n <= 1000).
WeightedRun kruskal_sorted_oracle(std::size_t n, WeightDistribution dist, Rng& rng);

// Recomputes w(T) as sum over examined edges of X * 1[edge joins two
// components], replaying a fresh union-find, and compares it with the MST
// weight. Exact for user lists (rational arithmetic), bitwise otherwise.
bool weight_identity_check(const WeightedRun& run);

// Mean MST weight over replicates with uniform weights; `extra` carries
// identity_failures.
ExperimentResult frieze_estimate(std::size_t n, std::size_t reps, std::uint64_t seed, unsigned threads = 0);

// Distance between vertex n and vertex 1 (0-based n-1 and 0) in the MST of
// K_n under uniform weights.
std::uint64_t mst_two_point(std::size_t n, Rng& rng);

// Height of the final Version-1 tree (multiplicative tree rooted at vertex 1).
std::uint64_t tree_height_by_kernel(KernelKind kernel, std::size_t n, Rng& rng);
// Distance from `vertex` to the root of that tree.
std::uint64_t vertex_depth_by_kernel(KernelKind kernel, std::size_t n, Vertex vertex, Rng& rng);

}  // namespace coalesce
