#include "coalesce/kruskal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coalesce/er_process.hpp"
#include "coalesce/forest.hpp"

namespace coalesce {

namespace {

void check_n(std::size_t n) {
  if (n < 2) throw CoalesceError(ErrorCode::InvalidArgument, "kruskal: n must be at least 2");
}

// Scans (edge, weight) pairs in increasing weight until the tree spans.
template <class Next>
WeightedRun scan(std::size_t n, Next next) {
  WeightedRun run;
  run.n = n;
  Forest forest(n);
  while (forest.component_count() > 1) {
    const WeightedEdge e = next();
    const bool accept = !forest.same_component(e.edge.u, e.edge.v);
    run.examined.push_back({e.edge, e.weight, accept});
    if (accept) {
      forest.merge(e.edge.u, e.edge.v);
      run.mst_edges.push_back(e);
      run.total_weight += e.weight;
    }
  }
  return run;
}

double draw(WeightDistribution dist, Rng& rng) {
  return dist == WeightDistribution::Uniform01 ? rng.uniform01() : rng.exponential();
}

}  // namespace

WeightedRun kruskal(std::size_t n, WeightDistribution dist, Rng& rng) {
  check_n(n);
  const std::uint64_t total = choose2(n);
  EdgePermutation permutation(n, rng);
  std::uint64_t rank = 0;
  double cum = 0.0;
  WeightedRun run = scan(n, [&] {
    const Edge e = permutation.next();
    cum += rng.exponential() / static_cast<double>(total - rank);
    ++rank;
    const double w = dist == WeightDistribution::Uniform01 ? -std::expm1(-cum) : cum;
    return WeightedEdge{e, w};
  });
  run.seed = rng.seed();
  return run;
}

WeightedRun kruskal(std::size_t n, std::span<const double> weights) {
  check_n(n);
  if (weights.size() != choose2(n))
    throw CoalesceError(ErrorCode::InvalidArgument, "kruskal: expected C(n,2) weights");
  std::vector<std::uint64_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return weights[a] < weights[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!(weights[order[i - 1]] < weights[order[i]]))
      throw CoalesceError(ErrorCode::DuplicateWeights, "kruskal: weights must be pairwise distinct");
  std::size_t i = 0;
  WeightedRun run = scan(n, [&] {
    const std::uint64_t idx = order[i++];
    return WeightedEdge{undirected_edge(idx), weights[idx]};
  });
  run.weights.assign(weights.begin(), weights.end());
  return run;
}

WeightedRun kruskal_sorted_oracle(std::size_t n, WeightDistribution dist, Rng& rng) {
  check_n(n);
  if (n > 1000) throw CoalesceError(ErrorCode::UnsupportedSize, "kruskal_sorted_oracle: n must be at most 1000");
  std::vector<double> weights(choose2(n));
  for (auto& w : weights) w = draw(dist, rng);
  WeightedRun run = kruskal(n, weights);
  run.seed = rng.seed();
  return run;
}

bool weight_identity_check(const WeightedRun& run) {
  Forest forest(run.n);
  double by_indicator = 0.0;
  Rational exact_indicator = 0;
  for (const ExaminedEdge& e : run.examined) {
    const std::uint64_t before = forest.sum_sq();
    if (!forest.same_component(e.edge.u, e.edge.v)) forest.merge(e.edge.u, e.edge.v);
    const bool increased = forest.sum_sq() > before;
    if (increased != e.accepted) return false;
    if (increased) {
      by_indicator += e.weight;
      if (!run.weights.empty()) exact_indicator += Rational(e.weight);
    }
  }
  if (forest.component_count() != 1 || run.mst_edges.size() + 1 != run.n) return false;
  if (!run.weights.empty()) {
    Rational exact_tree = 0;
    for (const auto& e : run.mst_edges) exact_tree += Rational(e.weight);
    if (exact_tree != exact_indicator) return false;
  }
  return by_indicator == run.total_weight;
}

ExperimentResult frieze_estimate(std::size_t n, std::size_t reps, std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw CoalesceError(ErrorCode::InvalidArgument, "frieze_estimate: reps must be positive");
  struct Sample {
    double weight = 0.0;
    bool identity = true;
  };
  const auto samples = run_replicates<Sample>(reps, seed, threads, [&](Rng& rng, std::size_t) {
    const WeightedRun run = kruskal(n, WeightDistribution::Uniform01, rng);
    return Sample{run.total_weight, weight_identity_check(run)};
  });
  std::vector<double> weights;
  double failures = 0;
  for (const auto& s : samples) {
    weights.push_back(s.weight);
    if (!s.identity) ++failures;
  }
  ExperimentResult result = make_result("frieze", n, seed, weights);
  result.extra["identity_failures"] = failures;
  return result;
}

std::uint64_t mst_two_point(std::size_t n, Rng& rng) {
  const WeightedRun run = kruskal(n, WeightDistribution::Uniform01, rng);
  std::vector<Edge> edges;
  for (const auto& e : run.mst_edges) edges.push_back(e.edge);
  const RootedTree tree = RootedTree::from_edges(n, edges, 0);
  return root_distances(tree)[n - 1];
}

std::uint64_t tree_height_by_kernel(KernelKind kernel, std::size_t n, Rng& rng) {
  return height(run_uniform(kernel, n, rng).final_tree());
}

std::uint64_t vertex_depth_by_kernel(KernelKind kernel, std::size_t n, Vertex vertex, Rng& rng) {
  if (vertex >= n) throw CoalesceError(ErrorCode::InvalidArgument, "vertex_depth_by_kernel: vertex out of range");
  return root_distances(run_uniform(kernel, n, rng).final_tree())[vertex];
}

}  // namespace coalesce
