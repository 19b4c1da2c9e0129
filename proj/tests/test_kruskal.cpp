#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "coalesce/exact.hpp"
#include "coalesce/kruskal.hpp"
#include "coalesce/stats.hpp"

using namespace coalesce;

namespace {

// O(n^2) Prim on the undirected weight layout; an independent MST oracle.
std::set<std::uint64_t> prim(std::size_t n, const std::vector<double>& w) {
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<Vertex> from(n, 0);
  std::vector<char> in(n, 0);
  std::set<std::uint64_t> edges;
  best[0] = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    Vertex v = 0;
    double b = std::numeric_limits<double>::infinity();
    for (Vertex x = 0; x < n; ++x)
      if (!in[x] && best[x] < b) b = best[x], v = x;
    in[v] = 1;
    if (it > 0) edges.insert(undirected_index(std::min(v, from[v]), std::max(v, from[v])));
    for (Vertex x = 0; x < n; ++x) {
      if (in[x]) continue;
      const double wx = w[undirected_index(std::min(v, x), std::max(v, x))];
      if (wx < best[x]) best[x] = wx, from[x] = v;
    }
  }
  return edges;
}

std::set<std::uint64_t> edge_set(const WeightedRun& run) {
  std::set<std::uint64_t> s;
  for (const auto& e : run.mst_edges)
    s.insert(undirected_index(std::min(e.edge.u, e.edge.v), std::max(e.edge.u, e.edge.v)));
  return s;
}

}  // namespace

TEST(Kruskal, HandInstances) {
  const std::vector<double> one{0.42};
  const WeightedRun r2 = kruskal(2, one);
  EXPECT_EQ(r2.total_weight, 0.42);
  EXPECT_TRUE(weight_identity_check(r2));

  // W12 = 0.1, W13 = 0.2, W23 = 0.3
  const std::vector<double> a{0.1, 0.2, 0.3};
  const WeightedRun ra = kruskal(3, a);
  EXPECT_DOUBLE_EQ(ra.total_weight, 0.3);
  ASSERT_EQ(ra.mst_edges.size(), 2u);
  EXPECT_EQ(ra.mst_edges[0].edge, (Edge{0, 1}));
  EXPECT_EQ(ra.mst_edges[1].edge, (Edge{0, 2}));
  EXPECT_TRUE(weight_identity_check(ra));

  // 0.1 on {1,2}, 0.2 on {2,3}, 0.3 on {1,3}
  std::vector<double> b(3);
  b[undirected_index(0, 1)] = 0.1;
  b[undirected_index(1, 2)] = 0.2;
  b[undirected_index(0, 2)] = 0.3;
  EXPECT_DOUBLE_EQ(kruskal(3, b).total_weight, 0.3);
}

TEST(Kruskal, RejectsDuplicatesAndTinyN) {
  const std::vector<double> dup{0.1, 0.2, 0.1};
  try {
    kruskal(3, dup);
    FAIL();
  } catch (const CoalesceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateWeights);
  }
  Rng rng(1);
  EXPECT_THROW(kruskal(1, WeightDistribution::Uniform01, rng), CoalesceError);
}

TEST(KruskalProperty, WeightIdentityHoldsEverySeed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const WeightedRun u = kruskal(500, WeightDistribution::Uniform01, rng);
    ASSERT_TRUE(weight_identity_check(u));
    const WeightedRun e = kruskal(200, WeightDistribution::Exponential1, rng);
    ASSERT_TRUE(weight_identity_check(e));
    const WeightedRun o = kruskal_sorted_oracle(60, WeightDistribution::Uniform01, rng);
    ASSERT_TRUE(weight_identity_check(o));
  }
}

TEST(KruskalProperty, PresortedStreamIsIncreasing) {
  Rng rng(2);
  for (auto dist : {WeightDistribution::Uniform01, WeightDistribution::Exponential1}) {
    const WeightedRun run = kruskal(300, dist, rng);
    for (std::size_t i = 1; i < run.examined.size(); ++i) ASSERT_LT(run.examined[i - 1].weight, run.examined[i].weight);
    EXPECT_GT(run.examined.front().weight, 0.0);
    if (dist == WeightDistribution::Uniform01) EXPECT_LT(run.examined.back().weight, 1.0);
  }
}

TEST(KruskalProperty, UniqueUnderDistinctWeights) {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> w(choose2(n));
    for (auto& x : w) x = rng.uniform01();
    EXPECT_EQ(edge_set(kruskal(n, w)), prim(n, w));
  }
}

TEST(KruskalProperty, NoLighterSpanningTree) {
  Rng rng(4);
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<double> w(choose2(n));
    for (auto& x : w) x = rng.uniform01();
    const double mst = kruskal(n, w).total_weight;
    for (const auto& tree : all_labeled_trees(n)) {
      double total = 0.0;
      for (const Edge& e : tree) total += w[undirected_index(e.u, e.v)];
      ASSERT_LE(mst, total + 1e-12);
    }
  }
}

TEST(KruskalProperty, PresortedMatchesSortOracle) {
  std::vector<double> fast, slow;
  for (std::uint64_t i = 0; i < 400; ++i) {
    Rng a = derive_stream(5, i), b = derive_stream(6, i);
    fast.push_back(kruskal(80, WeightDistribution::Uniform01, a).total_weight);
    slow.push_back(kruskal_sorted_oracle(80, WeightDistribution::Uniform01, b).total_weight);
  }
  EXPECT_GT(ks_two_sample(fast, slow).p_value, 1e-3);
}

TEST(Frieze, SmallAndModerateN) {
  const ExperimentResult two = frieze_estimate(2, 20000, 7, 1);
  EXPECT_NEAR(two.mean, 0.5, 4.0 * two.stderr_of_mean);
  EXPECT_EQ(two.extra.at("identity_failures"), 0.0);
  const ExperimentResult small = frieze_estimate(100, 50, 8);
  const ExperimentResult large = frieze_estimate(2000, 50, 8);
  EXPECT_LT(std::fabs(small.mean - large.mean), 0.1);
}

TEST(Frieze, DeterministicAcrossThreads) {
  const ExperimentResult a = frieze_estimate(300, 12, 1, 1);
  const ExperimentResult b = frieze_estimate(300, 12, 1, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_of_mean, b.stderr_of_mean);
}

TEST(Heights, TwoPointAndHeights) {
  Rng rng(9);
  EXPECT_EQ(mst_two_point(2, rng), 1u);
  for (auto k : {KernelKind::Kingman, KernelKind::Additive, KernelKind::Multiplicative})
    EXPECT_EQ(tree_height_by_kernel(k, 2, rng), 1u);
  const auto d = mst_two_point(500, rng);
  EXPECT_GE(d, 1u);
  EXPECT_LT(d, 500u);
}

TEST(Heights, AdditiveDepthPmf) {
  EXPECT_DOUBLE_EQ(additive_depth_pmf(2, 0), 0.5);
  double total = 0.0;
  for (std::size_t d = 0; d < 50; ++d) total += additive_depth_pmf(50, d);
  EXPECT_NEAR(total, 1.0, 1e-12);

  const std::size_t n = 50, reps = 20000;
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint64_t i = 0; i < reps; ++i) {
    Rng rng = derive_stream(10, i);
    ++counts[vertex_depth_by_kernel(KernelKind::Additive, n, 0, rng)];
  }
  std::vector<double> probs(n);
  for (std::size_t d = 0; d < n; ++d) probs[d] = additive_depth_pmf(n, d);
  EXPECT_GT(chi_square_gof(counts, probs).p_value, 1e-3);
}

TEST(Heights, AdditiveDepthScalesLikeSqrtN) {
  const std::size_t n = 10000, reps = 200;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    Rng rng = derive_stream(11, i);
    sum += static_cast<double>(vertex_depth_by_kernel(KernelKind::Additive, n, 0, rng));
  }
  const double ratio = sum / reps / std::sqrt(static_cast<double>(n));
  EXPECT_GE(ratio, 1.13);
  EXPECT_LE(ratio, 1.38);
}

TEST(Heights, MultiplicativeTreeIsTallerThanEighthRoot) {
  const std::size_t n = 10000;
  std::vector<double> h;
  for (std::uint64_t i = 0; i < 25; ++i) {
    Rng rng = derive_stream(12, i);
    h.push_back(static_cast<double>(tree_height_by_kernel(KernelKind::Multiplicative, n, rng)));
  }
  EXPECT_GT(median(h), std::pow(static_cast<double>(n), 0.125));
}

TEST(Heights, KingmanIsLogarithmic) {
  const std::size_t n = 20000;
  for (std::uint64_t i = 0; i < 5; ++i) {
    Rng rng = derive_stream(13, i);
    EXPECT_LE(static_cast<double>(tree_height_by_kernel(KernelKind::Kingman, n, rng)), 3.2 * std::log(n));
  }
}
