#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "coalesce/coalescent.hpp"
#include "coalesce/exact.hpp"
#include "coalesce/stats.hpp"

using namespace coalesce;

namespace {

constexpr KernelKind kAll[] = {KernelKind::Kingman, KernelKind::Additive, KernelKind::Multiplicative};

// Replays a trace through a fresh union-find, checking sizes and S_i.
void expect_valid_chain(const MergeTrace& t) {
  Forest f(t.n);
  ASSERT_EQ(t.records.size() + 1, t.n);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    EXPECT_EQ(r.step, i + 1);
    EXPECT_EQ(r.pre_sum_sq, f.sum_sq());
    EXPECT_EQ(r.size_a, f.component_size(r.u));
    EXPECT_EQ(r.size_b, f.component_size(r.v));
    EXPECT_LE(r.size_a + r.size_b, t.n);
    EXPECT_GE(r.pre_sum_sq, t.n);
    if (i > 0) EXPECT_GT(r.pre_sum_sq, t.records[i - 1].pre_sum_sq);
    f.merge(r.u, r.v);
  }
}

std::string trajectory_key(const MergeTrace& t) {
  std::string key;
  for (const auto& r : t.records) key += std::to_string(r.pre_sum_sq) + ",";
  return key;
}

std::vector<double> iid_uniform(std::size_t count, Rng& rng) {
  std::vector<double> w(count);
  for (auto& x : w) x = rng.uniform01();
  return w;
}

}  // namespace

TEST(Kernel, ParseAndWeights) {
  EXPECT_EQ(parse_kernel("kc"), KernelKind::Kingman);
  EXPECT_EQ(parse_kernel("additive"), KernelKind::Additive);
  EXPECT_EQ(parse_kernel("mc"), KernelKind::Multiplicative);
  EXPECT_THROW(parse_kernel("smoluchowski"), CoalesceError);
  EXPECT_EQ(kernel_weight(KernelKind::Kingman, 3, 5), 2u);
  EXPECT_EQ(kernel_weight(KernelKind::Additive, 3, 5), 8u);
  EXPECT_EQ(kernel_weight(KernelKind::Multiplicative, 3, 5), 15u);
}

TEST(Layouts, IndexRoundTrip) {
  const std::size_t n = 7;
  for (std::size_t i = 0; i < n * (n - 1); ++i) {
    const Edge e = directed_edge(n, i);
    ASSERT_NE(e.u, e.v);
    ASSERT_EQ(directed_index(n, e.u, e.v), i);
  }
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const Edge e = undirected_edge(i);
    ASSERT_LT(e.u, e.v);
    ASSERT_EQ(undirected_index(e.u, e.v), i);
  }
}

TEST(RunUniform, SingleVertexGivesEmptyTrace) {
  Rng rng(1);
  for (KernelKind k : kAll) EXPECT_TRUE(run_uniform(k, 1, rng).records.empty());
}

TEST(RunUniform, FirstStepAdmissibleCounts) {
  EXPECT_EQ(admissible_count(KernelKind::Additive, 3, 3, 3), 6u);
  EXPECT_EQ(admissible_count(KernelKind::Multiplicative, 3, 3, 3), 3u);
  EXPECT_EQ(admissible_count(KernelKind::Kingman, 3, 3, 3), 6u);
}

TEST(RunUniformProperty, TracesAreValidChains) {
  Rng rng(2);
  for (KernelKind k : kAll)
    for (std::size_t n : {2u, 3u, 10u, 57u, 300u}) expect_valid_chain(run_uniform(k, n, rng));
}

TEST(RunUniformProperty, AdmissibleCountsFollowTreeCount) {
  Rng rng(3);
  for (KernelKind k : kAll) {
    const std::size_t n = 40;
    const MergeTrace t = run_uniform(k, n, rng);
    Forest f(n);
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t trees = n + 1 - i;
      const std::uint64_t count = admissible_count(k, n, trees, f.sum_sq());
      if (k == KernelKind::Additive) EXPECT_EQ(count, n * (n - i));
      if (k == KernelKind::Kingman) EXPECT_EQ(count, trees * (trees - 1));
      if (k == KernelKind::Multiplicative) EXPECT_EQ(count, f.mc_choice_count());
      f.merge(t.records[i - 1].u, t.records[i - 1].v);
    }
  }
}

TEST(RunUniformProperty, KingmanLabelsDecreaseAwayFromRoot) {
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rng.below(60);
    const MergeTrace t = run_uniform(KernelKind::Kingman, n, rng);
    const RootedTree tree = t.final_tree();
    std::vector<std::size_t> label(n, 0);
    for (const auto& r : t.records) {
      ASSERT_EQ(tree.parent(r.v), r.u);
      label[r.v] = r.step;
    }
    for (Vertex v = 0; v < n; ++v) {
      const Vertex p = tree.parent(v);
      if (p != kNoParent && tree.parent(p) != kNoParent) EXPECT_LT(label[v], label[p]);
    }
    EXPECT_EQ(tree.root(), t.roots_history.back());
  }
}

TEST(RunUniformProperty, AdditiveFinalTreeUniformOverRootedTrees) {
  const std::size_t n = 4, reps = 32000;
  const TreeCensus census = tree_census(KernelKind::Additive, n, reps, 99, false, 1);
  const auto all = all_rooted_trees(n);
  ASSERT_EQ(all.size(), 64u);
  std::vector<std::uint64_t> observed;
  for (const auto& t : all) {
    auto it = census.find(encode(t));
    observed.push_back(it == census.end() ? 0 : it->second);
  }
  EXPECT_EQ(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}), reps);
  std::vector<double> probs(64, 1.0 / 64);
  EXPECT_GT(chi_square_gof(observed, probs).p_value, 1e-3);
}

TEST(RunWeightDriven, SmallHandCases) {
  const std::vector<double> one{0.5};
  const MergeTrace t2 = run_weight_driven(KernelKind::Multiplicative, 2, one);
  ASSERT_EQ(t2.records.size(), 1u);
  EXPECT_EQ(t2.records[0].u, 0u);
  EXPECT_EQ(t2.records[0].v, 1u);

  // {1,2} < {1,3} < {2,3}
  const std::vector<double> w{0.1, 0.2, 0.3};
  const MergeTrace t3 = run_weight_driven(KernelKind::Multiplicative, 3, w);
  EXPECT_EQ(t3.edges(), (std::vector<Edge>{{0, 1}, {0, 2}}));
}

TEST(RunWeightDriven, DuplicateWeightsRejected) {
  const std::vector<double> w{0.1, 0.1, 0.3};
  try {
    run_weight_driven(KernelKind::Multiplicative, 3, w);
    FAIL();
  } catch (const CoalesceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateWeights);
  }
}

TEST(RunWeightDriven, RootedOrientation) {
  // n = 3 Kingman: smallest directed weight on (3 -> 1), then (2 -> 3).
  std::vector<double> w(6);
  for (std::size_t i = 0; i < 6; ++i) w[i] = 0.5 + 0.01 * static_cast<double>(i);
  w[directed_index(3, 2, 0)] = 0.1;
  w[directed_index(3, 1, 2)] = 0.2;
  w[directed_index(3, 0, 1)] = 0.95;
  const MergeTrace t = run_weight_driven(KernelKind::Kingman, 3, w);
  ASSERT_EQ(t.records.size(), 2u);
  EXPECT_EQ(t.records[0].u, 2u);
  EXPECT_EQ(t.records[0].v, 0u);
  EXPECT_EQ(t.records[1].u, 1u);
  EXPECT_EQ(t.records[1].v, 2u);
  EXPECT_EQ(t.final_tree().root(), 1u);
}

TEST(RunWeightDriven, IidUniformWeightsMatchVersionOneLaw) {
  const std::size_t n = 6, reps = 20000;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;
  Rng rng(5);
  for (std::size_t i = 0; i < reps; ++i) {
    ++counts[trajectory_key(run_uniform(KernelKind::Multiplicative, n, rng))].first;
    const auto w = iid_uniform(weight_count(KernelKind::Multiplicative, n), rng);
    ++counts[trajectory_key(run_weight_driven(KernelKind::Multiplicative, n, w))].second;
  }
  std::vector<std::uint64_t> a, b;
  for (const auto& [key, c] : counts) {
    a.push_back(c.first);
    b.push_back(c.second);
  }
  EXPECT_GT(chi_square_two_sample(a, b).p_value, 1e-3);
}

TEST(RunWeightDriven, RootedKernelsMatchVersionOneLaw) {
  for (KernelKind k : {KernelKind::Kingman, KernelKind::Additive}) {
    const std::size_t n = 3, reps = 30000;
    std::map<TreeCode, std::pair<std::uint64_t, std::uint64_t>> counts;
    Rng rng(6);
    for (std::size_t i = 0; i < reps; ++i) {
      ++counts[encode(run_uniform(k, n, rng).final_tree())].first;
      const auto w = iid_uniform(weight_count(k, n), rng);
      ++counts[encode(run_weight_driven(k, n, w).final_tree())].second;
    }
    std::vector<std::uint64_t> a, b;
    for (const auto& [key, c] : counts) {
      a.push_back(c.first);
      b.push_back(c.second);
    }
    EXPECT_GT(chi_square_two_sample(a, b).p_value, 1e-3) << to_string(k);
  }
}

TEST(RunRateDriven, ForcedAndErrors) {
  Rng rng(7);
  const std::vector<double> r{3.0};
  EXPECT_EQ(run_rate_driven(KernelKind::Multiplicative, 2, r, rng).records.size(), 1u);
  std::vector<double> d{0.0, 5.0};
  EXPECT_EQ(run_rate_driven(KernelKind::Additive, 2, d, rng).records.size(), 1u);
  const std::vector<double> zero(3, 0.0);
  try {
    run_rate_driven(KernelKind::Multiplicative, 3, zero, rng);
    FAIL();
  } catch (const CoalesceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroAdmissibleRate);
  }
}

TEST(RunRateDriven, FirstStepProbabilityAdditive) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const double total = 21.0;  // all six directed edges are admissible at step 1
  const auto p = first_step_rate_probabilities(KernelKind::Additive, 3, x);
  const std::size_t i12 = directed_index(3, 0, 1);
  EXPECT_DOUBLE_EQ(p[i12], x[i12] / total);

  Rng rng(8);
  const int reps = 60000;
  int hits = 0;
  for (int i = 0; i < reps; ++i) {
    const MergeTrace t = run_rate_driven(KernelKind::Additive, 3, x, rng);
    // additive records put the attaching root in v under the chosen head u
    const Edge e = t.edges()[0];
    if (e.u == 1 && e.v == 0) ++hits;
  }
  const double q = x[i12] / total;
  EXPECT_NEAR(hits / static_cast<double>(reps), q, 4.0 * std::sqrt(q * (1 - q) / reps));
}

TEST(RunRateDriven, EqualRatesMatchVersionOneLaw) {
  const std::size_t n = 6, reps = 20000;
  const std::vector<double> ones(weight_count(KernelKind::Multiplicative, n), 1.0);
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;
  Rng rng(9);
  for (std::size_t i = 0; i < reps; ++i) {
    ++counts[trajectory_key(run_uniform(KernelKind::Multiplicative, n, rng))].first;
    ++counts[trajectory_key(run_rate_driven(KernelKind::Multiplicative, n, ones, rng))].second;
  }
  std::vector<std::uint64_t> a, b;
  for (const auto& [key, c] : counts) {
    a.push_back(c.first);
    b.push_back(c.second);
  }
  EXPECT_GT(chi_square_two_sample(a, b).p_value, 1e-3);
}

TEST(EmpiricalLogPartition, HandValues) {
  Rng rng(10);
  const MergeTrace t3 = run_uniform(KernelKind::Multiplicative, 3, rng);
  EXPECT_EQ(empirical_log_partition(t3, 1).log_z_arrow, 0.0);
  EXPECT_DOUBLE_EQ(empirical_log_partition(t3, 2).log_z_arrow, std::log(6.0));
  EXPECT_DOUBLE_EQ(empirical_log_partition(t3, 2).log_z, std::log(3.0));

  // pairing chain {1,2}, {3,4}, {1,3}
  std::vector<double> w(6, 0.0);
  for (std::size_t i = 0; i < 6; ++i) w[i] = 1.0 + static_cast<double>(i);
  w[undirected_index(0, 1)] = 0.1;
  w[undirected_index(2, 3)] = 0.2;
  w[undirected_index(0, 2)] = 0.3;
  const MergeTrace t4 = run_weight_driven(KernelKind::Multiplicative, 4, w);
  EXPECT_EQ(empirical_partition_arrow_exact(t4, 4), BigInt(960));
  EXPECT_NEAR(empirical_log_partition(t4, 4).log_z, std::log(120.0), 1e-12);
}

TEST(EmpiricalLogPartition, Errors) {
  Rng rng(11);
  const MergeTrace add = run_uniform(KernelKind::Additive, 5, rng);
  EXPECT_THROW(empirical_log_partition(add, 3), CoalesceError);
  const MergeTrace mc = run_uniform(KernelKind::Multiplicative, 5, rng);
  EXPECT_THROW(empirical_log_partition(mc, 6), CoalesceError);
}

TEST(EmpiricalLogPartition, LogSpaceMatchesExactProduct) {
  Rng rng(12);
  for (std::size_t n : {5u, 20u, 64u}) {
    const MergeTrace t = run_uniform(KernelKind::Multiplicative, n, rng);
    for (std::size_t k = 1; k <= n; k += 3) {
      const auto e = empirical_log_partition(t, k);
      const double exact = std::log(empirical_partition_arrow_exact(t, k).convert_to<long double>());
      EXPECT_NEAR(e.log_z_arrow, exact, 1e-9 * (1 + exact));
      EXPECT_GE(e.log_z_arrow, 0.0);
      const double nd = static_cast<double>(n);
      EXPECT_LE(e.log_z_arrow, (k - 1.0) * std::log(nd * nd - nd) + 1e-9);
    }
  }
}

TEST(AdditiveConstant, HandValues) {
  Rng rng(13);
  EXPECT_TRUE(additive_empirical_constant_check(run_uniform(KernelKind::Additive, 3, rng), 3));
  EXPECT_EQ(closed_form_Z(KernelKind::Additive, 3, 3), BigInt(18));
  EXPECT_TRUE(additive_empirical_constant_check(run_uniform(KernelKind::Additive, 2, rng)));
  EXPECT_EQ(closed_form_Z(KernelKind::Additive, 2, 2), BigInt(2));
  EXPECT_TRUE(additive_empirical_constant_check(run_uniform(KernelKind::Additive, 5, rng), 3));
  EXPECT_EQ(closed_form_Z(KernelKind::Additive, 5, 3), BigInt(300));
  for (int rep = 0; rep < 20; ++rep)
    EXPECT_TRUE(additive_empirical_constant_check(run_uniform(KernelKind::Additive, 30, rng)));
}

TEST(TraceCsv, Format) {
  std::vector<double> w{0.1, 0.2, 0.3};
  const MergeTrace t = run_weight_driven(KernelKind::Multiplicative, 3, w);
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str(), "step,u,v,size_a,size_b,pre_sum_sq\n1,1,2,1,1,3\n2,1,3,2,1,5\n");
}
