#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coalesce/exact.hpp"
#include "coalesce/numerics.hpp"
#include "coalesce/stats.hpp"

using namespace coalesce;

namespace {

constexpr KernelKind kKernels[] = {KernelKind::Kingman, KernelKind::Additive, KernelKind::Multiplicative};

// Rooted forests on [n] with exactly l roots, by enumerating every parent array.
std::uint64_t rooted_forests_brute(std::size_t n, std::size_t l) {
  std::vector<std::size_t> digits(n, 0);  // digit n means "root"
  std::uint64_t count = 0;
  while (true) {
    std::size_t roots = 0;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      if (digits[v] == n) ++roots;
      else if (digits[v] == v) ok = false;
    }
    if (ok && roots == l) {
      for (std::size_t v = 0; v < n && ok; ++v) {
        std::size_t x = v, steps = 0;
        while (digits[x] != n && steps <= n) x = digits[x], ++steps;
        ok = steps <= n;
      }
      if (ok) ++count;
    }
    std::size_t i = 0;
    while (i < n && ++digits[i] > n) digits[i++] = 0;
    if (i == n) break;
  }
  return count;
}

}  // namespace

TEST(ExactExamples, PartitionFunctions) {
  EXPECT_EQ(brute_force_partition_function(KernelKind::Multiplicative, 3, 3), 6);
  EXPECT_EQ(brute_force_partition_function(KernelKind::Additive, 3, 3), 18);
  EXPECT_EQ(brute_force_partition_function(KernelKind::Kingman, 3, 3), 12);
  EXPECT_EQ(dp_partition_function(KernelKind::Multiplicative, 20, 20), power(20, 18) * factorial(19));
  EXPECT_EQ(dp_partition_function(KernelKind::Additive, 5, 3), 300);
  EXPECT_EQ(closed_form_Z(KernelKind::Multiplicative, 5, 2), 10);
  EXPECT_EQ(closed_form_Z(KernelKind::Additive, 4, 4), 384);
  EXPECT_EQ(closed_form_Z(KernelKind::Kingman, 4, 4), 144);
  for (auto k : kKernels) EXPECT_EQ(closed_form_Z(k, 6, 1), 1);
  EXPECT_THROW(brute_force_partition_function(KernelKind::Additive, 9, 9), CoalesceError);
  EXPECT_THROW(dp_partition_function(KernelKind::Additive, 61, 3), CoalesceError);
}

TEST(ExactProperty, BruteForceEqualsDp) {
  for (auto kernel : kKernels)
    for (std::size_t n = 1; n <= 7; ++n) {
      const ChainEnumeration e = brute_force_enumerate(kernel, n);
      const auto dp = dp_partition_profile(kernel, n);
      for (std::size_t k = 1; k <= n; ++k) ASSERT_EQ(e.z_by_k[k], dp[k]) << n << " " << k;
    }
}

TEST(ExactProperty, ChainCountsThroughEight) {
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(brute_force_enumerate(KernelKind::Multiplicative, n).chains, chain_count(n));
  EXPECT_EQ(chain_count(3), 3);
  EXPECT_EQ(chain_count(8), 1587600);
}

TEST(ExactProperty, DpEqualsClosedForm) {
  for (auto kernel : kKernels)
    for (std::size_t n = 1; n <= 40; ++n) {
      const auto dp = dp_partition_profile(kernel, n);
      for (std::size_t k = 1; k <= n; ++k) ASSERT_EQ(dp[k], closed_form_Z(kernel, n, k)) << n << " " << k;
    }
}

TEST(Renyi, Values) {
  EXPECT_EQ(renyi_forest_count(5, 1), 1);
  EXPECT_EQ(renyi_forest_count(4, 4), 16);
  EXPECT_EQ(renyi_forest_count(4, 2), 6);
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(renyi_forest_count(n, n), n == 1 ? BigInt(1) : power(n, n - 2));
}

TEST(Renyi, TimesFactorialIsDp) {
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto dp = dp_partition_profile(KernelKind::Multiplicative, n);
    for (std::size_t k = 1; k <= n; ++k) ASSERT_EQ(renyi_forest_count(n, k) * factorial(k - 1), dp[k]);
  }
}

TEST(Counts, OrderedForestsMatchEnumeration) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t l = 1; l <= n; ++l)
      EXPECT_EQ(ordered_forest_count(n, l), BigInt(rooted_forests_brute(n, l)) * factorial(l)) << n << " " << l;
}

TEST(Counts, DecreasingLabellings) {
  // path 1 - 2 - 3 rooted at an end
  const RootedTree path = RootedTree::from_parents({kNoParent, 0, 1});
  EXPECT_EQ(decreasing_labelling_count(path), 1);
  EXPECT_EQ(decreasing_labelling_count_brute(path), 1);
  const RootedTree star = RootedTree::from_parents({kNoParent, 0, 0, 0});
  EXPECT_EQ(decreasing_labelling_count(star), 6);
  EXPECT_EQ(decreasing_labelling_count_brute(star), 6);
}

TEST(CountsProperty, LabellingFormulaAgainstBruteForce) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (const auto& t : all_rooted_trees(n)) ASSERT_EQ(decreasing_labelling_count(t), decreasing_labelling_count_brute(t));
  Rng rng(1);
  for (std::size_t n : {6u, 7u}) {
    const auto trees = all_rooted_trees(n);
    for (int i = 0; i < 150; ++i) {
      const auto& t = trees[rng.below(trees.size())];
      ASSERT_EQ(decreasing_labelling_count(t), decreasing_labelling_count_brute(t));
    }
  }
}

TEST(CountsProperty, LabellingsSumOverRootedTrees) {
  // Each labeled rooted tree with a decreasing labelling is one Kingman chain:
  // the total is n!(n-1)!, i.e. (n-1)! per vertex labelling of a shape.
  for (std::size_t n = 1; n <= 7; ++n) {
    BigInt total = 0;
    const auto trees = all_rooted_trees(n);
    ASSERT_EQ(BigInt(trees.size()), power(n, n - 1));
    for (const auto& t : trees) total += decreasing_labelling_count(t);
    EXPECT_EQ(total, factorial(n) * factorial(n - 1)) << n;
    EXPECT_EQ(total / factorial(n), factorial(n - 1));
  }
}

TEST(LabeledTrees, CayleyCounts) {
  for (std::size_t n = 2; n <= 7; ++n) EXPECT_EQ(BigInt(all_labeled_trees(n).size()), power(n, n - 2));
}

TEST(EssSup, ExamplesAndBruteForce) {
  EXPECT_EQ(ess_sup_zmc_arrow(2), 960);
  EXPECT_EQ(ess_sup_zmc(2), Rational(120));
  EXPECT_EQ(ess_sup_zmc(1), Rational(1));
  EXPECT_EQ(ess_sup_zmc_brute(2), Rational(1));
  EXPECT_EQ(ess_sup_zmc_brute(4), Rational(120));
  EXPECT_EQ(ess_sup_zmc_brute(8), ess_sup_zmc(3));
  EXPECT_EQ(brute_force_enumerate(KernelKind::Multiplicative, 8).max_arrow, ess_sup_zmc_arrow(3));
  EXPECT_THROW(ess_sup_zmc_brute(6), CoalesceError);
}

TEST(EssSup, LogFormAgreesWithExact) {
  for (unsigned p = 1; p <= 14; ++p) {
    const double log_exact = log_big(ess_sup_zmc_arrow(p)) - (std::ldexp(1.0, p) - 1) * std::log(2.0);
    EXPECT_NEAR(log_ess_sup_zmc(p), log_exact, 1e-9 * std::max(1.0, log_exact)) << p;
  }
  EXPECT_TRUE(std::isfinite(log_ess_sup_zmc(20)));
  EXPECT_THROW(log_ess_sup_zmc(21), CoalesceError);
}

TEST(EssSup, BelowTrivialBound) {
  for (unsigned p = 1; p <= 12; ++p) {
    const double n = std::ldexp(1.0, p);
    // every factor is below n^2 - n
    EXPECT_LE(log_ess_sup_zmc(p), (n - 1) * (std::log(n * n - n) - std::log(2.0)) + 1e-9);
    const double reference = (n - 1) * (2 * std::log(n) - std::log(2.0)) - std::log(n) / std::log(2.0);
    RecordProperty("log_ratio_p" + std::to_string(p), std::to_string(log_ess_sup_zmc(p) - reference));
  }
}

TEST(Census, AdditiveTwoVertices) {
  const std::size_t reps = 10000;
  const TreeCensus c = tree_census(KernelKind::Additive, 2, reps, 3);
  ASSERT_EQ(c.size(), 2u);
  for (const auto& [code, count] : c) EXPECT_NEAR(static_cast<double>(count), reps / 2.0, 4 * std::sqrt(reps / 4.0));
}

TEST(Census, AdditiveFourIsUniform) {
  const std::size_t reps = 32000;
  const TreeCensus c = tree_census(KernelKind::Additive, 4, reps, 4);
  EXPECT_EQ(c.size(), 64u);
  std::vector<std::uint64_t> counts;
  for (const auto& [code, count] : c) counts.push_back(count);
  counts.resize(64, 0);
  EXPECT_GT(chi_square_gof(counts, std::vector<double>(64, 1.0 / 64)).p_value, 1e-3);
}

TEST(Census, MultiplicativeDiffersFromAdditiveUnrooted) {
  const TreeCensus mc = tree_census(KernelKind::Multiplicative, 4, 200000, 5, true);
  const TreeCensus ac = tree_census(KernelKind::Additive, 4, 200000, 6, true);
  std::map<TreeCode, std::pair<std::uint64_t, std::uint64_t>> joint;
  for (const auto& [code, count] : mc) joint[code].first = count;
  for (const auto& [code, count] : ac) joint[code].second = count;
  EXPECT_EQ(joint.size(), 16u);
  std::vector<std::uint64_t> a, b;
  for (const auto& [code, pair] : joint) a.push_back(pair.first), b.push_back(pair.second);
  EXPECT_LT(chi_square_two_sample(a, b).p_value, 1e-6);
}

TEST(Encoding, UnrootedIsRootIndependent) {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {1, 3}};
  const TreeCode code = unrooted_code(4, edges);
  for (Vertex r = 0; r < 4; ++r) {
    const RootedTree t = RootedTree::from_edges(4, edges, r);
    EXPECT_EQ(unrooted_code(4, edges), code);
    EXPECT_EQ(encode(t)[r], 0u);
  }
}
