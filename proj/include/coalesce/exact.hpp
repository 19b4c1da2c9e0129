#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "coalesce/coalescent.hpp"
#include "coalesce/forest.hpp"
#include "coalesce/types.hpp"

namespace coalesce {

// Everything one depth-first pass over the labeled n-chains yields.
// Index k of z_by_k (1..n) holds the truncated partition function Z(n, k).
struct ChainEnumeration {
  std::size_t n = 0;
  KernelKind kernel = KernelKind::Multiplicative;
  std::vector<BigInt> z_by_k;
  BigInt chains = 0;     // number of complete chains
  BigInt max_arrow = 0;  // max over chains of prod_{i<n} (n^2 - S_i)
};

// Labeled DFS: every step picks one unordered pair of current blocks, so each
// chain is visited once. n <= 8.
ChainEnumeration brute_force_enumerate(KernelKind kernel, std::size_t n);
BigInt brute_force_partition_function(KernelKind kernel, std::size_t n, std::size_t k);

// Dynamic programme over integer-partition shapes; entry k (1..n) as above.
// A shape with block multiplicities c_a moves to each merged shape with weight
// (c_a c_b or C(c_a, 2)) * kappa(a, b). n <= 60.
std::vector<BigInt> dp_partition_profile(KernelKind kernel, std::size_t n);
BigInt dp_partition_function(KernelKind kernel, std::size_t n, std::size_t k);

// Z_KC(n,k) = prod_{i<k} (n+1-i)(n-i), Z_AC(n,k) = n^{k-1} (n-1)_{k-1},
// Z_MC(n,k) = u_{n,k} (k-1)!.
BigInt closed_form_Z(KernelKind kernel, std::size_t n, std::size_t k);

// Number of forests on [n] with k - 1 edges (n + 1 - k trees):
//   u_{n,k} = C(n,M) n^{k-2} sum_{i=0}^{M} (-1/2n)^i C(M,i) (M+i) (k-1)_i,  M = n + 1 - k.
// Evaluated exactly; throws NonIntegralResult if the sum does not divide out.
BigInt renyi_forest_count(std::size_t n, std::size_t k);

BigInt factorial(std::size_t n);
BigInt falling(std::uint64_t x, std::size_t k);
BigInt binomial(std::uint64_t n, std::uint64_t k);
BigInt power(std::uint64_t base, std::size_t exp);

// (n!)^2 / (n 2^{n-1})
BigInt chain_count(std::size_t n);
// Ordered sequences of l rooted trees covering [n]: l (n)_l n^{n-l-1}.
BigInt ordered_forest_count(std::size_t n, std::size_t l);

// prod_v (|T_v| - 1)! / prod_{children u of v} |T_u|!
BigInt decreasing_labelling_count(const RootedTree& tree);
// Counts labellings of the edges by 1..n-1 that decrease away from the root (n <= 9).
BigInt decreasing_labelling_count_brute(const RootedTree& tree);

// All labeled trees on n vertices from Prufer sequences (n^{n-2} of them).
std::vector<std::vector<Edge>> all_labeled_trees(std::size_t n);
// All rooted labeled trees (n^{n-1}).
std::vector<RootedTree> all_rooted_trees(std::size_t n);

// Essential supremum of the empirical partition function for n = 2^p:
//   2^{-(n-1)} prod_{k=1}^{p} prod_{j=0}^{n/2^k - 1} (n^2 - 2^{k-1}(n + j 2^k)).
// Exact for p <= 14; the log form covers p <= 20.
BigInt ess_sup_zmc_arrow(unsigned p);
Rational ess_sup_zmc(unsigned p);
double log_ess_sup_zmc(unsigned p);
// 2^{-(n-1)} times the largest chain product, by enumeration (n in {2, 4, 8}).
Rational ess_sup_zmc_brute(std::size_t n);

// Parent-array encoding, 1-based, 0 marks the root.
using TreeCode = std::vector<Vertex>;
TreeCode encode(const RootedTree& tree);
// Smallest rooted encoding over all choices of root.
TreeCode unrooted_code(std::size_t n, const std::vector<Edge>& edges);

using TreeCensus = std::map<TreeCode, std::uint64_t>;
// Final Version-1 trees over `reps` replicates of stream `seed`. Rooted codes,
// or unrooted ones when `unrooted` is set. n <= 5.
TreeCensus tree_census(KernelKind kernel, std::size_t n, std::size_t reps, std::uint64_t seed,
                       bool unrooted = false, unsigned threads = 0);

// P(D_1 = d) for the additive coalescent: ((d+1)/n) prod_{i<=d} (1 - i/n).
double additive_depth_pmf(std::size_t n, std::size_t d);

}  // namespace coalesce
