#include "coalesce/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coalesce/experiment.hpp"

namespace coalesce {

namespace {

using Acc = unsigned __int128;

BigInt to_big(Acc x) {
  BigInt r = static_cast<std::uint64_t>(x >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(x);
  return r;
}

struct ChainDfs {
  std::size_t n;
  KernelKind kernel;
  std::vector<Acc> z;
  std::uint64_t chains = 0;
  std::uint64_t max_arrow = 0;
  std::vector<std::uint32_t> blocks;

  void visit(std::size_t depth, Acc weight, std::uint64_t sum_sq, std::uint64_t arrow) {
    z[depth + 1] += weight;
    const std::size_t r = blocks.size();
    if (r == 1) {
      ++chains;
      max_arrow = std::max(max_arrow, arrow);
      return;
    }
    const std::uint64_t factor = n * n - sum_sq;
    for (std::size_t i = 0; i + 1 < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        const std::uint32_t a = blocks[i], b = blocks[j];
        const std::uint32_t last = blocks.back();
        // Merge j into i, move the last block into slot j.
        blocks[i] = a + b;
        blocks[j] = last;
        blocks.pop_back();
        visit(depth + 1, weight * kernel_weight(kernel, a, b), sum_sq + 2ull * a * b, arrow * factor);
        blocks.push_back(last);
        blocks[j] = b;
        blocks[i] = a;
      }
    }
  }
};

void check_k(std::size_t n, std::size_t k) {
  if (n == 0 || k == 0 || k > n) throw CoalesceError(ErrorCode::InvalidArgument, "k must lie in [1, n]");
}

}  // namespace

ChainEnumeration brute_force_enumerate(KernelKind kernel, std::size_t n) {
  if (n == 0 || n > 8) throw CoalesceError(ErrorCode::UnsupportedSize, "brute force enumeration needs 1 <= n <= 8");
  ChainDfs dfs{n, kernel, std::vector<Acc>(n + 1, 0), 0, 0, std::vector<std::uint32_t>(n, 1)};
  dfs.visit(0, 1, n, 1);
  ChainEnumeration result;
  result.n = n;
  result.kernel = kernel;
  result.z_by_k.resize(n + 1);
  for (std::size_t k = 1; k <= n; ++k) result.z_by_k[k] = to_big(dfs.z[k]);
  result.chains = dfs.chains;
  result.max_arrow = dfs.max_arrow;
  return result;
}

BigInt brute_force_partition_function(KernelKind kernel, std::size_t n, std::size_t k) {
  check_k(n, k);
  return brute_force_enumerate(kernel, n).z_by_k[k];
}

std::vector<BigInt> dp_partition_profile(KernelKind kernel, std::size_t n) {
  if (n == 0 || n > 60) throw CoalesceError(ErrorCode::UnsupportedSize, "dp needs 1 <= n <= 60");
  // Shape as block multiplicities: counts[a] = number of blocks of size a.
  using Shape = std::vector<std::uint8_t>;
  std::map<Shape, BigInt> level;
  Shape start(n + 1, 0);
  start[1] = static_cast<std::uint8_t>(n);
  level[start] = 1;
  std::vector<BigInt> profile(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    BigInt total = 0;
    for (const auto& [shape, w] : level) total += w;
    profile[k] = total;
    if (k == n) break;
    std::map<Shape, BigInt> next;
    for (const auto& [shape, w] : level) {
      for (std::size_t a = 1; a <= n; ++a) {
        if (shape[a] == 0) continue;
        for (std::size_t b = a; a + b <= n; ++b) {
          if (shape[b] == 0) continue;
          std::uint64_t pairs;
          if (a == b) {
            if (shape[a] < 2) continue;
            pairs = choose2(shape[a]);
          } else {
            pairs = std::uint64_t{shape[a]} * shape[b];
          }
          Shape to = shape;
          --to[a];
          --to[b];
          ++to[a + b];
          next[to] += w * (pairs * kernel_weight(kernel, a, b));
        }
      }
    }
    level = std::move(next);
  }
  return profile;
}

BigInt dp_partition_function(KernelKind kernel, std::size_t n, std::size_t k) {
  check_k(n, k);
  return dp_partition_profile(kernel, n)[k];
}

BigInt factorial(std::size_t n) {
  BigInt r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt falling(std::uint64_t x, std::size_t k) {
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (x < i) return 0;
    r *= x - i;
  }
  return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt power(std::uint64_t base, std::size_t exp) { return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp)); }

BigInt closed_form_Z(KernelKind kernel, std::size_t n, std::size_t k) {
  check_k(n, k);
  switch (kernel) {
    case KernelKind::Kingman: {
      BigInt r = 1;
      for (std::size_t i = 1; i < k; ++i) r *= BigInt(n + 1 - i) * (n - i);
      return r;
    }
    case KernelKind::Additive:
      return power(n, k - 1) * falling(n - 1, k - 1);
    case KernelKind::Multiplicative:
      return renyi_forest_count(n, k) * factorial(k - 1);
  }
  throw CoalesceError(ErrorCode::InvalidArgument, "closed_form_Z: unknown kernel");
}

BigInt renyi_forest_count(std::size_t n, std::size_t k) {
  check_k(n, k);
  const std::uint64_t m = n + 1 - k;
  const std::uint64_t x = 2 * n;
  // S = sum_i c_i x^{M-i} with c_i = (-1)^i C(M,i) (M+i) (k-1)_i, by Horner.
  // A_i = C(M,i) (k-1)_i is updated exactly: A_{i+1} = A_i (M-i) / (i+1) * (k-1-i).
  BigInt a = 1;
  BigInt s = 0;
  for (std::uint64_t i = 0; i <= m; ++i) {
    BigInt c = a * (m + i);
    if (i % 2 == 1) c = -c;
    s = s * x + c;
    if (i == m) break;
    a *= m - i;
    a /= i + 1;
    if (k - 1 < i + 1) {
      a = 0;
    } else {
      a *= k - 1 - i;
    }
  }
  BigInt num = binomial(n, m) * s;
  BigInt den = power(x, m);
  if (k >= 2) {
    num *= power(n, k - 2);
  } else {
    den *= n;
  }
  BigInt q, r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0 || q < 0)
    throw CoalesceError(ErrorCode::NonIntegralResult, "renyi_forest_count: non-integral value");
  return q;
}

BigInt chain_count(std::size_t n) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "chain_count: n must be positive");
  const BigInt f = factorial(n);
  BigInt q, r;
  boost::multiprecision::divide_qr(BigInt(f * f), BigInt(BigInt(n) << (n - 1)), q, r);
  if (r != 0) throw CoalesceError(ErrorCode::NonIntegralResult, "chain_count: non-integral value");
  return q;
}

BigInt ordered_forest_count(std::size_t n, std::size_t l) {
  if (l == 0 || l > n) throw CoalesceError(ErrorCode::InvalidArgument, "ordered_forest_count: l must lie in [1, n]");
  if (l == n) return factorial(n);  // n^{-1} * n * (n)_n = n!
  return BigInt(l) * falling(n, l) * power(n, n - l - 1);
}

namespace {

std::vector<std::uint64_t> subtree_sizes(const RootedTree& tree) {
  const std::size_t n = tree.size();
  const auto depth = root_distances(tree);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return depth[a] > depth[b]; });
  std::vector<std::uint64_t> size(n, 1);
  for (Vertex v : order)
    if (tree.parent(v) != kNoParent) size[tree.parent(v)] += size[v];
  return size;
}

}  // namespace

BigInt decreasing_labelling_count(const RootedTree& tree) {
  const auto size = subtree_sizes(tree);
  BigInt num = 1, den = 1;
  for (Vertex v = 0; v < tree.size(); ++v) {
    num *= factorial(size[v] - 1);
    if (tree.parent(v) != kNoParent) den *= factorial(size[v]);
  }
  BigInt q, r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0) throw CoalesceError(ErrorCode::NonIntegralResult, "decreasing_labelling_count: non-integral value");
  return q;
}

BigInt decreasing_labelling_count_brute(const RootedTree& tree) {
  const std::size_t n = tree.size();
  if (n > 9) throw CoalesceError(ErrorCode::UnsupportedSize, "brute-force labelling count needs n <= 9");
  if (n <= 1) return 1;
  // The edge into each non-root vertex gets a label; an edge must carry a
  // smaller label than the edge above it.
  std::vector<Vertex> child;
  for (Vertex v = 0; v < n; ++v)
    if (tree.parent(v) != kNoParent) child.push_back(v);
  std::vector<std::size_t> labels(child.size());
  std::iota(labels.begin(), labels.end(), std::size_t{1});
  std::vector<std::size_t> label_of(n, 0);
  std::uint64_t count = 0;
  do {
    for (std::size_t i = 0; i < child.size(); ++i) label_of[child[i]] = labels[i];
    bool ok = true;
    for (Vertex v : child) {
      const Vertex p = tree.parent(v);
      if (tree.parent(p) != kNoParent && label_of[v] >= label_of[p]) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(labels.begin(), labels.end()));
  return count;
}

std::vector<std::vector<Edge>> all_labeled_trees(std::size_t n) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "all_labeled_trees: n must be positive");
  if (n > 8) throw CoalesceError(ErrorCode::UnsupportedSize, "all_labeled_trees: n must be at most 8");
  if (n == 1) return {{}};
  if (n == 2) return {{Edge{0, 1}}};
  std::vector<std::vector<Edge>> trees;
  std::vector<Vertex> seq(n - 2, 0);
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (Vertex x : seq) ++degree[x];
    std::vector<Edge> edges;
    for (Vertex x : seq) {
      Vertex leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.push_back({std::min(leaf, x), std::max(leaf, x)});
      --degree[leaf];
      --degree[x];
    }
    Vertex u = 0;
    while (degree[u] != 1) ++u;
    Vertex v = u + 1;
    while (degree[v] != 1) ++v;
    edges.push_back({u, v});
    trees.push_back(std::move(edges));

    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return trees;
}

std::vector<RootedTree> all_rooted_trees(std::size_t n) {
  std::vector<RootedTree> result;
  for (const auto& edges : all_labeled_trees(n))
    for (Vertex r = 0; r < n; ++r) result.push_back(RootedTree::from_edges(n, edges, r));
  return result;
}

namespace {

void check_p(unsigned p, unsigned max_p) {
  if (p == 0 || p > max_p)
    throw CoalesceError(ErrorCode::UnsupportedSize, "ess sup formula needs 1 <= p <= " + std::to_string(max_p));
}

template <class F>
void for_each_ess_sup_factor(unsigned p, F f) {
  const std::uint64_t n = std::uint64_t{1} << p;
  for (unsigned k = 1; k <= p; ++k) {
    const std::uint64_t step = std::uint64_t{1} << k;
    for (std::uint64_t j = 0; j < n / step; ++j) f(n * n - (step / 2) * (n + j * step));
  }
}

BigInt product_tree(const std::vector<std::uint64_t>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return 1;
  if (hi - lo <= 8) {
    BigInt r = 1;
    for (std::size_t i = lo; i < hi; ++i) r *= xs[i];
    return r;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return product_tree(xs, lo, mid) * product_tree(xs, mid, hi);
}

}  // namespace

BigInt ess_sup_zmc_arrow(unsigned p) {
  check_p(p, 14);
  std::vector<std::uint64_t> factors;
  for_each_ess_sup_factor(p, [&](std::uint64_t x) { factors.push_back(x); });
  return product_tree(factors, 0, factors.size());
}

Rational ess_sup_zmc(unsigned p) {
  const std::size_t n = std::size_t{1} << p;
  return Rational(ess_sup_zmc_arrow(p), BigInt(1) << (n - 1));
}

double log_ess_sup_zmc(unsigned p) {
  check_p(p, 20);
  double sum = 0.0;
  for_each_ess_sup_factor(p, [&](std::uint64_t x) { sum += std::log(static_cast<double>(x)); });
  const double n = std::ldexp(1.0, static_cast<int>(p));
  return sum - (n - 1.0) * std::log(2.0);
}

Rational ess_sup_zmc_brute(std::size_t n) {
  if (n != 2 && n != 4 && n != 8)
    throw CoalesceError(ErrorCode::InvalidArgument, "ess_sup_zmc_brute: n must be 2, 4 or 8");
  const auto e = brute_force_enumerate(KernelKind::Multiplicative, n);
  return Rational(e.max_arrow, BigInt(1) << (n - 1));
}

TreeCode encode(const RootedTree& tree) {
  TreeCode code(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) code[v] = tree.parent(v) == kNoParent ? 0 : tree.parent(v) + 1;
  return code;
}

TreeCode unrooted_code(std::size_t n, const std::vector<Edge>& edges) {
  TreeCode best;
  for (Vertex r = 0; r < n; ++r) {
    TreeCode code = encode(RootedTree::from_edges(n, edges, r));
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

TreeCensus tree_census(KernelKind kernel, std::size_t n, std::size_t reps, std::uint64_t seed, bool unrooted,
                       unsigned threads) {
  if (n == 0 || n > 5) throw CoalesceError(ErrorCode::UnsupportedSize, "tree_census needs 1 <= n <= 5");
  const auto codes = run_replicates<TreeCode>(reps, seed, threads, [&](Rng& rng, std::size_t) {
    const MergeTrace trace = run_uniform(kernel, n, rng);
    return unrooted ? unrooted_code(n, trace.edges()) : encode(trace.final_tree());
  });
  TreeCensus census;
  for (const auto& c : codes) ++census[c];
  return census;
}

double additive_depth_pmf(std::size_t n, std::size_t d) {
  if (n == 0 || d >= n) return 0.0;
  const double nd = static_cast<double>(n);
  double prod = 1.0;
  for (std::size_t i = 1; i <= d; ++i) prod *= 1.0 - static_cast<double>(i) / nd;
  return static_cast<double>(d + 1) / nd * prod;
}

}  // namespace coalesce
