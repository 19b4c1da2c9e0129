#include "coalesce/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace coalesce {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Kingman: return "kingman";
    case KernelKind::Additive: return "additive";
    case KernelKind::Multiplicative: return "multiplicative";
  }
  return "unknown";
}

KernelKind parse_kernel(std::string_view name) {
  if (name == "kingman" || name == "kc") return KernelKind::Kingman;
  if (name == "additive" || name == "ac") return KernelKind::Additive;
  if (name == "multiplicative" || name == "mc") return KernelKind::Multiplicative;
  throw CoalesceError(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(name) + "'");
}

bool is_rooted(KernelKind kind) { return kind != KernelKind::Multiplicative; }

std::uint64_t kernel_weight(KernelKind kind, std::uint64_t a, std::uint64_t b) {
  switch (kind) {
    case KernelKind::Kingman: return 2;
    case KernelKind::Additive: return a + b;
    case KernelKind::Multiplicative: return a * b;
  }
  return 0;
}

std::uint64_t admissible_count(KernelKind kernel, std::size_t n, std::size_t trees,
                               std::uint64_t sum_sq) {
  const std::uint64_t r = trees;
  switch (kernel) {
    case KernelKind::Kingman: return r * (r - 1);
    case KernelKind::Additive: return n * (r - 1);
    case KernelKind::Multiplicative: return (std::uint64_t{n} * n - sum_sq) / 2;
  }
  return 0;
}

std::size_t directed_index(std::size_t n, Vertex k, Vertex l) {
  return static_cast<std::size_t>(k) * (n - 1) + (l < k ? l : l - 1);
}

Edge directed_edge(std::size_t n, std::size_t index) {
  const auto k = static_cast<Vertex>(index / (n - 1));
  auto l = static_cast<Vertex>(index % (n - 1));
  if (l >= k) ++l;
  return {k, l};
}

std::uint64_t undirected_index(Vertex i, Vertex j) {
  if (i > j) std::swap(i, j);
  return std::uint64_t{j} * (j - 1) / 2 + i;
}

Edge undirected_edge(std::uint64_t index) {
  auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (j * (j - 1) / 2 > index) --j;
  while ((j + 1) * j / 2 <= index) ++j;
  return {static_cast<Vertex>(index - j * (j - 1) / 2), static_cast<Vertex>(j)};
}

std::size_t weight_count(KernelKind kernel, std::size_t n) {
  return is_rooted(kernel) ? n * (n - 1) : static_cast<std::size_t>(choose2(n));
}

std::vector<Edge> MergeTrace::edges() const {
  std::vector<Edge> result;
  result.reserve(records.size());
  for (const auto& r : records) result.push_back({r.u, r.v});
  return result;
}

RootedTree MergeTrace::final_tree() const {
  if (records.size() + 1 != n) {
    throw CoalesceError(ErrorCode::TruncatedRun, "final_tree: trace is not complete");
  }
  if (!is_rooted(kernel)) {
    const auto e = edges();
    return RootedTree::from_edges(n, e, 0);
  }
  std::vector<Vertex> parent(n, kNoParent);
  for (const auto& r : records) parent[r.v] = r.u;
  return RootedTree::from_parents(std::move(parent));
}

namespace {

// Forest plus the root of every tree, for the two rooted kernels.
class RootedForest {
 public:
  explicit RootedForest(std::size_t n) : forest_(n), roots_(n), pos_(n), root_of_rep_(n) {
    std::iota(roots_.begin(), roots_.end(), Vertex{0});
    std::iota(pos_.begin(), pos_.end(), std::size_t{0});
    std::iota(root_of_rep_.begin(), root_of_rep_.end(), Vertex{0});
  }

  const Forest& forest() const { return forest_; }
  const std::vector<Vertex>& roots() const { return roots_; }
  std::size_t root_position(Vertex root) const { return pos_[root]; }
  Vertex tree_root(Vertex x) const { return root_of_rep_[forest_.find(x)]; }
  bool is_root(Vertex x) const { return tree_root(x) == x; }

  // Adds parent -> child_root and records the root of the merged tree.
  MergeRecord attach(Vertex parent, Vertex child_root, Vertex new_root) {
    MergeRecord record = forest_.merge(parent, child_root);
    root_of_rep_[forest_.find(parent)] = new_root;
    const std::size_t at = pos_[child_root];
    const Vertex last = roots_.back();
    roots_[at] = last;
    pos_[last] = at;
    roots_.pop_back();
    return record;
  }

 private:
  Forest forest_;
  std::vector<Vertex> roots_;
  std::vector<std::size_t> pos_;
  std::vector<Vertex> root_of_rep_;
};

// Index of the t-th item among `count` items when item `skip` is excluded.
std::size_t skip_index(std::size_t t, std::size_t skip) { return t >= skip ? t + 1 : t; }

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

  void add(std::size_t i, std::int64_t delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += static_cast<std::uint64_t>(delta);
  }
  // Sum of entries [0, i).
  std::uint64_t prefix(std::size_t i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }
  // Smallest i with prefix(i + 1) > target.
  std::size_t find(std::uint64_t target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

// Uniform cross-component pairs. Rejection from all pairs while at least half
// are admissible, then a two-stage draw: component A with probability
// proportional to |A|(n - |A|), B != A proportional to |B|, then uniform
// endpoints. Both stages give each cross pair probability 1 / #cross pairs.
class MultiplicativeSampler {
 public:
  MultiplicativeSampler(std::size_t n, Rng& rng) : n_(n), rng_(rng), forest_(n) {}

  const Forest& forest() const { return forest_; }

  MergeRecord step() {
    const std::uint64_t n = n_;
    if (!two_stage_ && 2 * (n * n - forest_.sum_sq()) < n * n - n) enter_two_stage();
    Edge e = two_stage_ ? draw_two_stage() : draw_rejection();
    const Vertex ra = forest_.find(e.u);
    const Vertex rb = forest_.find(e.v);
    MergeRecord record = forest_.merge(e.u, e.v);
    if (two_stage_) after_merge(ra, rb);
    return record;
  }

 private:
  Edge draw_rejection() {
    for (;;) {
      const auto a = static_cast<Vertex>(rng_.below(n_));
      const auto b = static_cast<Vertex>(skip_index(rng_.below(n_ - 1), a));
      if (!forest_.same_component(a, b)) return {a, b};
    }
  }

  void enter_two_stage() {
    two_stage_ = true;
    weight_ = Fenwick(n_);
    sizes_ = Fenwick(n_);
    members_.assign(n_, {});
    for (Vertex v = 0; v < n_; ++v) members_[forest_.find(v)].push_back(v);
    for (Vertex r = 0; r < n_; ++r) {
      if (members_[r].empty()) continue;
      const std::uint64_t s = members_[r].size();
      weight_.add(r, static_cast<std::int64_t>(s * (n_ - s)));
      sizes_.add(r, static_cast<std::int64_t>(s));
    }
  }

  Edge draw_two_stage() {
    const std::uint64_t n = n_;
    const std::uint64_t total = n * n - forest_.sum_sq();
    const std::size_t a = weight_.find(rng_.below(total));
    const std::uint64_t size_a = members_[a].size();
    std::uint64_t t = rng_.below(n - size_a);
    if (t >= sizes_.prefix(a)) t += size_a;
    const std::size_t b = sizes_.find(t);
    const Vertex u = members_[a][rng_.below(size_a)];
    const Vertex v = members_[b][rng_.below(members_[b].size())];
    return {u, v};
  }

  void after_merge(Vertex ra, Vertex rb) {
    const Vertex keep = forest_.find(ra);
    const Vertex gone = keep == ra ? rb : ra;
    const std::uint64_t sk = members_[keep].size();
    const std::uint64_t sg = members_[gone].size();
    weight_.add(keep, -static_cast<std::int64_t>(sk * (n_ - sk)));
    weight_.add(gone, -static_cast<std::int64_t>(sg * (n_ - sg)));
    sizes_.add(gone, -static_cast<std::int64_t>(sg));
    sizes_.add(keep, static_cast<std::int64_t>(sg));
    auto& dst = members_[keep];
    dst.insert(dst.end(), members_[gone].begin(), members_[gone].end());
    members_[gone].clear();
    members_[gone].shrink_to_fit();
    const std::uint64_t s = dst.size();
    weight_.add(keep, static_cast<std::int64_t>(s * (n_ - s)));
  }

  std::size_t n_;
  Rng& rng_;
  Forest forest_;
  bool two_stage_ = false;
  Fenwick weight_{0};
  Fenwick sizes_{0};
  std::vector<std::vector<Vertex>> members_;
};

void check_n(std::size_t n) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "coalescent needs n >= 1");
}

// Admissible directed edge (k, l) for the rooted kernels, and the resulting
// (parent, child_root, new_root) triple.
struct RootedMove {
  bool ok = false;
  Vertex parent = 0;
  Vertex child = 0;
  Vertex new_root = 0;
};

RootedMove rooted_move(KernelKind kernel, const RootedForest& rf, Vertex k, Vertex l) {
  if (!rf.is_root(k) || rf.forest().same_component(k, l)) return {};
  if (kernel == KernelKind::Kingman) {
    if (!rf.is_root(l)) return {};
    return {true, k, l, k};
  }
  return {true, l, k, rf.tree_root(l)};
}

}  // namespace

MergeTrace run_uniform(KernelKind kernel, std::size_t n, Rng& rng) {
  check_n(n);
  MergeTrace trace{n, kernel, {}, {}};
  trace.records.reserve(n - 1);
  if (kernel == KernelKind::Multiplicative) {
    MultiplicativeSampler sampler(n, rng);
    for (std::size_t i = 1; i < n; ++i) trace.records.push_back(sampler.step());
    return trace;
  }
  RootedForest rf(n);
  trace.roots_history.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const auto& roots = rf.roots();
    const std::size_t r = roots.size();
    Vertex parent = 0, child = 0, new_root = 0;
    if (kernel == KernelKind::Kingman) {
      const std::size_t a = rng.below(r);
      const std::size_t b = skip_index(rng.below(r - 1), a);
      parent = roots[a];
      child = roots[b];
      new_root = parent;
    } else {
      parent = static_cast<Vertex>(rng.below(n));
      new_root = rf.tree_root(parent);
      child = roots[skip_index(rng.below(r - 1), rf.root_position(new_root))];
    }
    trace.records.push_back(rf.attach(parent, child, new_root));
    trace.roots_history.push_back(new_root);
  }
  return trace;
}

namespace {

void check_weights(KernelKind kernel, std::size_t n, std::span<const double> w, const char* what) {
  if (w.size() != weight_count(kernel, n)) {
    throw CoalesceError(ErrorCode::InvalidArgument,
                        std::string(what) + ": expected " + std::to_string(weight_count(kernel, n)) +
                            " values, got " + std::to_string(w.size()));
  }
}

Edge weight_edge(KernelKind kernel, std::size_t n, std::size_t index) {
  return is_rooted(kernel) ? directed_edge(n, index) : undirected_edge(index);
}

}  // namespace

MergeTrace run_weight_driven(KernelKind kernel, std::size_t n, std::span<const double> weights) {
  check_n(n);
  check_weights(kernel, n, weights, "run_weight_driven");
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!(weights[order[i - 1]] < weights[order[i]])) {
      throw CoalesceError(ErrorCode::DuplicateWeights, "run_weight_driven: weights must be distinct");
    }
  }
  MergeTrace trace{n, kernel, {}, {}};
  // An edge that is inadmissible once never becomes admissible again, so one
  // pass in increasing weight order finds the minimum admissible edge at every step.
  if (kernel == KernelKind::Multiplicative) {
    Forest forest(n);
    for (std::size_t idx : order) {
      if (trace.records.size() + 1 == n) break;
      const Edge e = undirected_edge(idx);
      if (!forest.same_component(e.u, e.v)) trace.records.push_back(forest.merge(e.u, e.v));
    }
    return trace;
  }
  RootedForest rf(n);
  for (std::size_t idx : order) {
    if (trace.records.size() + 1 == n) break;
    const Edge e = directed_edge(n, idx);
    const RootedMove move = rooted_move(kernel, rf, e.u, e.v);
    if (!move.ok) continue;
    trace.records.push_back(rf.attach(move.parent, move.child, move.new_root));
    trace.roots_history.push_back(move.new_root);
  }
  return trace;
}

namespace {

template <class Admissible>
std::size_t pick_by_rate(std::span<const double> rates, Admissible&& admissible, double u) {
  double total = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (admissible(i)) total += rates[i];
  }
  if (!(total > 0.0)) {
    throw CoalesceError(ErrorCode::ZeroAdmissibleRate, "run_rate_driven: admissible rates sum to zero");
  }
  const double target = u * total;
  double acc = 0.0;
  std::size_t last = rates.size();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!admissible(i) || rates[i] <= 0.0) continue;
    acc += rates[i];
    last = i;
    if (target < acc) return i;
  }
  return last;
}

}  // namespace

MergeTrace run_rate_driven(KernelKind kernel, std::size_t n, std::span<const double> rates, Rng& rng) {
  check_n(n);
  check_weights(kernel, n, rates, "run_rate_driven");
  for (double r : rates) {
    if (!(r >= 0.0)) throw CoalesceError(ErrorCode::InvalidArgument, "run_rate_driven: rates must be >= 0");
  }
  MergeTrace trace{n, kernel, {}, {}};
  if (kernel == KernelKind::Multiplicative) {
    Forest forest(n);
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t idx = pick_by_rate(
          rates, [&](std::size_t j) {
            const Edge e = undirected_edge(j);
            return !forest.same_component(e.u, e.v);
          },
          rng.uniform01());
      const Edge e = undirected_edge(idx);
      trace.records.push_back(forest.merge(e.u, e.v));
    }
    return trace;
  }
  RootedForest rf(n);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t idx = pick_by_rate(
        rates, [&](std::size_t j) {
          const Edge e = directed_edge(n, j);
          return rooted_move(kernel, rf, e.u, e.v).ok;
        },
        rng.uniform01());
    const Edge e = directed_edge(n, idx);
    const RootedMove move = rooted_move(kernel, rf, e.u, e.v);
    trace.records.push_back(rf.attach(move.parent, move.child, move.new_root));
    trace.roots_history.push_back(move.new_root);
  }
  return trace;
}

std::vector<double> first_step_rate_probabilities(KernelKind kernel, std::size_t n,
                                                  std::span<const double> rates) {
  check_n(n);
  check_weights(kernel, n, rates, "first_step_rate_probabilities");
  std::vector<double> p(rates.size(), 0.0);
  if (n < 2) return p;
  RootedForest rf(n);
  Forest forest(n);
  double total = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    const Edge e = weight_edge(kernel, n, j);
    const bool ok = is_rooted(kernel) ? rooted_move(kernel, rf, e.u, e.v).ok
                                      : !forest.same_component(e.u, e.v);
    if (ok) {
      p[j] = rates[j];
      total += rates[j];
    }
  }
  if (!(total > 0.0)) throw CoalesceError(ErrorCode::ZeroAdmissibleRate, "admissible rates sum to zero");
  for (double& x : p) x /= total;
  return p;
}

double log_one_minus_fraction(std::uint64_t sum_sq, std::uint64_t n) {
  const std::uint64_t n2 = n * n;
  if (2 * sum_sq < n2) return std::log1p(-static_cast<double>(sum_sq) / static_cast<double>(n2));
  return std::log(static_cast<double>(n2 - sum_sq) / static_cast<double>(n2));
}

namespace {

void check_partition_args(const MergeTrace& trace, std::size_t k) {
  if (trace.kernel != KernelKind::Multiplicative) {
    throw CoalesceError(ErrorCode::WrongKernel, "empirical partition function needs a multiplicative trace");
  }
  if (k < 1 || k > trace.n) throw CoalesceError(ErrorCode::InvalidArgument, "need 1 <= k <= n");
  if (trace.records.size() + 1 < k) {
    throw CoalesceError(ErrorCode::TruncatedRun, "trace has fewer than k - 1 merges");
  }
}

}  // namespace

EmpiricalLogPartition empirical_log_partition(const MergeTrace& trace, std::size_t k) {
  check_partition_args(trace, k);
  const std::uint64_t n2 = std::uint64_t{trace.n} * trace.n;
  EmpiricalLogPartition result{trace.n, k, 0.0, 0.0};
  for (std::size_t i = 0; i + 1 < k; ++i) {
    result.log_z_arrow += std::log(static_cast<double>(n2 - trace.records[i].pre_sum_sq));
  }
  result.log_z = result.log_z_arrow - static_cast<double>(k - 1) * std::log(2.0);
  return result;
}

BigInt empirical_partition_arrow_exact(const MergeTrace& trace, std::size_t k) {
  check_partition_args(trace, k);
  const std::uint64_t n2 = std::uint64_t{trace.n} * trace.n;
  BigInt product = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) product *= BigInt(n2 - trace.records[i].pre_sum_sq);
  return product;
}

bool additive_empirical_constant_check(const MergeTrace& trace, std::size_t k) {
  if (trace.kernel != KernelKind::Additive) return false;
  const std::size_t n = trace.n;
  if (k < 1 || k > n || trace.records.size() + 1 < k) return false;
  RootedForest rf(n);
  BigInt product = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const MergeRecord& r = trace.records[i];
    if (!rf.is_root(r.v) || rf.forest().same_component(r.u, r.v)) return false;
    std::uint64_t choices = 0;
    for (std::uint64_t s : rf.forest().component_sizes()) choices += n - s;
    product *= choices;
    rf.attach(r.u, r.v, rf.tree_root(r.u));
  }
  BigInt expected = 1;
  for (std::size_t i = 1; i < k; ++i) expected *= BigInt(n) * (n - i);
  return product == expected;
}

bool additive_empirical_constant_check(const MergeTrace& trace) {
  return additive_empirical_constant_check(trace, trace.n);
}

void write_trace_csv(std::ostream& out, const MergeTrace& trace) {
  out << "step,u,v,size_a,size_b,pre_sum_sq\n";
  for (const auto& r : trace.records) {
    out << r.step << ',' << (r.u + 1) << ',' << (r.v + 1) << ',' << r.size_a << ',' << r.size_b << ','
        << r.pre_sum_sq << '\n';
  }
}

}  // namespace coalesce
