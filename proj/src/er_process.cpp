#include "coalesce/er_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "coalesce/experiment.hpp"
#include "coalesce/stats.hpp"

namespace coalesce {

EdgePermutation::EdgePermutation(std::size_t n, Rng& rng, bool materialize) : rng_(rng), total_(choose2(n)) {
  if (materialize && total_ <= kMaterializeLimit) {
    dense_.resize(total_);
    std::iota(dense_.begin(), dense_.end(), std::uint64_t{0});
  }
}

std::uint64_t EdgePermutation::slot(std::uint64_t i) const {
  if (!dense_.empty()) return dense_[i];
  auto it = displaced_.find(i);
  return it == displaced_.end() ? i : it->second;
}

Edge EdgePermutation::next() {
  if (exhausted()) throw CoalesceError(ErrorCode::InvalidArgument, "EdgePermutation: all edges drawn");
  const std::uint64_t j = position_ + rng_.below(total_ - position_);
  std::uint64_t chosen;
  if (!dense_.empty()) {
    std::swap(dense_[position_], dense_[j]);
    chosen = dense_[position_];
  } else {
    chosen = slot(j);
    if (j != position_) displaced_[j] = slot(position_);
    displaced_.erase(position_);
  }
  ++position_;
  return undirected_edge(chosen);
}

GraphProcess::GraphProcess(std::size_t n, Rng& rng, bool materialize)
    : permutation_(n, rng, materialize), forest_(n) {
  current_.chi_num = forest_.sum_sq();
  size_count_[1] = n;
  current_.largest = 1;
  current_.second = n >= 2 ? 1 : 0;
}

void GraphProcess::add_size(std::uint64_t s) { ++size_count_[s]; }

void GraphProcess::remove_size(std::uint64_t s) {
  auto it = size_count_.find(s);
  if (--it->second == 0) size_count_.erase(it);
}

namespace {

// Largest and second largest from a size -> multiplicity map.
std::pair<std::uint64_t, std::uint64_t> top_two(const std::map<std::uint64_t, std::uint64_t>& counts) {
  if (counts.empty()) return {0, 0};
  auto last = std::prev(counts.end());
  if (last->second >= 2) return {last->first, last->first};
  if (last == counts.begin()) return {last->first, 0};
  return {last->first, std::prev(last)->first};
}

// Applies one edge to a forest and its size multiset; shared by both run paths.
struct StepTracker {
  Forest forest;
  std::map<std::uint64_t, std::uint64_t> counts;
  GraphStep step;

  explicit StepTracker(std::size_t n) : forest(n) {
    counts[1] = n;
    step.chi_num = forest.sum_sq();
    std::tie(step.largest, step.second) = top_two(counts);
  }

  std::optional<MergeRecord> apply(Edge e) {
    ++step.m;
    step.edge = e;
    step.joined = !forest.same_component(e.u, e.v);
    std::optional<MergeRecord> record;
    if (step.joined) {
      record = forest.merge(e.u, e.v);
      for (auto s : {record->size_a, record->size_b}) {
        auto it = counts.find(s);
        if (--it->second == 0) counts.erase(it);
      }
      ++counts[record->size_a + record->size_b];
      ++step.tau;
      step.chi_num = forest.sum_sq();
      std::tie(step.largest, step.second) = top_two(counts);
    }
    return record;
  }
};

template <class NextEdge>
GraphProcessRun run_with_source(std::size_t n, std::uint64_t m_max, GraphRunOptions options, NextEdge next) {
  GraphProcessRun run;
  run.n = n;
  StepTracker tracker(n);
  run.steps.push_back(tracker.step);
  run.coupling_times.push_back(0);
  if (tracker.forest.component_count() == 1) run.connect_time = 0;
  for (std::uint64_t m = 0; m < m_max; ++m) {
    if (options.stop_at_connectivity && run.connect_time) break;
    auto record = tracker.apply(next());
    run.steps.push_back(tracker.step);
    if (record) {
      run.merges.push_back(*record);
      run.coupling_times.push_back(tracker.step.m);
      if (tracker.forest.component_count() == 1) run.connect_time = tracker.step.m;
    }
  }
  return run;
}

}  // namespace

const GraphStep& GraphProcess::advance() {
  const Edge e = permutation_.next();
  ++current_.m;
  current_.edge = e;
  current_.joined = !forest_.same_component(e.u, e.v);
  last_merge_.reset();
  if (current_.joined) {
    last_merge_ = forest_.merge(e.u, e.v);
    remove_size(last_merge_->size_a);
    remove_size(last_merge_->size_b);
    add_size(last_merge_->size_a + last_merge_->size_b);
    ++current_.tau;
    current_.chi_num = forest_.sum_sq();
    std::tie(current_.largest, current_.second) = top_two(size_count_);
  }
  return current_;
}

GraphProcessRun run_graph_process(std::size_t n, std::uint64_t m_max, Rng& rng, GraphRunOptions options) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "run_graph_process: n must be positive");
  const std::uint64_t total = choose2(n);
  m_max = std::min(m_max, total);
  const bool materialize = total <= EdgePermutation::kMaterializeLimit && m_max * 4 >= total;
  EdgePermutation permutation(n, rng, materialize);
  GraphProcessRun run = run_with_source(n, m_max, options, [&] { return permutation.next(); });
  run.seed = rng.seed();
  return run;
}

GraphProcessRun run_graph_process(std::size_t n, std::span<const Edge> order, GraphRunOptions options) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "run_graph_process: n must be positive");
  std::unordered_set<std::uint64_t> seen;
  for (const Edge& e : order) {
    if (e.u >= n || e.v >= n || e.u == e.v)
      throw CoalesceError(ErrorCode::InvalidArgument, "run_graph_process: invalid edge");
    if (!seen.insert(undirected_index(std::min(e.u, e.v), std::max(e.u, e.v))).second)
      throw CoalesceError(ErrorCode::InvalidArgument, "run_graph_process: repeated edge");
  }
  std::size_t i = 0;
  return run_with_source(n, order.size(), options, [&] { return order[i++]; });
}

MergeTrace extract_coupled_mc(const GraphProcessRun& run) {
  if (run.coupling_times.size() != run.n)
    throw CoalesceError(ErrorCode::TruncatedRun, "extract_coupled_mc: run stopped before connectivity");
  MergeTrace trace;
  trace.n = run.n;
  trace.kernel = KernelKind::Multiplicative;
  Forest forest(run.n);
  for (std::size_t k = 1; k < run.coupling_times.size(); ++k) {
    const Edge e = run.steps[run.coupling_times[k]].edge;
    trace.records.push_back(forest.merge(e.u, e.v));
  }
  return trace;
}

MergeTrace coupled_mc_trace(std::size_t n, Rng& rng) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "coupled_mc_trace: n must be positive");
  MergeTrace trace;
  trace.n = n;
  trace.kernel = KernelKind::Multiplicative;
  trace.records.reserve(n - 1);
  EdgePermutation permutation(n, rng);
  Forest forest(n);
  while (forest.component_count() > 1) {
    const Edge e = permutation.next();
    if (!forest.same_component(e.u, e.v)) trace.records.push_back(forest.merge(e.u, e.v));
  }
  return trace;
}

void write_trajectory_csv(std::ostream& out, const GraphProcessRun& run, std::uint64_t record_every) {
  if (record_every == 0) throw CoalesceError(ErrorCode::InvalidArgument, "record_every must be positive");
  out << "m,tau,chi_num,L,S\n";
  for (std::size_t m = 0; m < run.steps.size(); ++m) {
    if (m % record_every != 0 && m + 1 != run.steps.size()) continue;
    const GraphStep& s = run.steps[m];
    out << s.m << ',' << s.tau << ',' << s.chi_num << ',' << s.largest << ',' << s.second << '\n';
  }
}

std::vector<std::vector<Vertex>> SimpleGraph::adjacency() const {
  std::vector<std::vector<Vertex>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

SimpleGraph sample_gnp(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw CoalesceError(ErrorCode::InvalidArgument, "sample_gnp: p outside [0,1]");
  SimpleGraph graph;
  graph.n = n;
  const std::uint64_t total = choose2(n);
  if (p == 0.0) return graph;
  graph.edges.reserve(static_cast<std::size_t>(std::min<double>(static_cast<double>(total), p * total * 1.1 + 16)));
  std::uint64_t index = 0;
  while (true) {
    const std::uint64_t skip = rng.geometric_skip(p);
    if (skip >= total - index) break;
    index += skip;
    graph.edges.push_back(undirected_edge(index));
    if (++index == total) break;
  }
  return graph;
}

SimpleGraph sample_gm(std::size_t n, std::uint64_t m, Rng& rng) {
  const std::uint64_t total = choose2(n);
  if (m > total) throw CoalesceError(ErrorCode::InvalidArgument, "sample_gm: m exceeds C(n,2)");
  SimpleGraph graph;
  graph.n = n;
  EdgePermutation permutation(n, rng, total <= EdgePermutation::kMaterializeLimit && m * 4 >= total);
  graph.edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) graph.edges.push_back(permutation.next());
  return graph;
}

namespace {

Forest components_of(const SimpleGraph& graph) {
  Forest forest(graph.n);
  for (const Edge& e : graph.edges)
    if (!forest.same_component(e.u, e.v)) forest.merge(e.u, e.v);
  return forest;
}

}  // namespace

std::vector<std::uint64_t> component_sizes(const SimpleGraph& graph) { return components_of(graph).component_sizes(); }

std::uint64_t chi_numerator(const SimpleGraph& graph) { return components_of(graph).sum_sq(); }

ConditioningCheck edge_count_conditioning_check(std::size_t n, double p, std::uint64_t m, std::size_t reps,
                                                Rng& rng) {
  if (reps == 0) throw CoalesceError(ErrorCode::InvalidArgument, "conditioning check: reps must be positive");
  ConditioningCheck check;
  check.reps = reps;
  std::vector<double> conditioned, direct;
  conditioned.reserve(reps);
  direct.reserve(reps);
  const std::uint64_t draw_cap = std::uint64_t{1} << 32;
  while (conditioned.size() < reps) {
    if (++check.gnp_draws > draw_cap)
      throw CoalesceError(ErrorCode::InvalidArgument, "conditioning check: m is too unlikely under G(n,p)");
    SimpleGraph g = sample_gnp(n, p, rng);
    if (g.edges.size() == m) conditioned.push_back(static_cast<double>(chi_numerator(g)));
  }
  for (std::size_t i = 0; i < reps; ++i) direct.push_back(static_cast<double>(chi_numerator(sample_gm(n, m, rng))));
  const TestResult ks = ks_two_sample(std::move(conditioned), std::move(direct));
  check.ks_statistic = ks.statistic;
  check.p_value = ks.p_value;
  return check;
}

ExplorationResult explore(const SimpleGraph& graph, double p, Rng& rng, ExploreOptions options) {
  if (!(p >= 0.0 && p <= 1.0)) throw CoalesceError(ErrorCode::InvalidArgument, "explore: p outside [0,1]");
  const std::size_t n = graph.n;
  ExplorationResult result;
  if (n == 0) return result;

  const auto adj = graph.adjacency();
  const std::vector<Vertex> comp = components_of(graph).component_ids();

  // U as a swap-remove list with positions.
  std::vector<Vertex> undiscovered;
  std::vector<std::size_t> pos(n, SIZE_MAX);
  auto remove_u = [&](Vertex v) {
    const std::size_t i = pos[v];
    const Vertex last = undiscovered.back();
    undiscovered[i] = last;
    pos[last] = i;
    undiscovered.pop_back();
    pos[v] = SIZE_MAX;
  };
  for (Vertex v = 1; v < n; ++v) {
    pos[v] = undiscovered.size();
    undiscovered.push_back(v);
  }

  // D as a stack of batches; each batch shares one priority and is kept in
  // decreasing label order so the smallest label sits at the back.
  std::vector<std::vector<Vertex>> batches{{0}};
  std::vector<Vertex> explored_order;
  explored_order.reserve(n);

  const std::size_t cap = options.max_steps != 0 ? options.max_steps : (p == 0.0 ? n : SIZE_MAX);
  result.u_trajectory.push_back(undiscovered.size());
  std::size_t step = 0;
  while (explored_order.size() < n && step < cap) {
    std::vector<Vertex> found;
    if (!batches.empty()) {
      auto& top = batches.back();
      const Vertex v = top.back();
      top.pop_back();
      if (top.empty()) batches.pop_back();
      explored_order.push_back(v);
      for (Vertex w : adj[v])
        if (pos[w] != SIZE_MAX) found.push_back(w);
    } else {
      // Bin(U, p) by geometric skipping over the current list of U.
      const std::uint64_t size = undiscovered.size();
      std::uint64_t i = 0;
      while (true) {
        const std::uint64_t skip = rng.geometric_skip(p);
        if (skip >= size - i) break;
        i += skip;
        found.push_back(undiscovered[i]);
        if (++i == size) break;
      }
    }
    for (Vertex w : found) remove_u(w);
    if (!found.empty()) {
      std::sort(found.begin(), found.end(), std::greater<>());
      batches.push_back(std::move(found));
    }
    ++step;
    result.u_trajectory.push_back(undiscovered.size());
  }
  result.completed = explored_order.size() == n;

  // Sizes are per component in order of first exploration. A re-seeded batch
  // holding two vertices of one component can let another component's vertex
  // be explored in between, so a component is not always visited contiguously.
  std::vector<std::size_t> slot_of(n, SIZE_MAX);
  for (std::size_t i = 0; i < explored_order.size(); ++i) {
    const Vertex c = comp[explored_order[i]];
    if (i > 0 && c != comp[explored_order[i - 1]]) result.conclusion_times.push_back(i);
    if (slot_of[c] == SIZE_MAX) {
      slot_of[c] = result.component_sizes.size();
      result.component_sizes.push_back(0);
    }
    ++result.component_sizes[slot_of[c]];
  }
  if (!explored_order.empty()) result.conclusion_times.push_back(explored_order.size());

  if (!result.completed) {
    // Partly explored components are completed in place; components never
    // reached follow in order of their smallest label.
    std::vector<std::uint64_t> comp_size(n, 0);
    for (Vertex v = 0; v < n; ++v) ++comp_size[comp[v]];
    for (Vertex v = 0; v < n; ++v) {
      const Vertex c = comp[v];
      if (slot_of[c] == SIZE_MAX) {
        slot_of[c] = result.component_sizes.size();
        result.component_sizes.push_back(comp_size[c]);
      } else {
        result.component_sizes[slot_of[c]] = comp_size[c];
      }
    }
  }
  while (result.u_trajectory.size() < options.min_trajectory)
    result.u_trajectory.push_back(result.u_trajectory.back());
  return result;
}

ExplorationResult explore(std::size_t n, double p, Rng& rng, ExploreOptions options) {
  const SimpleGraph graph = sample_gnp(n, p, rng);
  return explore(graph, p, rng, options);
}

std::pair<std::uint64_t, std::uint64_t> two_largest(const std::vector<std::uint64_t>& sizes) {
  std::uint64_t l = 0, s = 0;
  for (auto x : sizes) {
    if (x > l) {
      s = l;
      l = x;
    } else if (x > s) {
      s = x;
    }
  }
  return {l, s};
}

bool susceptibility_bounds_check(const std::vector<std::uint64_t>& sizes) {
  BigInt n = 0, sum_sq = 0;
  for (auto x : sizes) {
    n += x;
    sum_sq += BigInt(x) * x;
  }
  if (n == 0) return true;
  const auto [l, s] = two_largest(sizes);
  // L^2/n <= sum_sq/n <= L^2/n + S  <=>  L^2 <= sum_sq <= L^2 + S n
  const BigInt l2 = BigInt(l) * l;
  return l2 <= sum_sq && sum_sq <= l2 + BigInt(s) * n;
}

bool susceptibility_bounds_check(const SimpleGraph& graph) {
  return susceptibility_bounds_check(component_sizes(graph));
}

Rational chi_increase_probability(std::uint64_t n, std::uint64_t chi_num, std::uint64_t m) {
  if (m >= choose2(n)) throw CoalesceError(ErrorCode::InvalidArgument, "chi_increase_probability: no edges remain");
  const BigInt n2 = BigInt(n) * n;
  // (1 - chi/n), chi = chi_num / n
  const Rational one_minus_chi(n2 - chi_num, n2);
  const Rational one_minus_density(n2 - n - 2 * BigInt(m), n2);
  return one_minus_chi / one_minus_density;
}

Rational chi_increase_probability_direct(const SimpleGraph& graph) {
  const std::uint64_t n = graph.n;
  const std::uint64_t m = graph.edges.size();
  if (m >= choose2(n)) throw CoalesceError(ErrorCode::InvalidArgument, "chi_increase_probability: no edges remain");
  const std::vector<Vertex> comp = components_of(graph).component_ids();
  std::unordered_set<std::uint64_t> present;
  for (const Edge& e : graph.edges) present.insert(undirected_index(std::min(e.u, e.v), std::max(e.u, e.v)));
  std::uint64_t cross = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i)
      if (comp[i] != comp[j] && !present.count(undirected_index(i, j))) ++cross;
  return Rational(BigInt(cross), BigInt(choose2(n) - m));
}

std::vector<double> chi_over_n_samples(std::size_t n, double c, std::size_t reps, std::uint64_t master_seed,
                                       unsigned threads) {
  const double p = std::min(1.0, c / static_cast<double>(n));
  return run_replicates<double>(reps, master_seed, threads, [&](Rng& rng, std::size_t) {
    const SimpleGraph g = sample_gnp(n, p, rng);
    return static_cast<double>(chi_numerator(g)) / (static_cast<double>(n) * static_cast<double>(n));
  });
}

}  // namespace coalesce
