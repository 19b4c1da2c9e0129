#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "coalesce/types.hpp"

namespace coalesce {

// One merge of two components. `step` is 1-based; u and v are the endpoints
// of the added edge (for rooted kernels u becomes the parent of v).
struct MergeRecord {
  std::size_t step = 0;
  Vertex u = 0;
  Vertex v = 0;
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  std::uint64_t pre_sum_sq = 0;
};

// Union-find forest over vertices 0..n-1 (union by size, path compression)
// keeping the sum of squared component sizes up to date at every merge.
// The edge at position i of edges() carries label i + 1.
class Forest {
 public:
  explicit Forest(std::size_t n);

  std::size_t size() const { return parent_.size(); }
  std::size_t component_count() const { return components_; }
  std::uint64_t sum_sq() const { return sum_sq_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Vertex find(Vertex x) const;
  bool same_component(Vertex a, Vertex b) const { return find(a) == find(b); }
  std::uint64_t component_size(Vertex x) const { return size_[find(x)]; }

  // Joins the components of u and v and appends {u, v} to edges().
  // Throws CoalesceError(SameComponentMerge) if they are already joined.
  MergeRecord merge(Vertex u, Vertex v);

  // sum_sq / n
  Rational susceptibility_exact() const;
  double susceptibility() const;

  // Number of unordered vertex pairs in distinct components: (n^2 - sum_sq) / 2.
  std::uint64_t mc_choice_count() const;

  // Sizes of all components, ordered by representative.
  std::vector<std::uint64_t> component_sizes() const;

  // Component id (representative) of every vertex.
  std::vector<Vertex> component_ids() const;

  // Recomputes the tracked aggregates from scratch. Used by tests and, in
  // debug builds, after every merge.
  bool verify_invariants() const;

 private:
  mutable std::vector<Vertex> parent_;
  std::vector<std::uint64_t> size_;
  std::vector<Edge> edges_;
  std::uint64_t sum_sq_ = 0;
  std::size_t components_ = 0;
};

inline constexpr Vertex kNoParent = ~Vertex{0};

// Rooted tree on vertices 0..n-1; parent[root] == kNoParent.
class RootedTree {
 public:
  // Validates the parent array: exactly one root, no cycles.
  static RootedTree from_parents(std::vector<Vertex> parent);
  // Orients an undirected tree away from `root`.
  static RootedTree from_edges(std::size_t n, std::span<const Edge> edges, Vertex root);

  std::size_t size() const { return parent_.size(); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  const std::vector<Vertex>& parents() const { return parent_; }
  std::vector<std::vector<Vertex>> children() const;

 private:
  RootedTree(std::vector<Vertex> parent, Vertex root) : parent_(std::move(parent)), root_(root) {}

  std::vector<Vertex> parent_;
  Vertex root_ = 0;
};

// Edge count on the path from each vertex to the root.
std::vector<std::uint64_t> root_distances(const RootedTree& tree);
std::uint64_t height(const RootedTree& tree);

// Plain-text forest export:
//   n=<n> root=<r|none>
//   u v label        (one line per edge, 1-based vertices, label = addition order)
struct ForestExport {
  std::size_t n = 0;
  std::optional<Vertex> root;
  std::vector<Edge> edges;  // 0-based, in label order
};

void write_forest(std::ostream& out, const ForestExport& forest);
ForestExport read_forest(std::istream& in);

}  // namespace coalesce
