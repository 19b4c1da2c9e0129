#include "coalesce/forest.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace coalesce {

Forest::Forest(std::size_t n) : parent_(n), size_(n, 1), sum_sq_(n), components_(n) {
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "forest needs n >= 1");
  std::iota(parent_.begin(), parent_.end(), Vertex{0});
  edges_.reserve(n - 1);
}

Vertex Forest::find(Vertex x) const {
  Vertex root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const Vertex next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

MergeRecord Forest::merge(Vertex u, Vertex v) {
  if (u >= size() || v >= size()) {
    throw CoalesceError(ErrorCode::InvalidArgument, "merge: vertex out of range");
  }
  Vertex ru = find(u);
  Vertex rv = find(v);
  if (ru == rv) {
    throw CoalesceError(ErrorCode::SameComponentMerge,
                        "merge: vertices " + std::to_string(u + 1) + " and " +
                            std::to_string(v + 1) + " are already in one component");
  }
  MergeRecord record;
  record.step = edges_.size() + 1;
  record.u = u;
  record.v = v;
  record.size_a = size_[ru];
  record.size_b = size_[rv];
  record.pre_sum_sq = sum_sq_;

  if (size_[ru] < size_[rv]) std::swap(ru, rv);
  parent_[rv] = ru;
  size_[ru] += size_[rv];
  sum_sq_ += 2 * record.size_a * record.size_b;
  --components_;
  edges_.push_back({u, v});
#ifdef COALESCE_DEBUG_INVARIANTS
  if (!verify_invariants()) throw std::logic_error("forest invariants violated after merge");
#endif
  return record;
}

Rational Forest::susceptibility_exact() const {
  return Rational(BigInt(sum_sq_), BigInt(size()));
}

double Forest::susceptibility() const {
  return static_cast<double>(sum_sq_) / static_cast<double>(size());
}

std::uint64_t Forest::mc_choice_count() const {
  const std::uint64_t n = size();
  return (n * n - sum_sq_) / 2;
}

std::vector<std::uint64_t> Forest::component_sizes() const {
  std::vector<std::uint64_t> sizes;
  sizes.reserve(components_);
  for (Vertex v = 0; v < size(); ++v) {
    if (parent_[v] == v) sizes.push_back(size_[v]);
  }
  return sizes;
}

std::vector<Vertex> Forest::component_ids() const {
  std::vector<Vertex> ids(size());
  for (Vertex v = 0; v < size(); ++v) ids[v] = find(v);
  return ids;
}

bool Forest::verify_invariants() const {
  std::vector<std::uint64_t> counted(size(), 0);
  for (Vertex v = 0; v < size(); ++v) ++counted[find(v)];
  std::uint64_t total = 0;
  std::uint64_t squares = 0;
  std::size_t roots = 0;
  for (Vertex v = 0; v < size(); ++v) {
    if (parent_[v] != v) continue;
    ++roots;
    if (counted[v] != size_[v]) return false;
    total += size_[v];
    squares += size_[v] * size_[v];
  }
  return total == size() && squares == sum_sq_ && roots == components_ &&
         components_ + edges_.size() == size();
}

RootedTree RootedTree::from_parents(std::vector<Vertex> parent) {
  const std::size_t n = parent.size();
  if (n == 0) throw CoalesceError(ErrorCode::InvalidArgument, "rooted tree needs n >= 1");
  std::optional<Vertex> root;
  for (Vertex v = 0; v < n; ++v) {
    if (parent[v] == kNoParent) {
      if (root) throw CoalesceError(ErrorCode::InvalidArgument, "rooted tree has two roots");
      root = v;
    } else if (parent[v] >= n || parent[v] == v) {
      throw CoalesceError(ErrorCode::InvalidArgument, "rooted tree: bad parent entry");
    }
  }
  if (!root) throw CoalesceError(ErrorCode::InvalidArgument, "rooted tree has no root");
  // 0 = unvisited, 1 = on current path, 2 = reaches root
  std::vector<std::uint8_t> state(n, 0);
  state[*root] = 2;
  std::vector<Vertex> path;
  for (Vertex v = 0; v < n; ++v) {
    Vertex x = v;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = parent[x];
    }
    if (state[x] == 1) throw CoalesceError(ErrorCode::InvalidArgument, "rooted tree has a cycle");
    for (Vertex y : path) state[y] = 2;
    path.clear();
  }
  return RootedTree(std::move(parent), *root);
}

RootedTree RootedTree::from_edges(std::size_t n, std::span<const Edge> edges, Vertex root) {
  if (edges.size() + 1 != n || root >= n) {
    throw CoalesceError(ErrorCode::InvalidArgument, "from_edges: need n - 1 edges and a valid root");
  }
  std::vector<std::vector<Vertex>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<Vertex> parent(n, kNoParent);
  std::vector<bool> seen(n, false);
  std::vector<Vertex> queue{root};
  seen[root] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex y : adj[x]) {
      if (seen[y]) continue;
      seen[y] = true;
      parent[y] = x;
      queue.push_back(y);
    }
  }
  if (queue.size() != n) throw CoalesceError(ErrorCode::InvalidArgument, "from_edges: not spanning");
  return RootedTree(std::move(parent), root);
}

std::vector<std::vector<Vertex>> RootedTree::children() const {
  std::vector<std::vector<Vertex>> kids(size());
  for (Vertex v = 0; v < size(); ++v) {
    if (parent_[v] != kNoParent) kids[parent_[v]].push_back(v);
  }
  return kids;
}

std::vector<std::uint64_t> root_distances(const RootedTree& tree) {
  const auto kids = tree.children();
  std::vector<std::uint64_t> depth(tree.size(), 0);
  std::vector<Vertex> queue{tree.root()};
  queue.reserve(tree.size());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex y : kids[x]) {
      depth[y] = depth[x] + 1;
      queue.push_back(y);
    }
  }
  return depth;
}

std::uint64_t height(const RootedTree& tree) {
  const auto depth = root_distances(tree);
  return *std::max_element(depth.begin(), depth.end());
}

void write_forest(std::ostream& out, const ForestExport& forest) {
  out << "n=" << forest.n << " root=";
  if (forest.root) {
    out << (*forest.root + 1);
  } else {
    out << "none";
  }
  out << '\n';
  std::size_t label = 1;
  for (const Edge& e : forest.edges) out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << label++ << '\n';
}

ForestExport read_forest(std::istream& in) {
  auto fail = [](const std::string& why) {
    return CoalesceError(ErrorCode::InvalidArgument, "read_forest: " + why);
  };
  std::string header;
  if (!std::getline(in, header)) throw fail("missing header");
  std::istringstream hs(header);
  std::string n_field, root_field;
  hs >> n_field >> root_field;
  if (n_field.rfind("n=", 0) != 0 || root_field.rfind("root=", 0) != 0) throw fail("bad header");
  ForestExport result;
  result.n = std::stoull(n_field.substr(2));
  const std::string root_value = root_field.substr(5);
  if (root_value != "none") {
    const auto r = std::stoull(root_value);
    if (r < 1 || r > result.n) throw fail("root out of range");
    result.root = static_cast<Vertex>(r - 1);
  }
  std::uint64_t u = 0, v = 0, label = 0;
  while (in >> u >> v >> label) {
    if (u < 1 || v < 1 || u > result.n || v > result.n) throw fail("vertex out of range");
    if (label != result.edges.size() + 1) throw fail("labels must be 1, 2, ... in order");
    result.edges.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)});
  }
  return result;
}

}  // namespace coalesce
