#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "chaindev/disjoint_sets.hpp"
#include "chaindev/error.hpp"
#include "chaindev/matrix.hpp"
#include "chaindev/metric_space.hpp"

namespace chaindev {

/// Undirected weighted edge with i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Strict total order on edges: weight, then (i, j) lexicographically.
inline bool edge_less(const Edge& a, const Edge& b)
{
  return std::tie(a.weight, a.i, a.j) < std::tie(b.weight, b.i, b.j);
}

/// Minimum spanning tree of the complete graph on n vertices with edge
/// weights dist(i, j), returned in ascending edge_less order.
///
/// Dense Prim, O(n²) time and O(n) memory. Because edge_less is a strict
/// total order the tree is unique, so the result is the same edge set an
/// ascending Kruskal sweep with lexicographic tie-breaking selects.
template <class DistanceFn>
std::vector<Edge> minimum_spanning_edges(std::size_t n, DistanceFn&& dist)
{
  std::vector<Edge> tree;
  if (n < 2) return tree;
  tree.reserve(n - 1);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Edge> best(n, Edge{0, 0, inf});
  std::vector<bool> in_tree(n, false);

  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Edge candidate{std::min(current, v), std::max(current, v), dist(current, v)};
      if (edge_less(candidate, best[v])) best[v] = candidate;
      if (next == n || edge_less(best[v], best[next])) next = v;
    }
    in_tree[next] = true;
    tree.push_back(best[next]);
    current = next;
  }
  std::sort(tree.begin(), tree.end(), edge_less);
  return tree;
}

inline std::vector<Edge> minimum_spanning_edges(const FiniteMetricSpace& space)
{
  return minimum_spanning_edges(space.size(), [&](std::size_t i, std::size_t j) { return space.distance(i, j); });
}

inline std::vector<Edge> minimum_spanning_edges(const Matrix& m)
{
  return minimum_spanning_edges(m.size(), [&](std::size_t i, std::size_t j) { return m(i, j); });
}

class ChainMatrix;
ChainMatrix chain_distance(const FiniteMetricSpace& space);

/// The chain (minimax path) distance matrix of a finite space.
///
/// Always ultrametric: instances come from chain_distance() or from
/// from_ultrametric(), which rejects anything else. Entries are bit-identical
/// copies of input distances. merges() is the ascending single-linkage merge
/// sequence (the minimum spanning tree) that generated the matrix.
class ChainMatrix {
 public:
  /// Adopts an ultrametric matrix. Throws ValidationError when the matrix is
  /// not a valid dissimilarity or violates the strong triangle inequality.
  static ChainMatrix from_ultrametric(Matrix m)
  {
    const auto space = FiniteMetricSpace::from_matrix(std::move(m));
    require_valid(space);
    ChainMatrix c = chain_distance(space);
    // The subdominant ultrametric equals the input iff the input is ultrametric.
    if (!(c.matrix_ == space.dense())) throw ValidationError("matrix is not ultrametric");
    return c;
  }

  std::size_t size() const { return matrix_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }
  const Matrix& matrix() const { return matrix_; }
  const std::vector<Edge>& merges() const { return merges_; }

  double max_entry() const { return merges_.empty() ? 0.0 : merges_.back().weight; }

 private:
  ChainMatrix(Matrix m, std::vector<Edge> merges) : matrix_(std::move(m)), merges_(std::move(merges)) {}
  friend ChainMatrix chain_distance(const FiniteMetricSpace& space);

  Matrix matrix_;
  std::vector<Edge> merges_;
};

/// c(i, j) = min over chains i = p0, ..., pm = j of max d(p_k, p_{k+1}).
///
/// Sweeps the minimum spanning edges in ascending order with union-find; an
/// edge that merges components A and B assigns its weight to every pair in
/// A × B. Throws ValidationError on an invalid space.
inline ChainMatrix chain_distance(const FiniteMetricSpace& space)
{
  require_valid(space);
  const std::size_t n = space.size();
  auto merges = minimum_spanning_edges(space);

  Matrix c(n);
  DisjointSets sets(n);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  for (const Edge& e : merges) {
    std::size_t a = sets.find(e.i);
    std::size_t b = sets.find(e.j);
    for (std::size_t x : members[a]) {
      for (std::size_t y : members[b]) c(x, y) = c(y, x) = e.weight;
    }
    sets.unite(a, b);
    const std::size_t root = sets.find(a);
    const std::size_t other = root == a ? b : a;
    members[root].insert(members[root].end(), members[other].begin(), members[other].end());
    members[other].clear();
    members[other].shrink_to_fit();
  }
  return ChainMatrix(std::move(c), std::move(merges));
}

inline constexpr std::size_t kBruteForceMaxPoints = 10;

/// Minimax chain value by exhaustive enumeration of simple paths.
/// Test oracle only; throws std::invalid_argument for n > 10.
inline double brute_force_chain_distance(const FiniteMetricSpace& space, std::size_t i, std::size_t j)
{
  const std::size_t n = space.size();
  if (n > kBruteForceMaxPoints) throw std::invalid_argument("brute force limited to 10 points");
  if (i >= n || j >= n) throw std::out_of_range("point index out of range");
  if (i == j) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> used(n, false);
  auto walk = [&](auto&& self, std::size_t at, double bottleneck) -> void {
    if (at == j) {
      best = std::min(best, bottleneck);
      return;
    }
    for (std::size_t next = 0; next < n; ++next) {
      if (used[next]) continue;
      used[next] = true;
      self(self, next, std::max(bottleneck, space.distance(at, next)));
      used[next] = false;
    }
  };
  used[i] = true;
  walk(walk, i, 0.0);
  return best;
}

/// Exact strong triangle inequality check over all triples.
inline bool is_ultrametric(const Matrix& m)
{
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double mij = m(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (m(i, k) > std::max(mij, m(j, k))) return false;
      }
    }
  }
  return true;
}

/// Chain distance inside a finite subset of the real line: the longest gap
/// between consecutive members lying between s and t.
///
/// `sorted` must be ascending; s and t must be members (exact match),
/// otherwise std::invalid_argument.
inline double gap_chain_distance(std::span<const double> sorted, double s, double t)
{
  auto locate = [&](double v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    if (it == sorted.end() || *it != v) throw std::invalid_argument("value is not a member of the set");
    return static_cast<std::size_t>(it - sorted.begin());
  };
  std::size_t a = locate(s);
  std::size_t b = locate(t);
  if (a > b) std::swap(a, b);
  double widest = 0.0;
  for (std::size_t k = a; k < b; ++k) widest = std::max(widest, sorted[k + 1] - sorted[k]);
  return widest;
}

}  // namespace chaindev
