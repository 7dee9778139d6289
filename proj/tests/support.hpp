#pragma once

// Shared generators and independent oracles for the test suites.

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "chaindev/chaindev.hpp"

namespace chaindev::testing {

/// Random symmetric dissimilarity. With `ties`, entries are drawn from a
/// handful of integers so equal weights are common.
inline FiniteMetricSpace random_semimetric(std::mt19937_64& rng, std::size_t n, bool ties)
{
  std::uniform_int_distribution<int> small(1, 4);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = ties ? small(rng) : unit(rng);
  }
  return FiniteMetricSpace::from_matrix(std::move(m));
}

inline FiniteMetricSpace random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, Metric metric)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * dim);
  for (double& x : coords) x = unit(rng);
  return FiniteMetricSpace::from_points(FiniteMetricSpace::index_labels(n), std::move(coords), dim, metric);
}

/// Points of the real line with d(s, t) = |s - t|.
inline FiniteMetricSpace line_space(std::vector<double> xs)
{
  const std::size_t n = xs.size();
  return FiniteMetricSpace::from_points(FiniteMetricSpace::index_labels(n), std::move(xs), 1, Metric::euclidean);
}

inline FiniteMetricSpace scaled(const FiniteMetricSpace& space, double factor)
{
  Matrix m = space.dense();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) m(i, j) *= factor;
  }
  return FiniteMetricSpace::from_matrix(space.labels(), std::move(m));
}

/// Point perm[k] of the result is point k of the input.
inline FiniteMetricSpace permuted(const FiniteMetricSpace& space, const std::vector<std::size_t>& perm)
{
  const Matrix d = space.dense();
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) m(perm[i], perm[j]) = d(i, j);
  }
  return FiniteMetricSpace::from_matrix(std::move(m));
}

/// Full ascending Kruskal sweep over all n(n-1)/2 edges with (w, i, j) order.
inline std::vector<Edge> kruskal_oracle(const Matrix& d)
{
  std::vector<Edge> all;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) all.push_back({i, j, d(i, j)});
  }
  std::sort(all.begin(), all.end(), edge_less);
  DisjointSets sets(d.size());
  std::vector<Edge> tree;
  for (const Edge& e : all) {
    if (sets.unite(e.i, e.j)) tree.push_back(e);
  }
  return tree;
}

/// Cluster tree straight from the definition: r = c-diameter of the cluster,
/// children = classes of c(x, y) < r, recursing until r = 0.
struct OracleNode {
  double r = 0.0;
  std::vector<std::size_t> members;  // ascending
  std::vector<OracleNode> children;  // ascending by smallest member
};

inline OracleNode definition_tree(const Matrix& c, std::vector<std::size_t> members)
{
  OracleNode node;
  node.members = members;
  for (std::size_t a : members) {
    for (std::size_t b : members) node.r = std::max(node.r, c(a, b));
  }
  if (node.r == 0.0) return node;
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t x : members) {
    bool placed = false;
    for (auto& cls : classes) {
      if (c(cls.front(), x) < node.r) {
        cls.push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({x});
  }
  for (auto& cls : classes) node.children.push_back(definition_tree(c, cls));
  return node;
}

inline OracleNode definition_tree(const Matrix& c)
{
  std::vector<std::size_t> all(c.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return definition_tree(c, all);
}

inline bool same_tree(const ClusterTree& tree, NodeId id, const OracleNode& oracle)
{
  const auto& v = tree.node(id);
  if (v.r != oracle.r || v.children.size() != oracle.children.size()) return false;
  auto members = std::vector<std::size_t>(tree.members(id).begin(), tree.members(id).end());
  std::sort(members.begin(), members.end());
  if (members != oracle.members) return false;
  for (std::size_t k = 0; k < v.children.size(); ++k) {
    if (!same_tree(tree, v.children[k], oracle.children[k])) return false;
  }
  return true;
}

inline std::vector<double> sorted_weights(const std::vector<Edge>& edges)
{
  std::vector<double> w;
  for (const auto& e : edges) w.push_back(e.weight);
  std::sort(w.begin(), w.end());
  return w;
}

/// {r(v) with multiplicity n(v) - 1}, sorted.
inline std::vector<double> node_gap_multiset(const ClusterTree& tree)
{
  std::vector<double> w;
  for (const auto& v : tree.nodes()) {
    for (std::size_t k = 1; k < v.child_count(); ++k) w.push_back(v.r);
  }
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace chaindev::testing
