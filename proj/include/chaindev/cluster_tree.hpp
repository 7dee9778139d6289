#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chaindev/chain_distance.hpp"
#include "chaindev/disjoint_sets.hpp"

namespace chaindev {

using NodeId = std::size_t;

struct ClusterNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;  // ascending by smallest member index
  double r = 0.0;                // chain diameter of the cluster
  std::size_t level = 0;         // edges from the root
  std::size_t first = 0;         // member range [first, last) in ClusterTree::order()
  std::size_t last = 0;

  std::size_t child_count() const { return children.size(); }
  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const ClusterNode&, const ClusterNode&) = default;
};

/// Hierarchy of clusters of a finite ultrametric space.
///
/// The root holds all points and r = max chain distance; the children of a
/// node are the classes of the relation c(x, y) < r(node). Leaves are single
/// points with r = 0. Node ids are breadth-first discovery order and the root
/// is node 0. The members of every node are a contiguous slice of order().
class ClusterTree {
 public:
  NodeId root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t point_count() const { return leaf_of_.size(); }

  const ClusterNode& node(NodeId id) const { return nodes_.at(id); }
  std::span<const ClusterNode> nodes() const { return nodes_; }

  /// Points in depth-first leaf order.
  std::span<const std::size_t> order() const { return order_; }

  std::span<const std::size_t> members(NodeId id) const
  {
    const auto& v = nodes_.at(id);
    return std::span<const std::size_t>(order_).subspan(v.first, v.last - v.first);
  }

  NodeId leaf_of(std::size_t point) const { return leaf_of_.at(point); }

  friend bool operator==(const ClusterTree&, const ClusterTree&) = default;

 private:
  friend ClusterTree build_tree(std::size_t, std::span<const Edge>);

  std::vector<ClusterNode> nodes_;
  std::vector<std::size_t> order_;
  std::vector<NodeId> leaf_of_;
};

/// Builds the tree from an ascending single-linkage merge sequence (a
/// spanning tree of n points sorted by edge_less). Merges at the same height
/// inside one component collapse into a single node with several children.
inline ClusterTree build_tree(std::size_t n, std::span<const Edge> merges)
{
  if (n == 0) throw std::invalid_argument("cluster tree needs at least one point");
  if (merges.size() != n - 1) throw std::invalid_argument("merge sequence must have n - 1 edges");

  struct Proto {
    double r = 0.0;
    std::vector<std::size_t> kids;
    std::size_t min_member = 0;
  };
  std::vector<Proto> protos(n);
  for (std::size_t i = 0; i < n; ++i) protos[i].min_member = i;

  DisjointSets sets(n);
  std::vector<std::size_t> top(n);
  for (std::size_t i = 0; i < n; ++i) top[i] = i;

  double previous = 0.0;
  for (const Edge& e : merges) {
    if (!(e.weight > 0.0)) throw std::invalid_argument("merge heights must be positive");
    if (e.weight < previous) throw std::invalid_argument("merge sequence must be ascending");
    previous = e.weight;
    const std::size_t ra = sets.find(e.i);
    const std::size_t rb = sets.find(e.j);
    if (ra == rb) throw std::invalid_argument("merge sequence contains a cycle");
    std::size_t ta = top[ra];
    std::size_t tb = top[rb];
    const double h = e.weight;

    std::size_t merged;
    if (protos[ta].r == h && protos[tb].r == h) {
      auto& kids = protos[ta].kids;
      kids.insert(kids.end(), protos[tb].kids.begin(), protos[tb].kids.end());
      protos[tb].kids.clear();
      merged = ta;
    } else if (protos[ta].r == h) {
      protos[ta].kids.push_back(tb);
      merged = ta;
    } else if (protos[tb].r == h) {
      protos[tb].kids.push_back(ta);
      merged = tb;
    } else {
      protos.push_back(Proto{h, {ta, tb}, 0});
      merged = protos.size() - 1;
    }
    protos[merged].min_member = std::min(protos[ta].min_member, protos[tb].min_member);
    sets.unite(ra, rb);
    top[sets.find(ra)] = merged;
  }
  const std::size_t proto_root = top[sets.find(0)];

  ClusterTree tree;
  tree.order_.resize(n);
  tree.leaf_of_.resize(n);

  // Breadth-first id assignment.
  std::vector<std::size_t> proto_of;
  proto_of.push_back(proto_root);
  tree.nodes_.push_back(ClusterNode{});
  for (std::size_t id = 0; id < tree.nodes_.size(); ++id) {
    auto kids = protos[proto_of[id]].kids;
    std::sort(kids.begin(), kids.end(),
              [&](std::size_t a, std::size_t b) { return protos[a].min_member < protos[b].min_member; });
    ClusterNode& v = tree.nodes_[id];
    v.id = id;
    v.r = protos[proto_of[id]].r;
    for (std::size_t k : kids) {
      const NodeId child = tree.nodes_.size();
      tree.nodes_[id].children.push_back(child);
      ClusterNode c;
      c.parent = id;
      c.level = tree.nodes_[id].level + 1;
      proto_of.push_back(k);
      tree.nodes_.push_back(std::move(c));
    }
  }

  // Cluster sizes bottom-up, then contiguous member ranges top-down.
  std::vector<std::size_t> size(tree.nodes_.size(), 0);
  for (std::size_t id = tree.nodes_.size(); id-- > 0;) {
    const auto& v = tree.nodes_[id];
    if (v.is_leaf()) {
      size[id] = 1;
    } else {
      for (NodeId c : v.children) size[id] += size[c];
    }
  }
  tree.nodes_[0].first = 0;
  tree.nodes_[0].last = n;
  for (auto& v : tree.nodes_) {
    std::size_t offset = v.first;
    for (NodeId c : v.children) {
      tree.nodes_[c].first = offset;
      tree.nodes_[c].last = offset + size[c];
      offset += size[c];
    }
    if (v.is_leaf()) {
      const std::size_t point = protos[proto_of[v.id]].min_member;
      tree.order_[v.first] = point;
      tree.leaf_of_[point] = v.id;
    }
  }
  return tree;
}

inline ClusterTree build_tree(const ChainMatrix& c) { return build_tree(c.size(), c.merges()); }

/// Same tree as build_tree(chain_distance(space)) without the n×n matrix.
inline ClusterTree build_tree(const FiniteMetricSpace& space)
{
  require_valid(space);
  const auto merges = minimum_spanning_edges(space);
  return build_tree(space.size(), merges);
}

/// r(v) for the lowest common ancestor v of the leaves of points i and j;
/// equals the chain distance c(i, j).
inline double lca_distance(const ClusterTree& tree, std::size_t i, std::size_t j)
{
  if (i >= tree.point_count() || j >= tree.point_count()) throw std::out_of_range("unknown point index");
  NodeId a = tree.leaf_of(i);
  NodeId b = tree.leaf_of(j);
  while (tree.node(a).level > tree.node(b).level) a = *tree.node(a).parent;
  while (tree.node(b).level > tree.node(a).level) b = *tree.node(b).parent;
  while (a != b) {
    a = *tree.node(a).parent;
    b = *tree.node(b).parent;
  }
  return tree.node(a).r;
}

}  // namespace chaindev
