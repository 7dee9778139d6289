#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "chaindev/chain_distance.hpp"
#include "chaindev/cluster_tree.hpp"
#include "chaindev/disjoint_sets.hpp"

namespace chaindev {

struct WidthTerm {
  NodeId node = 0;
  double term = 0.0;  // r(v) * (n(v) - 1)
};

struct WidthReport {
  double width = 0.0;
  std::vector<WidthTerm> per_node_terms;  // internal nodes only, id order
};

/// w = Σ r(v)(n(v) − 1) over all nodes of the tree.
inline WidthReport width(const ClusterTree& tree)
{
  WidthReport report;
  for (const auto& v : tree.nodes()) {
    if (v.is_leaf()) continue;
    const double term = v.r * static_cast<double>(v.child_count() - 1);
    report.per_node_terms.push_back({v.id, term});
    report.width += term;
  }
  return report;
}

/// Width of the subtree under every node, indexed by node id.
inline std::vector<double> subtree_widths(const ClusterTree& tree)
{
  std::vector<double> w(tree.node_count(), 0.0);
  for (std::size_t id = tree.node_count(); id-- > 0;) {
    const auto& v = tree.node(id);
    if (v.is_leaf()) continue;
    double sum = v.r * static_cast<double>(v.child_count() - 1);
    for (NodeId c : v.children) sum += w[c];
    w[id] = sum;
  }
  return w;
}

/// A set of identification pairs and their total length.
struct DisCertificate {
  std::vector<Edge> pairs;
  double total = 0.0;
};

/// Minimum spanning tree of the space as a disconnectivity certificate:
/// identifying its n − 1 pairs connects the space at minimal total cost.
inline DisCertificate mst_weight(const FiniteMetricSpace& space)
{
  require_valid(space);
  DisCertificate cert;
  cert.pairs = minimum_spanning_edges(space);
  for (const Edge& e : cert.pairs) cert.total += e.weight;
  return cert;
}

/// True iff identifying the pairs leaves a single component.
inline bool connects(std::size_t n, const std::vector<Edge>& pairs)
{
  if (n == 0) return false;
  DisjointSets sets(n);
  for (const Edge& e : pairs) {
    if (e.i >= n || e.j >= n) return false;
    sets.unite(e.i, e.j);
  }
  return sets.components() == 1;
}

struct WidthDisReport {
  double width = 0.0;
  double mst_total = 0.0;
  double difference = 0.0;
  bool pass = false;
};

inline constexpr double kCrossPipelineTolerance = 1e-9;

/// Width of the cluster tree against the MST weight; passes when they agree
/// within 1e-9 · max(1, width).
inline WidthDisReport check_width_equals_dis(const FiniteMetricSpace& space)
{
  WidthDisReport report;
  report.width = width(build_tree(chain_distance(space))).width;
  report.mst_total = mst_weight(space).total;
  report.difference = std::abs(report.width - report.mst_total);
  report.pass = report.difference <= kCrossPipelineTolerance * std::max(1.0, report.width);
  return report;
}

}  // namespace chaindev
