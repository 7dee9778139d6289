#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaindev/chain_distance.hpp"
#include "chaindev/cluster_tree.hpp"
#include "chaindev/width.hpp"

namespace chaindev {

/// Removed open interval (left, left + length) between two sibling clusters.
struct Gap {
  NodeId node = 0;
  double left = 0.0;
  double length = 0.0;
};

/// A map from points to the real line that preserves chain distance.
struct Development {
  std::vector<double> coords;  // indexed by point
  double origin = 0.0;
  double width = 0.0;
  std::vector<Gap> gaps;  // left to right

  double diameter() const
  {
    if (coords.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
    return *hi - *lo;
  }
};

/// Lays the tree out on [0, w]. Each internal node v splits its interval into
/// the child intervals (lengths = subtree widths) separated by n(v) − 1 gaps
/// of length r(v); leaves collapse to a point.
///
/// `arrange(node, children)` may permute the child order of each node in
/// place; any arrangement yields a valid development of the same diameter.
template <class Arrange>
Development build_development(const ClusterTree& tree, Arrange&& arrange)
{
  const auto widths = subtree_widths(tree);
  Development dev;
  dev.coords.assign(tree.point_count(), 0.0);
  dev.width = widths[tree.root()];

  std::vector<std::pair<NodeId, double>> stack{{tree.root(), dev.origin}};
  std::vector<NodeId> children;
  while (!stack.empty()) {
    auto [id, left] = stack.back();
    stack.pop_back();
    const auto& v = tree.node(id);
    if (v.is_leaf()) {
      dev.coords[tree.members(id).front()] = left;
      continue;
    }
    children = v.children;
    arrange(v, children);
    double pos = left;
    for (std::size_t k = 0; k < children.size(); ++k) {
      stack.emplace_back(children[k], pos);
      pos += widths[children[k]];
      if (k + 1 < children.size()) {
        dev.gaps.push_back({id, pos, v.r});
        pos += v.r;
      }
    }
  }
  std::sort(dev.gaps.begin(), dev.gaps.end(), [](const Gap& a, const Gap& b) { return a.left < b.left; });
  return dev;
}

inline Development build_development(const ClusterTree& tree)
{
  return build_development(tree, [](const ClusterNode&, std::vector<NodeId>&) {});
}

inline constexpr double kDevelopmentTolerance = 1e-9;

struct DevelopmentCheck {
  bool pass = false;
  std::size_t pairs_checked = 0;
  double max_error = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  std::optional<std::pair<std::size_t, std::size_t>> collision;
  double diameter = 0.0;
  double width = 0.0;
  double excess = 0.0;  // diameter - width, meaningful when pass
  std::string message;
};

namespace detail {

/// Indices sorted by coordinate, ties by index.
inline std::vector<std::size_t> coordinate_order(std::span<const double> coords)
{
  std::vector<std::size_t> order(coords.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coords[a] < coords[b] || (coords[a] == coords[b] && a < b);
  });
  return order;
}

/// Checks shape, finiteness and injectivity; fills `check` on failure.
inline bool admissible_coords(std::size_t n, std::span<const double> coords, const std::vector<std::size_t>& order,
                              DevelopmentCheck& check)
{
  if (coords.size() != n) {
    check.message = "expected " + std::to_string(n) + " coordinates, got " + std::to_string(coords.size());
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(coords[i])) {
      check.message = "non-finite coordinate for point " + std::to_string(i);
      return false;
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (coords[order[k]] == coords[order[k - 1]]) {
      check.collision = std::minmax(order[k - 1], order[k]);
      check.message = "points " + std::to_string(check.collision->first) + " and " +
                      std::to_string(check.collision->second) + " share a coordinate";
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Compares the chain distance of every pair with the chain distance of
/// their images on the line (longest gap in between). Passes when every pair
/// agrees within 1e-9 absolute. O(n²) time, O(n) extra memory.
inline DevelopmentCheck verify_development(const FiniteMetricSpace& space, std::span<const double> coords)
{
  require_valid(space);
  const std::size_t n = space.size();
  DevelopmentCheck check;
  const auto order = detail::coordinate_order(coords);
  if (!detail::admissible_coords(n, coords, order, check)) return check;

  const auto mst = minimum_spanning_edges(space);
  check.width = width(build_tree(n, mst)).width;
  check.diameter = n == 0 ? 0.0 : coords[order.back()] - coords[order.front()];

  std::vector<std::vector<std::pair<std::size_t, double>>> adjacent(n);
  for (const Edge& e : mst) {
    adjacent[e.i].emplace_back(e.j, e.weight);
    adjacent[e.j].emplace_back(e.i, e.weight);
  }

  // Chain distance from a source = largest edge on the spanning tree path.
  std::vector<double> chain(n);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> parent(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t s = order[p];
    chain[s] = 0.0;
    parent[s] = s;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (auto [v, w] : adjacent[u]) {
        if (v == parent[u]) continue;
        parent[v] = u;
        chain[v] = std::max(chain[u], w);
        stack.push_back(v);
      }
    }
    double widest = 0.0;
    for (std::size_t q = p + 1; q < n; ++q) {
      widest = std::max(widest, coords[order[q]] - coords[order[q - 1]]);
      const double err = std::abs(widest - chain[order[q]]);
      ++check.pairs_checked;
      if (err > check.max_error) {
        check.max_error = err;
        check.worst_pair = std::minmax(s, order[q]);
      }
    }
  }
  check.pass = check.max_error <= kDevelopmentTolerance;
  if (check.pass) {
    check.excess = check.diameter - check.width;
  } else {
    check.message = "chain distance mismatch at pair (" + std::to_string(check.worst_pair->first) + "," +
                    std::to_string(check.worst_pair->second) + ")";
  }
  return check;
}

struct OrderingCheck {
  bool pass = false;
  std::size_t triples_checked = 0;
  std::optional<std::array<std::size_t, 3>> failing;  // point indices in coordinate order
  std::string message;
};

/// With points enumerated by coordinate as x1, ..., xn, checks
/// c(xi, xk) = max(c(xi, xj), c(xj, xk)) for all i < j < k, exactly.
inline OrderingCheck tv_check(const FiniteMetricSpace& space, std::span<const double> coords)
{
  OrderingCheck check;
  const std::size_t n = space.size();
  if (coords.size() != n) {
    check.message = "coordinate count does not match the space";
    return check;
  }
  const auto order = detail::coordinate_order(coords);
  const auto c = chain_distance(space);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double ab = c(order[a], order[b]);
      for (std::size_t k = b + 1; k < n; ++k) {
        ++check.triples_checked;
        if (c(order[a], order[k]) != std::max(ab, c(order[b], order[k]))) {
          check.failing = std::array{order[a], order[b], order[k]};
          check.message = "ordering property fails at points (" + std::to_string(order[a]) + "," +
                          std::to_string(order[b]) + "," + std::to_string(order[k]) + ")";
          return check;
        }
      }
    }
  }
  check.pass = true;
  return check;
}

struct DiameterCheck {
  bool pass = false;
  double diameter = 0.0;
  double width = 0.0;
  double measure = 0.0;  // Lebesgue measure of the image; zero for finite sets
  std::string message;
};

/// diam f(X) − μ(f(X)) = w(X, d). Finite images have measure zero, so this
/// is diam = w within 1e-9 relative. Requires a valid development.
inline DiameterCheck diameter_identity(const FiniteMetricSpace& space, std::span<const double> coords)
{
  DiameterCheck check;
  const auto dev = verify_development(space, coords);
  check.diameter = dev.diameter;
  check.width = dev.width;
  if (!dev.pass) {
    check.message = "not a chain development: " + dev.message;
    return check;
  }
  const double scale = std::max(check.width, check.diameter);
  check.pass = std::abs(check.diameter - check.measure - check.width) <= kCrossPipelineTolerance * scale;
  if (!check.pass) check.message = "diameter differs from width";
  return check;
}

}  // namespace chaindev
