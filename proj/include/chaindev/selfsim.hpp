#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chaindev/error.hpp"
#include "chaindev/metric_space.hpp"

namespace chaindev {

/// Uniformly self-similar zero-dimensional compact: every cluster splits into
/// `branching` children and a level-k cluster has chain diameter
/// root_diameter · ratio^k.
struct SelfSimilarSpec {
  std::size_t branching = 2;
  double root_diameter = 1.0;
  double ratio = 0.5;

  void validate() const
  {
    if (branching < 2) throw ValidationError("branching must be at least 2");
    if (!(root_diameter > 0.0) || !std::isfinite(root_diameter)) {
      throw ValidationError("root_diameter must be positive and finite");
    }
    if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("ratio must lie in (0, 1)");
  }

  double level_diameter(std::size_t level) const
  {
    return root_diameter * std::pow(ratio, static_cast<double>(level));
  }

  /// Ratio of consecutive width terms, branching · ratio.
  double growth() const { return static_cast<double>(branching) * ratio; }
};

/// Middle-thirds Cantor set with the line metric.
inline SelfSimilarSpec cantor_spec() { return {2, 1.0 / 3.0, 1.0 / 3.0}; }

/// Square of the Cantor set with the max metric.
inline SelfSimilarSpec cantor_square_spec() { return {4, 1.0 / 3.0, 1.0 / 3.0}; }

struct WidthSeries {
  std::vector<double> terms;  // level-k contribution b^k (b - 1) r0 q^k
  double growth = 0.0;
  bool convergent = false;
  double total = std::numeric_limits<double>::infinity();

  double partial_sum() const
  {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
};

inline double width_term(const SelfSimilarSpec& spec, std::size_t level)
{
  const double b = static_cast<double>(spec.branching);
  const double k = static_cast<double>(level);
  return std::pow(b, k) * (b - 1.0) * spec.root_diameter * std::pow(spec.ratio, k);
}

/// First `depth` terms of the width series and its convergence verdict. The
/// series is geometric, so it converges iff branching · ratio < 1.
inline WidthSeries width_series(const SelfSimilarSpec& spec, std::size_t depth)
{
  spec.validate();
  WidthSeries series;
  series.terms.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) series.terms.push_back(width_term(spec, k));
  series.growth = spec.growth();
  series.convergent = series.growth < 1.0;
  if (series.convergent) {
    series.total = (static_cast<double>(spec.branching) - 1.0) * spec.root_diameter / (1.0 - series.growth);
  }
  return series;
}

/// Width of a single level-`level` cluster's subtree; requires convergence.
inline double residual_width(const SelfSimilarSpec& spec, std::size_t level)
{
  return (static_cast<double>(spec.branching) - 1.0) * spec.level_diameter(level) / (1.0 - spec.growth());
}

inline constexpr std::size_t kDefaultLeafCap = std::size_t{1} << 16;

/// branching^depth, or throws CapExceeded when it exceeds `cap`.
inline std::size_t leaf_count(const SelfSimilarSpec& spec, std::size_t depth, std::size_t cap)
{
  std::size_t leaves = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    if (leaves > cap / spec.branching) {
      throw CapExceeded("depth " + std::to_string(depth) + " exceeds the leaf cap of " + std::to_string(cap));
    }
    leaves *= spec.branching;
  }
  if (leaves > cap) throw CapExceeded("leaf cap of " + std::to_string(cap) + " exceeded");
  return leaves;
}

/// The finite ultrametric space of depth-N clusters: two leaves whose lowest
/// common ancestor sits at level k are at distance r0 · q^k. Distances are
/// computed on demand.
inline FiniteMetricSpace truncate(const SelfSimilarSpec& spec, std::size_t depth,
                                  std::size_t cap = kDefaultLeafCap)
{
  spec.validate();
  const std::size_t n = leaf_count(spec, depth, cap);
  const std::size_t b = spec.branching;

  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    if (depth == 0) {
      labels.emplace_back("root");
      break;
    }
    std::string digits(depth, '0');
    std::size_t rest = leaf;
    for (std::size_t k = depth; k-- > 0;) {
      digits[k] = static_cast<char>('0' + rest % b);
      rest /= b;
    }
    std::string label;
    for (std::size_t k = 0; k < depth; ++k) {
      if (k) label += '.';
      label += std::to_string(digits[k] - '0');
    }
    labels.push_back(std::move(label));
  }

  std::vector<double> by_level(depth + 1);
  for (std::size_t k = 0; k <= depth; ++k) by_level[k] = spec.level_diameter(k);

  // Strip trailing digits until both leaves share an ancestor.
  auto dist = [b, depth, by_level = std::move(by_level)](std::size_t x, std::size_t y) {
    std::size_t up = 0;
    while (x != y) {
      x /= b;
      y /= b;
      ++up;
    }
    return up == 0 ? 0.0 : by_level[depth - up];
  };
  return FiniteMetricSpace::from_function(std::move(labels), std::move(dist));
}

struct LeafInterval {
  std::size_t leaf = 0;
  double left = 0.0;
  double length = 0.0;
};

struct LevelGap {
  std::size_t level = 0;
  double left = 0.0;
  double length = 0.0;
};

/// Development of a convergent spec resolved down to `depth`: each depth-N
/// cluster is a closed interval enclosing its own (unresolved) development,
/// separated by the gaps of all shallower levels.
struct SymbolicDevelopment {
  SelfSimilarSpec spec;
  std::size_t depth = 0;
  double excess = 0.0;          // measure added by stretching
  double leaf_length = 0.0;     // residual width + excess / b^N
  std::vector<LeafInterval> leaves;
  std::vector<LevelGap> gaps;   // levels < depth, left to right
  double diameter = 0.0;
};

namespace detail {

inline SymbolicDevelopment layout(const SelfSimilarSpec& spec, std::size_t depth, double excess, std::size_t cap)
{
  const std::size_t n = leaf_count(spec, depth, cap);
  const double b = static_cast<double>(spec.branching);

  SymbolicDevelopment dev;
  dev.spec = spec;
  dev.depth = depth;
  dev.excess = excess;
  dev.leaf_length = residual_width(spec, depth) + excess / static_cast<double>(n);

  // span[k] = length of the interval of one level-k cluster
  std::vector<double> span(depth + 1);
  span[depth] = dev.leaf_length;
  for (std::size_t k = depth; k-- > 0;) span[k] = b * span[k + 1] + (b - 1.0) * spec.level_diameter(k);
  dev.diameter = span[0];

  dev.leaves.reserve(n);
  auto place = [&](auto&& self, std::size_t level, std::size_t index, double left) -> void {
    if (level == depth) {
      dev.leaves.push_back({index, left, dev.leaf_length});
      return;
    }
    double pos = left;
    for (std::size_t child = 0; child < spec.branching; ++child) {
      self(self, level + 1, index * spec.branching + child, pos);
      pos += span[level + 1];
      if (child + 1 < spec.branching) {
        dev.gaps.push_back({level, pos, spec.level_diameter(level)});
        pos += spec.level_diameter(level);
      }
    }
  };
  place(place, 0, 0, 0.0);
  return dev;
}

}  // namespace detail

/// Minimal symbolic development (excess 0, diameter = total width).
inline SymbolicDevelopment symbolic_development(const SelfSimilarSpec& spec, std::size_t depth,
                                                std::size_t cap = kDefaultLeafCap)
{
  spec.validate();
  if (!(spec.growth() < 1.0)) throw ValidationError("width series diverges; no chain development exists");
  if (depth == 0) throw ValidationError("depth must be at least 1");
  return detail::layout(spec, depth, 0.0, cap);
}

/// Adds measure `excess` to the image, spread evenly over the depth-N leaf
/// intervals, leaving every gap length unchanged. The diameter grows by
/// exactly `excess`.
inline SymbolicDevelopment stretch(const SymbolicDevelopment& dev, double excess,
                                   std::size_t cap = kDefaultLeafCap)
{
  if (!(excess >= 0.0) || !std::isfinite(excess)) throw ValidationError("stretch must be a finite value >= 0");
  return detail::layout(dev.spec, dev.depth, dev.excess + excess, cap);
}

struct ExistenceVerdict {
  bool exists = false;
  double growth = 0.0;
  std::optional<double> minimal_diameter;
  std::string witness;
};

/// A chain development exists iff the width series converges; its minimal
/// diameter is then the total width.
inline ExistenceVerdict exists_development(const SelfSimilarSpec& spec)
{
  spec.validate();
  ExistenceVerdict v;
  v.growth = spec.growth();
  v.exists = v.growth < 1.0;
  if (v.exists) {
    v.minimal_diameter = width_series(spec, 0).total;
    v.witness = "geometric width series with ratio " + std::to_string(v.growth) + " < 1";
  } else if (v.growth == 1.0) {
    v.witness = "ratio = 1: width terms are constant and do not vanish";
  } else {
    v.witness = "ratio " + std::to_string(v.growth) + " > 1: width terms grow without bound";
  }
  return v;
}

}  // namespace chaindev
