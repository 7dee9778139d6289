#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chaindev/error.hpp"
#include "chaindev/matrix.hpp"

namespace chaindev {

enum class Metric { euclidean, chebyshev, manhattan };

inline std::optional<Metric> parse_metric(std::string_view name)
{
  if (name == "euclidean") return Metric::euclidean;
  if (name == "chebyshev") return Metric::chebyshev;
  if (name == "manhattan") return Metric::manhattan;
  return std::nullopt;
}

inline std::string_view to_string(Metric m)
{
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::chebyshev: return "chebyshev";
    case Metric::manhattan: return "manhattan";
  }
  return "?";
}

/// A finite set of labeled points with a symmetric dissimilarity.
///
/// Distances come from an explicit dense matrix, from coordinate vectors
/// under one of the supported metrics, or from a callable. Only the first
/// stores the n×n matrix, which keeps the O(n)-memory pipelines (MST, width)
/// usable for large n.
///
/// Construction only checks shapes. Use validate_space() for the axioms.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace from_matrix(std::vector<std::string> labels, Matrix dist)
  {
    if (labels.size() != dist.size()) {
      throw ValidationError("label count " + std::to_string(labels.size()) +
                            " does not match matrix size " + std::to_string(dist.size()));
    }
    FiniteMetricSpace s;
    s.labels_ = std::move(labels);
    s.dist_ = std::move(dist);
    return s;
  }

  /// `coords` holds labels.size() points of dimension `dim`, row-major.
  static FiniteMetricSpace from_points(std::vector<std::string> labels, std::vector<double> coords,
                                       std::size_t dim, Metric metric)
  {
    if (dim == 0 && !labels.empty()) throw ValidationError("point dimension must be positive");
    if (coords.size() != labels.size() * dim) {
      throw ValidationError("coordinate count " + std::to_string(coords.size()) +
                            " does not match " + std::to_string(labels.size()) + " points of dimension " +
                            std::to_string(dim));
    }
    FiniteMetricSpace s;
    s.labels_ = std::move(labels);
    s.coords_ = std::move(coords);
    s.dim_ = dim;
    s.metric_ = metric;
    return s;
  }

  /// Distances computed on demand by `fn`, which must be symmetric.
  static FiniteMetricSpace from_function(std::vector<std::string> labels,
                                         std::function<double(std::size_t, std::size_t)> fn)
  {
    FiniteMetricSpace s;
    s.labels_ = std::move(labels);
    s.fn_ = std::move(fn);
    return s;
  }

  /// Unlabeled convenience: points are named by their index.
  static FiniteMetricSpace from_matrix(Matrix dist)
  {
    return from_matrix(index_labels(dist.size()), std::move(dist));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has_points() const { return metric_.has_value(); }
  bool has_matrix() const { return !metric_ && !fn_; }
  std::size_t dimension() const { return dim_; }
  std::optional<Metric> metric() const { return metric_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

  double distance(std::size_t i, std::size_t j) const
  {
    if (fn_) return fn_(i, j);
    if (!metric_) return dist_(i, j);
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    double acc = 0.0;
    switch (*metric_) {
      case Metric::euclidean:
        for (std::size_t k = 0; k < dim_; ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
        return std::sqrt(acc);
      case Metric::chebyshev:
        for (std::size_t k = 0; k < dim_; ++k) acc = std::max(acc, std::abs(a[k] - b[k]));
        return acc;
      case Metric::manhattan:
        for (std::size_t k = 0; k < dim_; ++k) acc += std::abs(a[k] - b[k]);
        return acc;
    }
    return acc;
  }

  /// The full distance matrix (computed for point clouds).
  Matrix dense() const
  {
    if (has_matrix()) return dist_;
    Matrix m(size());
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) m(i, j) = distance(i, j);
    }
    return m;
  }

  static std::vector<std::string> index_labels(std::size_t n)
  {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }

 private:
  FiniteMetricSpace() = default;

  std::vector<std::string> labels_;
  Matrix dist_;
  std::vector<double> coords_;
  std::size_t dim_ = 0;
  std::optional<Metric> metric_;
  std::function<double(std::size_t, std::size_t)> fn_;
};

struct Violation {
  enum class Kind { empty, duplicate_label, non_finite, negative, diagonal, asymmetric, non_positive, triangle };

  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  std::string message;
};

inline std::string_view to_string(Violation::Kind kind)
{
  using K = Violation::Kind;
  switch (kind) {
    case K::empty: return "empty";
    case K::duplicate_label: return "duplicate_label";
    case K::non_finite: return "non_finite";
    case K::negative: return "negative";
    case K::diagonal: return "diagonal";
    case K::asymmetric: return "asymmetric";
    case K::non_positive: return "non_positive";
    case K::triangle: return "triangle";
  }
  return "?";
}

struct ValidationReport {
  std::vector<Violation> violations;  // at most the first `max_violations`
  std::size_t total_violations = 0;

  bool valid() const { return total_violations == 0; }
};

inline constexpr double kTriangleTolerance = 1e-12;

/// Checks the space axioms: n ≥ 1, unique labels, finite entries, zero
/// diagonal, symmetry, strictly positive off-diagonal distances and, when
/// `require_metric` is set, the triangle inequality (absolute tolerance
/// 1e-12). Never throws.
inline ValidationReport validate_space(const FiniteMetricSpace& space, bool require_metric = false,
                                       std::size_t max_violations = 64)
{
  using K = Violation::Kind;
  ValidationReport report;
  auto add = [&](K kind, std::size_t i, std::size_t j, std::size_t k, std::string msg) {
    ++report.total_violations;
    if (report.violations.size() < max_violations) {
      report.violations.push_back({kind, i, j, k, std::move(msg)});
    }
  };
  auto pair_str = [](std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  };

  const std::size_t n = space.size();
  if (n == 0) {
    add(K::empty, 0, 0, 0, "space has no points");
    return report;
  }

  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.insert(space.labels()[i]).second) {
      add(K::duplicate_label, i, i, 0, "duplicate label '" + space.labels()[i] + "'");
    }
  }

  if (space.has_points()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (double x : space.point(i)) {
        if (!std::isfinite(x)) {
          add(K::non_finite, i, i, 0, "non-finite coordinate in point " + std::to_string(i));
          break;
        }
      }
    }
    if (!report.valid()) return report;
  }

  bool entries_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = space.distance(i, j);
      if (!std::isfinite(d)) {
        add(K::non_finite, i, j, 0, "non-finite distance at " + pair_str(i, j));
        entries_ok = false;
      } else if (d < 0.0) {
        add(K::negative, i, j, 0, "negative distance at " + pair_str(i, j));
        entries_ok = false;
      } else if (i == j && d != 0.0) {
        add(K::diagonal, i, j, 0, "non-zero diagonal at " + pair_str(i, j));
        entries_ok = false;
      } else if (i < j) {
        if (d != space.distance(j, i)) {
          add(K::asymmetric, i, j, 0, "symmetry violation at " + pair_str(i, j));
          entries_ok = false;
        } else if (d == 0.0) {
          add(K::non_positive, i, j, 0, "zero distance between distinct points at " + pair_str(i, j));
          entries_ok = false;
        }
      }
    }
  }

  if (require_metric && entries_ok) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        const double dik = space.distance(i, k);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || j == k) continue;
          if (dik > space.distance(i, j) + space.distance(j, k) + kTriangleTolerance) {
            add(K::triangle, i, j, k,
                "triangle inequality violated: d" + pair_str(i, k) + " > d" + pair_str(i, j) + " + d" +
                    pair_str(j, k));
          }
        }
      }
    }
  }
  return report;
}

/// Throws ValidationError carrying the first violation.
inline void require_valid(const FiniteMetricSpace& space)
{
  const auto report = validate_space(space, false, 1);
  if (!report.valid()) throw ValidationError(report.violations.front().message);
}

}  // namespace chaindev
