#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chaindev {

/// Dense square matrix of doubles, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows)
  {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size() && j < m.n_; ++j) {
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace chaindev
