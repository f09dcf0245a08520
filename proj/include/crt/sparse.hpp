#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <vector>

#include "crt/mesh.hpp"

namespace crt {

// CSR sparsity pattern with sorted column indices per row. Rows are the
// mesh edges; the pattern is fixed at construction and shared between
// the transport operator and the viscosity matrices.
class SparsePattern {
 public:
  SparsePattern(int rows, const std::vector<std::vector<int>>& row_cols) {
    offsets_.reserve(rows + 1);
    offsets_.push_back(0);
    for (int i = 0; i < rows; ++i) {
      cols_.insert(cols_.end(), row_cols[i].begin(), row_cols[i].end());
      offsets_.push_back(static_cast<int>(cols_.size()));
    }
  }

  static std::shared_ptr<const SparsePattern> from_stencil(const TriMesh& mesh) {
    std::vector<std::vector<int>> rows(mesh.num_edges());
    for (int i = 0; i < mesh.num_edges(); ++i) rows[i] = mesh.stencil(i);
    return std::make_shared<const SparsePattern>(mesh.num_edges(), rows);
  }

  int rows() const { return static_cast<int>(offsets_.size()) - 1; }
  int row_begin(int i) const { return offsets_[i]; }
  int row_end(int i) const { return offsets_[i + 1]; }
  int col(int k) const { return cols_[k]; }
  int nnz() const { return static_cast<int>(cols_.size()); }

  // Index of entry (i, j), or -1 when outside the pattern.
  int find(int i, int j) const {
    const auto b = cols_.begin() + offsets_[i];
    const auto e = cols_.begin() + offsets_[i + 1];
    const auto it = std::lower_bound(b, e, j);
    if (it == e || *it != j) return -1;
    return static_cast<int>(it - cols_.begin());
  }

 private:
  std::vector<int> offsets_;
  std::vector<int> cols_;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsePattern> pattern)
      : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

  const SparsePattern& pattern() const { return *pattern_; }
  std::shared_ptr<const SparsePattern> pattern_ptr() const { return pattern_; }
  int rows() const { return pattern_->rows(); }

  double value(int k) const { return values_[k]; }
  double& value(int k) { return values_[k]; }

  double operator()(int i, int j) const {
    const int k = pattern_->find(i, j);
    return k < 0 ? 0.0 : values_[k];
  }

  void add(int i, int j, double v) {
    const int k = pattern_->find(i, j);
    assert(k >= 0 && "entry outside sparsity pattern");
    values_[k] += v;
  }

  void set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

  double row_sum(int i) const {
    double s = 0.0;
    for (int k = pattern_->row_begin(i); k < pattern_->row_end(i); ++k)
      s += values_[k];
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows(), 0.0);
    for (int i = 0; i < rows(); ++i) {
      double s = 0.0;
      for (int k = pattern_->row_begin(i); k < pattern_->row_end(i); ++k)
        s += values_[k] * x[pattern_->col(k)];
      y[i] = s;
    }
    return y;
  }

 private:
  std::shared_ptr<const SparsePattern> pattern_;
  std::vector<double> values_;
};

}  // namespace crt
