// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace softhg {

namespace {

thread_local size_t g_workspace_bytes = 0;

void count_alloc(size_t elems) { g_workspace_bytes += elems * sizeof(double); }

std::string shape_of(size_t r, size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

void workspace_counter_reset() { g_workspace_bytes = 0; }
size_t workspace_counter_bytes() { return g_workspace_bytes; }

Matrix::Matrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  count_alloc(data_.size());
}

Matrix::Matrix(size_t rows, size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix init: " + std::to_string(data_.size()) +
                     " values for shape " + shape_of(rows_, cols_));
  }
  count_alloc(data_.size());
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw ShapeError("matrix init: ragged rows (" + std::to_string(row.size()) +
                       " vs " + std::to_string(cols_) + ")");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
  count_alloc(data_.size());
}

Matrix::Matrix(const Matrix& other)
    : rows_(other.rows_), cols_(other.cols_), data_(other.data_) {
  count_alloc(data_.size());
}

Matrix& Matrix::operator=(const Matrix& other) {
  if (this != &other) {
    rows_ = other.rows_;
    cols_ = other.cols_;
    data_ = other.data_;
    count_alloc(data_.size());
  }
  return *this;
}

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::shape_str() const { return shape_of(rows_, cols_); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: dimension mismatch: lhs is " + a.shape_str() +
                     ", rhs is " + b.shape_str());
  }
  Matrix out(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in both b and out
  for (size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.data() + i * a.cols();
    double* orow = out.data() + i * out.cols();
    for (size_t k = 0; k < a.cols(); ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.data() + k * b.cols();
      for (size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: dimension mismatch: lhs^T is " +
                     std::to_string(a.cols()) + "x" + std::to_string(a.rows()) +
                     ", rhs is " + b.shape_str());
  }
  Matrix out(a.cols(), b.cols());
  for (size_t k = 0; k < a.rows(); ++k) {
    const double* arow = a.data() + k * a.cols();
    const double* brow = b.data() + k * b.cols();
    for (size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double* orow = out.data() + i * out.cols();
      for (size_t j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: dimension mismatch: lhs is " + a.shape_str() +
                     ", rhs^T is " + std::to_string(b.cols()) + "x" +
                     std::to_string(b.rows()));
  }
  Matrix out(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.data() + i * a.cols();
    double* orow = out.data() + i * out.cols();
    for (size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.data() + j * b.cols();
      double acc = 0.0;
      for (size_t k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
      orow[j] = acc;
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix softmax_cols(const Matrix& s) {
  Matrix out(s.rows(), s.cols());
  for (size_t j = 0; j < s.cols(); ++j) {
    double colmax = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < s.rows(); ++i) colmax = std::max(colmax, s(i, j));
    double denom = 0.0;
    for (size_t i = 0; i < s.rows(); ++i) {
      const double e = std::exp(s(i, j) - colmax);
      out(i, j) = e;
      denom += e;
    }
    for (size_t i = 0; i < s.rows(); ++i) out(i, j) /= denom;
  }
  return out;
}

Matrix softmax_rows(const Matrix& s) {
  Matrix out(s.rows(), s.cols());
  for (size_t i = 0; i < s.rows(); ++i) {
    double rowmax = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < s.cols(); ++j) rowmax = std::max(rowmax, s(i, j));
    double denom = 0.0;
    for (size_t j = 0; j < s.cols(); ++j) {
      const double e = std::exp(s(i, j) - rowmax);
      out(i, j) = e;
      denom += e;
    }
    for (size_t j = 0; j < s.cols(); ++j) out(i, j) /= denom;
  }
  return out;
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch: " + a.shape_str() +
                     " vs " + b.shape_str());
  }
}
}  // namespace

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  Matrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix scaled(const Matrix& a, double factor) {
  Matrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * factor;
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

void add_inplace(Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add_inplace");
  for (size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
}

void axpy_inplace(Matrix& a, double factor, const Matrix& b) {
  require_same_shape(a, b, "axpy_inplace");
  for (size_t i = 0; i < a.size(); ++i) a.data()[i] += factor * b.data()[i];
}

std::vector<double> col_sums(const Matrix& a) {
  std::vector<double> sums(a.cols(), 0.0);
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) sums[j] += a(i, j);
  return sums;
}

std::vector<double> row_sums(const Matrix& a) {
  std::vector<double> sums(a.rows(), 0.0);
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) sums[i] += a(i, j);
  return sums;
}

std::vector<double> col_means(const Matrix& a) {
  if (a.rows() == 0) throw ShapeError("col_means: empty matrix (0 rows)");
  std::vector<double> means = col_sums(a);
  for (double& m : means) m /= static_cast<double>(a.rows());
  return means;
}

void col_max_argmax(const Matrix& a, std::vector<double>& maxes,
                    std::vector<size_t>& argrows) {
  if (a.rows() == 0) throw ShapeError("col_max_argmax: empty matrix (0 rows)");
  maxes.assign(a.cols(), -std::numeric_limits<double>::infinity());
  argrows.assign(a.cols(), 0);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) > maxes[j]) {  // strict: first row wins ties
        maxes[j] = a(i, j);
        argrows[j] = i;
      }
    }
  }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace softhg
