// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace softhg {

/// Dense 2-D double matrix, row-major. Immutable by convention once a public
/// operation has produced it; all operations here return fresh matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols);  // zero-filled
  Matrix(size_t rows, size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  // copies allocate and are counted by the workspace trace; moves do not
  Matrix(const Matrix& other);
  Matrix& operator=(const Matrix& other);
  Matrix(Matrix&&) noexcept = default;
  Matrix& operator=(Matrix&&) noexcept = default;

  static Matrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  std::string shape_str() const;  // e.g. "3x4"
  bool all_finite() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// Analytic workspace accounting: every Matrix construction adds its byte size
// to a thread-local counter. The benchmark resets and reads it around a
// forward pass to get an exact, deterministic allocation trace.
void workspace_counter_reset();
size_t workspace_counter_bytes();

// a[m×k] * b[k×n]; throws ShapeError naming both shapes on mismatch
Matrix matmul(const Matrix& a, const Matrix& b);
// a[k×m]^T * b[k×n]
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// a[m×k] * b[n×k]^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// Column-wise softmax (each column sums to 1); max-subtracted for stability.
Matrix softmax_cols(const Matrix& s);
// Row-wise softmax (each row sums to 1).
Matrix softmax_rows(const Matrix& s);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& a, double factor);
Matrix hadamard(const Matrix& a, const Matrix& b);
void add_inplace(Matrix& a, const Matrix& b);
void axpy_inplace(Matrix& a, double factor, const Matrix& b);  // a += factor*b

std::vector<double> col_sums(const Matrix& a);
std::vector<double> row_sums(const Matrix& a);
std::vector<double> col_means(const Matrix& a);
// Per-column maximum with the first-row-wins argmax index.
void col_max_argmax(const Matrix& a, std::vector<double>& maxes, std::vector<size_t>& argrows);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace softhg
