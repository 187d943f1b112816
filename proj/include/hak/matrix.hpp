// Dense row-major matrix and vector helpers. Everything here is exact
// bookkeeping; numerical algorithms live in numerics.hpp.
#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "errors.hpp"

namespace hak {

using Vec = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InputError("matrix literal: ragged rows");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // Builds a matrix whose j-th column is cols[j].
  static Matrix from_columns(const std::vector<Vec>& cols) {
    if (cols.empty()) return Matrix();
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != m.rows_) throw InputError("from_columns: ragged columns");
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec col(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vec row(std::size_t i) const {
    Vec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }
  void set_col(std::size_t j, const Vec& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw InputError("matrix product: shape mismatch");
    Matrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) p(i, j) += aik * rhs(k, j);
      }
    return p;
  }

  Vec operator*(const Vec& x) const {
    if (cols_ != x.size()) throw InputError("matrix-vector product: shape mismatch");
    Vec y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Matrix operator+(const Matrix& rhs) const {
    Matrix s(*this);
    for (std::size_t k = 0; k < a_.size(); ++k) s.a_[k] += rhs.a_[k];
    return s;
  }
  Matrix operator-(const Matrix& rhs) const {
    Matrix s(*this);
    for (std::size_t k = 0; k < a_.size(); ++k) s.a_[k] -= rhs.a_[k];
    return s;
  }
  Matrix operator*(double c) const {
    Matrix s(*this);
    for (double& v : s.a_) v *= c;
    return s;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  // Max absolute entry.
  double norm_inf() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }
  double norm_fro() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec a_;
};

inline Matrix operator*(double c, const Matrix& m) { return m * c; }

// Horizontal concatenation [A | B]; either side may be empty.
inline Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.rows() != b.rows()) throw InputError("hcat: row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

inline Matrix symmetrize(const Matrix& a) { return (a + a.transpose()) * 0.5; }

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// y += c * x
inline void axpy(double c, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vec scaled(const Vec& x, double c) {
  Vec y(x);
  for (double& v : y) v *= c;
  return y;
}

inline Vec operator+(const Vec& x, const Vec& y) {
  Vec z(x);
  for (std::size_t i = 0; i < x.size(); ++i) z[i] += y[i];
  return z;
}

inline Vec operator-(const Vec& x, const Vec& y) {
  Vec z(x);
  for (std::size_t i = 0; i < x.size(); ++i) z[i] -= y[i];
  return z;
}

}  // namespace hak
