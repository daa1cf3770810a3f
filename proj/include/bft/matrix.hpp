#pragma once

#include <cassert>
#include <initializer_list>
#include <vector>

#include "bft/rational.hpp"

namespace bft {

template <class S>
using Vector = std::vector<S>;

// Dense row-major matrix over an exact or floating scalar.
template <class S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, S(0)) {
    assert(rows >= 0 && cols >= 0);
  }
  Matrix(int rows, int cols, std::initializer_list<S> init) : Matrix(rows, cols) {
    assert(static_cast<size_t>(rows) * cols == init.size());
    size_t i = 0;
    for (const S& v : init) a_[i++] = v;
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return a_[static_cast<size_t>(r) * cols_ + c];
  }
  const S& operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return a_[static_cast<size_t>(r) * cols_ + c];
  }

  std::vector<S>& data() { return a_; }
  const std::vector<S>& data() const { return a_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Matrix operator+(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    assert(cols_ == o.rows_);
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const S& v = (*this)(i, k);
        if (v == S(0)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }
  Matrix operator*(const S& s) const {
    Matrix r = *this;
    for (auto& v : r.a_) v *= s;
    return r;
  }
  Matrix operator-() const { return *this * S(-1); }

  Vector<S> operator*(const Vector<S>& x) const {
    assert(static_cast<int>(x.size()) == cols_);
    Vector<S> y(rows_, S(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Matrix transposed() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  S trace() const {
    assert(rows_ == cols_);
    S t(0);
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : a_) if (!(v == S(0))) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<S> a_;
};

template <class S>
Matrix<S> operator*(const S& s, const Matrix<S>& m) { return m * s; }

// Commutator [a, b] = ab - ba.
template <class S>
Matrix<S> bracket(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

template <class S>
Vector<S> scaled(const Vector<S>& v, const S& s) {
  Vector<S> r = v;
  for (auto& x : r) x *= s;
  return r;
}

template <class S>
bool is_zero(const Vector<S>& v) {
  for (const auto& x : v) if (!(x == S(0))) return false;
  return true;
}

}  // namespace bft
