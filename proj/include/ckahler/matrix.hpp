#pragma once

#include <cstddef>
#include <vector>

#include "ckahler/scalar.hpp"

namespace ckahler {

/// Dense row-major matrix over a backend scalar.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::from_rational(Rational(1));
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (ScalarTraits<S>::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (!ScalarTraits<S>::is_zero(b(k, j))) r(i, j) += aik * b(k, j);
        }
      }
    }
    return r;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix scaled(const Rational& r) const {
    Matrix m = *this;
    for (auto& x : m.data_) x = ScalarTraits<S>::scale(x, r);
    return m;
  }

  S trace() const {
    S t{};
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (!ScalarTraits<S>::is_zero(x)) return false;
    }
    return true;
  }

  double magnitude() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, ScalarTraits<S>::magnitude(x));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

/// Fraction-free (Bareiss) elimination with row pivoting. Every division
/// is exact in the exact backend; the float backend pivots on magnitude.
template <class S>
S determinant_bareiss(Matrix<S> m);

extern template ParamPoly determinant_bareiss(Matrix<ParamPoly>);
extern template double determinant_bareiss(Matrix<double>);

}  // namespace ckahler
