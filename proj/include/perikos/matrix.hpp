#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coefficient.hpp"

namespace perikos {

/// Dense matrix over a precision-tracked coefficient ring, row-major.
template <Coefficient C>
class Matrix {
 public:
  using Ring = typename C::Ring;

  Matrix(Ring ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, ring_.zero().times_integer(0)) {}

  static Matrix identity(const Ring& ring, std::size_t n) {
    Matrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
  }

  static Matrix from_rows(const Ring& ring, const std::vector<std::vector<C>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(ring, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw ParameterMismatch("Matrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  C& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const C& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_shape(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_shape(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ParameterMismatch("Matrix: inner dimensions differ");
    Matrix r(a.ring_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        std::optional<C> acc;
        for (std::size_t k = 0; k < a.cols_; ++k) {
          C t = a(i, k) * b(k, j);
          acc = acc ? *acc + t : t;
        }
        if (acc) r(i, j) = *acc;
      }
    return r;
  }

  Matrix scaled(const C& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = x * c;
    return r;
  }

  Matrix transposed() const {
    Matrix r(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  /// Entrywise sigma^k.
  Matrix frobenius(std::int64_t k = 1) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = coeff_frobenius(x, k);
    return r;
  }

  Matrix truncated(std::int64_t n) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = x.truncated(n);
    return r;
  }

  std::int64_t min_precision() const {
    std::int64_t n = kMaxPrecision;
    for (const auto& x : data_) n = std::min(n, x.precision());
    return n;
  }

  std::int64_t min_valuation() const {
    std::int64_t v = kMaxPrecision;
    for (const auto& x : data_) v = std::min(v, effective_valuation(x));
    return v;
  }

  /// Block sum diag(a, b).
  static Matrix block_diagonal(const Matrix& a, const Matrix& b) {
    Matrix r(a.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) r(a.rows_ + i, a.cols_ + j) = b(i, j);
    return r;
  }

  friend bool same_value(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      if (!same_value(a.data_[k], b.data_[k])) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << "]";
    }
    return os << "]";
  }

 private:
  static void check_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ParameterMismatch("Matrix: shape mismatch");
  }

  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<C> data_;
};

/**
 * Coefficients c_1, ..., c_n of det(T - M) = T^n + c_1 T^(n-1) + ... + c_n.
 *
 * Berkowitz's division-free algorithm, so no precision is lost to pivoting. The
 * leading 1 is implicit and never multiplied, which keeps it exact.
 */
template <Coefficient C>
std::vector<C> charpoly(const Matrix<C>& m) {
  if (!m.square()) throw ParameterMismatch("charpoly: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if (n == 1) return {-m(0, 0)};
  Matrix<C> sub(m.ring(), n - 1, n - 1);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) sub(i - 1, j - 1) = m(i, j);
  // d[k] for k = 1..n: d_1 = -a, d_(k+2) = -R A^k C.
  std::vector<C> d(n + 1, m(0, 0).times_integer(0));
  d[1] = -m(0, 0);
  std::vector<C> col(n - 1, d[0]);
  for (std::size_t i = 1; i < n; ++i) col[i - 1] = m(i, 0);
  for (std::size_t k = 0; k + 2 <= n; ++k) {
    if (k > 0) {
      std::vector<C> next(n - 1, d[0]);
      for (std::size_t i = 0; i < n - 1; ++i)
        for (std::size_t j = 0; j < n - 1; ++j) next[i] = next[i] + sub(i, j) * col[j];
      col = std::move(next);
    }
    C s = d[0];
    for (std::size_t j = 0; j < n - 1; ++j) s = s + m(0, j + 1) * col[j];
    d[k + 2] = -s;
  }
  const std::vector<C> v = charpoly(sub);  // v_1 .. v_(n-1)
  std::vector<C> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    C acc = d[i];
    if (i <= n - 1) acc = acc + v[i - 1];
    for (std::size_t j = 1; j < i && j <= n - 1; ++j) acc = acc + d[i - j] * v[j - 1];
    out.push_back(std::move(acc));
  }
  return out;
}

template <Coefficient C>
C determinant(const Matrix<C>& m) {
  const auto c = charpoly(m);
  if (c.empty()) return m.ring().one();
  return (m.rows() % 2 == 0) ? c.back() : -c.back();
}

/// Inverse by Gauss-Jordan elimination, pivoting on the least-valuation entry.
template <Coefficient C>
Matrix<C> inverse(const Matrix<C>& m) {
  if (!m.square()) throw ParameterMismatch("inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix<C> a = m;
  Matrix<C> inv = Matrix<C>::identity(m.ring(), n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t r = c; r < n; ++r) {
      if (a(r, c).is_zero()) continue;
      if (pivot == n || a(r, c).valuation() < a(pivot, c).valuation()) pivot = r;
    }
    if (pivot == n) throw DomainError("inverse: matrix is singular at the given precision");
    if (pivot != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(c, j));
        std::swap(inv(pivot, j), inv(c, j));
      }
    const C pinv = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = a(c, j) * pinv;
      inv(c, j) = inv(c, j) * pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const C f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace perikos
