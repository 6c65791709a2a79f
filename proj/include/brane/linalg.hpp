#ifndef BRANE_LINALG_HPP
#define BRANE_LINALG_HPP

// Dense helpers that work over any ordered field (double or Rational).
// Eigen is reserved for the double-only spectral routines.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "brane/scalar.hpp"

namespace brane::linalg {

/// Row-major square or rectangular matrix.
template <class T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

template <class T>
using Vector = std::vector<T>;

template <class T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
Vector<T> multiply(const Matrix<T>& m, const Vector<T>& v) {
  Vector<T> out(m.rows, T(0));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out[i] += m(i, j) * v[j];
  return out;
}

/// Bilinear form u^T m v.
template <class T>
T bilinear(const Matrix<T>& m, const Vector<T>& u, const Vector<T>& v) {
  T s(0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (u[i] == T(0)) continue;
    T row(0);
    for (std::size_t j = 0; j < m.cols; ++j) row += m(i, j) * v[j];
    s += u[i] * row;
  }
  return s;
}

template <class T>
Vector<T> axpy(const T& a, const Vector<T>& x, Vector<T> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

template <class T>
Vector<T> scaled(const T& a, Vector<T> x) {
  for (auto& v : x) v *= a;
  return x;
}

template <class T>
T max_abs(const Vector<T>& v) {
  T m(0);
  for (const auto& x : v) m = max_of(m, abs_value(x));
  return m;
}

/// Reduced row echelon form in place; returns pivot columns.
/// Entries with |x| <= tol are treated as zero.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& a, const T& tol) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
    std::size_t best = row;
    T best_abs = abs_value(a(row, col));
    for (std::size_t r = row + 1; r < a.rows; ++r) {
      T v = abs_value(a(r, col));
      if (best_abs < v) {
        best = r;
        best_abs = v;
      }
    }
    if (!(tol < best_abs)) continue;
    for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(row, j), a(best, j));
    T p = a(row, col);
    for (std::size_t j = 0; j < a.cols; ++j) a(row, j) /= p;
    for (std::size_t r = 0; r < a.rows; ++r) {
      if (r == row || a(r, col) == T(0)) continue;
      T factor = a(r, col);
      for (std::size_t j = 0; j < a.cols; ++j) a(r, j) -= factor * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> a, const T& tol) {
  return rref(a, tol).size();
}

/// Basis of the right null space, one vector per free column, in column order.
template <class T>
std::vector<Vector<T>> kernel_basis(Matrix<T> a, const T& tol) {
  auto pivots = rref(a, tol);
  std::vector<bool> is_pivot(a.cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector<T>> basis;
  for (std::size_t free = 0; free < a.cols; ++free) {
    if (is_pivot[free]) continue;
    Vector<T> v(a.cols, T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves m x = b by Gauss-Jordan elimination; nullopt if a pivot is <= tol.
template <class T>
std::optional<Matrix<T>> solve(Matrix<T> m, Matrix<T> b, const T& tol) {
  const std::size_t n = m.rows;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs_value(m(best, col)) < abs_value(m(r, col))) best = r;
    if (!(tol < abs_value(m(best, col)))) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(best, j));
    for (std::size_t j = 0; j < b.cols; ++j) std::swap(b(col, j), b(best, j));
    T p = m(col, col);
    for (std::size_t j = 0; j < n; ++j) m(col, j) /= p;
    for (std::size_t j = 0; j < b.cols; ++j) b(col, j) /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col) == T(0)) continue;
      T f = m(r, col);
      for (std::size_t j = 0; j < n; ++j) m(r, j) -= f * m(col, j);
      for (std::size_t j = 0; j < b.cols; ++j) b(r, j) -= f * b(col, j);
    }
  }
  return b;
}

struct Inertia {
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::size_t zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Sylvester inertia of a symmetric matrix by congruence elimination.
/// Exact over Rational; over double, pivots with |p| <= tol count as zero.
template <class T>
Inertia inertia(Matrix<T> a, const T& tol) {
  Inertia out;
  std::size_t n = a.rows;
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;

  while (!live.empty()) {
    // Largest diagonal pivot.
    std::size_t pi = live.size();
    T best(0);
    for (std::size_t k = 0; k < live.size(); ++k) {
      T v = abs_value(a(live[k], live[k]));
      if (best < v) {
        best = v;
        pi = k;
      }
    }
    if (pi == live.size() || !(tol < best)) {
      // No usable diagonal: fold an off-diagonal entry onto the diagonal.
      std::size_t ki = 0, kj = 0;
      T off(0);
      for (std::size_t x = 0; x < live.size(); ++x)
        for (std::size_t y = x + 1; y < live.size(); ++y) {
          T v = abs_value(a(live[x], live[y]));
          if (off < v) {
            off = v;
            ki = x;
            kj = y;
          }
        }
      if (!(tol < off)) {
        out.zero += live.size();
        break;
      }
      // row_i += row_j, col_i += col_j
      std::size_t i = live[ki], j = live[kj];
      for (std::size_t c = 0; c < n; ++c) a(i, c) += a(j, c);
      for (std::size_t r = 0; r < n; ++r) a(r, i) += a(r, j);
      pi = ki;
    }
    std::size_t p = live[pi];
    T piv = a(p, p);
    if (T(0) < piv) ++out.pos; else ++out.neg;
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(pi));
    for (auto r : live) {
      T f = a(r, p) / piv;
      if (f == T(0)) continue;
      for (auto c : live) a(r, c) -= f * a(p, c);
    }
  }
  return out;
}

}  // namespace brane::linalg

#endif  // BRANE_LINALG_HPP
