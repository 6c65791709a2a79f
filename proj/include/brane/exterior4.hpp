#ifndef BRANE_EXTERIOR4_HPP
#define BRANE_EXTERIOR4_HPP

// Pointwise exterior algebra on a 4-dimensional real fiber.
//
// Coframe convention: e1 = dx1, e2 = dy1, e3 = dx2, e4 = dy2, tangent basis
// (d/dx1, d/dy1, d/dx2, d/dy2). A 2-form stores the six coefficients of
// e12, e13, e14, e23, e24, e34 in that order. Its antisymmetric matrix S has
// S(a,b) = c_ab for a < b, and s(u, v) = u^T S v.
//
// Interior product: (i_v s)_j = s(v, e_j). The endomorphism omega^{-1} o F is
// the unique I with omega(I u, .) = f(u, .), which works out to I = W^{-1} F
// for the matrices W, F of omega and f.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "brane/error.hpp"
#include "brane/linalg.hpp"
#include "brane/scalar.hpp"

namespace brane {

/// Index pairs (0-based) of the six bivector slots.
inline constexpr std::array<std::array<int, 2>, 6> kPairs{{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

template <class T>
using Vec4 = std::array<T, 4>;

template <class T>
struct Form1 {
  std::array<T, 4> c{};

  friend bool operator==(const Form1&, const Form1&) = default;
};

template <class T>
struct Form4 {
  T value{};

  friend bool operator==(const Form4&, const Form4&) = default;
};

template <class T>
struct Form2 {
  std::array<T, 6> c{};

  /// Basis bivector e^{ij} with 1-based indices i < j.
  static Form2 e(int i, int j) {
    Form2 f;
    f.at(i - 1, j - 1) = T(1);
    return f;
  }

  static int slot(int a, int b) {
    for (int s = 0; s < 6; ++s)
      if (kPairs[s][0] == a && kPairs[s][1] == b) return s;
    return -1;
  }

  /// Coefficient of e^a ^ e^b for 0-based a < b.
  T& at(int a, int b) { return c[static_cast<std::size_t>(slot(a, b))]; }
  const T& at(int a, int b) const { return c[static_cast<std::size_t>(slot(a, b))]; }

  /// Antisymmetric matrix entry S(a, b), any a, b.
  T entry(int a, int b) const {
    if (a == b) return T(0);
    return a < b ? at(a, b) : T(-at(b, a));
  }

  linalg::Matrix<T> matrix() const {
    linalg::Matrix<T> m(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) m(a, b) = entry(a, b);
    return m;
  }

  /// Antisymmetric part of m read back as a 2-form: c_ab = (m_ab - m_ba)/2.
  static Form2 from_matrix(const linalg::Matrix<T>& m) {
    Form2 f;
    for (std::size_t s = 0; s < 6; ++s) {
      auto [a, b] = kPairs[s];
      f.c[s] = (m(a, b) - m(b, a)) / T(2);
    }
    return f;
  }

  /// s(u, v).
  T operator()(const Vec4<T>& u, const Vec4<T>& v) const {
    T s(0);
    for (std::size_t k = 0; k < 6; ++k) {
      auto [a, b] = kPairs[k];
      s += c[k] * (u[a] * v[b] - u[b] * v[a]);
    }
    return s;
  }

  Form2& operator+=(const Form2& o) {
    for (std::size_t k = 0; k < 6; ++k) c[k] += o.c[k];
    return *this;
  }
  Form2& operator-=(const Form2& o) {
    for (std::size_t k = 0; k < 6; ++k) c[k] -= o.c[k];
    return *this;
  }
  Form2& operator*=(const T& s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  friend Form2 operator+(Form2 a, const Form2& b) { return a += b; }
  friend Form2 operator-(Form2 a, const Form2& b) { return a -= b; }
  friend Form2 operator-(Form2 a) { return a *= T(-1); }
  friend Form2 operator*(const T& s, Form2 a) { return a *= s; }
  friend bool operator==(const Form2&, const Form2&) = default;

  T max_abs() const {
    T m(0);
    for (const auto& x : c) m = max_of(m, abs_value(x));
    return m;
  }
};

/// Omega = re + i im.
template <class T>
struct ComplexForm2 {
  Form2<T> re;
  Form2<T> im;

  friend bool operator==(const ComplexForm2&, const ComplexForm2&) = default;
};

/// Endomorphism of the tangent fiber; m[a][b] is the a-component of the image of basis vector b.
template <class T>
struct LinearMap4 {
  std::array<std::array<T, 4>, 4> m{};

  static LinearMap4 identity() {
    LinearMap4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = T(1);
    return r;
  }

  static LinearMap4 from_matrix(const linalg::Matrix<T>& a) {
    LinearMap4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m[i][j] = a(i, j);
    return r;
  }

  linalg::Matrix<T> matrix() const {
    linalg::Matrix<T> a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = m[i][j];
    return a;
  }

  Vec4<T> operator()(const Vec4<T>& v) const {
    Vec4<T> out{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
    return out;
  }

  friend LinearMap4 operator*(const LinearMap4& a, const LinearMap4& b) {
    LinearMap4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        T s(0);
        for (int k = 0; k < 4; ++k) s += a.m[i][k] * b.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  friend bool operator==(const LinearMap4&, const LinearMap4&) = default;
};

/// Coefficient of e^{1234} in a ^ b.
template <class T>
Form4<T> wedge22(const Form2<T>& a, const Form2<T>& b) {
  const auto& x = a.c;
  const auto& y = b.c;
  // slots: 0=12 1=13 2=14 3=23 4=24 5=34
  return {x[0] * y[5] + x[5] * y[0] - x[1] * y[4] - x[4] * y[1] + x[2] * y[3] + x[3] * y[2]};
}

/// Pfaffian of the matrix of omega; det = pf^2 and omega ^ omega = 2 pf e^{1234}.
template <class T>
T pfaffian(const Form2<T>& w) {
  return w.c[0] * w.c[5] - w.c[1] * w.c[4] + w.c[2] * w.c[3];
}

template <class T>
Form1<T> interior(const Vec4<T>& v, const Form2<T>& s) {
  Form1<T> out;
  for (int j = 0; j < 4; ++j) {
    T acc(0);
    for (int a = 0; a < 4; ++a) acc += v[a] * s.entry(a, j);
    out.c[j] = acc;
  }
  return out;
}

template <class T>
LinearMap4<T> composeI(const Form2<T>& omega, const Form2<T>& f, const T& tol = default_tol<T>()) {
  T pf = pfaffian(omega);
  if (!(tol < pf * pf)) throw Error(ErrorKind::NonDegenerateRequired, "omega is degenerate");
  auto sol = linalg::solve(omega.matrix(), f.matrix(), T(0));
  if (!sol) throw Error(ErrorKind::NonDegenerateRequired, "omega matrix is singular");
  return LinearMap4<T>::from_matrix(*sol);
}

/// max |(I I + Id)_{ab}|
template <class T>
T almostComplexResidual(const LinearMap4<T>& i) {
  auto sq = i * i;
  T r(0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r = max_of(r, abs_value(sq.m[a][b] + (a == b ? T(1) : T(0))));
  return r;
}

template <class T>
bool isAlmostComplex(const LinearMap4<T>& i, const T& tol = default_tol<T>()) {
  return !(tol < almostComplexResidual(i));
}

/// beta(I., I.) as a 2-form.
template <class T>
Form2<T> pullback(const LinearMap4<T>& i, const Form2<T>& beta) {
  Form2<T> out;
  for (std::size_t s = 0; s < 6; ++s) {
    auto [a, b] = kPairs[s];
    Vec4<T> u{}, v{};
    for (int k = 0; k < 4; ++k) {
      u[k] = i.m[k][a];
      v[k] = i.m[k][b];
    }
    out.c[s] = beta(u, v);
  }
  return out;
}

template <class T>
struct TypeSplit {
  Form2<T> p11;   // (1,1) part
  Form2<T> p20;   // (2,0)+(0,2) part
};

template <class T>
TypeSplit<T> typeProjectors(const LinearMap4<T>& i, const Form2<T>& beta,
                            const T& tol = default_tol<T>()) {
  if (!isAlmostComplex(i, tol)) throw Error(ErrorKind::NotAlmostComplex, "I^2 != -Id");
  Form2<T> pb = pullback(i, beta);
  const T half = T(1) / T(2);
  return {half * (beta + pb), half * (beta - pb)};
}

/// F = omega o I, i.e. F(u, w) = omega(I u, w), together with the size of the
/// symmetric part that had to be discarded.
template <class T>
struct LoweredForm {
  Form2<T> form;
  T symmetric_residual;
};

template <class T>
LoweredForm<T> lowerWithOmega(const Form2<T>& omega, const LinearMap4<T>& i) {
  // matrix I^T W
  linalg::Matrix<T> w = omega.matrix();
  linalg::Matrix<T> m(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      T s(0);
      for (int k = 0; k < 4; ++k) s += i.m[k][a] * w(k, b);
      m(a, b) = s;
    }
  T sym(0);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) sym = max_of(sym, abs_value((m(a, b) + m(b, a)) / T(2)));
  return {Form2<T>::from_matrix(m), sym};
}

using ComplexVec4 = std::array<std::complex<double>, 4>;

/// Basis of the complex kernel {X : i_X Omega = 0}.
inline std::array<ComplexVec4, 2> kernelOfComplex2Form(const ComplexForm2<double>& o,
                                                      double tol = kDefaultTol) {
  const double hs1 = wedge22(o.re, o.re).value + wedge22(o.im, o.im).value;
  const double hs2_re = wedge22(o.re, o.re).value - wedge22(o.im, o.im).value;
  const double hs2_im = 2.0 * wedge22(o.re, o.im).value;
  if (!(hs1 > tol) || std::abs(hs2_re) > tol || std::abs(hs2_im) > tol)
    throw Error(ErrorKind::DegenerateForm, "Omega fails Omega^Omega = 0 or Omega^conj(Omega) > 0");

  Eigen::Matrix4cd m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = {o.re.entry(a, b), o.im.entry(a, b)};
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  int null_dim = 0;
  for (int k = 0; k < 4; ++k)
    if (sv(k) <= std::sqrt(tol) * scale) ++null_dim;
  if (null_dim != 2) throw Error(ErrorKind::DegenerateForm, "kernel dimension is not 2");

  std::array<ComplexVec4, 2> out{};
  for (int col = 0; col < 2; ++col)
    for (int a = 0; a < 4; ++a) out[col][a] = svd.matrixV()(a, 2 + col);
  return out;
}

}  // namespace brane

#endif  // BRANE_EXTERIOR4_HPP
