#ifndef BRANE_TORUS_FORMS_HPP
#define BRANE_TORUS_FORMS_HPP

// Differential forms on T^4 = R^4 / (2 pi Z)^4 whose coefficients are finite
// Fourier sums  f(x) = sum_k a_k cos<k,x> + b_k sin<k,x>.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "brane/error.hpp"
#include "brane/exterior4.hpp"
#include "brane/scalar.hpp"

namespace brane {

using Wave = std::array<int, 4>;
using Point = std::array<double, 4>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline const double kTorusVolume = std::pow(kTwoPi, 4);

template <class T>
struct Mode {
  T cos_coef{};
  T sin_coef{};
  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Trigonometric polynomial on T^4. Wave vectors are stored with their first
/// nonzero component positive, so each frequency has exactly one entry.
template <class T>
class TrigPolyFn {
 public:
  TrigPolyFn() = default;

  static TrigPolyFn constant(const T& c) {
    TrigPolyFn f;
    f.add({0, 0, 0, 0}, c, T(0));
    return f;
  }
  static TrigPolyFn cosine(const Wave& k, const T& amp = T(1)) {
    TrigPolyFn f;
    f.add(k, amp, T(0));
    return f;
  }
  static TrigPolyFn sine(const Wave& k, const T& amp = T(1)) {
    TrigPolyFn f;
    f.add(k, T(0), amp);
    return f;
  }

  /// Adds a cos<k,x> + b sin<k,x>.
  void add(Wave k, T a, T b) {
    bool flip = false;
    for (int v : k) {
      if (v == 0) continue;
      flip = v < 0;
      break;
    }
    if (flip) {
      for (auto& v : k) v = -v;
      b = -b;
    }
    if (k == Wave{0, 0, 0, 0}) b = T(0);
    auto& m = modes_[k];
    m.cos_coef += a;
    m.sin_coef += b;
    if (m.cos_coef == T(0) && m.sin_coef == T(0)) modes_.erase(k);
  }

  const std::map<Wave, Mode<T>>& modes() const { return modes_; }

  T constantTerm() const {
    auto it = modes_.find(Wave{0, 0, 0, 0});
    return it == modes_.end() ? T(0) : it->second.cos_coef;
  }

  bool isConstant() const {
    return modes_.empty() || (modes_.size() == 1 && modes_.begin()->first == Wave{0, 0, 0, 0});
  }

  bool isZero() const { return modes_.empty(); }

  /// Largest |coefficient| over all modes; zero iff the function is zero.
  T maxCoefficient() const {
    T m(0);
    for (const auto& [k, md] : modes_) m = max_of(m, max_of(abs_value(md.cos_coef), abs_value(md.sin_coef)));
    return m;
  }

  /// Partial derivative along coordinate axis (0-based).
  TrigPolyFn derivative(int axis) const {
    TrigPolyFn out;
    for (const auto& [k, md] : modes_) {
      if (k[axis] == 0) continue;
      T ki(k[axis]);
      out.add(k, ki * md.sin_coef, -ki * md.cos_coef);
    }
    return out;
  }

  T operator()(const Point& x) const {
    if (isConstant()) return constantTerm();
    if constexpr (is_floating_scalar_v<T>) {
      T s(0);
      for (const auto& [k, md] : modes_) {
        double phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3];
        s += md.cos_coef * std::cos(phase) + md.sin_coef * std::sin(phase);
      }
      return s;
    } else {
      throw std::domain_error("non-constant trigonometric polynomial cannot be evaluated exactly");
    }
  }

  TrigPolyFn& operator+=(const TrigPolyFn& o) {
    for (const auto& [k, md] : o.modes_) add(k, md.cos_coef, md.sin_coef);
    return *this;
  }
  TrigPolyFn& operator-=(const TrigPolyFn& o) {
    for (const auto& [k, md] : o.modes_) add(k, -md.cos_coef, -md.sin_coef);
    return *this;
  }
  TrigPolyFn& operator*=(const T& s) {
    if (s == T(0)) {
      modes_.clear();
      return *this;
    }
    for (auto& [k, md] : modes_) {
      md.cos_coef *= s;
      md.sin_coef *= s;
    }
    return *this;
  }

  friend TrigPolyFn operator+(TrigPolyFn a, const TrigPolyFn& b) { return a += b; }
  friend TrigPolyFn operator-(TrigPolyFn a, const TrigPolyFn& b) { return a -= b; }
  friend TrigPolyFn operator-(TrigPolyFn a) { return a *= T(-1); }
  friend TrigPolyFn operator*(const T& s, TrigPolyFn a) { return a *= s; }

  friend TrigPolyFn operator*(const TrigPolyFn& p, const TrigPolyFn& q) {
    TrigPolyFn out;
    const T half = T(1) / T(2);
    for (const auto& [k1, m1] : p.modes_)
      for (const auto& [k2, m2] : q.modes_) {
        Wave sum{}, diff{};
        for (int i = 0; i < 4; ++i) {
          sum[i] = k1[i] + k2[i];
          diff[i] = k1[i] - k2[i];
        }
        const T& a1 = m1.cos_coef;
        const T& b1 = m1.sin_coef;
        const T& a2 = m2.cos_coef;
        const T& b2 = m2.sin_coef;
        out.add(sum, half * (a1 * a2 - b1 * b2), half * (a1 * b2 + b1 * a2));
        out.add(diff, half * (a1 * a2 + b1 * b2), half * (b1 * a2 - a1 * b2));
      }
    return out;
  }

  friend bool operator==(const TrigPolyFn&, const TrigPolyFn&) = default;

 private:
  std::map<Wave, Mode<T>> modes_;
};

/// Index triples (0-based) of the four trivector slots e123, e124, e134, e234.
inline constexpr std::array<std::array<int, 3>, 4> kTriples{{
    {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

template <class T>
struct TrigPolyForm1 {
  std::array<TrigPolyFn<T>, 4> c{};
};

template <class T>
struct TrigPolyForm2 {
  std::array<TrigPolyFn<T>, 6> c{};

  static TrigPolyForm2 constant(const Form2<T>& f) {
    TrigPolyForm2 out;
    for (std::size_t s = 0; s < 6; ++s)
      if (f.c[s] != T(0)) out.c[s] = TrigPolyFn<T>::constant(f.c[s]);
    return out;
  }

  /// fn * form for a constant form.
  static TrigPolyForm2 scaled(const TrigPolyFn<T>& fn, const Form2<T>& f) {
    TrigPolyForm2 out;
    for (std::size_t s = 0; s < 6; ++s)
      if (f.c[s] != T(0)) out.c[s] = f.c[s] * fn;
    return out;
  }

  bool isConstant() const {
    return std::all_of(c.begin(), c.end(), [](const auto& fn) { return fn.isConstant(); });
  }

  Form2<T> constantPart() const {
    Form2<T> out;
    for (std::size_t s = 0; s < 6; ++s) out.c[s] = c[s].constantTerm();
    return out;
  }

  TrigPolyForm2& operator+=(const TrigPolyForm2& o) {
    for (std::size_t s = 0; s < 6; ++s) c[s] += o.c[s];
    return *this;
  }
  friend TrigPolyForm2 operator+(TrigPolyForm2 a, const TrigPolyForm2& b) { return a += b; }
};

template <class T>
struct TrigPolyForm3 {
  std::array<TrigPolyFn<T>, 4> c{};

  bool isZero() const {
    return std::all_of(c.begin(), c.end(), [](const auto& fn) { return fn.isZero(); });
  }

  T maxCoefficient() const {
    T m(0);
    for (const auto& fn : c) m = max_of(m, fn.maxCoefficient());
    return m;
  }
};

/// Pointwise value of a 3-form: coefficients of e123, e124, e134, e234.
template <class T>
struct Form3 {
  std::array<T, 4> c{};

  /// Fully antisymmetric evaluation t(u, v, w).
  T operator()(const Vec4<T>& u, const Vec4<T>& v, const Vec4<T>& w) const {
    T s(0);
    for (std::size_t k = 0; k < 4; ++k) {
      auto [a, b, d] = kTriples[k];
      T det = u[a] * (v[b] * w[d] - v[d] * w[b]) - u[b] * (v[a] * w[d] - v[d] * w[a]) +
              u[d] * (v[a] * w[b] - v[b] * w[a]);
      s += c[k] * det;
    }
    return s;
  }

  T max_abs() const {
    T m(0);
    for (const auto& x : c) m = max_of(m, abs_value(x));
    return m;
  }
};

/// 4x4 field of trigonometric polynomials (an endomorphism field).
template <class T>
struct TrigPolyMap4 {
  std::array<std::array<TrigPolyFn<T>, 4>, 4> m{};

  static TrigPolyMap4 constant(const LinearMap4<T>& a) {
    TrigPolyMap4 out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (a.m[i][j] != T(0)) out.m[i][j] = TrigPolyFn<T>::constant(a.m[i][j]);
    return out;
  }

  bool isConstant() const {
    for (const auto& row : m)
      for (const auto& fn : row)
        if (!fn.isConstant()) return false;
    return true;
  }
};

template <class T>
TrigPolyForm2<T> exteriorD(const TrigPolyForm1<T>& a) {
  TrigPolyForm2<T> out;
  for (std::size_t s = 0; s < 6; ++s) {
    auto [i, j] = kPairs[s];
    out.c[s] = a.c[j].derivative(i) - a.c[i].derivative(j);
  }
  return out;
}

template <class T>
TrigPolyForm3<T> exteriorD(const TrigPolyForm2<T>& f) {
  auto coef = [&](int a, int b) -> const TrigPolyFn<T>& {
    return f.c[static_cast<std::size_t>(Form2<T>::slot(a, b))];
  };
  TrigPolyForm3<T> out;
  for (std::size_t s = 0; s < 4; ++s) {
    auto [a, b, c] = kTriples[s];
    out.c[s] = coef(b, c).derivative(a) - coef(a, c).derivative(b) + coef(a, b).derivative(c);
  }
  return out;
}

template <class T>
Form2<T> evalAt(const TrigPolyForm2<T>& f, const Point& x) {
  Form2<T> out;
  for (std::size_t s = 0; s < 6; ++s) out.c[s] = f.c[s](x);
  return out;
}

template <class T>
Form3<T> evalAt(const TrigPolyForm3<T>& f, const Point& x) {
  Form3<T> out;
  for (std::size_t s = 0; s < 4; ++s) out.c[s] = f.c[s](x);
  return out;
}

template <class T>
LinearMap4<T> evalAt(const TrigPolyMap4<T>& f, const Point& x) {
  LinearMap4<T> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.m[i][j] = f.m[i][j](x);
  return out;
}

/// Coefficient function of e1234 in a ^ b.
template <class T>
TrigPolyFn<T> wedgeDensity(const TrigPolyForm2<T>& a, const TrigPolyForm2<T>& b) {
  const auto& x = a.c;
  const auto& y = b.c;
  return x[0] * y[5] + x[5] * y[0] - x[1] * y[4] - x[4] * y[1] + x[2] * y[3] + x[3] * y[2];
}

/// Integral over T^4: (2 pi)^4 times the mean value.
template <class T>
double integrate(const TrigPolyFn<T>& f) {
  return kTorusVolume * to_double(f.constantTerm());
}

/// Uniform grid with n points per axis at 2 pi i / n.
inline std::vector<Point> uniformGrid(int n) {
  std::vector<Point> pts;
  if (n <= 0) return pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          pts.push_back({kTwoPi * i / n, kTwoPi * j / n, kTwoPi * k / n, kTwoPi * l / n});
  return pts;
}

/// The circle of branes cos(<k,x>) F + sin(<k,x>) kappa. Pointwise a brane for
/// every k; closed only for k = 0.
template <class T>
TrigPolyForm2<T> rotationFamily(const Form2<T>& f, const Form2<T>& kappa, const Wave& k) {
  return TrigPolyForm2<T>::scaled(TrigPolyFn<T>::cosine(k), f) +
         TrigPolyForm2<T>::scaled(TrigPolyFn<T>::sine(k), kappa);
}

inline constexpr double kDefaultStep = 1e-5;
inline constexpr int kDefaultGrid = 8;

namespace detail {

/// I(x) = omega^{-1} F(x) and its partial derivatives by central differences.
struct IFieldJet {
  LinearMap4<double> value;
  std::array<LinearMap4<double>, 4> d;
};

inline LinearMap4<double> iFieldAt(const Form2<double>& omega, const TrigPolyForm2<double>& f,
                                   const Point& x) {
  return composeI(omega, evalAt(f, x));
}

inline IFieldJet iFieldJet(const Form2<double>& omega, const TrigPolyForm2<double>& f,
                           const Point& x, double h) {
  IFieldJet jet;
  jet.value = iFieldAt(omega, f, x);
  for (int c = 0; c < 4; ++c) {
    Point xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    auto ip = iFieldAt(omega, f, xp);
    auto im = iFieldAt(omega, f, xm);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) jet.d[c].m[a][b] = (ip.m[a][b] - im.m[a][b]) / (2.0 * h);
  }
  return jet;
}

/// For Y = d/dx_j returns the endomorphism X -> (L_{IY} I - I L_Y I)(X).
inline LinearMap4<double> lieCombination(const IFieldJet& jet, int j) {
  const auto& I = jet.value.m;
  LinearMap4<double> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double lie = 0.0;  // (L_V I)^a_b with V = I e_j
      for (int c = 0; c < 4; ++c) {
        lie += I[c][j] * jet.d[c].m[a][b];
        lie -= I[c][b] * jet.d[c].m[a][j];
        lie += I[a][c] * jet.d[b].m[c][j];
      }
      double rot = 0.0;  // (I d_j I)^a_b
      for (int c = 0; c < 4; ++c) rot += I[a][c] * jet.d[j].m[c][b];
      out.m[a][b] = lie - rot;
    }
  return out;
}

inline Vec4<double> basisVec(int i) {
  Vec4<double> v{};
  v[i] = 1.0;
  return v;
}

inline Vec4<double> column(const LinearMap4<double>& m, int b) {
  return {m.m[0][b], m.m[1][b], m.m[2][b], m.m[3][b]};
}

}  // namespace detail

struct NijenhuisReport {
  double maxDefect = 0.0;
  double maxdF = 0.0;
  int gridPoints = 0;
};

/// Max over the grid of |N_I(d_i, d_j)| (sup norm) for I = omega^{-1} F, with
/// derivatives of I by central differences of step h, together with the max
/// over the grid of |dF|.
inline NijenhuisReport nijenhuisDefect(const Form2<double>& omega, const TrigPolyForm2<double>& f,
                                       int grid = kDefaultGrid, double h = kDefaultStep,
                                       double tol = kDefaultTol) {
  NijenhuisReport rep;
  const auto df = exteriorD(f);
  for (const auto& x : uniformGrid(grid)) {
    auto jet = detail::iFieldJet(omega, f, x, h);
    if (!isAlmostComplex(jet.value, tol))
      throw Error(ErrorKind::NotPointwiseBrane, "omega^{-1} F does not square to -Id on the grid");
    for (int j = 0; j < 4; ++j) {
      auto n = detail::lieCombination(jet, j);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rep.maxDefect = std::max(rep.maxDefect, std::abs(n.m[a][b]));
    }
    rep.maxdF = std::max(rep.maxdF, evalAt(df, x).max_abs());
    ++rep.gridPoints;
  }
  return rep;
}

struct IdentityResidual {
  double residual = 0.0;
  double lhsNorm = 0.0;  // max |omega((L_{IY}I - I L_Y I) X, .)|
  double rhsNorm = 0.0;  // max |(i_{IY} dF + (i_Y dF) o I)(X, .)|
};

/// Compares omega((L_{IY} I - I L_Y I)(X), Z) against
/// dF(IY, X, Z) + dF(Y, IX, Z) over coordinate X, Y, Z.
inline IdentityResidual lemmaInteIdentity(const Form2<double>& omega, const TrigPolyForm2<double>& f,
                                          const Point& x, double h = kDefaultStep,
                                          double tol = kDefaultTol) {
  auto jet = detail::iFieldJet(omega, f, x, h);
  if (!isAlmostComplex(jet.value, tol))
    throw Error(ErrorKind::NotPointwiseBrane, "omega^{-1} F does not square to -Id at the point");
  const auto dF = evalAt(exteriorD(f), x);
  IdentityResidual out;
  for (int j = 0; j < 4; ++j) {
    const auto n = detail::lieCombination(jet, j);
    const auto y = detail::basisVec(j);
    const auto iy = jet.value(y);
    for (int b = 0; b < 4; ++b) {
      const auto xv = detail::basisVec(b);
      const auto ix = jet.value(xv);
      const auto nx = detail::column(n, b);
      for (int k = 0; k < 4; ++k) {
        const auto z = detail::basisVec(k);
        double lhs = omega(nx, z);
        double rhs = dF(iy, xv, z) + dF(y, ix, z);
        out.lhsNorm = std::max(out.lhsNorm, std::abs(lhs));
        out.rhsNorm = std::max(out.rhsNorm, std::abs(rhs));
        out.residual = std::max(out.residual, std::abs(lhs - rhs));
      }
    }
  }
  return out;
}

}  // namespace brane

#endif  // BRANE_TORUS_FORMS_HPP
