#ifndef BRANE_COHOMOLOGY_HPP
#define BRANE_COHOMOLOGY_HPP

// Real models of H^2(M) with the wedge pairing.
//
// T4: basis B1..B6 = [e12], [e34], [e13], -[e24], [e14], [e23] with the class of
// e1234 normalized to 1 (integrals divided by (2 pi)^4). The pairing is three
// hyperbolic planes.
// K3: diag(+1, +1, +1, -1 x 19). Only the real inner-product structure is modeled.

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "brane/error.hpp"
#include "brane/exterior4.hpp"
#include "brane/linalg.hpp"
#include "brane/scalar.hpp"

namespace brane {

enum class SpaceName { T4, K3 };

constexpr std::string_view to_string(SpaceName n) { return n == SpaceName::T4 ? "t4" : "k3"; }

template <class T>
struct IntersectionSpace {
  SpaceName name = SpaceName::T4;
  std::size_t dim = 0;
  linalg::Matrix<T> pairing;

  T pair(const linalg::Vector<T>& u, const linalg::Vector<T>& v) const {
    return linalg::bilinear(pairing, u, v);
  }

  friend bool operator==(const IntersectionSpace&, const IntersectionSpace&) = default;
};

template <class T>
using SpacePtr = std::shared_ptr<const IntersectionSpace<T>>;

template <class T>
struct CohClass {
  SpacePtr<T> space;
  linalg::Vector<T> c;

  CohClass() = default;
  CohClass(SpacePtr<T> s, linalg::Vector<T> coeffs) : space(std::move(s)), c(std::move(coeffs)) {
    if (!space || c.size() != space->dim)
      throw std::invalid_argument("class coefficient count does not match the space dimension");
  }

  static CohClass zero(SpacePtr<T> s) { return CohClass(s, linalg::Vector<T>(s->dim, T(0))); }

  /// i-th basis class, 0-based.
  static CohClass basis(SpacePtr<T> s, std::size_t i) {
    auto z = zero(s);
    z.c.at(i) = T(1);
    return z;
  }

  bool sameSpace(const CohClass& o) const {
    return space && o.space && (space == o.space || *space == *o.space);
  }

  CohClass& operator+=(const CohClass& o) {
    requireSame(o);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  CohClass& operator-=(const CohClass& o) {
    requireSame(o);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
  CohClass& operator*=(const T& s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
  friend CohClass operator-(CohClass a, const CohClass& b) { return a -= b; }
  friend CohClass operator*(const T& s, CohClass a) { return a *= s; }

  friend bool operator==(const CohClass& a, const CohClass& b) { return a.sameSpace(b) && a.c == b.c; }

 private:
  void requireSame(const CohClass& o) const {
    if (!sameSpace(o)) throw Error(ErrorKind::SpaceMismatch, "classes live in different spaces");
  }
};

template <class T>
T pair(const CohClass<T>& a, const CohClass<T>& b) {
  if (!a.sameSpace(b)) throw Error(ErrorKind::SpaceMismatch, "classes live in different spaces");
  return a.space->pair(a.c, b.c);
}

/// Representatives of B1..B6 as constant forms.
template <class T>
std::array<Form2<T>, 6> torusBasisForms() {
  using F = Form2<T>;
  return {F::e(1, 2), F::e(3, 4), F::e(1, 3), -F::e(2, 4), F::e(1, 4), F::e(2, 3)};
}

template <class T>
SpacePtr<T> torusSpace() {
  auto s = std::make_shared<IntersectionSpace<T>>();
  s->name = SpaceName::T4;
  s->dim = 6;
  s->pairing = linalg::Matrix<T>(6, 6);
  const auto reps = torusBasisForms<T>();
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) s->pairing(i, j) = wedge22(reps[i], reps[j]).value;
  return s;
}

template <class T>
SpacePtr<T> k3Space() {
  auto s = std::make_shared<IntersectionSpace<T>>();
  s->name = SpaceName::K3;
  s->dim = 22;
  s->pairing = linalg::Matrix<T>(22, 22);
  for (std::size_t i = 0; i < 22; ++i) s->pairing(i, i) = i < 3 ? T(1) : T(-1);
  return s;
}

template <class T>
CohClass<T> classOfConstantForm(const Form2<T>& f, SpacePtr<T> space = torusSpace<T>()) {
  if (space->name != SpaceName::T4) throw Error(ErrorKind::WrongSpace, "forms model only the torus");
  // slots 0=12 1=13 2=14 3=23 4=24 5=34
  return CohClass<T>(std::move(space), {f.c[0], f.c[5], f.c[1], T(-f.c[4]), f.c[2], f.c[3]});
}

template <class T>
Form2<T> constantFormOfClass(const CohClass<T>& k) {
  if (k.space->name != SpaceName::T4)
    throw Error(ErrorKind::WrongSpace, "no constant-form model for this space");
  Form2<T> f;
  f.c = {k.c[0], k.c[2], k.c[4], k.c[5], T(-k.c[3]), k.c[1]};
  return f;
}

/// Inertia of the pairing by congruence elimination (exact over Rational).
template <class T>
linalg::Inertia signature(const IntersectionSpace<T>& s, const T& tol = default_tol<T>()) {
  return linalg::inertia(s.pairing, tol);
}

/// Inertia from eigenvalue signs of a symmetric double matrix.
inline linalg::Inertia eigenSignature(const linalg::Matrix<double>& m, double tol = kDefaultTol) {
  Eigen::MatrixXd a(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) a(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  linalg::Inertia in;
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    double v = es.eigenvalues()(k);
    if (v > tol * scale) ++in.pos;
    else if (v < -tol * scale) ++in.neg;
    else ++in.zero;
  }
  return in;
}

/// Gram matrix of a list of classes under the pairing.
template <class T>
linalg::Matrix<T> gram(const std::vector<CohClass<T>>& v) {
  linalg::Matrix<T> g(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) g(i, j) = pair(v[i], v[j]);
  return g;
}

namespace detail {

/// sqrt(r) for r > 0; over Rational only perfect squares are accepted.
template <class T>
T exactSqrt(const T& r) {
  if constexpr (is_floating_scalar_v<T>) {
    return std::sqrt(r);
  } else {
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(r);
    cpp_int den = boost::multiprecision::denominator(r);
    cpp_int sn = boost::multiprecision::sqrt(num);
    cpp_int sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den)
      throw std::domain_error("rescaling needs an irrational square root");
    return T(sn) / T(sd);
  }
}

}  // namespace detail

/// Pairing-orthogonalizes `vectors` in order and rescales each to the
/// requested square. Signs of the targets must match the signs the pairing
/// takes on the successive orthogonalized vectors.
template <class T>
std::vector<CohClass<T>> indefiniteGramSchmidt(const std::vector<CohClass<T>>& vectors,
                                               const std::vector<T>& targetSquares,
                                               const T& tol = default_tol<T>()) {
  if (vectors.size() != targetSquares.size())
    throw std::invalid_argument("one target square per vector is required");
  std::vector<CohClass<T>> out;
  std::vector<T> squares;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    CohClass<T> v = vectors[i];
    for (std::size_t j = 0; j < out.size(); ++j) v -= (pair(v, out[j]) / squares[j]) * out[j];
    T s = pair(v, v);
    if (!(tol < abs_value(s))) throw Error(ErrorKind::DegenerateSubspace, "null pivot in Gram-Schmidt");
    const T& target = targetSquares[i];
    if ((T(0) < s) != (T(0) < target) || target == T(0))
      throw Error(ErrorKind::SignatureMismatch, "requested square has the wrong sign");
    T ratio = target / s;
    if (ratio != T(1)) v *= detail::exactSqrt(ratio);
    out.push_back(std::move(v));
    squares.push_back(target);
  }
  return out;
}

}  // namespace brane

#endif  // BRANE_COHOMOLOGY_HPP
