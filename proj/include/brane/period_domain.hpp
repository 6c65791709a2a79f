#ifndef BRANE_PERIOD_DOMAIN_HPP
#define BRANE_PERIOD_DOMAIN_HPP

// The quadric Q_w = { c : c.w = 0, c.c = w.w } in H^2, its cylinder chart
//   phi(theta, y) = sqrt(1 + r^2) (cos theta [F] + sin theta b) + sum y_i n_i,
// the induced Lorentzian metric, and the deformation equations around a base
// point.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <vector>

#include <Eigen/Dense>

#include "brane/brane_check.hpp"
#include "brane/cohomology.hpp"
#include "brane/error.hpp"
#include "brane/linalg.hpp"
#include "brane/scalar.hpp"

namespace brane {

template <class T>
struct QuadricSpec {
  SpacePtr<T> space;
  CohClass<T> omegaClass;

  explicit QuadricSpec(CohClass<T> omega) : space(omega.space), omegaClass(std::move(omega)) {
    if (!(T(0) < pair(omegaClass, omegaClass)))
      throw std::invalid_argument("the symplectic class must have positive square");
  }

  T omegaSquare() const { return pair(omegaClass, omegaClass); }
};

template <class T>
bool quadricContains(const QuadricSpec<T>& q, const CohClass<T>& c, const T& tol = default_tol<T>()) {
  if (!c.sameSpace(q.omegaClass)) throw Error(ErrorKind::SpaceMismatch, "class and quadric differ in space");
  return !(tol < abs_value(pair(c, q.omegaClass))) &&
         !(tol < abs_value(T(pair(c, c) - q.omegaSquare())));
}

/// Adapted basis at a base point: Gram matrix of (base, b, neg...) is
/// diag(w^2, w^2, -w^2, ..., -w^2), all orthogonal to w.
struct QuadricChart {
  CohClass<double> base;
  CohClass<double> b;
  std::vector<CohClass<double>> neg;
  double omegaSq = 0.0;

  std::size_t fiberDim() const { return neg.size(); }
};

namespace detail {

/// Deterministic orthogonal basis of the pairing-orthocomplement of
/// span{base, w}. Candidates are the standard basis directions, projected, in
/// index order. A null candidate is paired with the first later candidate it
/// meets nontrivially and replaced by the (u + w', u - w') hyperbolic pair.
inline std::vector<CohClass<double>> orthocomplementBasis(const QuadricSpec<double>& q,
                                                         const CohClass<double>& base,
                                                         std::size_t& positives, double tol) {
  const double w2 = q.omegaSquare();
  const std::size_t target = q.space->dim - 2;
  auto project = [&](CohClass<double> v) {
    v -= (pair(v, base) / w2) * base;
    v -= (pair(v, q.omegaClass) / w2) * q.omegaClass;
    return v;
  };
  std::deque<CohClass<double>> queue;
  for (std::size_t i = 0; i < q.space->dim; ++i) queue.push_back(project(CohClass<double>::basis(q.space, i)));

  std::vector<CohClass<double>> accepted;
  auto orthogonalize = [&](CohClass<double> v) {
    for (const auto& a : accepted) v -= (pair(v, a) / pair(a, a)) * a;
    return v;
  };
  positives = 0;
  while (!queue.empty() && accepted.size() < target) {
    CohClass<double> u = orthogonalize(queue.front());
    queue.pop_front();
    if (linalg::max_abs(u.c) <= tol) continue;
    const double s = pair(u, u);
    if (std::abs(s) > tol) {
      if (s > 0) {
        if (++positives > 1) throw Error(ErrorKind::SignatureMismatch, "orthocomplement is not Lorentzian");
      }
      accepted.push_back(std::move(u));
      continue;
    }
    auto partner = queue.end();
    CohClass<double> v;
    for (auto it = queue.begin(); it != queue.end(); ++it) {
      v = orthogonalize(*it);
      if (std::abs(pair(u, v)) > tol) {
        partner = it;
        break;
      }
    }
    if (partner == queue.end()) throw Error(ErrorKind::DegenerateSubspace, "null direction without partner");
    queue.erase(partner);
    CohClass<double> w = (1.0 / pair(u, v)) * v;
    w -= (pair(w, w) / 2.0) * u;
    queue.push_front(u - w);
    queue.push_front(u + w);
  }
  if (accepted.size() != target) throw Error(ErrorKind::DegenerateSubspace, "orthocomplement too small");
  // positive direction first, negatives in discovery order
  std::stable_partition(accepted.begin(), accepted.end(), [](const auto& a) { return pair(a, a) > 0; });
  return accepted;
}

}  // namespace detail

inline QuadricChart buildChart(const QuadricSpec<double>& q, const CohClass<double>& base,
                               double tol = kDefaultTol) {
  if (!quadricContains(q, base, tol)) throw Error(ErrorKind::NotInQuadric, "base point is not on the quadric");
  std::size_t positives = 0;
  auto basis = detail::orthocomplementBasis(q, base, positives, tol);
  if (positives != 1) throw Error(ErrorKind::SignatureMismatch, "orthocomplement is not Lorentzian");
  const double w2 = q.omegaSquare();
  std::vector<double> targets(basis.size(), -w2);
  targets[0] = w2;
  auto ortho = indefiniteGramSchmidt(basis, targets, tol);
  QuadricChart chart{base, ortho[0], {}, w2};
  chart.neg.assign(ortho.begin() + 1, ortho.end());
  return chart;
}

inline CohClass<double> phi(const QuadricChart& chart, double theta, const std::vector<double>& ybar) {
  if (ybar.size() != chart.neg.size()) throw std::invalid_argument("ybar has the wrong length");
  double r2 = 0.0;
  for (double y : ybar) r2 += y * y;
  const double rad = std::sqrt(1.0 + r2);
  CohClass<double> out = (rad * std::cos(theta)) * chart.base + (rad * std::sin(theta)) * chart.b;
  for (std::size_t i = 0; i < ybar.size(); ++i) out += ybar[i] * chart.neg[i];
  return out;
}

struct MetricSample {
  double theta = 0.0;
  std::vector<double> ybar;
  linalg::Matrix<double> g;       // order: theta, y_1, ..., y_m
  linalg::Inertia signature;
  double offDiagonalMax = 0.0;    // max |g_{theta, y_i}|
  double gammaClosedFormResid = 0.0;
  double rhoPushforward = 0.0;    // g_{theta theta}
  double rhoClosedForm = 0.0;     // (1 + r^2) w^2
  double rhoSqrtForm = 0.0;       // sqrt(1 + r^2) w^2, the alternative closed form
};

/// Pushforward metric: ambient pairings of the exact tangent vectors of phi.
inline MetricSample metricAt(const QuadricChart& chart, double theta, const std::vector<double>& ybar) {
  const std::size_t m = chart.neg.size();
  if (ybar.size() != m) throw std::invalid_argument("ybar has the wrong length");
  double r2 = 0.0;
  for (double y : ybar) r2 += y * y;
  const double rad = std::sqrt(1.0 + r2);
  const double ct = std::cos(theta), st = std::sin(theta);

  std::vector<CohClass<double>> tangents;
  tangents.push_back((-rad * st) * chart.base + (rad * ct) * chart.b);
  for (std::size_t i = 0; i < m; ++i)
    tangents.push_back((ybar[i] / rad * ct) * chart.base + (ybar[i] / rad * st) * chart.b + chart.neg[i]);

  MetricSample s;
  s.theta = theta;
  s.ybar = ybar;
  s.g = gram(tangents);
  s.signature = eigenSignature(s.g);
  const double w2 = chart.omegaSq;
  for (std::size_t i = 0; i < m; ++i) {
    s.offDiagonalMax = std::max(s.offDiagonalMax, std::abs(s.g(0, i + 1)));
    for (std::size_t j = 0; j < m; ++j) {
      double closed = (ybar[i] * ybar[j] / (1.0 + r2) - (i == j ? 1.0 : 0.0)) * w2;
      s.gammaClosedFormResid = std::max(s.gammaClosedFormResid, std::abs(s.g(i + 1, j + 1) - closed));
    }
  }
  s.rhoPushforward = s.g(0, 0);
  s.rhoClosedForm = (1.0 + r2) * w2;
  s.rhoSqrtForm = rad * w2;
  return s;
}

template <class T>
struct DeformationResidual {
  T r1{};  // [w].[a]
  T r2{};  // [F].[a] + [a].[a] / 2
};

template <class T>
DeformationResidual<T> deformationResidual(const QuadricSpec<T>& q, const CohClass<T>& base,
                                           const CohClass<T>& alpha) {
  if (!alpha.sameSpace(q.omegaClass) || !base.sameSpace(q.omegaClass))
    throw Error(ErrorKind::SpaceMismatch, "class and quadric differ in space");
  return {pair(q.omegaClass, alpha), pair(base, alpha) + pair(alpha, alpha) / T(2)};
}

template <class T>
struct TorusExampleResiduals {
  T r_h{};        // [w0].[a]
  T r_q{};        // [F0].[a] + [a].[a] / 2
  T alternative{};  // -2 (g1 g2 + f1 f2 + h1 h2) + (g1 + g2)
};

/// a = f1 B1 + f2 B2 + g1 B3 + g2 B4 + h1 B5 + h2 B6 around the base point F0.
template <class T>
TorusExampleResiduals<T> torusExampleResiduals(const T& f1, const T& f2, const T& g1, const T& g2,
                                               const T& h1, const T& h2) {
  auto space = torusSpace<T>();
  CohClass<T> alpha(space, {f1, f2, g1, g2, h1, h2});
  const auto omega0 = classOfConstantForm(Form2<T>::e(1, 4) + Form2<T>::e(2, 3), space);
  const auto f0 = classOfConstantForm(Form2<T>::e(1, 3) - Form2<T>::e(2, 4), space);
  TorusExampleResiduals<T> out;
  out.r_h = pair(omega0, alpha);
  out.r_q = pair(f0, alpha) + pair(alpha, alpha) / T(2);
  out.alternative = T(-2) * (g1 * g2 + f1 * f2 + h1 * h2) + (g1 + g2);
  return out;
}

/// x^T A x + b.x + c = 0.
struct Quadratic {
  linalg::Matrix<double> a;
  std::vector<double> b;
  double c = 0.0;

  double operator()(const std::vector<double>& x) const {
    return linalg::bilinear(a, x, x) + linalg::dot(b, x) + c;
  }
};

/// Affine change of variables x = transform (v - center) bringing the quadric
/// to sum_i normalSquares[i] x_i^2 = 1, positive squares first.
struct AffineNormalForm {
  linalg::Matrix<double> transform;
  std::vector<double> center;
  std::vector<int> normalSquares;
};

inline AffineNormalForm affineNormalForm(const Quadratic& quad, double tol = kDefaultTol) {
  const std::size_t n = quad.a.rows;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i) = quad.b[i];
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (quad.a(i, j) + quad.a(j, i));
  }
  if (n == 0 || a.cwiseAbs().maxCoeff() <= tol)
    throw Error(ErrorKind::DegenerateQuadric, "quadratic part vanishes");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es0(a);
  if (es0.eigenvalues().cwiseAbs().minCoeff() <= tol)
    throw Error(ErrorKind::DegenerateQuadric, "quadratic part is singular");

  const auto& v0 = es0.eigenvectors();
  const Eigen::VectorXd center = -0.5 * (v0 * es0.eigenvalues().cwiseInverse().asDiagonal() * v0.transpose() * b);
  const double at_center = center.dot(a * center) + b.dot(center) + quad.c;
  if (std::abs(at_center) <= tol) throw Error(ErrorKind::DegenerateQuadric, "quadric is a cone");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a / (-at_center));
  std::vector<Eigen::Index> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return es.eigenvalues()(x) > es.eigenvalues()(y); });

  AffineNormalForm out;
  out.transform = linalg::Matrix<double>(n, n);
  out.center.assign(center.data(), center.data() + n);
  for (std::size_t r = 0; r < n; ++r) {
    const double lambda = es.eigenvalues()(order[r]);
    const double scale = std::sqrt(std::abs(lambda));
    out.normalSquares.push_back(lambda > 0 ? 1 : -1);
    for (std::size_t j = 0; j < n; ++j) out.transform(r, j) = scale * es.eigenvectors()(j, order[r]);
  }
  return out;
}

/// The torus deformation quadric r_q = 0 in (f1, f2, g1, g2, h1) after
/// eliminating h2 = -h1, recovered by exact polarization of r_q.
inline Quadratic torusDeformationQuadric() {
  auto rq = [](const std::array<Rational, 5>& v) {
    return torusExampleResiduals<Rational>(v[0], v[1], v[2], v[3], v[4], -v[4]).r_q;
  };
  auto unit = [](std::size_t i, Rational s) {
    std::array<Rational, 5> v{};
    v[i] = s;
    return v;
  };
  const Rational c0 = rq({});
  Quadratic q;
  q.a = linalg::Matrix<double>(5, 5);
  q.b.assign(5, 0.0);
  q.c = to_double(c0);
  for (std::size_t i = 0; i < 5; ++i) {
    const Rational plus = rq(unit(i, 1)), minus = rq(unit(i, -1));
    q.b[i] = to_double(Rational((plus - minus) / 2));
    q.a(i, i) = to_double(Rational((plus + minus) / 2 - c0));
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      auto v = unit(i, 1);
      v[j] = 1;
      const Rational both = rq(v);
      const Rational cross = (both - rq(unit(i, 1)) - rq(unit(j, 1)) + c0) / 2;
      q.a(i, j) = q.a(j, i) = to_double(cross);
    }
  return q;
}

template <class T>
struct ComplexMultiple {
  T a{};  // coefficient of [w]
  T b{};  // coefficient of [F]
};

/// Solves b [F] + a [w] = target in the least-squares sense on span{[F], [w]}.
template <class T>
ComplexMultiple<T> uniqueScalarWithImaginaryPart(const CohClass<T>& fClass, const CohClass<T>& omegaClass,
                                                 const CohClass<T>& target, const T& tol = default_tol<T>()) {
  QuadricSpec<T> q(omegaClass);
  if (!quadricContains(q, fClass, tol)) throw Error(ErrorKind::NotInQuadric, "[F] is not on the quadric");
  if (!target.sameSpace(omegaClass)) throw Error(ErrorKind::SpaceMismatch, "target is in another space");
  using linalg::dot;
  linalg::Matrix<T> g(2, 2), rhs(2, 1);
  g(0, 0) = dot(fClass.c, fClass.c);
  g(0, 1) = g(1, 0) = dot(fClass.c, omegaClass.c);
  g(1, 1) = dot(omegaClass.c, omegaClass.c);
  rhs(0, 0) = dot(fClass.c, target.c);
  rhs(1, 0) = dot(omegaClass.c, target.c);
  auto sol = linalg::solve(g, rhs, T(0));
  if (!sol) throw Error(ErrorKind::TargetOutsideSpan, "[F] and [w] are dependent");
  ComplexMultiple<T> out{(*sol)(1, 0), (*sol)(0, 0)};
  auto fit = out.b * fClass + out.a * omegaClass;
  if (tol < linalg::max_abs((target - fit).c))
    throw Error(ErrorKind::TargetOutsideSpan, "target is not in span{[F], [w]}");
  return out;
}

template <class T>
struct HodgeSplitting {
  std::vector<CohClass<T>> posPlane;  // base, w
  std::vector<CohClass<T>> h11;       // pairing-orthocomplement
};

template <class T>
HodgeSplitting<T> hodgeSplittingCohomology(const QuadricSpec<T>& q, const CohClass<T>& base,
                                           const T& tol = default_tol<T>()) {
  if (!quadricContains(q, base, tol)) throw Error(ErrorKind::NotInQuadric, "base point is not on the quadric");
  const std::size_t n = q.space->dim;
  linalg::Matrix<T> functionals(2, n);
  const auto pb = linalg::multiply(q.space->pairing, base.c);
  const auto pw = linalg::multiply(q.space->pairing, q.omegaClass.c);
  for (std::size_t j = 0; j < n; ++j) {
    functionals(0, j) = pb[j];
    functionals(1, j) = pw[j];
  }
  HodgeSplitting<T> out;
  out.posPlane = {base, q.omegaClass};
  for (auto& v : linalg::kernel_basis(functionals, tol)) out.h11.emplace_back(q.space, std::move(v));
  return out;
}

template <class T>
struct ReconstructedBrane {
  Form2<T> form;
  BraneReport<T> report;
};

/// Constant representative of a class on the torus quadric, with its brane check.
template <class T>
ReconstructedBrane<T> reconstructBrane(const QuadricSpec<T>& q, const CohClass<T>& c,
                                       const T& tol = default_tol<T>()) {
  if (q.space->name != SpaceName::T4) throw Error(ErrorKind::WrongSpace, "reconstruction needs the torus model");
  if (!quadricContains(q, c, tol)) throw Error(ErrorKind::NotInQuadric, "class is not on the quadric");
  const auto omega = constantFormOfClass(q.omegaClass);
  auto form = constantFormOfClass(c);
  return {form, verifySB(omega, form, tol)};
}

}  // namespace brane

#endif  // BRANE_PERIOD_DOMAIN_HPP
