#ifndef BRANE_BRANE_CHECK_HPP
#define BRANE_BRANE_CHECK_HPP

// Brane conditions for a constant symplectic form omega and a 2-form F on T^4:
//   SB(1) F^F = w^w   SB(2) F^w = 0   SB(3) dF = 0
// and the holomorphic symplectic conditions for Omega = F + i w:
//   HS(1) Omega^conj(Omega) > 0   HS(2) Omega^Omega = 0   HS(3) dOmega = 0.
//
// Constant inputs are checked once, exactly in the scalar type. Non-constant
// inputs are sampled on the uniform grid, which requires T = double.

#include <algorithm>
#include <vector>

#include "brane/error.hpp"
#include "brane/exterior4.hpp"
#include "brane/scalar.hpp"
#include "brane/torus_forms.hpp"

namespace brane {

template <class T>
struct BraneReport {
  T sb1_resid{};
  T sb2_resid{};
  T sb3_resid{};
  T i_square_resid{};
  bool pass = false;
  int grid_used = 0;
  T tol{};
};

template <class T>
struct HSReport {
  T hs1_min{};     // min over samples of Omega ^ conj(Omega)
  T hs2_resid{};   // max over samples of |Omega ^ Omega| (sup of real and imaginary parts)
  T hs3_resid{};   // largest Fourier coefficient of dOmega
  bool hs1 = false;
  bool hs2 = false;
  bool hs3 = false;
  bool pass = false;
  int grid_used = 0;
  T tol{};
};

/// Omega = re + i im with trigonometric-polynomial coefficients.
template <class T>
struct ComplexTrigForm2 {
  TrigPolyForm2<T> re;
  TrigPolyForm2<T> im;
};

template <class T>
struct DeformationResiduals {
  T res_i{};
  T res_ii{};
  T res_iii{};
};

namespace detail {

template <class T>
void requireNonDegenerate(const Form2<T>& omega, const T& tol) {
  T pf = pfaffian(omega);
  if (!(tol < pf * pf)) throw Error(ErrorKind::NonDegenerateRequired, "omega is degenerate");
}

/// Sample points: one point when every field is constant, the grid otherwise.
template <class T>
std::pair<std::vector<Point>, int> samplePoints(std::initializer_list<const TrigPolyForm2<T>*> fields,
                                                int grid) {
  bool constant = std::all_of(fields.begin(), fields.end(), [](auto* f) { return f->isConstant(); });
  if (constant) return {{Point{0, 0, 0, 0}}, 1};
  return {uniformGrid(grid), grid};
}

}  // namespace detail

template <class T>
BraneReport<T> verifySB(const Form2<T>& omega, const TrigPolyForm2<T>& f, int grid = kDefaultGrid,
                        const T& tol = default_tol<T>()) {
  detail::requireNonDegenerate(omega, tol);
  BraneReport<T> rep;
  rep.tol = tol;
  const T ww = wedge22(omega, omega).value;
  auto [points, used] = detail::samplePoints<T>({&f}, grid);
  rep.grid_used = used;
  for (const auto& x : points) {
    const auto fx = evalAt(f, x);
    const T ff = wedge22(fx, fx).value;
    // Orientation is folded into SB(1): a non-positive F^F adds its magnitude.
    T sb1 = abs_value(T(ff - ww));
    if (!(T(0) < ff)) sb1 += abs_value(ff);
    rep.sb1_resid = max_of(rep.sb1_resid, sb1);
    rep.sb2_resid = max_of(rep.sb2_resid, abs_value(wedge22(fx, omega).value));
    rep.i_square_resid = max_of(rep.i_square_resid, almostComplexResidual(composeI(omega, fx, tol)));
  }
  rep.sb3_resid = exteriorD(f).maxCoefficient();
  rep.pass = !(tol < rep.sb1_resid) && !(tol < rep.sb2_resid) && !(tol < rep.sb3_resid) &&
             !(tol < rep.i_square_resid);
  return rep;
}

template <class T>
BraneReport<T> verifySB(const Form2<T>& omega, const Form2<T>& f, const T& tol = default_tol<T>()) {
  return verifySB(omega, TrigPolyForm2<T>::constant(f), 1, tol);
}

template <class T>
HSReport<T> verifyHS(const ComplexTrigForm2<T>& o, int grid = kDefaultGrid,
                     const T& tol = default_tol<T>()) {
  HSReport<T> rep;
  rep.tol = tol;
  auto [points, used] = detail::samplePoints<T>({&o.re, &o.im}, grid);
  rep.grid_used = used;
  bool first = true;
  for (const auto& x : points) {
    const auto re = evalAt(o.re, x);
    const auto im = evalAt(o.im, x);
    const T rr = wedge22(re, re).value;
    const T ii = wedge22(im, im).value;
    const T ri = wedge22(re, im).value;
    const T vol = rr + ii;
    rep.hs1_min = first ? vol : (vol < rep.hs1_min ? vol : rep.hs1_min);
    first = false;
    rep.hs2_resid = max_of(rep.hs2_resid, max_of(abs_value(T(rr - ii)), abs_value(T(T(2) * ri))));
  }
  rep.hs3_resid = max_of(exteriorD(o.re).maxCoefficient(), exteriorD(o.im).maxCoefficient());
  rep.hs1 = tol < rep.hs1_min;
  rep.hs2 = !(tol < rep.hs2_resid);
  rep.hs3 = !(tol < rep.hs3_resid);
  rep.pass = rep.hs1 && rep.hs2 && rep.hs3;
  return rep;
}

/// True iff the brane test on (omega, F) and the holomorphic symplectic test on
/// F + i omega reach the same verdict.
template <class T>
bool equivalenceSBHS(const Form2<T>& omega, const TrigPolyForm2<T>& f, int grid = kDefaultGrid,
                     const T& tol = default_tol<T>()) {
  const bool sb = verifySB(omega, f, grid, tol).pass;
  const bool hs = verifyHS(ComplexTrigForm2<T>{f, TrigPolyForm2<T>::constant(omega)}, grid, tol).pass;
  return sb == hs;
}

/// F = omega o I for a constant almost complex structure I.
template <class T>
Form2<T> braneOfComplexStructure(const Form2<T>& omega, const LinearMap4<T>& i,
                                 const T& tol = default_tol<T>()) {
  detail::requireNonDegenerate(omega, tol);
  if (!isAlmostComplex(i, tol)) throw Error(ErrorKind::NotAlmostComplex, "I^2 != -Id");
  auto lowered = lowerWithOmega(omega, i);
  if (tol < lowered.symmetric_residual) throw Error(ErrorKind::NotSkew, "omega o I is not skew");
  return lowered.form;
}

/// Field version: F = omega o I computed exactly in the trigonometric ring;
/// almost-complexity and skewness are checked on the grid.
template <class T>
TrigPolyForm2<T> braneOfComplexStructure(const Form2<T>& omega, const TrigPolyMap4<T>& i,
                                         int grid = kDefaultGrid, const T& tol = default_tol<T>()) {
  detail::requireNonDegenerate(omega, tol);
  std::vector<Point> points =
      i.isConstant() ? std::vector<Point>{Point{0, 0, 0, 0}} : uniformGrid(grid);
  for (const auto& x : points) {
    const auto ix = evalAt(i, x);
    if (!isAlmostComplex(ix, tol)) throw Error(ErrorKind::NotAlmostComplex, "I^2 != -Id on the grid");
    if (tol < lowerWithOmega(omega, ix).symmetric_residual)
      throw Error(ErrorKind::NotSkew, "omega o I is not skew on the grid");
  }
  // F_ab = 1/2 sum_k (I_ka w_kb - I_kb w_ka)
  TrigPolyForm2<T> out;
  const T half = T(1) / T(2);
  for (std::size_t s = 0; s < 6; ++s) {
    auto [a, b] = kPairs[s];
    TrigPolyFn<T> acc;
    for (int k = 0; k < 4; ++k) {
      acc += (half * omega.entry(k, b)) * i.m[k][a];
      acc -= (half * omega.entry(k, a)) * i.m[k][b];
    }
    out.c[s] = acc;
  }
  return out;
}

/// Residuals of  F^a + a^a/2 = 0,  w^a = 0,  da = 0  for a deformation F -> F + a.
template <class T>
DeformationResiduals<T> deformationCheck(const Form2<T>& omega, const TrigPolyForm2<T>& f,
                                         const TrigPolyForm2<T>& alpha, int grid = kDefaultGrid) {
  DeformationResiduals<T> out;
  const T half = T(1) / T(2);
  auto [points, used] = detail::samplePoints<T>({&f, &alpha}, grid);
  for (const auto& x : points) {
    const auto fx = evalAt(f, x);
    const auto ax = evalAt(alpha, x);
    out.res_i = max_of(out.res_i, abs_value(T(wedge22(fx, ax).value + half * wedge22(ax, ax).value)));
    out.res_ii = max_of(out.res_ii, abs_value(wedge22(omega, ax).value));
  }
  out.res_iii = exteriorD(alpha).maxCoefficient();
  return out;
}

template <class T>
DeformationResiduals<T> deformationCheck(const Form2<T>& omega, const Form2<T>& f, const Form2<T>& alpha) {
  return deformationCheck(omega, TrigPolyForm2<T>::constant(f), TrigPolyForm2<T>::constant(alpha), 1);
}

/// Infinitesimal deformation test: alpha closed and of type (1,1) for I = omega^{-1} F.
template <class T>
bool linearizedDeformationCheck(const Form2<T>& omega, const TrigPolyForm2<T>& f,
                                const TrigPolyForm2<T>& alpha, int grid = kDefaultGrid,
                                const T& tol = default_tol<T>()) {
  if (tol < exteriorD(alpha).maxCoefficient()) return false;
  auto [points, used] = detail::samplePoints<T>({&f, &alpha}, grid);
  for (const auto& x : points) {
    const auto i = composeI(omega, evalAt(f, x), tol);
    if (tol < typeProjectors(i, evalAt(alpha, x), tol).p20.max_abs()) return false;
  }
  return true;
}

template <class T>
bool linearizedDeformationCheck(const Form2<T>& omega, const Form2<T>& f, const Form2<T>& alpha,
                                const T& tol = default_tol<T>()) {
  return linearizedDeformationCheck(omega, TrigPolyForm2<T>::constant(f),
                                    TrigPolyForm2<T>::constant(alpha), 1, tol);
}

}  // namespace brane

#endif  // BRANE_BRANE_CHECK_HPP
