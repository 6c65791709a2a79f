#ifndef BRANE_TEST_SUPPORT_HPP
#define BRANE_TEST_SUPPORT_HPP

// Shared fixtures, seeded generators and independent oracles for the tests.
// Oracles here never call the implementation route they check.

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "brane/brane.hpp"

namespace brane::testing {

template <class T>
struct TorusExample {
  Form2<T> omega0 = Form2<T>::e(1, 4) + Form2<T>::e(2, 3);
  Form2<T> f0 = Form2<T>::e(1, 3) - Form2<T>::e(2, 4);
  Form2<T> kappa = Form2<T>::e(1, 2) + Form2<T>::e(3, 4);
};

/// J + J with J = [[0,-1],[1,0]] on (x1, y1) and (x2, y2).
template <class T>
LinearMap4<T> standardI() {
  LinearMap4<T> i;
  i.m[0][1] = T(-1);
  i.m[1][0] = T(1);
  i.m[2][3] = T(-1);
  i.m[3][2] = T(1);
  return i;
}

/// Coefficient of e1234 in a ^ b by antisymmetrizing the tensor product over
/// all 24 permutations: (a ^ b)(e1..e4) = 1/4 sum sgn(s) a(e_s1, e_s2) b(e_s3, e_s4).
template <class T>
T wedgeOracle(const Form2<T>& a, const Form2<T>& b) {
  std::array<int, 4> p{0, 1, 2, 3};
  T total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inversions;
    T sign = inversions % 2 ? T(-1) : T(1);
    total += sign * a.entry(p[0], p[1]) * b.entry(p[2], p[3]);
  } while (std::next_permutation(p.begin(), p.end()));
  return total / T(4);
}

template <class T>
Vec4<T> unit(int i) {
  Vec4<T> v{};
  v[i] = T(1);
  return v;
}

/// Pullback (A^* beta)(u, v) = beta(A u, A v).
template <class T>
Form2<T> pullbackBy(const LinearMap4<T>& a, const Form2<T>& beta) {
  Form2<T> out;
  for (std::size_t s = 0; s < 6; ++s) {
    auto [i, j] = kPairs[s];
    out.c[s] = beta(a(unit<T>(i)), a(unit<T>(j)));
  }
  return out;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

  Form2<double> form2(double range = 1.0) {
    Form2<double> f;
    for (auto& x : f.c) x = uniform(-range, range);
    return f;
  }
  LinearMap4<double> map4(double range = 1.0) {
    LinearMap4<double> m;
    for (auto& row : m.m)
      for (auto& x : row) x = uniform(-range, range);
    return m;
  }
  Form2<Rational> rationalForm2(int range = 3) {
    Form2<Rational> f;
    for (auto& x : f.c) x = Rational(integer(-range, range));
    return f;
  }
};

/// A random brane pair (omega, F): the pullback of (omega0, F0) by a random
/// orientation-preserving linear map.
inline std::pair<Form2<double>, Form2<double>> randomBranePair(Rng& rng) {
  TorusExample<double> ex;
  for (;;) {
    auto a = rng.map4();
    auto wa = pullbackBy(a, ex.omega0);
    double pf = pfaffian(wa);
    if (std::abs(pf) < 0.05) continue;
    if (pf < 0) {
      for (auto& row : a.m) row[0] = -row[0];
      wa = pullbackBy(a, ex.omega0);
    }
    return {wa, pullbackBy(a, ex.f0)};
  }
}

}  // namespace brane::testing

#endif  // BRANE_TEST_SUPPORT_HPP
