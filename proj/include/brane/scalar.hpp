#ifndef BRANE_SCALAR_HPP
#define BRANE_SCALAR_HPP

#include <cmath>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace brane {

/// Exact rational scalar used for integer-coefficient regression checks.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                                boost::multiprecision::et_off>;

template <class T>
inline constexpr bool is_floating_scalar_v = std::is_floating_point_v<T>;

template <class T>
T abs_value(const T& x) {
  if constexpr (is_floating_scalar_v<T>) {
    return std::abs(x);
  } else {
    return x < T(0) ? T(-x) : x;
  }
}

template <class T>
double to_double(const T& x) {
  if constexpr (is_floating_scalar_v<T>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

/// Converts a double into T. For Rational this is exact (binary expansion).
template <class T>
T from_double(double x) {
  if constexpr (is_floating_scalar_v<T>) {
    return static_cast<T>(x);
  } else {
    return T(x);
  }
}

inline constexpr double kDefaultTol = 1e-9;

template <class T>
T default_tol() {
  return from_double<T>(kDefaultTol);
}

template <class T>
T max_of(const T& a, const T& b) {
  return a < b ? b : a;
}

}  // namespace brane

#endif  // BRANE_SCALAR_HPP
