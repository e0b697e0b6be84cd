#pragma once

// Shared scalar types and error taxonomy.
//
// Exact arithmetic is boost::multiprecision (header-only backends): cpp_int for
// unbounded integers, cpp_rational for exact rationals.  High-precision floats
// are cpp_bin_float_50 (50 significant decimal digits); character-ratio
// determinants subtract nearly equal exponentials and need the headroom.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace sawtooth {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

// Thrown when a configured enumeration/size budget is exceeded.  Callers that
// treat budget violations as "skip" rather than "fail" catch this type.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

template <class S>
struct is_exact_scalar : std::false_type {};
template <>
struct is_exact_scalar<Rational> : std::true_type {};
template <>
struct is_exact_scalar<BigInt> : std::true_type {};

template <class S>
inline constexpr bool is_exact_scalar_v = is_exact_scalar<S>::value;

inline BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

template <class S>
S scalar_from_rational(const Rational& r) {
  if constexpr (std::is_same_v<S, Rational>) {
    return r;
  } else {
    return r.convert_to<S>();
  }
}

template <class S>
S scalar_abs(const S& x) {
  using std::abs;
  return abs(x);
}

// "num/den" rendering used by all JSON output of exact rationals.
inline std::string rational_to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace sawtooth
