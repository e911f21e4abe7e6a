#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

namespace gaudin {

using Rational = mpq_class;
using Complex = std::complex<double>;
using ComplexLD = std::complex<long double>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Complex& x) { return x == Complex{}; }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const ComplexLD& x) { return x == ComplexLD{}; }

inline double magnitude(const Rational& x) { return std::abs(x.get_d()); }
inline double magnitude(const Complex& x) { return std::abs(x); }
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const ComplexLD& x) { return static_cast<double>(std::abs(x)); }

inline Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
inline Complex to_complex(const Complex& x) { return x; }
inline Complex to_complex(const ComplexLD& x) { return {static_cast<double>(x.real()), static_cast<double>(x.imag())}; }

/// Converts between the two scalar fields; Complex -> Rational is not offered.
template <class To, class From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<To, Complex>) {
    return to_complex(x);
  } else if constexpr (std::is_same_v<To, ComplexLD>) {
    if constexpr (std::is_same_v<From, Rational>) return ComplexLD(static_cast<long double>(x.get_d()), 0.0L);
    else return ComplexLD(x.real(), x.imag());
  } else {
    static_assert(std::is_same_v<To, From>, "no exact image of a floating value");
  }
}

/// "p/q" (or "p" for integers), canonical form.
inline std::string to_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_str();
}

/// Parses "p", "p/q" or a plain decimal such as "-0.25" into an exact rational.
Rational parse_rational(const std::string& text);

}  // namespace gaudin
