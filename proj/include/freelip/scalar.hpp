#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace freelip {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

// 113-bit mantissa: more than twice the precision of a double.
using Quad = boost::multiprecision::cpp_bin_float_quad;
using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class NumberMode { exact, floating };

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr NumberMode mode = NumberMode::exact;
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  // Exact arithmetic: pivoting and sign tests need no slack.
  static Rational lp_epsilon() { return Rational(0); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr NumberMode mode = NumberMode::floating;
  static double to_double(double x) { return x; }
  static double lp_epsilon() { return 1e-11; }
};

template <class Scalar>
inline constexpr bool is_exact_v = ScalarTraits<Scalar>::exact;

template <class Scalar>
double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// Parses "n", "n/d", or a decimal literal such as "-0.125" or "1e-3" into an
/// exact rational. Throws Error(Errc::parse) on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical "n/d" form, or "n" when the denominator is 1.
std::string format_rational(const Rational& x);

/// Shortest decimal that round-trips the double, read back as an exact
/// rational. 0.1 becomes 1/10, not the binary expansion.
Rational rational_from_double(double x);

/// Round-trip decimal text for a double ("%.17g" quality, shortest form).
std::string format_double(double x);

template <class Scalar>
std::string format_scalar(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return format_rational(x);
  } else {
    return format_double(x);
  }
}

inline Quad to_quad(const Rational& x) {
  return Quad(numerator(x)) / Quad(denominator(x));
}
inline Quad to_quad(double x) { return Quad(x); }

template <class Real>
Real to_real(const Rational& x) {
  return Real(numerator(x)) / Real(denominator(x));
}

}  // namespace freelip
