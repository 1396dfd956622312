#include "freelip/scalar.hpp"

#include <charconv>
#include <cctype>

#include "freelip/errors.hpp"

namespace freelip {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::parse: return "ParseError";
    case Errc::validation: return "ValidationError";
    case Errc::same_point: return "SamePoint";
    case Errc::not_distinct: return "NotDistinct";
    case Errc::bad_exponent: return "BadExponent";
    case Errc::empty_subset: return "EmptySubset";
    case Errc::alpha_too_large: return "AlphaTooLarge";
    case Errc::middle_point_exists: return "MiddlePointExists";
    case Errc::lp_failure: return "LPFailure";
    case Errc::float_mode_unsupported: return "FloatModeUnsupported";
    case Errc::oracle_unavailable: return "OracleUnavailable";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::rejection_budget_exceeded: return "RejectionBudgetExceeded";
    case Errc::bad_lambda: return "BadLambda";
    case Errc::bad_depth: return "BadDepth";
    case Errc::constraint_unsatisfiable: return "ConstraintUnsatisfiable";
    case Errc::bad_sequences: return "BadSequences";
    case Errc::unknown_family: return "UnknownFamily";
    case Errc::unknown_label: return "UnknownLabel";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw Error(Errc::parse, "malformed number '" + std::string(whole) + "'");
  }
  // Leading zeros would select octal in the string constructor.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  Integer value{std::string(s)};
  return negative ? Integer(-value) : value;
}

Integer pow10(long exponent) {
  Integer result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw Error(Errc::parse, "empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash), whole);
    Integer den = parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw Error(Errc::parse, "zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw Error(Errc::parse, "malformed exponent in '" + std::string(whole) + "'");
    }
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)) || (int_part.empty() && frac_part.empty())) {
      throw Error(Errc::parse, "malformed number '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(text)) throw Error(Errc::parse, "malformed number '" + std::string(whole) + "'");
    digits = std::string(text);
  }
  const auto nonzero = digits.find_first_not_of('0');
  Integer mantissa{nonzero == std::string::npos ? std::string("0") : digits.substr(nonzero)};
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational(mantissa * pow10(exponent));
  return Rational(mantissa, pow10(-exponent));
}

std::string format_rational(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(Errc::parse, "non-finite value cannot be made exact");
  return parse_rational(format_double(x));
}

}  // namespace freelip
