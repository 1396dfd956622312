#pragma once

#include <stdexcept>
#include <string>

namespace freelip {

enum class Errc {
  parse,
  validation,
  same_point,
  not_distinct,
  bad_exponent,
  empty_subset,
  alpha_too_large,
  middle_point_exists,
  lp_failure,
  float_mode_unsupported,
  oracle_unavailable,
  dimension_mismatch,
  rejection_budget_exceeded,
  bad_lambda,
  bad_depth,
  constraint_unsatisfiable,
  bad_sequences,
  unknown_family,
  unknown_label,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace freelip
