#pragma once

#include <stdexcept>
#include <string>

namespace gsig {

enum class errc {
  index_out_of_range,
  self_loop,
  duplicate_edge,
  non_positive_weight,
  degenerate_features,
  dimension_mismatch,
  too_large,
  too_few_realizations,
  empty_ensemble,
  zero_matrix,
  negative_diagonal,
  asymmetric_input,
  nonzero_diagonal,
  operator_not_a_filter,
  zero_variance_reference,
  bad_input,
  singular_system,
  infeasible,
};

/// All library failures are reported through this exception.
/// `numerical()` separates runtime numerical failures (a system that cannot
/// be solved, constraints that cannot be met) from invalid input or usage.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

  bool numerical() const noexcept {
    return code_ == errc::singular_system || code_ == errc::infeasible;
  }

private:
  errc code_;
};

const char* errc_name(errc code) noexcept;

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace gsig
