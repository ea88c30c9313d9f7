#pragma once

#include <stdexcept>
#include <string>

namespace chevfiber {

// Mirrors cf_status in chevfiber.h; values must stay in sync.
enum class ErrorCode : int {
  invalid_argument = 1,
  dimension_mismatch = 2,
  unknown_variable = 3,
  unsupported = 4,
  parse = 5,
  dependent = 6,
  non_integer = 7,
  ramified = 8,
  diverged = 9,
  singular = 10,
  solver_failure = 11,
  integrity = 12,
  clustering = 13,
  capacity = 14,
  not_found = 15,
  io = 16,
  internal = 17,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chevfiber
