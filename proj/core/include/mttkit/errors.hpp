#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mttkit {

enum class ErrorKind {
  bottom_access,
  child_index_out_of_range,
  rank_violation,
  arity_mismatch,
  unknown_symbol,
  unknown_state,
  bad_initial_rank,
  reserved_name,
  duplicate_name,
  syntax_error,
  malformed_let,
  budget_exceeded,
  alphabet_mismatch,
  not_deterministic,
  not_total,
  unsound_bound,
  empty_formula,
  environment_limit,
  engine_mismatch,
  io_error,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is the stable part; the
/// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the parsers; carries a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mttkit
