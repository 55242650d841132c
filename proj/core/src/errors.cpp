#include "mttkit/errors.hpp"

namespace mttkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bottom_access: return "BottomAccess";
    case ErrorKind::child_index_out_of_range: return "ChildIndexOutOfRange";
    case ErrorKind::rank_violation: return "RankViolation";
    case ErrorKind::arity_mismatch: return "ArityMismatch";
    case ErrorKind::unknown_symbol: return "UnknownSymbol";
    case ErrorKind::unknown_state: return "UnknownState";
    case ErrorKind::bad_initial_rank: return "BadInitialRank";
    case ErrorKind::reserved_name: return "ReservedName";
    case ErrorKind::duplicate_name: return "DuplicateName";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::malformed_let: return "MalformedLet";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorKind::not_deterministic: return "NotDeterministic";
    case ErrorKind::not_total: return "NotTotal";
    case ErrorKind::unsound_bound: return "UnsoundBound";
    case ErrorKind::empty_formula: return "EmptyFormula";
    case ErrorKind::environment_limit: return "EnvironmentLimit";
    case ErrorKind::engine_mismatch: return "EngineMismatch";
    case ErrorKind::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& what)
    : Error(ErrorKind::syntax_error,
            std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace mttkit
