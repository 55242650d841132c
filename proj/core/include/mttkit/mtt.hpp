#pragma once

// Macro tree transducers: states, rules, right-hand sides, classification.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mttkit/trees.hpp"

namespace mttkit {

/// Right-hand side tree over Delta, state calls <q', x_j> and parameters y_i.
/// Indices are 0-based: `Rhs::param(0)` is y1 and `input == 0` is x1.
struct Rhs {
  enum class Kind { output, param, call };

  Kind kind = Kind::output;
  std::string symbol;       // output
  std::size_t index = 0;    // param: parameter number; call: input variable
  std::size_t state = 0;    // call: callee
  std::vector<Rhs> children;  // output children or call arguments

  static Rhs output(std::string symbol, std::vector<Rhs> children = {});
  static Rhs param(std::size_t i);
  static Rhs call(std::size_t state, std::size_t input, std::vector<Rhs> args = {});

  std::size_t size() const;
  bool has_params() const;

  friend bool operator==(const Rhs&, const Rhs&);
};

struct StateDecl {
  std::string name;
  std::size_t rank = 0;
};

/// M = (Q, Sigma, Delta, q0, R). Rules are keyed by (state, input symbol);
/// alternatives for one key form a set (structural duplicates are dropped).
class Mtt {
 public:
  using RuleKey = std::pair<std::size_t, std::string>;

  std::string name;
  RankedAlphabet input;
  RankedAlphabet output;
  std::vector<StateDecl> states;
  std::size_t initial = 0;

  /// Returns the new state's id; DuplicateName if the name exists.
  std::size_t add_state(const std::string& state_name, std::size_t rank);
  std::optional<std::size_t> find_state(std::string_view state_name) const;
  std::size_t state_id(std::string_view state_name) const;  // throws UnknownState

  /// Returns false if a structurally equal rule was already present.
  bool add_rule(std::size_t state, const std::string& symbol, Rhs rhs);
  const std::vector<Rhs>& rules_for(std::size_t state, std::string_view symbol) const;
  const std::map<RuleKey, std::vector<Rhs>>& rules() const { return rules_; }

  std::size_t rule_count() const;
  /// |M|: sum of right-hand-side sizes.
  std::size_t size() const;
  std::size_t max_state_rank() const;

 private:
  std::map<RuleKey, std::vector<Rhs>> rules_;
};

struct MttClass {
  bool deterministic = false;
  bool total = false;
  bool linear_input = false;
  bool linear_params = false;
  std::size_t max_state_rank = 0;

  friend bool operator==(const MttClass&, const MttClass&) = default;
};

/// Structural validation plus classification. Throws ArityMismatch,
/// UnknownSymbol, UnknownState or BadInitialRank naming the offending rule.
MttClass validate(const Mtt& m);

/// Human-readable summary, e.g. "deterministic: false, total: true, ...".
std::string to_string(const MttClass& c);

/// DSL text for a single right-hand side in the context of `m`.
std::string rhs_to_string(const Mtt& m, const Rhs& rhs);
/// Full DSL text; `parse_mtt(pretty_print(m))` reproduces `m`.
std::string pretty_print(const Mtt& m);

/// Validates one right-hand side for a rule of state `q` on a symbol of rank
/// `input_rank`. Shared with the look-ahead extension.
void validate_rhs(const Mtt& m, std::size_t q, std::size_t input_rank, const Rhs& rhs,
                  const std::string& where);

}  // namespace mttkit
