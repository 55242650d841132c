#pragma once

// 3-SAT as OI translation membership: a fixed linear OI-mtt whose outputs
// on the ladder input for (n, m) are exactly the satisfiable 3-CNFs with n
// variables and m clauses.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mttkit/mtt.hpp"
#include "mttkit/oracle.hpp"
#include "mttkit/trees.hpp"

namespace mttkit {

struct Literal {
  std::size_t var = 0;  // 0-based: p0, p1, ...
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause3 = std::array<Literal, 3>;

struct Cnf3 {
  std::size_t num_vars = 0;
  std::vector<Clause3> clauses;

  friend bool operator==(const Cnf3&, const Cnf3&) = default;
};

/// "(p0 ∨ ¬p1 ∨ p2) ∧ (¬p0 ∨ p1 ∨ p2)"
std::string to_string(const Cnf3& f);

/// DIMACS: optional `c` comment lines, `p cnf <n> <m>`, then m clauses of
/// exactly three nonzero literals each terminated by 0. Throws SyntaxError.
Cnf3 parse_dimacs(std::string_view text);
std::string to_dimacs(const Cnf3& f);

struct SatInstance {
  Tree s;  // over {a:1, b:3, c:1, d:0}
  Tree t;  // over {and:2, or:3, not:1, v:1, e:0}
};

/// Input alphabet {a:1, b:3, c:1, d:0}, output {and:2, or:3, not:1, v:1,
/// e:0}, states q0:0, qc:2, q:3 with 20 rules.
Mtt build_sat_mtt();

/// s = a(b^(n-1)(c^(m-1) d, d, d)) (size 3n + m - 2) and t the right-nested
/// conjunction of the clauses in order, p_i written v^i e. Throws
/// EmptyFormula for n = 0 or m = 0 and UnknownSymbol for a variable >= n.
SatInstance encode(const Cnf3& f);

/// Formula notation for output trees: ∧(∨(e, ¬ve, vve), ...). Unary and
/// nullary symbols are written without parentheses.
std::string render_formula(const Tree& t);

enum class SatVerdict { sat, unsat, unknown };
std::string_view to_string(SatVerdict v);

/// Decides satisfiability through the OI oracle on encode(f).
SatVerdict sat_check_small(const Cnf3& f, const Budget& budget = {});

/// Exhaustive truth-table check; BudgetExceeded beyond 20 variables.
bool truth_table_sat(const Cnf3& f);

}  // namespace mttkit
