#pragma once

// Bottom-up tree automata with sibling equality/disequality constraints
// (TACs), and IO membership for mtts that use a TAC as look-ahead.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mttkit/mtt.hpp"
#include "mttkit/trees.hpp"

namespace mttkit {

/// Pair of 0-based child indices.
using ChildPair = std::pair<std::size_t, std::size_t>;

struct TacTransition {
  std::string symbol;
  std::vector<std::size_t> children;  // p_1..p_m
  std::vector<ChildPair> eq;          // E
  std::vector<ChildPair> neq;         // D
  std::size_t target = 0;             // p
};

/// (P, Sigma, delta). Must behave total-deterministically on every input it
/// is run on; this is checked per node at run time.
class Tac {
 public:
  std::vector<std::string> states;
  std::vector<TacTransition> transitions;

  std::size_t add_state(const std::string& name);
  std::optional<std::size_t> find_state(std::string_view name) const;

  /// Checks state and symbol references and constraint indices.
  void validate(const RankedAlphabet& sigma) const;
};

/// True iff the children satisfy every (i,j) in E (equal) and D (distinct),
/// compared by node identity.
bool satisfies(std::span<const NodeRef> children, const std::vector<ChildPair>& eq,
               const std::vector<ChildPair>& neq);

/// Memoizing TAC run over one DAG. Equality constraints are node-identity
/// comparisons.
class TacRunner {
 public:
  TacRunner(const Tac& tac, const TreeDag& dag);

  /// delta~(t|_v). Throws NotDeterministic / NotTotal naming the position
  /// (relative to `v`) of the first offending node.
  std::size_t state_of(NodeRef v);

 private:
  std::size_t run(NodeRef v, Position& path);

  const Tac& tac_;
  const TreeDag& dag_;
  std::vector<std::optional<std::size_t>> memo_;
  std::vector<std::vector<std::size_t>> by_symbol_;  // transition indices per dag symbol
};

std::size_t run_tac(const Tac& tac, const TreeDag& dag, NodeRef v);

/// Look-ahead side condition of a rule; nullopt entries match any state.
struct LookaheadGuard {
  std::vector<std::optional<std::size_t>> states;
  std::vector<ChildPair> eq;
  std::vector<ChildPair> neq;

  friend bool operator==(const LookaheadGuard&, const LookaheadGuard&) = default;
};

struct TacRule {
  std::size_t state = 0;
  std::string symbol;
  LookaheadGuard guard;
  Rhs rhs;
};

/// Mtt with TAC look-ahead. Rules stored in `base` are unconditional (they
/// apply for every look-ahead state and carry no constraints); `rules` hold
/// the guarded ones.
struct TacMtt {
  Mtt base;
  Tac lookahead;
  std::vector<TacRule> rules;

  std::size_t rule_count() const { return base.rule_count() + rules.size(); }
};

MttClass validate(const TacMtt& m);

/// Wraps a plain mtt with a one-state, constraint-free look-ahead.
TacMtt with_trivial_lookahead(const Mtt& m);

/// Right-hand sides applicable to state `q` at a node labelled `symbol`
/// whose children have look-ahead states `child_states` and DAG identities
/// `children`.
std::vector<const Rhs*> applicable_rules(const TacMtt& m, std::size_t q,
                                         const std::string& symbol,
                                         std::span<const std::size_t> child_states,
                                         std::span<const NodeRef> children);

/// IO translation membership with TAC look-ahead. Throws AlphabetMismatch
/// for undeclared input symbols and NotDeterministic/NotTotal from the TAC.
bool member_io_tac(const TacMtt& m, const Tree& s, const Tree& t);

}  // namespace mttkit
