#pragma once

// Reference semantics by explicit set enumeration. Exact but exponential:
// use at desk scale only. Budget overflow is reported, never guessed.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mttkit/multi_return.hpp"
#include "mttkit/mtt.hpp"
#include "mttkit/tac.hpp"
#include "mttkit/trees.hpp"

namespace mttkit {

enum class Mode { io, oi };
std::string_view to_string(Mode mode);

struct Budget {
  std::size_t max_set_size = 100'000;
  /// nullopt: 4*|t| when checking membership of t, unbounded otherwise.
  std::optional<std::size_t> max_tree_size;
  std::size_t max_steps = 10'000'000;

  /// Throws BudgetExceeded unless every limit is positive.
  void check() const;
};

/// Canonical finite set of trees over Delta and parameters y1, y2, ...
/// (parameters are ordinary rank-0 labels). Sorted by the structural order.
class TreeSet {
 public:
  TreeSet() = default;
  TreeSet(std::initializer_list<Tree> trees);
  explicit TreeSet(std::vector<Tree> trees);

  bool insert(Tree t);
  bool contains(const Tree& t) const;
  std::size_t size() const { return trees_.size(); }
  bool empty() const { return trees_.empty(); }
  auto begin() const { return trees_.begin(); }
  auto end() const { return trees_.end(); }
  const std::vector<Tree>& trees() const { return trees_; }

  friend bool operator==(const TreeSet&, const TreeSet&) = default;

 private:
  std::vector<Tree> trees_;
};

/// t <-IO (L1..Ln): one choice per parameter, shared by all its occurrences.
/// Every L_i must be non-empty, whether or not y_i occurs in t.
TreeSet io_subst(const Tree& t, std::span<const TreeSet> args, const Budget& budget = {});
/// t <-OI (L1..Ln): an independent choice at every occurrence.
TreeSet oi_subst(const Tree& t, std::span<const TreeSet> args, const Budget& budget = {});
TreeSet io_subst(const TreeSet& l, std::span<const TreeSet> args, const Budget& budget = {});
TreeSet oi_subst(const TreeSet& l, std::span<const TreeSet> args, const Budget& budget = {});

/// A tree over Delta, parameters and state calls on concrete input trees.
struct SemTerm {
  enum class Kind { output, param, call };

  Kind kind = Kind::output;
  std::string symbol;
  std::size_t index = 0;  // param number (0-based)
  std::size_t state = 0;
  Tree input;             // call: the input tree s in <q, s>
  std::vector<SemTerm> children;

  static SemTerm output(std::string symbol, std::vector<SemTerm> children = {});
  static SemTerm param(std::size_t i);
  static SemTerm call(std::size_t state, Tree input, std::vector<SemTerm> args = {});
};

/// [[u]]^M_mode. Throws BudgetExceeded.
TreeSet eval(const Mtt& m, Mode mode, const SemTerm& u, const Budget& budget = {});
/// [[<q, s>(y1, ..., yk)]]: the parameterized outputs of state q on s.
TreeSet eval_state(const Mtt& m, Mode mode, std::size_t q, const Tree& s,
                   const Budget& budget = {});
TreeSet eval_state(const TacMtt& m, Mode mode, std::size_t q, const Tree& s,
                   const Budget& budget = {});
/// [[<q0, s>]].
TreeSet translate(const Mtt& m, Mode mode, const Tree& s, const Budget& budget = {});
TreeSet translate(const TacMtt& m, Mode mode, const Tree& s, const Budget& budget = {});

enum class Verdict { yes, no, unknown };
std::string_view to_string(Verdict v);

struct OracleOptions {
  Budget budget;
  /// Collapse every enumerated tree larger than |t| into one "too large"
  /// marker. Sound because outputs are ground: substitution never shrinks
  /// a tree.
  bool prune = true;
};

/// Is t in [[<q0, s>]]_mode? `unknown` when the budget runs out.
Verdict oracle_member(const Mtt& m, Mode mode, const Tree& s, const Tree& t,
                      const OracleOptions& options = {});
Verdict oracle_member(const TacMtt& m, Mode mode, const Tree& s, const Tree& t,
                      const OracleOptions& options = {});

/// IO outputs of a multi-return transducer on s.
TreeSet eval_mr_io(const MrMtt& m, const Tree& s, const Budget& budget = {});
/// Tuples of [[<q, s>(y1..yk)]] for a multi-return state.
std::vector<std::vector<Tree>> eval_mr_state(const MrMtt& m, std::size_t q, const Tree& s,
                                             const Budget& budget = {});
Verdict oracle_member_mr(const MrMtt& m, const Tree& s, const Tree& t,
                         const OracleOptions& options = {});

/// delta~(t) straight from the set-valued definition, comparing sibling
/// subtrees structurally. A total deterministic TAC yields one state.
std::vector<std::size_t> tac_states_reference(const Tac& tac, const Tree& t);

/// Enumerates every tree over `alphabet` with at most `max_size` nodes, in
/// order of increasing size.
std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_size);
/// Every tree of height at most `max_height`.
std::vector<Tree> enumerate_trees_by_height(const RankedAlphabet& alphabet,
                                            std::size_t max_height,
                                            std::size_t limit = 1'000'000);

}  // namespace mttkit
