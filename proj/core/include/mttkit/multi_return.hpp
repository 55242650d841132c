#pragma once

// Multi-return macro tree transducers: states return tuples, destructured
// by let-bindings.

#include <cstddef>
#include <map>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <string>
#include <vector>

#include "mttkit/mtt.hpp"
#include "mttkit/trees.hpp"

namespace mttkit {

/// Tree over Delta, parameters y_i and let-variables z_i (0-based indices).
struct MrTerm {
  enum class Kind { output, param, var };

  Kind kind = Kind::output;
  std::string symbol;
  std::size_t index = 0;
  std::vector<MrTerm> children;

  static MrTerm output(std::string symbol, std::vector<MrTerm> children = {});
  static MrTerm param(std::size_t i);
  static MrTerm var(std::size_t i);

  std::size_t size() const;
  friend bool operator==(const MrTerm&, const MrTerm&);
};

/// let (z_targets...) = <state, x_input>(args...) in
struct MrLet {
  std::vector<std::size_t> targets;
  std::size_t state = 0;
  std::size_t input = 0;
  std::vector<MrTerm> args;

  friend bool operator==(const MrLet&, const MrLet&) = default;
};

struct MrRhs {
  std::vector<MrLet> lets;
  std::vector<MrTerm> result;

  std::size_t size() const;
  friend bool operator==(const MrRhs&, const MrRhs&) = default;
};

struct MrStateDecl {
  std::string name;
  std::size_t rank = 0;
  std::size_t dimension = 1;
};

class MrMtt {
 public:
  using RuleKey = std::pair<std::size_t, std::string>;

  std::string name;
  RankedAlphabet input;
  RankedAlphabet output;
  std::vector<MrStateDecl> states;
  std::size_t initial = 0;

  std::size_t add_state(const std::string& state_name, std::size_t rank, std::size_t dimension);
  std::optional<std::size_t> find_state(std::string_view state_name) const;

  bool add_rule(std::size_t state, const std::string& symbol, MrRhs rhs);
  const std::vector<MrRhs>& rules_for(std::size_t state, std::string_view symbol) const;
  const std::map<RuleKey, std::vector<MrRhs>>& rules() const { return rules_; }

  std::size_t rule_count() const;
  std::size_t size() const;
  std::size_t max_state_rank() const;
  std::size_t max_dimension() const;

 private:
  std::map<RuleKey, std::vector<MrRhs>> rules_;
};

struct MrClass {
  bool deterministic = false;
  bool total = false;
  std::size_t max_state_rank = 0;
  std::size_t max_dimension = 0;
};

/// Checks ranks, dimensions and let well-formedness: every z is bound
/// exactly once, before any use, and never used inside its own binding.
/// Throws BadInitialRank (also for D(q0) != 1), ArityMismatch,
/// UnknownSymbol, UnknownState or MalformedLet.
MrClass validate(const MrMtt& m);

/// Ordinary mtt as an mr-mtt with all dimensions 1: every state call
/// becomes a let, innermost calls first.
MrMtt embed_mtt(const Mtt& m);

std::string pretty_print(const MrMtt& m);

/// Options for the membership engine.
struct MrLimits {
  /// Hard cap on the number of environments alive for one right-hand side.
  std::size_t max_environments = 1'000'000;
};

/// Triples (q, v, w): q on this input subtree, with parameter subtrees at
/// v, may return the tuple of subtrees at w. Bottom allowed anywhere.
class MrRunState {
 public:
  MrRunState() = default;
  MrRunState(std::vector<std::size_t> state_ranks, std::size_t node_count);

  /// Sorted result tuples for (q, v).
  std::span<const std::vector<NodeRef>> results(std::size_t q,
                                                std::span<const NodeRef> params) const;
  bool contains(std::size_t q, std::span<const NodeRef> params,
                std::span<const NodeRef> result) const;
  void add(std::size_t q, std::span<const NodeRef> params,
           std::vector<std::vector<NodeRef>> tuples);

  std::size_t entry_count() const;

  friend bool operator==(const MrRunState&, const MrRunState&) = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::vector<NodeRef>>>> by_state_;
};

/// run(s) over the DAG of t. Throws AlphabetMismatch and EnvironmentLimit.
MrRunState run_mr_io(const MrMtt& m, const Tree& s, const TreeDag& t_dag, MrLimits limits = {});

/// IO translation membership. Throws AlphabetMismatch for undeclared input
/// symbols and EnvironmentLimit when the cap is hit.
bool member_mr_io(const MrMtt& m, const Tree& s, const Tree& t, MrLimits limits = {});

}  // namespace mttkit
