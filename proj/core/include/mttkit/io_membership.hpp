#pragma once

// Translation membership for IO macro tree transducers: a bottom-up run of
// the inverse-type automaton over s, with states drawn from the nodes of
// the minimal DAG of t (plus bottom for "not a subtree of t").

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mttkit/mtt.hpp"
#include "mttkit/oracle.hpp"
#include "mttkit/trees.hpp"

namespace mttkit {

/// A state of the inverse-type automaton: the set of triples (q, v, v')
/// meaning "q applied to this input subtree, with parameter subtrees at v,
/// may produce the subtree at v'". Entries are grouped by (q, v).
class RunState {
 public:
  RunState() = default;
  /// `state_ranks[q]` is rank(q); `node_count` is |V_t|. Parameter vectors
  /// are packed in base |V_t|+1. Throws BudgetExceeded if they do not fit.
  RunState(std::vector<std::size_t> state_ranks, std::size_t node_count);

  /// Sorted result set for (q, v); empty when there is none.
  std::span<const NodeRef> results(std::size_t q, std::span<const NodeRef> params) const;
  bool contains(std::size_t q, std::span<const NodeRef> params, NodeRef result) const;

  /// Merges `values` (sorted, unique) into the results of (q, v).
  void add(std::size_t q, std::span<const NodeRef> params, std::span<const NodeRef> values);

  std::size_t entry_count() const;
  bool empty() const { return entry_count() == 0; }
  void for_each(
      const std::function<void(std::size_t q, std::span<const NodeRef> params, NodeRef result)>&
          fn) const;

  friend bool operator==(const RunState&, const RunState&);

 private:
  std::uint64_t pack(std::span<const NodeRef> params) const;
  std::vector<NodeRef> unpack(std::uint64_t key, std::size_t length) const;

  std::size_t node_count_ = 0;
  std::vector<std::size_t> ranks_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<NodeRef>>> by_state_;
};

/// {v' : f(rhs, v')} for parameters at `params` and child run states
/// `children` (indexed by input variable). Sorted; bottom last.
std::vector<NodeRef> eval_f(const Mtt& m, const Rhs& rhs, std::span<const NodeRef> params,
                            std::span<const RunState* const> children, const TreeDag& t_dag);

/// run(s) over the DAG of t. Throws AlphabetMismatch / RankViolation for s
/// outside the input alphabet.
RunState run_io(const Mtt& m, const Tree& s, const TreeDag& t_dag);

/// Is (s, t) in the IO translation of m? Trees t using symbols that m
/// cannot output are simply not members.
bool member_io(const Mtt& m, const Tree& s, const Tree& t);

/// Composition of deterministic total mtts evaluated directly, aborting as
/// soon as a constructed tree exceeds 2^n * |t|. Both modes coincide for
/// such mtts. Throws NotDeterministic / NotTotal, and BudgetExceeded when an
/// intermediate stage outgrows the bound but a later stage may shrink it, or
/// when evaluation nests too deeply for the stack.
bool member_det(const std::vector<Mtt>& mtts, Mode mode, const Tree& s, const Tree& t);

/// Statistics of the last member_det call on this thread.
struct DetStats {
  bool aborted = false;
  std::uint64_t nodes_built = 0;
  std::uint64_t bound = 0;
};
DetStats last_det_stats();

}  // namespace mttkit
