#pragma once

// OI translation membership for mtts that are finite-copying in the
// parameters: parameter positions of the automaton hold sets of at most c
// output nodes instead of single nodes.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "mttkit/mtt.hpp"
#include "mttkit/oracle.hpp"
#include "mttkit/trees.hpp"

namespace mttkit {

/// Declared copying bound: no parameter occurs more than c times in any
/// producible state output. Trusted, not decided.
struct CopyBound {
  std::size_t c = 1;
};

/// All subsets of {0..node_count-1} with at most c elements, numbered.
/// With c = 1 these are just "no node" and the single nodes.
class SubsetTable {
 public:
  SubsetTable(std::size_t node_count, std::size_t c);

  std::size_t size() const { return subsets_.size(); }
  std::size_t bound() const { return c_; }
  std::span<const NodeRef> subset(std::size_t id) const { return subsets_[id]; }
  /// Id of a sorted subset, or npos if it is larger than c.
  std::size_t id_of(std::span<const NodeRef> sorted_nodes) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t c_;
  std::vector<std::vector<NodeRef>> subsets_;
  std::unordered_map<std::uint64_t, std::size_t> ids_;
  std::size_t node_count_;
  std::uint64_t key(std::span<const NodeRef> nodes) const;
};

/// Triples (q, beta, v') with every beta_i of size <= c and v' in V_t.
class FcRunState {
 public:
  FcRunState() = default;
  FcRunState(std::vector<std::size_t> state_ranks, std::shared_ptr<const SubsetTable> subsets);

  /// Sorted results for (q, subset ids).
  std::span<const NodeRef> results(std::size_t q, std::span<const std::size_t> betas) const;
  bool contains(std::size_t q, const std::vector<std::vector<NodeRef>>& betas,
                NodeRef result) const;
  void add(std::size_t q, std::span<const std::size_t> betas, std::span<const NodeRef> values);

  std::size_t entry_count() const;
  const SubsetTable& subsets() const { return *subsets_; }

  friend bool operator==(const FcRunState&, const FcRunState&);

 private:
  std::uint64_t pack(std::span<const std::size_t> betas) const;

  std::vector<std::size_t> ranks_;
  std::shared_ptr<const SubsetTable> subsets_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<NodeRef>>> by_state_;
};

/// run(s) of the finite-copying automaton over the DAG of t.
FcRunState run_oi_fc(const Mtt& m, CopyBound c, const Tree& s, const TreeDag& t_dag);

/// Is (s, t) in the OI translation of m, assuming m copies each parameter
/// at most c times? Throws UnsoundBound for c = 0 and AlphabetMismatch for
/// s outside the input alphabet.
bool member_oi_fc(const Mtt& m, CopyBound c, const Tree& s, const Tree& t);

struct CopyEstimate {
  /// Largest number of occurrences of one parameter seen in any state
  /// output (at least 1).
  std::size_t bound = 1;
  /// False when the count still grew at the deepest level explored or
  /// passed the threshold: the mtt is probably not finite-copying.
  bool conforming = true;
  /// Running maximum over inputs of height <= i+1; may stop short of the
  /// requested depth when the budget ran out after the count had grown.
  std::vector<std::size_t> per_height;
};

/// Explores every input of height <= depth under OI. A lower bound on the
/// true c, meant as a sanity check. Throws BudgetExceeded.
CopyEstimate estimate_copy_bound(const Mtt& m, std::size_t depth, const Budget& budget = {},
                                 std::size_t threshold = 16);

}  // namespace mttkit
