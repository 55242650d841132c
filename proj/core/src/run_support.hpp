#pragma once

// Pieces shared by the inverse-type membership engines.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mttkit/errors.hpp"
#include "mttkit/mtt.hpp"
#include "mttkit/trees.hpp"

namespace mttkit::detail {

using NodeSet = std::vector<NodeRef>;

inline void normalize(NodeSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline void merge_into(NodeSet& slot, std::span<const NodeRef> values) {
  NodeSet merged;
  merged.reserve(slot.size() + values.size());
  std::set_union(slot.begin(), slot.end(), values.begin(), values.end(),
                 std::back_inserter(merged));
  slot = std::move(merged);
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

/// Throws BudgetExceeded unless base^length fits in 64 bits.
inline void check_packable(std::uint64_t base, std::size_t length) {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (base != 0 && acc > std::numeric_limits<std::uint64_t>::max() / base)
      throw Error(ErrorKind::budget_exceeded,
                  "parameter vectors of length " + std::to_string(length) +
                      " over " + std::to_string(base) + " values do not fit in 64 bits");
    acc *= base;
  }
}

/// Mixed-radix code of a node vector; bottom is digit `node_count`.
inline std::uint64_t pack_nodes(std::span<const NodeRef> v, std::size_t node_count) {
  std::uint64_t key = 0;
  const std::uint64_t base = node_count + 1;
  for (auto it = v.rbegin(); it != v.rend(); ++it)
    key = key * base + (it->is_bottom() ? node_count : it->index());
  return key;
}

inline NodeSet unpack_nodes(std::uint64_t key, std::size_t length, std::size_t node_count) {
  NodeSet out(length);
  const std::uint64_t base = node_count + 1;
  for (std::size_t i = 0; i < length; ++i) {
    auto digit = key % base;
    key /= base;
    out[i] = digit == node_count ? NodeRef::bottom() : NodeRef(static_cast<std::uint32_t>(digit));
  }
  return out;
}

/// Calls fn on every vector in sets[0] x ... x sets[n-1].
template <class Fn>
void for_each_selection(const std::vector<NodeSet>& sets, Fn&& fn) {
  for (const auto& s : sets)
    if (s.empty()) return;
  std::vector<std::size_t> idx(sets.size(), 0);
  NodeSet pick(sets.size());
  while (true) {
    for (std::size_t i = 0; i < sets.size(); ++i) pick[i] = sets[i][idx[i]];
    fn(std::span<const NodeRef>(pick));
    std::size_t i = 0;
    while (i < sets.size() && ++idx[i] == sets[i].size()) idx[i++] = 0;
    if (i == sets.size()) return;
  }
}

/// Calls fn on every vector in (V_t + bottom)^rank.
template <class Fn>
void for_each_param_vector(std::size_t rank, std::size_t node_count, Fn&& fn) {
  NodeSet v(rank);
  std::vector<std::size_t> digit(rank, 0);
  while (true) {
    for (std::size_t i = 0; i < rank; ++i)
      v[i] = digit[i] == node_count ? NodeRef::bottom()
                                    : NodeRef(static_cast<std::uint32_t>(digit[i]));
    fn(std::span<const NodeRef>(v));
    std::size_t i = 0;
    while (i < rank && ++digit[i] == node_count + 1) digit[i++] = 0;
    if (i == rank) return;
  }
}

/// Output-symbol clause of f: the nodes labelled `symbol` whose children
/// are drawn from `kids`, plus bottom if some selection builds a tree that
/// is not a subtree of t. Every child set must be non-empty.
inline NodeSet output_results(const TreeDag& dag, SymbolId symbol,
                              const std::vector<NodeSet>& kids) {
  bool bottom = false;
  std::uint64_t selections = 1;
  for (const auto& k : kids) {
    bool has_bottom = k.back().is_bottom();
    bottom = bottom || has_bottom;
    selections = saturating_mul(selections, k.size() - (has_bottom ? 1 : 0));
  }
  NodeSet out;
  if (symbol == kNoSymbol) {
    out.push_back(NodeRef::bottom());
    return out;
  }
  auto candidates = dag.nodes_with_label(symbol);
  if (selections == 0) {
    // some child can only be bottom
  } else if (selections <= candidates.size()) {
    std::vector<NodeSet> real;
    for (const auto& k : kids)
      real.emplace_back(k.begin(), k.back().is_bottom() ? k.end() - 1 : k.end());
    for_each_selection(real, [&](std::span<const NodeRef> pick) {
      NodeRef v = dag.find(symbol, pick);
      if (!v.is_bottom()) out.push_back(v);
    });
    std::sort(out.begin(), out.end());
  } else {
    for (NodeRef u : candidates) {
      auto cs = dag.children(u);
      bool ok = true;
      for (std::size_t i = 0; i < cs.size() && ok; ++i)
        ok = std::binary_search(kids[i].begin(), kids[i].end(), cs[i]);
      if (ok) out.push_back(u);
    }
  }
  // Each matched node accounts for exactly one all-V_t selection.
  if (bottom || selections > out.size()) out.push_back(NodeRef::bottom());
  return out;
}

/// Lazily computed facts about right-hand-side subterms against one DAG.
class RhsSymbols {
 public:
  explicit RhsSymbols(const TreeDag& dag) : dag_(dag) {}
  RhsSymbols(const Mtt&, const TreeDag& dag) : dag_(dag) {}

  bool has_params(const Rhs& r) {
    if (auto it = params_.find(&r); it != params_.end()) return it->second;
    bool any = r.kind == Rhs::Kind::param;
    for (const auto& c : r.children) any = has_params(c) || any;
    params_.emplace(&r, any);
    return any;
  }

  /// Bit i set iff parameter y_{i+1} occurs in r; indices past 63 share bit 63.
  std::uint64_t param_mask(const Rhs& r) {
    if (auto it = masks_.find(&r); it != masks_.end()) return it->second;
    std::uint64_t mask = 0;
    if (r.kind == Rhs::Kind::param) mask = std::uint64_t{1} << std::min<std::size_t>(r.index, 63);
    for (const auto& c : r.children) mask |= param_mask(c);
    masks_.emplace(&r, mask);
    return mask;
  }

  /// The DAG's id for an output symbol of the given arity, or kNoSymbol.
  SymbolId dag_symbol(const std::string& name, std::size_t arity) {
    auto it = ids_.find(name);
    if (it == ids_.end()) {
      SymbolId id = dag_.symbol_id(name);
      if (id != kNoSymbol && dag_.symbol_rank(id) != arity) id = kNoSymbol;
      it = ids_.emplace(name, id).first;
    }
    return it->second;
  }
  SymbolId dag_symbol(const Rhs& r) { return dag_symbol(r.symbol, r.children.size()); }

 private:
  const TreeDag& dag_;
  std::unordered_map<const Rhs*, bool> params_;
  std::unordered_map<const Rhs*, std::uint64_t> masks_;
  std::unordered_map<std::string, SymbolId> ids_;
};

/// True iff every label of t is declared in `alphabet` with the right rank.
inline bool tree_over(const Tree& t, const RankedAlphabet& alphabet) {
  auto r = alphabet.rank_of(t.label);
  if (!r || *r != t.children.size()) return false;
  for (const auto& c : t.children)
    if (!tree_over(c, alphabet)) return false;
  return true;
}

}  // namespace mttkit::detail
