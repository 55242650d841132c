#pragma once

// Ranked alphabets, ground trees and their minimal (maximally shared) DAGs.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mttkit {

/// True for names of the reserved variable families x<i>, y<i>, z<i> (i >= 1).
bool is_reserved_name(std::string_view name);

/// True if `name` matches [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view name);

/// Finite map from symbol name to rank.
class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  RankedAlphabet(std::initializer_list<std::pair<std::string, std::size_t>> symbols);

  /// Throws DuplicateName on redeclaration and ReservedName for x/y/z
  /// variable names.
  void add(const std::string& name, std::size_t rank);

  std::optional<std::size_t> rank_of(std::string_view name) const;
  bool contains(std::string_view name) const { return rank_of(name).has_value(); }
  std::size_t size() const { return ranks_.size(); }
  bool empty() const { return ranks_.empty(); }

  /// Symbols ordered by name.
  const std::map<std::string, std::size_t, std::less<>>& symbols() const { return ranks_; }

  /// Symbols of exactly rank `k`, ordered by name.
  std::vector<std::string> of_rank(std::size_t k) const;
  std::size_t max_rank() const;

  friend bool operator==(const RankedAlphabet&, const RankedAlphabet&) = default;

 private:
  std::map<std::string, std::size_t, std::less<>> ranks_;
};

/// A ranked term. Well-rankedness against an alphabet is checked by
/// `check_tree`; the struct itself is a plain value.
struct Tree {
  std::string label;
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(std::string label_, std::vector<Tree> children_ = {})
      : label(std::move(label_)), children(std::move(children_)) {}

  std::size_t rank() const { return children.size(); }
  bool is_leaf() const { return children.empty(); }

  /// Number of nodes, |t|.
  std::size_t size() const;
  std::size_t height() const;

  friend bool operator==(const Tree& a, const Tree& b);
  /// Total structural order: label, then arity, then children left to right.
  friend std::strong_ordering operator<=>(const Tree& a, const Tree& b);
};

/// Dewey position; the empty vector is the root, entries are 1-based.
using Position = std::vector<std::size_t>;

std::vector<Position> positions(const Tree& t);
/// t|_v. Throws ChildIndexOutOfRange if `v` is not a position of `t`.
const Tree& subtree_at(const Tree& t, const Position& v);
std::string position_to_string(const Position& v);

/// Canonical term text: `f(e,g(e))`; rank-0 symbols print without parens.
std::string to_string(const Tree& t);

/// Parses the term syntax `name` / `name(term,...,term)`. Whitespace between
/// tokens is ignored and `e()` is the same as `e`. Throws SyntaxError, or
/// RankViolation if one symbol is used with two different arities.
Tree parse_term(std::string_view text);

/// Throws AlphabetMismatch for undeclared labels and RankViolation for
/// labels used with the wrong number of children.
void check_tree(const Tree& t, const RankedAlphabet& alphabet);

/// Simultaneous substitution t[s1/t1, ..., sn/tn] of rank-0 symbols. Bound
/// symbols that occur with children raise RankViolation.
Tree substitute(const Tree& t, const std::map<std::string, Tree, std::less<>>& bindings);

/// Node identity inside one TreeDag, or the distinguished bottom value
/// standing for "not a subtree of the represented tree".
class NodeRef {
 public:
  constexpr NodeRef() = default;
  constexpr explicit NodeRef(std::uint32_t index) : value_(index) {}

  static constexpr NodeRef bottom() { return NodeRef(); }

  constexpr bool is_bottom() const { return value_ == kBottom; }
  constexpr std::uint32_t index() const { return value_; }

  friend constexpr bool operator==(NodeRef, NodeRef) = default;
  friend constexpr auto operator<=>(NodeRef, NodeRef) = default;

 private:
  static constexpr std::uint32_t kBottom = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t value_ = kBottom;
};

std::string to_string(NodeRef v);

using SymbolId = std::uint32_t;
inline constexpr SymbolId kNoSymbol = std::numeric_limits<SymbolId>::max();

/// Hash-consed node store. Nodes are created children-first, so every child
/// reference points to an earlier node, and two nodes are identical iff
/// their expansions are equal trees.
class TreeDag {
 public:
  TreeDag() = default;

  /// Returns the node for `label(children...)`, creating it if needed.
  /// Throws RankViolation if `label` was seen before with another arity and
  /// BottomAccess if a child is bottom.
  NodeRef intern(std::string_view label, std::span<const NodeRef> children);
  NodeRef intern(SymbolId symbol, std::span<const NodeRef> children);
  /// Interns a whole tree bottom-up.
  NodeRef intern_tree(const Tree& t);

  /// Lookup without insertion; bottom if absent.
  NodeRef find(SymbolId symbol, std::span<const NodeRef> children) const;

  SymbolId symbol_id(std::string_view label) const;
  /// Registers a label without creating a node.
  SymbolId declare_symbol(std::string_view label, std::size_t rank);
  const std::string& symbol_name(SymbolId id) const { return symbols_.at(id); }
  std::size_t symbol_rank(SymbolId id) const { return symbol_ranks_.at(id); }
  std::size_t symbol_count() const { return symbols_.size(); }

  SymbolId label_id(NodeRef v) const;
  const std::string& label(NodeRef v) const;
  /// 1-based child access.
  NodeRef child(NodeRef v, std::size_t i) const;
  std::span<const NodeRef> children(NodeRef v) const;
  std::size_t arity(NodeRef v) const;
  /// |t|_v| of the expanded subtree (saturating).
  std::uint64_t tree_size(NodeRef v) const;

  std::size_t node_count() const { return nodes_.size(); }
  NodeRef node(std::size_t i) const { return NodeRef(static_cast<std::uint32_t>(i)); }
  std::span<const NodeRef> nodes_with_label(SymbolId symbol) const;

  Tree expand(NodeRef v) const;

 private:
  struct Node {
    SymbolId symbol;
    std::uint32_t first_child;
    std::uint32_t arity;
    std::uint64_t size;
  };
  struct Key {
    SymbolId symbol;
    std::vector<NodeRef> children;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  void check(NodeRef v) const;

  std::vector<std::string> symbols_;
  std::vector<std::size_t> symbol_ranks_;
  std::unordered_map<std::string, SymbolId> symbol_index_;
  std::vector<Node> nodes_;
  std::vector<NodeRef> child_pool_;
  std::vector<std::vector<NodeRef>> by_symbol_;
  std::unordered_map<Key, NodeRef, KeyHash> table_;
};

struct DagBuild {
  TreeDag dag;
  NodeRef root;
};

/// Minimal DAG of `t`; node count <= |t|.
DagBuild build_dag(const Tree& t);

/// rho(t'): the node v with t' = t|_v, or bottom. Never inserts.
NodeRef rho(const TreeDag& dag, const Tree& query);

}  // namespace mttkit

template <>
struct std::hash<mttkit::NodeRef> {
  std::size_t operator()(mttkit::NodeRef v) const noexcept {
    return std::hash<std::uint32_t>{}(v.index());
  }
};
