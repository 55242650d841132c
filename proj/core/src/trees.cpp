#include "mttkit/trees.hpp"

#include <algorithm>

#include "lexer.hpp"
#include "mttkit/errors.hpp"

namespace mttkit {

bool is_reserved_name(std::string_view name) {
  if (name.size() < 2) return false;
  if (name[0] != 'x' && name[0] != 'y' && name[0] != 'z') return false;
  if (name[1] == '0') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto start = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!start(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return start(c) || (c >= '0' && c <= '9'); });
}

// ---------------------------------------------------------------------------
// RankedAlphabet

RankedAlphabet::RankedAlphabet(
    std::initializer_list<std::pair<std::string, std::size_t>> symbols) {
  for (const auto& [name, rank] : symbols) add(name, rank);
}

void RankedAlphabet::add(const std::string& name, std::size_t rank) {
  if (!is_identifier(name)) throw Error(ErrorKind::syntax_error, "bad symbol name '" + name + "'");
  if (is_reserved_name(name))
    throw Error(ErrorKind::reserved_name, "'" + name + "' is a reserved variable name");
  if (!ranks_.emplace(name, rank).second)
    throw Error(ErrorKind::duplicate_name, "symbol '" + name + "' declared twice");
}

std::optional<std::size_t> RankedAlphabet::rank_of(std::string_view name) const {
  auto it = ranks_.find(name);
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> RankedAlphabet::of_rank(std::size_t k) const {
  std::vector<std::string> out;
  for (const auto& [name, rank] : ranks_)
    if (rank == k) out.push_back(name);
  return out;
}

std::size_t RankedAlphabet::max_rank() const {
  std::size_t m = 0;
  for (const auto& [name, rank] : ranks_) m = std::max(m, rank);
  return m;
}

// ---------------------------------------------------------------------------
// Tree

std::size_t Tree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t Tree::height() const {
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height());
  return h + 1;
}

bool operator==(const Tree& a, const Tree& b) {
  return a.label == b.label && a.children == b.children;
}

std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
  if (auto c = a.label.compare(b.label); c != 0) return c < 0 ? std::strong_ordering::less
                                                              : std::strong_ordering::greater;
  if (auto c = a.children.size() <=> b.children.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (auto c = a.children[i] <=> b.children[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

namespace {

void collect_positions(const Tree& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    cur.push_back(i + 1);
    collect_positions(t.children[i], cur, out);
    cur.pop_back();
  }
}

void print(const Tree& t, std::string& out) {
  out += t.label;
  if (t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ',';
    print(t.children[i], out);
  }
  out += ')';
}

Tree parse_term_rec(detail::Lexer& lex) {
  Tree t(lex.expect_ident("symbol name").text);
  if (lex.at_punct('(')) {
    lex.next();
    if (!lex.at_punct(')')) {
      t.children.push_back(parse_term_rec(lex));
      while (lex.at_punct(',')) {
        lex.next();
        t.children.push_back(parse_term_rec(lex));
      }
    }
    lex.expect_punct(')');
  }
  return t;
}

void check_consistent_arity(const Tree& t, std::map<std::string, std::size_t, std::less<>>& seen) {
  auto [it, fresh] = seen.emplace(t.label, t.children.size());
  if (!fresh && it->second != t.children.size())
    throw Error(ErrorKind::rank_violation, "symbol '" + t.label + "' used with arities " +
                                               std::to_string(it->second) + " and " +
                                               std::to_string(t.children.size()));
  for (const auto& c : t.children) check_consistent_arity(c, seen);
}

}  // namespace

std::vector<Position> positions(const Tree& t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out);
  return out;
}

const Tree& subtree_at(const Tree& t, const Position& v) {
  const Tree* cur = &t;
  for (std::size_t i : v) {
    if (i == 0 || i > cur->children.size())
      throw Error(ErrorKind::child_index_out_of_range, "no position " + position_to_string(v));
    cur = &cur->children[i - 1];
  }
  return *cur;
}

std::string position_to_string(const Position& v) {
  if (v.empty()) return "ε";
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += '.';
    out += std::to_string(v[k]);
  }
  return out;
}

std::string to_string(const Tree& t) {
  std::string out;
  print(t, out);
  return out;
}

Tree parse_term(std::string_view text) {
  detail::Lexer lex(text, false);
  Tree t = parse_term_rec(lex);
  if (lex.peek().kind != detail::Tok::end) lex.fail("trailing input");
  std::map<std::string, std::size_t, std::less<>> seen;
  check_consistent_arity(t, seen);
  return t;
}

void check_tree(const Tree& t, const RankedAlphabet& alphabet) {
  auto rank = alphabet.rank_of(t.label);
  if (!rank) throw Error(ErrorKind::alphabet_mismatch, "undeclared symbol '" + t.label + "'");
  if (*rank != t.children.size())
    throw Error(ErrorKind::rank_violation, "symbol '" + t.label + "' has rank " +
                                               std::to_string(*rank) + " but " +
                                               std::to_string(t.children.size()) + " children");
  for (const auto& c : t.children) check_tree(c, alphabet);
}

namespace {

Tree substitute_rec(const Tree& t, const std::map<std::string, Tree, std::less<>>& bindings) {
  auto it = bindings.find(t.label);
  if (it != bindings.end()) {
    if (!t.children.empty())
      throw Error(ErrorKind::rank_violation,
                  "substituted symbol '" + t.label + "' must have rank 0");
    return it->second;
  }
  Tree out(t.label);
  out.children.reserve(t.children.size());
  for (const auto& c : t.children) out.children.push_back(substitute_rec(c, bindings));
  return out;
}

}  // namespace

Tree substitute(const Tree& t, const std::map<std::string, Tree, std::less<>>& bindings) {
  return substitute_rec(t, bindings);
}

std::string to_string(NodeRef v) {
  return v.is_bottom() ? std::string("⊥") : "#" + std::to_string(v.index());
}

// ---------------------------------------------------------------------------
// TreeDag

std::size_t TreeDag::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = std::hash<std::uint32_t>{}(k.symbol);
  for (NodeRef c : k.children) h = h * 1000003u ^ std::hash<std::uint32_t>{}(c.index());
  return h;
}

SymbolId TreeDag::symbol_id(std::string_view label) const {
  auto it = symbol_index_.find(std::string(label));
  return it == symbol_index_.end() ? kNoSymbol : it->second;
}

SymbolId TreeDag::declare_symbol(std::string_view label, std::size_t rank) {
  auto it = symbol_index_.find(std::string(label));
  if (it != symbol_index_.end()) {
    if (symbol_ranks_[it->second] != rank)
      throw Error(ErrorKind::rank_violation, "symbol '" + std::string(label) +
                                                 "' used with arities " +
                                                 std::to_string(symbol_ranks_[it->second]) +
                                                 " and " + std::to_string(rank));
    return it->second;
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.emplace_back(label);
  symbol_ranks_.push_back(rank);
  symbol_index_.emplace(std::string(label), id);
  by_symbol_.emplace_back();
  return id;
}

NodeRef TreeDag::intern(std::string_view label, std::span<const NodeRef> children) {
  return intern(declare_symbol(label, children.size()), children);
}

NodeRef TreeDag::intern(SymbolId symbol, std::span<const NodeRef> children) {
  if (symbol >= symbols_.size())
    throw Error(ErrorKind::unknown_symbol, "symbol id out of range");
  if (symbol_ranks_[symbol] != children.size())
    throw Error(ErrorKind::rank_violation, "symbol '" + symbols_[symbol] + "' has rank " +
                                               std::to_string(symbol_ranks_[symbol]));
  Key key{symbol, std::vector<NodeRef>(children.begin(), children.end())};
  if (auto it = table_.find(key); it != table_.end()) return it->second;

  std::uint64_t size = 1;
  for (NodeRef c : children) {
    if (c.is_bottom()) throw Error(ErrorKind::bottom_access, "cannot intern a bottom child");
    check(c);
    std::uint64_t s = nodes_[c.index()].size;
    size = (size + s < size) ? std::numeric_limits<std::uint64_t>::max() : size + s;
  }
  NodeRef v(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back(Node{symbol, static_cast<std::uint32_t>(child_pool_.size()),
                        static_cast<std::uint32_t>(children.size()), size});
  child_pool_.insert(child_pool_.end(), children.begin(), children.end());
  by_symbol_[symbol].push_back(v);
  table_.emplace(std::move(key), v);
  return v;
}

NodeRef TreeDag::intern_tree(const Tree& t) {
  std::vector<NodeRef> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(intern_tree(c));
  return intern(t.label, kids);
}

NodeRef TreeDag::find(SymbolId symbol, std::span<const NodeRef> children) const {
  if (symbol == kNoSymbol) return NodeRef::bottom();
  for (NodeRef c : children)
    if (c.is_bottom()) return NodeRef::bottom();
  Key key{symbol, std::vector<NodeRef>(children.begin(), children.end())};
  auto it = table_.find(key);
  return it == table_.end() ? NodeRef::bottom() : it->second;
}

void TreeDag::check(NodeRef v) const {
  if (v.is_bottom()) throw Error(ErrorKind::bottom_access, "label/child of bottom is undefined");
  if (v.index() >= nodes_.size())
    throw Error(ErrorKind::child_index_out_of_range, "node " + to_string(v) + " not in this dag");
}

SymbolId TreeDag::label_id(NodeRef v) const {
  check(v);
  return nodes_[v.index()].symbol;
}

const std::string& TreeDag::label(NodeRef v) const { return symbols_[label_id(v)]; }

NodeRef TreeDag::child(NodeRef v, std::size_t i) const {
  check(v);
  const Node& n = nodes_[v.index()];
  if (i == 0 || i > n.arity)
    throw Error(ErrorKind::child_index_out_of_range,
                "child " + std::to_string(i) + " of a node with arity " + std::to_string(n.arity));
  return child_pool_[n.first_child + i - 1];
}

std::span<const NodeRef> TreeDag::children(NodeRef v) const {
  check(v);
  const Node& n = nodes_[v.index()];
  return std::span<const NodeRef>(child_pool_).subspan(n.first_child, n.arity);
}

std::size_t TreeDag::arity(NodeRef v) const {
  check(v);
  return nodes_[v.index()].arity;
}

std::uint64_t TreeDag::tree_size(NodeRef v) const {
  check(v);
  return nodes_[v.index()].size;
}

std::span<const NodeRef> TreeDag::nodes_with_label(SymbolId symbol) const {
  if (symbol >= by_symbol_.size()) return {};
  return by_symbol_[symbol];
}

Tree TreeDag::expand(NodeRef v) const {
  Tree t(label(v));
  for (NodeRef c : children(v)) t.children.push_back(expand(c));
  return t;
}

DagBuild build_dag(const Tree& t) {
  DagBuild out;
  out.root = out.dag.intern_tree(t);
  return out;
}

NodeRef rho(const TreeDag& dag, const Tree& query) {
  SymbolId sym = dag.symbol_id(query.label);
  if (sym == kNoSymbol || dag.symbol_rank(sym) != query.children.size()) return NodeRef::bottom();
  std::vector<NodeRef> kids;
  kids.reserve(query.children.size());
  for (const auto& c : query.children) {
    NodeRef k = rho(dag, c);
    if (k.is_bottom()) return k;
    kids.push_back(k);
  }
  return dag.find(sym, kids);
}

}  // namespace mttkit
