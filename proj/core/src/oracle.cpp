#include "mttkit/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "mttkit/errors.hpp"

namespace mttkit {

std::string_view to_string(Mode mode) { return mode == Mode::io ? "io" : "oi"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

void Budget::check() const {
  if (max_set_size == 0 || max_steps == 0 || (max_tree_size && *max_tree_size == 0))
    throw Error(ErrorKind::budget_exceeded, "budget limits must be positive");
}

TreeSet::TreeSet(std::initializer_list<Tree> trees) : TreeSet(std::vector<Tree>(trees)) {}

TreeSet::TreeSet(std::vector<Tree> trees) : trees_(std::move(trees)) {
  std::sort(trees_.begin(), trees_.end());
  trees_.erase(std::unique(trees_.begin(), trees_.end()), trees_.end());
}

bool TreeSet::insert(Tree t) {
  auto it = std::lower_bound(trees_.begin(), trees_.end(), t);
  if (it != trees_.end() && *it == t) return false;
  trees_.insert(it, std::move(t));
  return true;
}

bool TreeSet::contains(const Tree& t) const {
  return std::binary_search(trees_.begin(), trees_.end(), t);
}

SemTerm SemTerm::output(std::string symbol, std::vector<SemTerm> children) {
  SemTerm u;
  u.kind = Kind::output;
  u.symbol = std::move(symbol);
  u.children = std::move(children);
  return u;
}

SemTerm SemTerm::param(std::size_t i) {
  SemTerm u;
  u.kind = Kind::param;
  u.index = i;
  return u;
}

SemTerm SemTerm::call(std::size_t state, Tree input, std::vector<SemTerm> args) {
  SemTerm u;
  u.kind = Kind::call;
  u.state = state;
  u.input = std::move(input);
  u.children = std::move(args);
  return u;
}

namespace {

using Id = std::uint32_t;
using Set = std::vector<Id>;
constexpr Id kNone = std::numeric_limits<Id>::max();

enum class LabelKind : std::uint8_t { output, param, var, oversize };

struct Label {
  LabelKind kind;
  std::uint32_t index;
  friend bool operator==(Label, Label) = default;
};

[[noreturn]] void over_budget(const std::string& what) {
  throw Error(ErrorKind::budget_exceeded, what);
}

/// Hash-consed term store for the oracle. Kept separate from TreeDag so the
/// reference semantics shares no machinery with the membership engines.
class TermPool {
 public:
  TermPool(std::optional<std::size_t> prune_above, std::optional<std::size_t> max_tree_size)
      : prune_above_(prune_above), max_tree_size_(max_tree_size) {}

  std::uint32_t symbol(std::string_view name, std::size_t rank) {
    auto it = symbol_index_.find(std::string(name));
    if (it != symbol_index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    ranks_.push_back(rank);
    symbol_index_.emplace(std::string(name), id);
    return id;
  }

  std::optional<std::uint32_t> find_symbol(std::string_view name, std::size_t rank) const {
    auto it = symbol_index_.find(std::string(name));
    if (it == symbol_index_.end() || ranks_[it->second] != rank) return std::nullopt;
    return it->second;
  }

  Id oversize() {
    if (oversize_ == kNone) oversize_ = insert(Label{LabelKind::oversize, 0}, {}, 0, 0);
    return oversize_;
  }
  bool is_oversize(Id t) const { return t == oversize_; }

  Id leaf(Label l) { return make(l, {}); }

  Id make(Label label, std::span<const Id> kids) {
    std::uint64_t size = 1;
    std::uint64_t mask = label.kind == LabelKind::param ? bit(label.index) : 0;
    std::uint64_t vars = label.kind == LabelKind::var ? bit(label.index) : 0;
    for (Id k : kids) {
      if (k == oversize_) return oversize_;
      size += nodes_[k].size;
      mask |= nodes_[k].params;
      vars |= nodes_[k].vars;
    }
    if (prune_above_ && size > *prune_above_) return oversize();
    if (max_tree_size_ && size > *max_tree_size_)
      over_budget("tree of size " + std::to_string(size) + " exceeds max_tree_size " +
                  std::to_string(*max_tree_size_));
    Key key{label, std::vector<Id>(kids.begin(), kids.end())};
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    Id id = insert(label, kids, size, mask, vars);
    table_.emplace(std::move(key), id);
    return id;
  }

  Label label(Id t) const { return nodes_[t].label; }
  std::span<const Id> kids(Id t) const {
    return std::span<const Id>(pool_).subspan(nodes_[t].first, nodes_[t].arity);
  }
  std::uint64_t params(Id t) const { return nodes_[t].params; }
  std::uint64_t vars(Id t) const { return nodes_[t].vars; }

  Tree to_tree(Id t) const {
    Label l = label(t);
    switch (l.kind) {
      case LabelKind::param: return Tree("y" + std::to_string(l.index + 1));
      case LabelKind::var: return Tree("z" + std::to_string(l.index + 1));
      case LabelKind::oversize: throw Error(ErrorKind::budget_exceeded, "pruned tree");
      case LabelKind::output: break;
    }
    Tree out(names_[l.index]);
    for (Id k : kids(t)) out.children.push_back(to_tree(k));
    return out;
  }

  /// Labels y<i> become parameters; everything else an output symbol.
  Id from_tree(const Tree& t) {
    std::vector<Id> kids;
    for (const auto& c : t.children) kids.push_back(from_tree(c));
    if (is_reserved_name(t.label) && t.label[0] == 'y' && t.children.empty())
      return make(Label{LabelKind::param, static_cast<std::uint32_t>(std::stoul(t.label.substr(1)) - 1)}, {});
    return make(Label{LabelKind::output, symbol(t.label, t.children.size())}, kids);
  }

  /// Lookup of a ground tree without insertion.
  std::optional<Id> find_tree(const Tree& t) const {
    auto sym = find_symbol(t.label, t.children.size());
    if (!sym) return std::nullopt;
    std::vector<Id> kids;
    for (const auto& c : t.children) {
      auto k = find_tree(c);
      if (!k) return std::nullopt;
      kids.push_back(*k);
    }
    auto it = table_.find(Key{Label{LabelKind::output, *sym}, kids});
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::uint64_t bit(std::uint32_t i) {
    if (i >= 64) over_budget("more than 64 parameters");
    return std::uint64_t{1} << i;
  }

  struct Node {
    Label label;
    std::uint32_t first;
    std::uint32_t arity;
    std::uint64_t size;
    std::uint64_t params;
    std::uint64_t vars;
  };
  struct Key {
    Label label;
    std::vector<Id> kids;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = (static_cast<std::size_t>(k.label.kind) << 29) ^ k.label.index;
      for (Id c : k.kids) h = h * 1000003u ^ c;
      return h;
    }
  };

  Id insert(Label label, std::span<const Id> kids, std::uint64_t size, std::uint64_t params,
            std::uint64_t vars = 0) {
    Id id = static_cast<Id>(nodes_.size());
    nodes_.push_back(Node{label, static_cast<std::uint32_t>(pool_.size()),
                          static_cast<std::uint32_t>(kids.size()), size, params, vars});
    pool_.insert(pool_.end(), kids.begin(), kids.end());
    return id;
  }

  std::optional<std::size_t> prune_above_;
  std::optional<std::size_t> max_tree_size_;
  std::vector<std::string> names_;
  std::vector<std::size_t> ranks_;
  std::unordered_map<std::string, std::uint32_t> symbol_index_;
  std::vector<Node> nodes_;
  std::vector<Id> pool_;
  std::unordered_map<Key, Id, KeyHash> table_;
  Id oversize_ = kNone;
};

void normalize(Set& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

/// Set-level operations shared by the plain and multi-return semantics.
class SetAlgebra {
 public:
  SetAlgebra(TermPool& pool, const Budget& budget) : pool_(pool), budget_(budget) {
    budget_.check();
  }

  void tick(std::size_t n = 1) {
    steps_ += n;
    if (steps_ > budget_.max_steps)
      over_budget("more than " + std::to_string(budget_.max_steps) + " steps");
  }

  void check(const Set& s) const {
    if (s.size() > budget_.max_set_size)
      over_budget("set of " + std::to_string(s.size()) + " trees exceeds max_set_size " +
                  std::to_string(budget_.max_set_size));
  }

  /// { label(t1..tn) | ti in kids[i] }
  Set product(Label label, std::span<const Set> kids) {
    Set out;
    for (const auto& k : kids)
      if (k.empty()) return out;
    std::vector<std::size_t> idx(kids.size(), 0);
    std::vector<Id> pick(kids.size());
    while (true) {
      for (std::size_t i = 0; i < kids.size(); ++i) pick[i] = kids[i][idx[i]];
      out.push_back(pool_.make(label, pick));
      tick();
      if (out.size() > 4 * budget_.max_set_size) {
        normalize(out);
        check(out);
      }
      std::size_t i = 0;
      while (i < kids.size() && ++idx[i] == kids[i].size()) idx[i++] = 0;
      if (i == kids.size()) break;
    }
    normalize(out);
    check(out);
    return out;
  }

  /// Replaces leaves of `kind` with index i by choice[i] (kNone: keep).
  Id apply(Id t, LabelKind kind, std::span<const Id> choice,
           std::unordered_map<Id, Id>& memo) {
    std::uint64_t mask = kind == LabelKind::param ? pool_.params(t) : pool_.vars(t);
    if (mask == 0 || pool_.is_oversize(t)) return t;
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    Label l = pool_.label(t);
    Id out;
    if (l.kind == kind) {
      out = (l.index < choice.size() && choice[l.index] != kNone) ? choice[l.index] : t;
    } else {
      // copy first: make() may grow the pool under the span
      std::vector<Id> kids(pool_.kids(t).begin(), pool_.kids(t).end());
      for (Id& k : kids) k = apply(k, kind, choice, memo);
      out = pool_.make(l, kids);
    }
    tick();
    memo.emplace(t, out);
    return out;
  }

  /// t <-IO (L1..Ln)
  void io_subst_term(Id t, std::span<const Set> args, Set& out) {
    for (const auto& a : args)
      if (a.empty()) return;
    std::uint64_t mask = pool_.params(t);
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (i < 64 && (mask >> i) & 1) used.push_back(i);
    if (used.empty() || pool_.is_oversize(t)) {
      out.push_back(t);
      return;
    }
    std::vector<std::size_t> idx(used.size(), 0);
    std::vector<Id> choice(args.size(), kNone);
    while (true) {
      for (std::size_t k = 0; k < used.size(); ++k) choice[used[k]] = args[used[k]][idx[k]];
      std::unordered_map<Id, Id> memo;
      out.push_back(apply(t, LabelKind::param, choice, memo));
      tick();
      std::size_t k = 0;
      while (k < used.size() && ++idx[k] == args[used[k]].size()) idx[k++] = 0;
      if (k == used.size()) break;
    }
  }

  /// t <-OI (L1..Ln)
  Set oi_subst_term(Id t, std::span<const Set> args, std::unordered_map<Id, Set>& memo) {
    if (pool_.params(t) == 0 || pool_.is_oversize(t)) return {t};
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    Label l = pool_.label(t);
    Set out;
    if (l.kind == LabelKind::param) {
      if (l.index < args.size()) out = args[l.index];
      else out = {t};
    } else {
      const std::vector<Id> originals(pool_.kids(t).begin(), pool_.kids(t).end());
      std::vector<Set> kids;
      for (Id k : originals) kids.push_back(oi_subst_term(k, args, memo));
      out = product(l, kids);
    }
    memo.emplace(t, out);
    return out;
  }

  Set subst(Mode mode, const Set& l, std::span<const Set> args) {
    Set out;
    if (mode == Mode::io) {
      for (Id t : l) io_subst_term(t, args, out);
    } else {
      std::unordered_map<Id, Set> memo;
      for (Id t : l) {
        Set part = oi_subst_term(t, args, memo);
        out.insert(out.end(), part.begin(), part.end());
        if (out.size() > 4 * budget_.max_set_size) {
          normalize(out);
          check(out);
        }
      }
    }
    normalize(out);
    check(out);
    return out;
  }

  TermPool& pool() { return pool_; }

 private:
  TermPool& pool_;
  Budget budget_;
  std::size_t steps_ = 0;
};

using RuleSource = std::function<std::vector<const Rhs*>(std::size_t q, const Tree& s)>;

class MttSemantics {
 public:
  MttSemantics(const Mtt& m, Mode mode, SetAlgebra& algebra, RuleSource rules)
      : m_(m), mode_(mode), alg_(algebra), rules_(std::move(rules)) {
    for (const auto& [name, rank] : m.output.symbols()) alg_.pool().symbol(name, rank);
  }

  const Set& state(std::size_t q, const Tree& s) {
    auto key = std::make_pair(q, &s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Set out;
    for (const Rhs* r : rules_(q, s)) {
      Set part = rhs(*r, s);
      out.insert(out.end(), part.begin(), part.end());
    }
    normalize(out);
    alg_.check(out);
    return memo_.emplace(key, std::move(out)).first->second;
  }

  /// [[r[x1/s1..xk/sk]]]
  Set rhs(const Rhs& r, const Tree& s) {
    switch (r.kind) {
      case Rhs::Kind::param:
        return {alg_.pool().leaf(Label{LabelKind::param, static_cast<std::uint32_t>(r.index)})};
      case Rhs::Kind::output: {
        std::vector<Set> kids;
        for (const auto& c : r.children) kids.push_back(rhs(c, s));
        auto sym = alg_.pool().symbol(r.symbol, r.children.size());
        return alg_.product(Label{LabelKind::output, sym}, kids);
      }
      case Rhs::Kind::call: {
        std::vector<Set> args;
        for (const auto& c : r.children) args.push_back(rhs(c, s));
        const Set& callee = state(r.state, s.children.at(r.index));
        return alg_.subst(mode_, callee, args);
      }
    }
    return {};
  }

  Set term(const SemTerm& u) {
    switch (u.kind) {
      case SemTerm::Kind::param:
        return {alg_.pool().leaf(Label{LabelKind::param, static_cast<std::uint32_t>(u.index)})};
      case SemTerm::Kind::output: {
        std::vector<Set> kids;
        for (const auto& c : u.children) kids.push_back(term(c));
        auto sym = alg_.pool().symbol(u.symbol, u.children.size());
        return alg_.product(Label{LabelKind::output, sym}, kids);
      }
      case SemTerm::Kind::call: {
        if (u.state >= m_.states.size())
          throw Error(ErrorKind::unknown_state, "call to undeclared state");
        if (u.children.size() != m_.states[u.state].rank)
          throw Error(ErrorKind::arity_mismatch, "wrong number of arguments for state '" +
                                                     m_.states[u.state].name + "'");
        check_tree(u.input, m_.input);
        std::vector<Set> args;
        for (const auto& c : u.children) args.push_back(term(c));
        const Set& callee = state(u.state, u.input);
        return alg_.subst(mode_, callee, args);
      }
    }
    return {};
  }

 private:
  const Mtt& m_;
  Mode mode_;
  SetAlgebra& alg_;
  RuleSource rules_;
  std::map<std::pair<std::size_t, const Tree*>, Set> memo_;
};

RuleSource plain_rules(const Mtt& m) {
  return [&m](std::size_t q, const Tree& s) {
    std::vector<const Rhs*> out;
    for (const auto& r : m.rules_for(q, s.label)) out.push_back(&r);
    return out;
  };
}

bool satisfies_structurally(const Tree& s, const std::vector<ChildPair>& eq,
                            const std::vector<ChildPair>& neq) {
  for (const auto& [i, j] : eq)
    if (!(s.children.at(i) == s.children.at(j))) return false;
  for (const auto& [i, j] : neq)
    if (s.children.at(i) == s.children.at(j)) return false;
  return true;
}

std::size_t unique_tac_state(const Tac& tac, const Tree& t) {
  auto states = tac_states_reference(tac, t);
  if (states.empty())
    throw Error(ErrorKind::not_total, "no look-ahead transition applies at " + to_string(t));
  if (states.size() > 1)
    throw Error(ErrorKind::not_deterministic,
                "several look-ahead states apply at " + to_string(t));
  return states.front();
}

RuleSource lookahead_rules(const TacMtt& m) {
  return [&m](std::size_t q, const Tree& s) {
    std::vector<const Rhs*> out;
    for (const auto& r : m.base.rules_for(q, s.label)) out.push_back(&r);
    std::vector<std::size_t> child_states;
    bool computed = false;
    for (const auto& r : m.rules) {
      if (r.state != q || r.symbol != s.label) continue;
      if (!computed) {
        for (const auto& c : s.children) child_states.push_back(unique_tac_state(m.lookahead, c));
        computed = true;
      }
      bool match = true;
      for (std::size_t i = 0; i < r.guard.states.size() && match; ++i)
        if (r.guard.states[i] && *r.guard.states[i] != child_states.at(i)) match = false;
      if (match && satisfies_structurally(s, r.guard.eq, r.guard.neq)) out.push_back(&r.rhs);
    }
    return out;
  };
}

TreeSet to_tree_set(const TermPool& pool, const Set& s) {
  std::vector<Tree> trees;
  trees.reserve(s.size());
  for (Id t : s) trees.push_back(pool.to_tree(t));
  return TreeSet(std::move(trees));
}

std::vector<Set> intern_sets(TermPool& pool, std::span<const TreeSet> sets) {
  std::vector<Set> out;
  for (const auto& l : sets) {
    Set s;
    for (const auto& t : l) s.push_back(pool.from_tree(t));
    normalize(s);
    out.push_back(std::move(s));
  }
  return out;
}

TreeSet subst_sets(Mode mode, const TreeSet& l, std::span<const TreeSet> args,
                   const Budget& budget) {
  TermPool pool(std::nullopt, budget.max_tree_size);
  SetAlgebra alg(pool, budget);
  Set base;
  for (const auto& t : l) base.push_back(pool.from_tree(t));
  normalize(base);
  auto sets = intern_sets(pool, args);
  return to_tree_set(pool, alg.subst(mode, base, sets));
}

template <class Model>
Verdict member_with(const Model& m, const Mtt& base, Mode mode, const Tree& s, const Tree& t,
                    const OracleOptions& options, RuleSource rules) {
  check_tree(s, base.input);
  const std::size_t target_size = t.size();
  std::size_t max_tree = options.budget.max_tree_size.value_or(4 * target_size);
  try {
    TermPool pool(options.prune ? std::optional<std::size_t>(target_size) : std::nullopt,
                  max_tree);
    SetAlgebra alg(pool, options.budget);
    MttSemantics sem(base, mode, alg, std::move(rules));
    const Set& out = sem.state(base.initial, s);
    auto target = pool.find_tree(t);
    if (!target) return Verdict::no;
    return std::binary_search(out.begin(), out.end(), *target) ? Verdict::yes : Verdict::no;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::budget_exceeded) return Verdict::unknown;
    throw;
  }
  (void)m;
}

// ---------------------------------------------------------------------------
// multi-return

using Tuple = std::vector<Id>;
using TupleSet = std::vector<Tuple>;

void normalize(TupleSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

class MrSemantics {
 public:
  MrSemantics(const MrMtt& m, SetAlgebra& algebra) : m_(m), alg_(algebra) {
    for (const auto& [name, rank] : m.output.symbols()) alg_.pool().symbol(name, rank);
  }

  const TupleSet& state(std::size_t q, const Tree& s) {
    auto key = std::make_pair(q, &s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    TupleSet out;
    for (const auto& r : m_.rules_for(q, s.label)) {
      TupleSet part = kappa(r, 0, s);
      out.insert(out.end(), part.begin(), part.end());
    }
    normalize(out);
    check(out);
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  void check(const TupleSet& s) const {
    if (s.size() > budget_limit())
      over_budget("tuple set exceeds max_set_size");
  }
  std::size_t budget_limit() const { return limit_; }

  Id term(const MrTerm& u) {
    switch (u.kind) {
      case MrTerm::Kind::param:
        return alg_.pool().leaf(Label{LabelKind::param, static_cast<std::uint32_t>(u.index)});
      case MrTerm::Kind::var:
        return alg_.pool().leaf(Label{LabelKind::var, static_cast<std::uint32_t>(u.index)});
      case MrTerm::Kind::output: {
        std::vector<Id> kids;
        for (const auto& c : u.children) kids.push_back(term(c));
        return alg_.pool().make(
            Label{LabelKind::output, alg_.pool().symbol(u.symbol, u.children.size())}, kids);
      }
    }
    return kNone;
  }

  /// [[l_i ... l_n (u_1..u_e)]] with x bound to the children of s.
  TupleSet kappa(const MrRhs& r, std::size_t i, const Tree& s) {
    if (i == r.lets.size()) {
      Tuple t;
      for (const auto& u : r.result) t.push_back(term(u));
      return {t};
    }
    const MrLet& l = r.lets[i];
    std::vector<Id> args;
    for (const auto& a : l.args) args.push_back(term(a));
    // callee tuples <-IO (singleton argument sets)
    TupleSet bound;
    for (const auto& tuple : state(l.state, s.children.at(l.input))) {
      std::unordered_map<Id, Id> memo;
      Tuple b;
      for (Id c : tuple) b.push_back(alg_.apply(c, LabelKind::param, args, memo));
      bound.push_back(std::move(b));
    }
    normalize(bound);
    if (bound.empty()) return {};
    TupleSet rest = kappa(r, i + 1, s);
    std::size_t width = 0;
    for (std::size_t z : l.targets) width = std::max(width, z + 1);
    TupleSet out;
    for (const auto& xi : rest) {
      for (const auto& tb : bound) {
        std::vector<Id> choice(width, kNone);
        for (std::size_t k = 0; k < l.targets.size(); ++k) choice[l.targets[k]] = tb.at(k);
        std::unordered_map<Id, Id> memo;
        Tuple res;
        for (Id c : xi) res.push_back(alg_.apply(c, LabelKind::var, choice, memo));
        out.push_back(std::move(res));
        alg_.tick();
      }
      if (out.size() > 4 * budget_limit()) {
        normalize(out);
        check(out);
      }
    }
    normalize(out);
    check(out);
    return out;
  }

 public:
  void set_limit(std::size_t limit) { limit_ = limit; }

 private:
  const MrMtt& m_;
  SetAlgebra& alg_;
  std::size_t limit_ = 100'000;
  std::map<std::pair<std::size_t, const Tree*>, TupleSet> memo_;
};

void enumerate_rec(const std::vector<std::pair<std::string, std::size_t>>& symbols,
                   std::vector<std::vector<Tree>>& by_size, std::size_t n) {
  // trees of exactly n nodes
  std::vector<Tree> out;
  for (const auto& [name, rank] : symbols) {
    if (rank == 0) {
      if (n == 1) out.emplace_back(name);
      continue;
    }
    if (n < rank + 1) continue;
    // distribute n-1 nodes over `rank` children, each >= 1
    std::vector<std::size_t> sizes(rank, 1);
    sizes[rank - 1] = n - 1 - (rank - 1);
    std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&)> split =
        [&](std::size_t pos, std::size_t left, std::vector<std::size_t>& cur) {
          if (pos + 1 == rank) {
            cur[pos] = left;
            std::vector<std::size_t> idx(rank, 0);
            bool any_empty = false;
            for (std::size_t i = 0; i < rank; ++i)
              if (by_size[cur[i]].empty()) any_empty = true;
            if (any_empty) return;
            while (true) {
              Tree t(name);
              for (std::size_t i = 0; i < rank; ++i) t.children.push_back(by_size[cur[i]][idx[i]]);
              out.push_back(std::move(t));
              std::size_t i = 0;
              while (i < rank && ++idx[i] == by_size[cur[i]].size()) idx[i++] = 0;
              if (i == rank) break;
            }
            return;
          }
          for (std::size_t k = 1; k + (rank - pos - 1) <= left; ++k) {
            cur[pos] = k;
            split(pos + 1, left - k, cur);
          }
        };
    split(0, n - 1, sizes);
  }
  by_size[n] = std::move(out);
}

}  // namespace

TreeSet io_subst(const Tree& t, std::span<const TreeSet> args, const Budget& budget) {
  return subst_sets(Mode::io, TreeSet{t}, args, budget);
}

TreeSet oi_subst(const Tree& t, std::span<const TreeSet> args, const Budget& budget) {
  return subst_sets(Mode::oi, TreeSet{t}, args, budget);
}

TreeSet io_subst(const TreeSet& l, std::span<const TreeSet> args, const Budget& budget) {
  return subst_sets(Mode::io, l, args, budget);
}

TreeSet oi_subst(const TreeSet& l, std::span<const TreeSet> args, const Budget& budget) {
  return subst_sets(Mode::oi, l, args, budget);
}

TreeSet eval(const Mtt& m, Mode mode, const SemTerm& u, const Budget& budget) {
  TermPool pool(std::nullopt, budget.max_tree_size);
  SetAlgebra alg(pool, budget);
  MttSemantics sem(m, mode, alg, plain_rules(m));
  return to_tree_set(pool, sem.term(u));
}

TreeSet eval_state(const Mtt& m, Mode mode, std::size_t q, const Tree& s, const Budget& budget) {
  if (q >= m.states.size()) throw Error(ErrorKind::unknown_state, "no such state");
  check_tree(s, m.input);
  TermPool pool(std::nullopt, budget.max_tree_size);
  SetAlgebra alg(pool, budget);
  MttSemantics sem(m, mode, alg, plain_rules(m));
  return to_tree_set(pool, sem.state(q, s));
}

TreeSet eval_state(const TacMtt& m, Mode mode, std::size_t q, const Tree& s,
                   const Budget& budget) {
  if (q >= m.base.states.size()) throw Error(ErrorKind::unknown_state, "no such state");
  check_tree(s, m.base.input);
  TermPool pool(std::nullopt, budget.max_tree_size);
  SetAlgebra alg(pool, budget);
  MttSemantics sem(m.base, mode, alg, lookahead_rules(m));
  return to_tree_set(pool, sem.state(q, s));
}

TreeSet translate(const Mtt& m, Mode mode, const Tree& s, const Budget& budget) {
  return eval_state(m, mode, m.initial, s, budget);
}

TreeSet translate(const TacMtt& m, Mode mode, const Tree& s, const Budget& budget) {
  return eval_state(m, mode, m.base.initial, s, budget);
}

Verdict oracle_member(const Mtt& m, Mode mode, const Tree& s, const Tree& t,
                      const OracleOptions& options) {
  return member_with(m, m, mode, s, t, options, plain_rules(m));
}

Verdict oracle_member(const TacMtt& m, Mode mode, const Tree& s, const Tree& t,
                      const OracleOptions& options) {
  check_tree(s, m.base.input);
  unique_tac_state(m.lookahead, s);  // look-ahead must be defined on all of s
  return member_with(m, m.base, mode, s, t, options, lookahead_rules(m));
}

std::vector<std::vector<Tree>> eval_mr_state(const MrMtt& m, std::size_t q, const Tree& s,
                                             const Budget& budget) {
  if (q >= m.states.size()) throw Error(ErrorKind::unknown_state, "no such state");
  check_tree(s, m.input);
  TermPool pool(std::nullopt, budget.max_tree_size);
  SetAlgebra alg(pool, budget);
  MrSemantics sem(m, alg);
  sem.set_limit(budget.max_set_size);
  std::vector<std::vector<Tree>> out;
  for (const auto& tuple : sem.state(q, s)) {
    std::vector<Tree> row;
    for (Id c : tuple) row.push_back(pool.to_tree(c));
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreeSet eval_mr_io(const MrMtt& m, const Tree& s, const Budget& budget) {
  std::vector<Tree> out;
  for (auto& row : eval_mr_state(m, m.initial, s, budget)) out.push_back(std::move(row.at(0)));
  return TreeSet(std::move(out));
}

Verdict oracle_member_mr(const MrMtt& m, const Tree& s, const Tree& t,
                         const OracleOptions& options) {
  check_tree(s, m.input);
  const std::size_t target_size = t.size();
  try {
    TermPool pool(options.prune ? std::optional<std::size_t>(target_size) : std::nullopt,
                  options.budget.max_tree_size.value_or(4 * target_size));
    SetAlgebra alg(pool, options.budget);
    MrSemantics sem(m, alg);
    sem.set_limit(options.budget.max_set_size);
    const TupleSet& out = sem.state(m.initial, s);
    auto target = pool.find_tree(t);
    if (!target) return Verdict::no;
    for (const auto& tuple : out)
      if (tuple.at(0) == *target) return Verdict::yes;
    return Verdict::no;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::budget_exceeded) return Verdict::unknown;
    throw;
  }
}

std::vector<std::size_t> tac_states_reference(const Tac& tac, const Tree& t) {
  std::vector<std::vector<std::size_t>> kids;
  for (const auto& c : t.children) kids.push_back(tac_states_reference(tac, c));
  std::vector<std::size_t> out;
  for (const auto& tr : tac.transitions) {
    if (tr.symbol != t.label || tr.children.size() != t.children.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < tr.children.size() && ok; ++i)
      ok = std::find(kids[i].begin(), kids[i].end(), tr.children[i]) != kids[i].end();
    if (ok && satisfies_structurally(t, tr.eq, tr.neq)) out.push_back(tr.target);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_size) {
  std::vector<std::pair<std::string, std::size_t>> symbols(alphabet.symbols().begin(),
                                                           alphabet.symbols().end());
  std::vector<std::vector<Tree>> by_size(max_size + 1);
  for (std::size_t n = 1; n <= max_size; ++n) enumerate_rec(symbols, by_size, n);
  std::vector<Tree> out;
  for (auto& level : by_size)
    for (auto& t : level) out.push_back(std::move(t));
  return out;
}

std::vector<Tree> enumerate_trees_by_height(const RankedAlphabet& alphabet,
                                            std::size_t max_height, std::size_t limit) {
  std::vector<Tree> all;  // trees of height <= h
  for (std::size_t h = 1; h <= max_height; ++h) {
    std::vector<Tree> next;
    for (const auto& [name, rank] : alphabet.symbols()) {
      if (rank == 0) {
        next.emplace_back(name);
        continue;
      }
      if (all.empty()) continue;
      std::vector<std::size_t> idx(rank, 0);
      while (true) {
        Tree t(name);
        for (std::size_t i = 0; i < rank; ++i) t.children.push_back(all[idx[i]]);
        next.push_back(std::move(t));
        if (next.size() > limit) over_budget("too many trees to enumerate");
        std::size_t i = 0;
        while (i < rank && ++idx[i] == all.size()) idx[i++] = 0;
        if (i == rank) break;
      }
    }
    all = std::move(next);
  }
  std::sort(all.begin(), all.end(), [](const Tree& a, const Tree& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return all;
}

}  // namespace mttkit
