#include "mttkit/multi_return.hpp"

#include <algorithm>
#include <set>

#include "mttkit/errors.hpp"
#include "run_support.hpp"

namespace mttkit {

MrTerm MrTerm::output(std::string symbol, std::vector<MrTerm> children) {
  MrTerm u;
  u.kind = Kind::output;
  u.symbol = std::move(symbol);
  u.children = std::move(children);
  return u;
}

MrTerm MrTerm::param(std::size_t i) {
  MrTerm u;
  u.kind = Kind::param;
  u.index = i;
  return u;
}

MrTerm MrTerm::var(std::size_t i) {
  MrTerm u;
  u.kind = Kind::var;
  u.index = i;
  return u;
}

std::size_t MrTerm::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

bool operator==(const MrTerm& a, const MrTerm& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == MrTerm::Kind::output) return a.symbol == b.symbol && a.children == b.children;
  return a.index == b.index;
}

std::size_t MrRhs::size() const {
  std::size_t n = 0;
  for (const auto& l : lets) {
    n += 1 + l.targets.size();
    for (const auto& a : l.args) n += a.size();
  }
  for (const auto& u : result) n += u.size();
  return n;
}

std::size_t MrMtt::add_state(const std::string& state_name, std::size_t rank,
                             std::size_t dimension) {
  if (find_state(state_name))
    throw Error(ErrorKind::duplicate_name, "state '" + state_name + "' declared twice");
  states.push_back(MrStateDecl{state_name, rank, dimension});
  return states.size() - 1;
}

std::optional<std::size_t> MrMtt::find_state(std::string_view state_name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].name == state_name) return i;
  return std::nullopt;
}

bool MrMtt::add_rule(std::size_t state, const std::string& symbol, MrRhs rhs) {
  auto& alts = rules_[RuleKey{state, symbol}];
  if (std::find(alts.begin(), alts.end(), rhs) != alts.end()) return false;
  alts.push_back(std::move(rhs));
  return true;
}

const std::vector<MrRhs>& MrMtt::rules_for(std::size_t state, std::string_view symbol) const {
  static const std::vector<MrRhs> none;
  auto it = rules_.find(RuleKey{state, std::string(symbol)});
  return it == rules_.end() ? none : it->second;
}

std::size_t MrMtt::rule_count() const {
  std::size_t n = 0;
  for (const auto& [key, alts] : rules_) n += alts.size();
  return n;
}

std::size_t MrMtt::size() const {
  std::size_t n = 0;
  for (const auto& [key, alts] : rules_)
    for (const auto& r : alts) n += r.size();
  return n;
}

std::size_t MrMtt::max_state_rank() const {
  std::size_t n = 0;
  for (const auto& s : states) n = std::max(n, s.rank);
  return n;
}

std::size_t MrMtt::max_dimension() const {
  std::size_t n = 0;
  for (const auto& s : states) n = std::max(n, s.dimension);
  return n;
}

namespace {

void check_term(const MrMtt& m, const MrTerm& u, std::size_t rank, const std::set<std::size_t>& bound,
                const std::string& where) {
  switch (u.kind) {
    case MrTerm::Kind::param:
      if (u.index >= rank)
        throw Error(ErrorKind::arity_mismatch, where + ": y" + std::to_string(u.index + 1) +
                                                   " exceeds the state rank " +
                                                   std::to_string(rank));
      return;
    case MrTerm::Kind::var:
      if (!bound.count(u.index))
        throw Error(ErrorKind::malformed_let,
                    where + ": z" + std::to_string(u.index + 1) + " used before it is bound");
      return;
    case MrTerm::Kind::output: {
      auto r = m.output.rank_of(u.symbol);
      if (!r)
        throw Error(ErrorKind::unknown_symbol,
                    where + ": '" + u.symbol + "' is not in the output alphabet");
      if (*r != u.children.size())
        throw Error(ErrorKind::arity_mismatch, where + ": '" + u.symbol + "' has rank " +
                                                   std::to_string(*r));
      for (const auto& c : u.children) check_term(m, c, rank, bound, where);
      return;
    }
  }
}

}  // namespace

MrClass validate(const MrMtt& m) {
  if (m.initial >= m.states.size())
    throw Error(ErrorKind::bad_initial_rank, "initial state is not declared");
  const auto& q0 = m.states[m.initial];
  if (q0.rank != 0 || q0.dimension != 1)
    throw Error(ErrorKind::bad_initial_rank,
                "initial state '" + q0.name + "' must have rank 0 and dimension 1");
  MrClass c;
  c.deterministic = true;
  c.total = true;
  for (const auto& [key, alts] : m.rules()) {
    const auto& [q, sigma] = key;
    if (q >= m.states.size()) throw Error(ErrorKind::unknown_state, "rule for undeclared state");
    auto k = m.input.rank_of(sigma);
    if (!k)
      throw Error(ErrorKind::unknown_symbol,
                  "rule " + m.states[q].name + "(" + sigma + "): not in the input alphabet");
    if (alts.size() > 1) c.deterministic = false;
    for (std::size_t n = 0; n < alts.size(); ++n) {
      const MrRhs& r = alts[n];
      std::string where = "rule " + m.states[q].name + "(" + sigma + ") #" + std::to_string(n + 1);
      std::set<std::size_t> bound;
      for (const auto& l : r.lets) {
        if (l.state >= m.states.size())
          throw Error(ErrorKind::unknown_state, where + ": let calls an undeclared state");
        const auto& callee = m.states[l.state];
        if (l.input >= *k)
          throw Error(ErrorKind::arity_mismatch, where + ": x" + std::to_string(l.input + 1) +
                                                     " exceeds the rank of '" + sigma + "'");
        if (l.args.size() != callee.rank)
          throw Error(ErrorKind::arity_mismatch, where + ": '" + callee.name + "' takes " +
                                                     std::to_string(callee.rank) + " arguments");
        for (const auto& a : l.args) check_term(m, a, m.states[q].rank, bound, where);
        if (l.targets.size() != callee.dimension)
          throw Error(ErrorKind::malformed_let, where + ": '" + callee.name + "' returns " +
                                                    std::to_string(callee.dimension) +
                                                    " values, binding has " +
                                                    std::to_string(l.targets.size()));
        for (std::size_t z : l.targets)
          if (!bound.insert(z).second)
            throw Error(ErrorKind::malformed_let,
                        where + ": z" + std::to_string(z + 1) + " is bound twice");
      }
      if (r.result.size() != m.states[q].dimension)
        throw Error(ErrorKind::arity_mismatch, where + ": '" + m.states[q].name + "' returns " +
                                                   std::to_string(m.states[q].dimension) +
                                                   " values");
      for (const auto& u : r.result) check_term(m, u, m.states[q].rank, bound, where);
    }
  }
  for (std::size_t q = 0; q < m.states.size(); ++q)
    for (const auto& [sym, rank] : m.input.symbols())
      if (m.rules_for(q, sym).empty()) c.total = false;
  c.max_state_rank = m.max_state_rank();
  c.max_dimension = m.max_dimension();
  return c;
}

namespace {

MrTerm embed_term(const Rhs& r, std::vector<MrLet>& lets, std::size_t& next_var) {
  switch (r.kind) {
    case Rhs::Kind::param:
      return MrTerm::param(r.index);
    case Rhs::Kind::output: {
      std::vector<MrTerm> kids;
      for (const auto& c : r.children) kids.push_back(embed_term(c, lets, next_var));
      return MrTerm::output(r.symbol, std::move(kids));
    }
    case Rhs::Kind::call: {
      MrLet l;
      l.state = r.state;
      l.input = r.index;
      for (const auto& c : r.children) l.args.push_back(embed_term(c, lets, next_var));
      std::size_t z = next_var++;
      l.targets = {z};
      lets.push_back(std::move(l));
      return MrTerm::var(z);
    }
  }
  return {};
}

}  // namespace

MrMtt embed_mtt(const Mtt& m) {
  MrMtt out;
  out.name = m.name;
  out.input = m.input;
  out.output = m.output;
  for (const auto& s : m.states) out.add_state(s.name, s.rank, 1);
  out.initial = m.initial;
  for (const auto& [key, alts] : m.rules()) {
    for (const auto& r : alts) {
      MrRhs rhs;
      std::size_t next_var = 0;
      rhs.result.push_back(embed_term(r, rhs.lets, next_var));
      out.add_rule(key.first, key.second, std::move(rhs));
    }
  }
  return out;
}

MrRunState::MrRunState(std::vector<std::size_t> state_ranks, std::size_t node_count)
    : node_count_(node_count), by_state_(state_ranks.size()) {
  std::size_t max_rank = 0;
  for (std::size_t r : state_ranks) max_rank = std::max(max_rank, r);
  detail::check_packable(node_count + 1, max_rank);
}

std::span<const std::vector<NodeRef>> MrRunState::results(std::size_t q,
                                                          std::span<const NodeRef> params) const {
  if (q >= by_state_.size()) return {};
  auto it = by_state_[q].find(detail::pack_nodes(params, node_count_));
  if (it == by_state_[q].end()) return {};
  return it->second;
}

bool MrRunState::contains(std::size_t q, std::span<const NodeRef> params,
                          std::span<const NodeRef> result) const {
  std::vector<NodeRef> w(result.begin(), result.end());
  auto r = results(q, params);
  return std::binary_search(r.begin(), r.end(), w);
}

void MrRunState::add(std::size_t q, std::span<const NodeRef> params,
                     std::vector<std::vector<NodeRef>> tuples) {
  if (tuples.empty()) return;
  auto& slot = by_state_.at(q)[detail::pack_nodes(params, node_count_)];
  slot.insert(slot.end(), std::make_move_iterator(tuples.begin()),
              std::make_move_iterator(tuples.end()));
  std::sort(slot.begin(), slot.end());
  slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
}

std::size_t MrRunState::entry_count() const {
  std::size_t n = 0;
  for (const auto& table : by_state_)
    for (const auto& [key, tuples] : table) n += tuples.size();
  return n;
}

namespace {

/// Marks a let-variable that is unbound or no longer needed.
constexpr NodeRef kDead = NodeRef(std::numeric_limits<std::uint32_t>::max() - 1);

using Env = std::vector<NodeRef>;

void note_vars(const MrTerm& u, std::vector<bool>& used) {
  if (u.kind == MrTerm::Kind::var) used.at(u.index) = true;
  for (const auto& c : u.children) note_vars(c, used);
}

std::size_t var_count(const MrRhs& r) {
  std::size_t n = 0;
  auto rec = [&](auto& self, const MrTerm& u) -> void {
    if (u.kind == MrTerm::Kind::var) n = std::max(n, u.index + 1);
    for (const auto& c : u.children) self(self, c);
  };
  for (const auto& l : r.lets) {
    for (std::size_t z : l.targets) n = std::max(n, z + 1);
    for (const auto& a : l.args) rec(rec, a);
  }
  for (const auto& u : r.result) rec(rec, u);
  return n;
}

/// For every let i, the variables still needed after it.
struct RhsPlan {
  std::size_t vars = 0;
  std::vector<std::vector<bool>> live_after;
};

RhsPlan plan(const MrRhs& r) {
  RhsPlan p;
  p.vars = var_count(r);
  p.live_after.assign(r.lets.size(), std::vector<bool>(p.vars, false));
  std::vector<bool> live(p.vars, false);
  for (const auto& u : r.result) note_vars(u, live);
  for (std::size_t i = r.lets.size(); i-- > 0;) {
    p.live_after[i] = live;
    for (const auto& a : r.lets[i].args) note_vars(a, live);
  }
  return p;
}

class MrTransition {
 public:
  MrTransition(const MrMtt& m, const TreeDag& t_dag, MrLimits limits)
      : m_(m), dag_(t_dag), symbols_(t_dag), limits_(limits) {
    for (const auto& s : m.states) ranks_.push_back(s.rank);
    for (const auto& [key, alts] : m.rules())
      for (const auto& r : alts) plans_.emplace(&r, plan(r));
  }

  MrRunState apply(const std::string& symbol, std::span<const MrRunState* const> kids) {
    MrRunState out(ranks_, dag_.node_count());
    for (std::size_t q = 0; q < m_.states.size(); ++q) {
      const auto& rules = m_.rules_for(q, symbol);
      if (rules.empty()) continue;
      detail::for_each_param_vector(ranks_[q], dag_.node_count(),
                                    [&](std::span<const NodeRef> v) {
                                      std::vector<std::vector<NodeRef>> acc;
                                      for (const auto& r : rules) run_rhs(r, v, kids, acc);
                                      out.add(q, v, std::move(acc));
                                    });
    }
    return out;
  }

 private:
  /// The unique node of the ground tree u under env and v, or bottom.
  NodeRef value(const MrTerm& u, std::span<const NodeRef> v, const Env& env) {
    switch (u.kind) {
      case MrTerm::Kind::param: return v[u.index];
      case MrTerm::Kind::var: return env[u.index];
      case MrTerm::Kind::output: {
        std::vector<NodeRef> kids;
        kids.reserve(u.children.size());
        for (const auto& c : u.children) {
          NodeRef k = value(c, v, env);
          if (k.is_bottom()) return NodeRef::bottom();
          kids.push_back(k);
        }
        return dag_.find(symbols_.dag_symbol(u.symbol, u.children.size()), kids);
      }
    }
    return NodeRef::bottom();
  }

  void run_rhs(const MrRhs& r, std::span<const NodeRef> v,
               std::span<const MrRunState* const> kids, std::vector<std::vector<NodeRef>>& acc) {
    const RhsPlan& p = plans_.at(&r);
    std::vector<Env> envs{Env(p.vars, kDead)};
    std::vector<NodeRef> args;
    for (std::size_t i = 0; i < r.lets.size(); ++i) {
      const MrLet& l = r.lets[i];
      std::vector<Env> next;
      for (const Env& env : envs) {
        args.clear();
        for (const auto& a : l.args) args.push_back(value(a, v, env));
        for (const auto& w : kids[l.input]->results(l.state, args)) {
          Env e = env;
          for (std::size_t k = 0; k < l.targets.size(); ++k) e[l.targets[k]] = w[k];
          for (std::size_t z = 0; z < p.vars; ++z)
            if (!p.live_after[i][z]) e[z] = kDead;
          next.push_back(std::move(e));
        }
        if (next.size() > 2 * limits_.max_environments) dedupe(next);
      }
      dedupe(next);
      envs = std::move(next);
      if (envs.empty()) return;
    }
    for (const Env& env : envs) {
      std::vector<NodeRef> w;
      for (const auto& u : r.result) w.push_back(value(u, v, env));
      acc.push_back(std::move(w));
    }
  }

  void dedupe(std::vector<Env>& envs) const {
    std::sort(envs.begin(), envs.end());
    envs.erase(std::unique(envs.begin(), envs.end()), envs.end());
    if (envs.size() > limits_.max_environments)
      throw Error(ErrorKind::environment_limit,
                  std::to_string(envs.size()) + " environments exceed the limit of " +
                      std::to_string(limits_.max_environments));
  }

  const MrMtt& m_;
  const TreeDag& dag_;
  detail::RhsSymbols symbols_;
  MrLimits limits_;
  std::vector<std::size_t> ranks_;
  std::unordered_map<const MrRhs*, RhsPlan> plans_;
};

}  // namespace

MrRunState run_mr_io(const MrMtt& m, const Tree& s, const TreeDag& t_dag, MrLimits limits) {
  check_tree(s, m.input);
  DagBuild input = build_dag(s);
  MrTransition tr(m, t_dag, limits);
  std::vector<MrRunState> runs;
  runs.reserve(input.dag.node_count());
  std::vector<const MrRunState*> kids;
  for (std::size_t i = 0; i < input.dag.node_count(); ++i) {
    NodeRef v = input.dag.node(i);
    kids.clear();
    for (NodeRef c : input.dag.children(v)) kids.push_back(&runs[c.index()]);
    runs.push_back(tr.apply(input.dag.label(v), kids));
  }
  return std::move(runs[input.root.index()]);
}

bool member_mr_io(const MrMtt& m, const Tree& s, const Tree& t, MrLimits limits) {
  check_tree(s, m.input);
  if (!detail::tree_over(t, m.output)) return false;
  DagBuild target = build_dag(t);
  MrRunState run = run_mr_io(m, s, target.dag, limits);
  NodeRef root = target.root;
  return run.contains(m.initial, {}, std::span<const NodeRef>(&root, 1));
}

}  // namespace mttkit
