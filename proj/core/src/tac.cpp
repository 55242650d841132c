#include "mttkit/tac.hpp"

#include <algorithm>
#include <map>

#include "io_engine.hpp"
#include "mttkit/errors.hpp"
#include "mttkit/io_membership.hpp"

namespace mttkit {

std::size_t Tac::add_state(const std::string& name) {
  if (find_state(name))
    throw Error(ErrorKind::duplicate_name, "look-ahead state '" + name + "' declared twice");
  states.push_back(name);
  return states.size() - 1;
}

std::optional<std::size_t> Tac::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  return std::nullopt;
}

namespace {

void check_pairs(const std::vector<ChildPair>& pairs, std::size_t arity, const std::string& where) {
  for (const auto& [i, j] : pairs)
    if (i >= arity || j >= arity)
      throw Error(ErrorKind::arity_mismatch, where + ": constraint (" + std::to_string(i + 1) +
                                                 "," + std::to_string(j + 1) +
                                                 ") outside arity " + std::to_string(arity));
}

}  // namespace

void Tac::validate(const RankedAlphabet& sigma) const {
  for (std::size_t n = 0; n < transitions.size(); ++n) {
    const auto& t = transitions[n];
    std::string where = "look-ahead transition " + t.symbol + " #" + std::to_string(n + 1);
    auto rank = sigma.rank_of(t.symbol);
    if (!rank) throw Error(ErrorKind::unknown_symbol, where + ": symbol not in the input alphabet");
    if (*rank != t.children.size())
      throw Error(ErrorKind::arity_mismatch, where + ": expected " + std::to_string(*rank) +
                                                 " child states, got " +
                                                 std::to_string(t.children.size()));
    for (std::size_t p : t.children)
      if (p >= states.size()) throw Error(ErrorKind::unknown_state, where + ": no such state");
    if (t.target >= states.size()) throw Error(ErrorKind::unknown_state, where + ": no such state");
    check_pairs(t.eq, t.children.size(), where);
    check_pairs(t.neq, t.children.size(), where);
  }
}

bool satisfies(std::span<const NodeRef> children, const std::vector<ChildPair>& eq,
               const std::vector<ChildPair>& neq) {
  for (const auto& [i, j] : eq)
    if (children[i] != children[j]) return false;
  for (const auto& [i, j] : neq)
    if (children[i] == children[j]) return false;
  return true;
}

TacRunner::TacRunner(const Tac& tac, const TreeDag& dag)
    : tac_(tac), dag_(dag), memo_(dag.node_count()), by_symbol_(dag.symbol_count()) {
  for (std::size_t n = 0; n < tac.transitions.size(); ++n) {
    const auto& t = tac.transitions[n];
    SymbolId id = dag.symbol_id(t.symbol);
    if (id != kNoSymbol && dag.symbol_rank(id) == t.children.size()) by_symbol_[id].push_back(n);
  }
}

std::size_t TacRunner::state_of(NodeRef v) {
  Position path;
  return run(v, path);
}

std::size_t TacRunner::run(NodeRef v, Position& path) {
  if (v.is_bottom()) throw Error(ErrorKind::bottom_access, "look-ahead run on bottom");
  if (memo_[v.index()]) return *memo_[v.index()];
  auto kids = dag_.children(v);
  std::vector<std::size_t> states;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i + 1);
    states.push_back(run(kids[i], path));
    path.pop_back();
  }
  std::vector<std::size_t> targets;
  for (std::size_t n : by_symbol_[dag_.label_id(v)]) {
    const auto& t = tac_.transitions[n];
    if (t.children == states && satisfies(kids, t.eq, t.neq)) targets.push_back(t.target);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.empty())
    throw Error(ErrorKind::not_total, "no look-ahead transition applies at position " +
                                          position_to_string(path) + " (" + dag_.label(v) + ")");
  if (targets.size() > 1)
    throw Error(ErrorKind::not_deterministic,
                "look-ahead states " + tac_.states[targets[0]] + " and " +
                    tac_.states[targets[1]] + " both apply at position " +
                    position_to_string(path) + " (" + dag_.label(v) + ")");
  memo_[v.index()] = targets.front();
  return targets.front();
}

std::size_t run_tac(const Tac& tac, const TreeDag& dag, NodeRef v) {
  TacRunner runner(tac, dag);
  return runner.state_of(v);
}

MttClass validate(const TacMtt& m) {
  MttClass c = validate(m.base);
  m.lookahead.validate(m.base.input);
  std::map<Mtt::RuleKey, std::size_t> counts;
  for (const auto& [key, rhss] : m.base.rules()) counts[key] += rhss.size();
  for (std::size_t n = 0; n < m.rules.size(); ++n) {
    const auto& r = m.rules[n];
    std::string where = "guarded rule #" + std::to_string(n + 1);
    if (r.state >= m.base.states.size())
      throw Error(ErrorKind::unknown_state, where + ": no such state");
    where = "rule " + m.base.states[r.state].name + "(" + r.symbol + ") when";
    auto rank = m.base.input.rank_of(r.symbol);
    if (!rank) throw Error(ErrorKind::unknown_symbol, where + ": '" + r.symbol + "' not in the input alphabet");
    if (r.guard.states.size() != *rank)
      throw Error(ErrorKind::arity_mismatch, where + ": expected " + std::to_string(*rank) +
                                                 " look-ahead states");
    for (const auto& p : r.guard.states)
      if (p && *p >= m.lookahead.states.size())
        throw Error(ErrorKind::unknown_state, where + ": no such look-ahead state");
    check_pairs(r.guard.eq, *rank, where);
    check_pairs(r.guard.neq, *rank, where);
    validate_rhs(m.base, r.state, *rank, r.rhs, where);
    counts[{r.state, r.symbol}] += 1;
  }

  // Classification over all rules regardless of guards (conservative).
  c.deterministic = true;
  for (const auto& [key, n] : counts)
    if (n > 1) c.deterministic = false;
  c.total = true;
  for (std::size_t q = 0; q < m.base.states.size(); ++q)
    for (const auto& [sym, rank] : m.base.input.symbols())
      if (!counts.count({q, sym})) c.total = false;
  if (!m.rules.empty()) {
    Mtt flat = m.base;
    for (const auto& r : m.rules) flat.add_rule(r.state, r.symbol, r.rhs);
    MttClass all = validate(flat);
    c.linear_input = all.linear_input;
    c.linear_params = all.linear_params;
  }
  return c;
}

TacMtt with_trivial_lookahead(const Mtt& m) {
  TacMtt out;
  out.base = m;
  std::size_t p = out.lookahead.add_state("p");
  for (const auto& [sym, rank] : m.input.symbols())
    out.lookahead.transitions.push_back(
        TacTransition{sym, std::vector<std::size_t>(rank, p), {}, {}, p});
  return out;
}

std::vector<const Rhs*> applicable_rules(const TacMtt& m, std::size_t q,
                                         const std::string& symbol,
                                         std::span<const std::size_t> child_states,
                                         std::span<const NodeRef> children) {
  std::vector<const Rhs*> out = detail::rule_pointers(m.base.rules_for(q, symbol));
  for (const auto& r : m.rules) {
    if (r.state != q || r.symbol != symbol) continue;
    bool match = r.guard.states.size() == child_states.size();
    for (std::size_t i = 0; match && i < child_states.size(); ++i)
      if (r.guard.states[i] && *r.guard.states[i] != child_states[i]) match = false;
    if (match && satisfies(children, r.guard.eq, r.guard.neq)) out.push_back(&r.rhs);
  }
  return out;
}

bool member_io_tac(const TacMtt& m, const Tree& s, const Tree& t) {
  check_tree(s, m.base.input);
  DagBuild input = build_dag(s);
  TacRunner lookahead(m.lookahead, input.dag);
  lookahead.state_of(input.root);  // the whole input must be accepted deterministically
  if (!detail::tree_over(t, m.base.output)) return false;
  DagBuild target = build_dag(t);

  detail::IoEvaluator f(target.dag);
  const auto ranks = detail::state_ranks(m.base);
  std::vector<RunState> runs;
  runs.reserve(input.dag.node_count());
  std::vector<const RunState*> kids;
  std::vector<std::size_t> child_states;
  for (std::size_t i = 0; i < input.dag.node_count(); ++i) {
    NodeRef v = input.dag.node(i);
    auto children = input.dag.children(v);
    kids.clear();
    child_states.clear();
    for (NodeRef c : children) {
      kids.push_back(&runs[c.index()]);
      child_states.push_back(lookahead.state_of(c));
    }
    const std::string& symbol = input.dag.label(v);
    runs.push_back(detail::io_transition(
        ranks, f,
        [&](std::size_t q) { return applicable_rules(m, q, symbol, child_states, children); },
        kids, target.dag.node_count()));
  }
  return runs[input.root.index()].contains(m.base.initial, {}, target.root);
}

}  // namespace mttkit
