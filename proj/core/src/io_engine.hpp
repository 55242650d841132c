#pragma once

// The f relation and transition function of the IO inverse-type automaton,
// shared by plain and look-ahead membership.

#include <unordered_map>
#include <vector>

#include "mttkit/io_membership.hpp"
#include "run_support.hpp"

namespace mttkit::detail {

/// f evaluated as result sets per right-hand-side subterm.
class IoEvaluator {
 public:
  explicit IoEvaluator(const TreeDag& t_dag) : dag_(t_dag), symbols_(t_dag) {}

  /// Results of parameter-free subterms depend only on the input node.
  void reset_cache() { param_free_.clear(); }

  NodeSet eval(const Rhs& r, std::span<const NodeRef> params,
               std::span<const RunState* const> kids) {
    const bool cacheable = !symbols_.has_params(r);
    if (cacheable) {
      if (auto it = param_free_.find(&r); it != param_free_.end()) return it->second;
    }
    NodeSet out = eval_uncached(r, params, kids);
    if (cacheable) param_free_.emplace(&r, out);
    return out;
  }

 private:
  NodeSet eval_uncached(const Rhs& r, std::span<const NodeRef> params,
                        std::span<const RunState* const> kids) {
    switch (r.kind) {
      case Rhs::Kind::param:
        return {params[r.index]};
      case Rhs::Kind::output: {
        std::vector<NodeSet> cs;
        cs.reserve(r.children.size());
        for (const auto& c : r.children) {
          cs.push_back(eval(c, params, kids));
          if (cs.back().empty()) return {};
        }
        return output_results(dag_, symbols_.dag_symbol(r), cs);
      }
      case Rhs::Kind::call: {
        // IO: every argument must denote at least one tree.
        std::vector<NodeSet> args;
        args.reserve(r.children.size());
        for (const auto& c : r.children) {
          args.push_back(eval(c, params, kids));
          if (args.back().empty()) return {};
        }
        const RunState* child = kids[r.index];
        NodeSet out;
        for_each_selection(args, [&](std::span<const NodeRef> pick) {
          auto res = child->results(r.state, pick);
          out.insert(out.end(), res.begin(), res.end());
        });
        normalize(out);
        return out;
      }
    }
    return {};
  }

  const TreeDag& dag_;
  RhsSymbols symbols_;
  std::unordered_map<const Rhs*, NodeSet> param_free_;
};

inline std::vector<std::size_t> state_ranks(const Mtt& m) {
  std::vector<std::size_t> out;
  for (const auto& s : m.states) out.push_back(s.rank);
  return out;
}

inline std::vector<const Rhs*> rule_pointers(const std::vector<Rhs>& rules) {
  std::vector<const Rhs*> out;
  for (const auto& r : rules) out.push_back(&r);
  return out;
}

/// tr(sigma, a_1..a_k): `rules(q)` lists the right-hand sides that apply.
template <class RuleFn>
RunState io_transition(const std::vector<std::size_t>& ranks, IoEvaluator& f, RuleFn&& rules,
                       std::span<const RunState* const> kids, std::size_t node_count) {
  RunState out(ranks, node_count);
  f.reset_cache();
  for (std::size_t q = 0; q < ranks.size(); ++q) {
    std::vector<const Rhs*> rhss = rules(q);
    if (rhss.empty()) continue;
    for_each_param_vector(ranks[q], node_count, [&](std::span<const NodeRef> v) {
      NodeSet acc;
      for (const Rhs* r : rhss) {
        NodeSet res = f.eval(*r, v, kids);
        acc.insert(acc.end(), res.begin(), res.end());
      }
      normalize(acc);
      out.add(q, v, acc);
    });
  }
  return out;
}

}  // namespace mttkit::detail
