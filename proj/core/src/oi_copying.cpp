#include "mttkit/oi_copying.hpp"

#include <algorithm>
#include <functional>

#include "mttkit/errors.hpp"
#include "run_support.hpp"

namespace mttkit {

namespace {

using detail::NodeSet;

/// Calls fn on every sorted subset of `items` with at most c elements.
template <class Fn>
void for_each_small_subset(const NodeSet& items, std::size_t c, Fn&& fn) {
  NodeSet cur;
  auto rec = [&](auto& self, std::size_t start) -> void {
    fn(std::span<const NodeRef>(cur));
    if (cur.size() == c) return;
    for (std::size_t i = start; i < items.size(); ++i) {
      cur.push_back(items[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

SubsetTable::SubsetTable(std::size_t node_count, std::size_t c) : c_(c), node_count_(node_count) {
  if (c == 0) throw Error(ErrorKind::unsound_bound, "copying bound must be at least 1");
  detail::check_packable(node_count + 1, c);
  NodeSet all;
  for (std::size_t i = 0; i < node_count; ++i) all.emplace_back(static_cast<std::uint32_t>(i));
  for_each_small_subset(all, c, [&](std::span<const NodeRef> s) {
    ids_.emplace(key(s), subsets_.size());
    subsets_.emplace_back(s.begin(), s.end());
  });
}

std::uint64_t SubsetTable::key(std::span<const NodeRef> nodes) const {
  std::uint64_t k = 0;
  for (NodeRef v : nodes) k = k * (node_count_ + 1) + v.index() + 1;
  return k;
}

std::size_t SubsetTable::id_of(std::span<const NodeRef> sorted_nodes) const {
  if (sorted_nodes.size() > c_) return npos;
  auto it = ids_.find(key(sorted_nodes));
  return it == ids_.end() ? npos : it->second;
}

FcRunState::FcRunState(std::vector<std::size_t> state_ranks,
                       std::shared_ptr<const SubsetTable> subsets)
    : ranks_(std::move(state_ranks)), subsets_(std::move(subsets)), by_state_(ranks_.size()) {
  std::size_t max_rank = 0;
  for (std::size_t r : ranks_) max_rank = std::max(max_rank, r);
  detail::check_packable(subsets_->size(), max_rank);
}

std::uint64_t FcRunState::pack(std::span<const std::size_t> betas) const {
  std::uint64_t k = 0;
  for (auto it = betas.rbegin(); it != betas.rend(); ++it) k = k * subsets_->size() + *it;
  return k;
}

std::span<const NodeRef> FcRunState::results(std::size_t q,
                                             std::span<const std::size_t> betas) const {
  if (q >= by_state_.size()) return {};
  auto it = by_state_[q].find(pack(betas));
  if (it == by_state_[q].end()) return {};
  return it->second;
}

bool FcRunState::contains(std::size_t q, const std::vector<std::vector<NodeRef>>& betas,
                          NodeRef result) const {
  std::vector<std::size_t> ids;
  for (auto b : betas) {
    std::sort(b.begin(), b.end());
    std::size_t id = subsets_->id_of(b);
    if (id == SubsetTable::npos) return false;
    ids.push_back(id);
  }
  auto r = results(q, ids);
  return std::binary_search(r.begin(), r.end(), result);
}

void FcRunState::add(std::size_t q, std::span<const std::size_t> betas,
                     std::span<const NodeRef> values) {
  if (values.empty()) return;
  detail::merge_into(by_state_.at(q)[pack(betas)], values);
}

std::size_t FcRunState::entry_count() const {
  std::size_t n = 0;
  for (const auto& table : by_state_)
    for (const auto& [key, values] : table) n += values.size();
  return n;
}

bool operator==(const FcRunState& a, const FcRunState& b) {
  return a.ranks_ == b.ranks_ && a.subsets_->size() == b.subsets_->size() &&
         a.by_state_ == b.by_state_;
}

namespace {

/// f for one input node; `lookup(i, q, gammas)` answers for its i-th child.
class FcEvaluator {
 public:
  using Lookup = std::function<std::span<const NodeRef>(std::size_t, std::size_t,
                                                        std::span<const std::size_t>)>;

  FcEvaluator(const TreeDag& dag, const SubsetTable& subsets, detail::RhsSymbols& symbols,
              Lookup lookup)
      : dag_(dag), subsets_(subsets), symbols_(symbols), lookup_(std::move(lookup)) {}

  /// Memoized on r and the entries of betas for the parameters r mentions.
  const NodeSet& eval(const Rhs& r, std::span<const std::size_t> betas) {
    const std::uint64_t mask = symbols_.param_mask(r);
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < betas.size(); ++i)
      if ((mask >> std::min<std::size_t>(i, 63)) & 1) key = key * subsets_.size() + betas[i];
    auto& slot = memo_[&r];
    if (auto it = slot.find(key); it != slot.end()) return it->second;
    NodeSet out = eval_uncached(r, betas);
    return slot.emplace(key, std::move(out)).first->second;
  }

  /// Union over the rules.
  NodeSet eval_rules(const std::vector<Rhs>& rules, std::span<const std::size_t> betas) {
    NodeSet acc;
    for (const auto& r : rules) {
      const NodeSet& res = eval(r, betas);
      acc.insert(acc.end(), res.begin(), res.end());
    }
    detail::normalize(acc);
    return acc;
  }

 private:
  NodeSet eval_uncached(const Rhs& r, std::span<const std::size_t> betas) {
    switch (r.kind) {
      case Rhs::Kind::param: {
        auto s = subsets_.subset(betas[r.index]);
        return NodeSet(s.begin(), s.end());
      }
      case Rhs::Kind::output: {
        std::vector<NodeSet> cs;
        for (const auto& c : r.children) {
          cs.push_back(eval(c, betas));
          if (cs.back().empty()) return {};
        }
        NodeSet out = detail::output_results(dag_, symbols_.dag_symbol(r), cs);
        if (!out.empty() && out.back().is_bottom()) out.pop_back();
        return out;
      }
      case Rhs::Kind::call: {
        // gamma_i ranges over the small subsets of {u : f(r_i, u)}, the
        // empty one included: an unused argument need not evaluate.
        std::vector<std::vector<std::size_t>> choices;
        for (const auto& c : r.children) {
          const NodeSet& ri = eval(c, betas);
          std::vector<std::size_t> ids;
          for_each_small_subset(ri, subsets_.bound(), [&](std::span<const NodeRef> g) {
            ids.push_back(subsets_.id_of(g));
          });
          choices.push_back(std::move(ids));
        }
        NodeSet out;
        std::vector<std::size_t> idx(choices.size(), 0), pick(choices.size());
        while (true) {
          for (std::size_t i = 0; i < choices.size(); ++i) pick[i] = choices[i][idx[i]];
          auto res = lookup_(r.index, r.state, pick);
          out.insert(out.end(), res.begin(), res.end());
          std::size_t i = 0;
          while (i < choices.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
          if (i == choices.size()) break;
        }
        detail::normalize(out);
        return out;
      }
    }
    return {};
  }

  const TreeDag& dag_;
  const SubsetTable& subsets_;
  detail::RhsSymbols& symbols_;
  Lookup lookup_;
  std::unordered_map<const Rhs*, std::unordered_map<std::uint64_t, NodeSet>> memo_;
};

/// The same relation as run_oi_fc, filled in only where a caller asks.
class LazyFcRun {
 public:
  LazyFcRun(const Mtt& m, const DagBuild& input, const TreeDag& t_dag, const SubsetTable& subsets)
      : m_(m), input_(input), subsets_(subsets), symbols_(t_dag) {
    const std::size_t n = input.dag.node_count();
    tables_.resize(n * m.states.size());
    evaluators_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto kids = input.dag.children(input.dag.node(i));
      std::vector<std::size_t> kid_index;
      for (NodeRef ch : kids) kid_index.push_back(ch.index());
      evaluators_.emplace_back(t_dag, subsets, symbols_,
                               [this, kid_index](std::size_t c, std::size_t q,
                                                 std::span<const std::size_t> gammas) {
                                 return std::span<const NodeRef>(get(kid_index.at(c), q, gammas));
                               });
    }
  }

  const NodeSet& get(std::size_t node, std::size_t q, std::span<const std::size_t> betas) {
    std::uint64_t key = 0;
    for (auto it = betas.rbegin(); it != betas.rend(); ++it) key = key * subsets_.size() + *it;
    auto& table = tables_[node * m_.states.size() + q];
    if (auto it = table.find(key); it != table.end()) return it->second;
    const auto& rules = m_.rules_for(q, input_.dag.label(input_.dag.node(node)));
    NodeSet acc = evaluators_[node].eval_rules(rules, betas);
    return table.emplace(key, std::move(acc)).first->second;
  }

 private:
  const Mtt& m_;
  const DagBuild& input_;
  const SubsetTable& subsets_;
  detail::RhsSymbols symbols_;
  std::vector<FcEvaluator> evaluators_;
  std::vector<std::unordered_map<std::uint64_t, NodeSet>> tables_;
};

}  // namespace

FcRunState run_oi_fc(const Mtt& m, CopyBound c, const Tree& s, const TreeDag& t_dag) {
  check_tree(s, m.input);
  auto subsets = std::make_shared<const SubsetTable>(t_dag.node_count(), c.c);
  std::vector<std::size_t> ranks;
  for (const auto& st : m.states) ranks.push_back(st.rank);

  DagBuild input = build_dag(s);
  detail::RhsSymbols symbols(t_dag);
  std::vector<FcRunState> runs;
  runs.reserve(input.dag.node_count());
  const std::size_t subset_count = subsets->size();
  for (std::size_t i = 0; i < input.dag.node_count(); ++i) {
    NodeRef v = input.dag.node(i);
    std::vector<const FcRunState*> kids;
    for (NodeRef ch : input.dag.children(v)) kids.push_back(&runs[ch.index()]);
    FcEvaluator f(t_dag, *subsets, symbols,
                  [&kids](std::size_t c, std::size_t q, std::span<const std::size_t> gammas) {
                    return kids.at(c)->results(q, gammas);
                  });
    FcRunState out(ranks, subsets);
    const std::string& symbol = input.dag.label(v);
    for (std::size_t q = 0; q < m.states.size(); ++q) {
      const auto& rules = m.rules_for(q, symbol);
      if (rules.empty()) continue;
      const std::size_t rank = m.states[q].rank;
      std::vector<std::size_t> betas(rank, 0);
      while (true) {
        out.add(q, betas, f.eval_rules(rules, betas));
        std::size_t k = 0;
        while (k < rank && ++betas[k] == subset_count) betas[k++] = 0;
        if (k == rank) break;
      }
    }
    runs.push_back(std::move(out));
  }
  return std::move(runs[input.root.index()]);
}

bool member_oi_fc(const Mtt& m, CopyBound c, const Tree& s, const Tree& t) {
  if (c.c == 0) throw Error(ErrorKind::unsound_bound, "copying bound must be at least 1");
  check_tree(s, m.input);
  if (!detail::tree_over(t, m.output)) return false;
  DagBuild target = build_dag(t);
  SubsetTable subsets(target.dag.node_count(), c.c);
  // the same packing limit as the eager run
  std::size_t max_rank = 0;
  for (const auto& st : m.states) max_rank = std::max(max_rank, st.rank);
  detail::check_packable(subsets.size(), max_rank);
  DagBuild input = build_dag(s);
  LazyFcRun run(m, input, target.dag, subsets);
  const NodeSet& top = run.get(input.root.index(), m.initial, {});
  return std::binary_search(top.begin(), top.end(), target.root);
}

namespace {

std::size_t max_param_occurrences(const Tree& t, std::size_t rank) {
  std::vector<std::size_t> count(rank, 0);
  auto rec = [&](auto& self, const Tree& u) -> void {
    if (u.children.empty() && is_reserved_name(u.label) && u.label[0] == 'y') {
      std::size_t i = std::stoul(u.label.substr(1)) - 1;
      if (i < rank) ++count[i];
    }
    for (const auto& c : u.children) self(self, c);
  };
  rec(rec, t);
  std::size_t best = 0;
  for (auto n : count) best = std::max(best, n);
  return best;
}

}  // namespace

CopyEstimate estimate_copy_bound(const Mtt& m, std::size_t depth, const Budget& budget,
                                 std::size_t threshold) {
  CopyEstimate out;
  std::vector<std::size_t> seen;  // running maximum over inputs of height <= h
  const auto inputs = enumerate_trees_by_height(m.input, depth);
  for (std::size_t h = 1; h <= depth; ++h) {
    std::size_t best = seen.empty() ? 0 : seen.back();
    try {
      for (const auto& s : inputs) {
        if (s.height() != h) continue;
        for (std::size_t q = 0; q < m.states.size(); ++q) {
          if (m.states[q].rank == 0) continue;
          for (const auto& u : eval_state(m, Mode::oi, q, s, budget))
            best = std::max(best, max_param_occurrences(u, m.states[q].rank));
        }
      }
    } catch (const Error& e) {
      // Out of budget at this height: keep what was learned if copying
      // already grew, otherwise there is nothing to report.
      bool grew = seen.size() >= 2 && seen.back() > seen.front();
      if (e.kind() != ErrorKind::budget_exceeded || !grew) throw;
      out.conforming = false;
      break;
    }
    seen.push_back(best);
  }
  out.per_height = seen;
  for (auto n : seen) out.bound = std::max(out.bound, n);
  if (out.bound > threshold) out.conforming = false;
  if (seen.size() >= 2 && seen.back() > seen[seen.size() - 2]) out.conforming = false;
  return out;
}

}  // namespace mttkit
