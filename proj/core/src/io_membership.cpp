#include "mttkit/io_membership.hpp"

#include <algorithm>
#include <limits>

#include "mttkit/errors.hpp"
#include "io_engine.hpp"

namespace mttkit {

RunState::RunState(std::vector<std::size_t> state_ranks, std::size_t node_count)
    : node_count_(node_count), ranks_(std::move(state_ranks)), by_state_(ranks_.size()) {
  std::size_t max_rank = 0;
  for (std::size_t r : ranks_) max_rank = std::max(max_rank, r);
  detail::check_packable(node_count_ + 1, max_rank);
}

std::uint64_t RunState::pack(std::span<const NodeRef> params) const {
  return detail::pack_nodes(params, node_count_);
}

std::vector<NodeRef> RunState::unpack(std::uint64_t key, std::size_t length) const {
  return detail::unpack_nodes(key, length, node_count_);
}

std::span<const NodeRef> RunState::results(std::size_t q, std::span<const NodeRef> params) const {
  if (q >= by_state_.size()) return {};
  const auto& table = by_state_[q];
  auto it = table.find(pack(params));
  if (it == table.end()) return {};
  return it->second;
}

bool RunState::contains(std::size_t q, std::span<const NodeRef> params, NodeRef result) const {
  auto r = results(q, params);
  return std::binary_search(r.begin(), r.end(), result);
}

void RunState::add(std::size_t q, std::span<const NodeRef> params,
                   std::span<const NodeRef> values) {
  if (values.empty()) return;
  auto& slot = by_state_.at(q)[pack(params)];
  detail::merge_into(slot, values);
}

std::size_t RunState::entry_count() const {
  std::size_t n = 0;
  for (const auto& table : by_state_)
    for (const auto& [key, values] : table) n += values.size();
  return n;
}

void RunState::for_each(
    const std::function<void(std::size_t, std::span<const NodeRef>, NodeRef)>& fn) const {
  for (std::size_t q = 0; q < by_state_.size(); ++q) {
    std::vector<std::uint64_t> keys;
    for (const auto& entry : by_state_[q]) keys.push_back(entry.first);
    std::sort(keys.begin(), keys.end());
    for (auto key : keys) {
      auto params = unpack(key, ranks_[q]);
      for (NodeRef v : by_state_[q].at(key)) fn(q, params, v);
    }
  }
}

bool operator==(const RunState& a, const RunState& b) {
  return a.node_count_ == b.node_count_ && a.ranks_ == b.ranks_ && a.by_state_ == b.by_state_;
}

std::vector<NodeRef> eval_f(const Mtt& m, const Rhs& rhs, std::span<const NodeRef> params,
                            std::span<const RunState* const> children, const TreeDag& t_dag) {
  (void)m;
  detail::IoEvaluator f(t_dag);
  return f.eval(rhs, params, children);
}

RunState run_io(const Mtt& m, const Tree& s, const TreeDag& t_dag) {
  check_tree(s, m.input);
  DagBuild input = build_dag(s);
  detail::IoEvaluator f(t_dag);
  const auto ranks = detail::state_ranks(m);
  std::vector<RunState> runs;
  runs.reserve(input.dag.node_count());
  std::vector<const RunState*> kids;
  for (std::size_t i = 0; i < input.dag.node_count(); ++i) {
    NodeRef v = input.dag.node(i);
    kids.clear();
    for (NodeRef c : input.dag.children(v)) kids.push_back(&runs[c.index()]);
    const std::string& symbol = input.dag.label(v);
    runs.push_back(detail::io_transition(
        ranks, f, [&](std::size_t q) { return detail::rule_pointers(m.rules_for(q, symbol)); },
        kids, t_dag.node_count()));
  }
  return std::move(runs[input.root.index()]);
}

bool member_io(const Mtt& m, const Tree& s, const Tree& t) {
  check_tree(s, m.input);
  if (!detail::tree_over(t, m.output)) return false;
  DagBuild target = build_dag(t);
  RunState run = run_io(m, s, target.dag);
  return run.contains(m.initial, {}, target.root);
}

}  // namespace mttkit
