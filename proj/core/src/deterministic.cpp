#include <map>
#include <tuple>

#include "mttkit/errors.hpp"
#include "mttkit/io_membership.hpp"

namespace mttkit {

namespace {

thread_local DetStats g_stats;

struct SizeAbort {};

bool uses_all(const Rhs& r, std::vector<bool>& xs, std::vector<bool>& ys, bool& emits) {
  switch (r.kind) {
    case Rhs::Kind::param: ys.at(r.index) = true; break;
    case Rhs::Kind::output: emits = true; break;
    case Rhs::Kind::call: xs.at(r.index) = true; break;
  }
  for (const auto& c : r.children) uses_all(c, xs, ys, emits);
  return true;
}

/// Every rule keeps all input variables and parameters and emits at least
/// one output symbol, so the output is never smaller than the input.
bool size_monotone(const Mtt& m) {
  for (const auto& [key, rhss] : m.rules()) {
    std::size_t k = m.input.rank_of(key.second).value_or(0);
    for (const auto& r : rhss) {
      std::vector<bool> xs(k, false), ys(m.states[key.first].rank, false);
      bool emits = false;
      uses_all(r, xs, ys, emits);
      if (!emits) return false;
      for (bool b : xs) if (!b) return false;
      for (bool b : ys) if (!b) return false;
    }
  }
  return true;
}

/// Call-by-need evaluation of one deterministic total mtt from one DAG
/// into another. Arguments are thunks, forced only when a parameter is
/// reached, so discarded arguments are never built.
class Stage {
 public:
  Stage(const Mtt& m, const TreeDag& in, TreeDag& out, std::uint64_t bound)
      : m_(m), in_(in), out_(out), bound_(bound) {
    envs_.emplace_back();
    env_ids_.emplace(std::vector<std::uint32_t>{}, 0);
  }

  NodeRef run(NodeRef root) { return eval_state(m_.initial, root, 0); }

 private:
  struct Thunk {
    const Rhs* rhs;
    NodeRef node;
    std::uint32_t env;
    NodeRef value;
  };

  std::uint32_t env_id(std::vector<std::uint32_t> thunks) {
    auto [it, fresh] = env_ids_.emplace(thunks, static_cast<std::uint32_t>(envs_.size()));
    if (fresh) envs_.push_back(std::move(thunks));
    return it->second;
  }

  std::uint32_t thunk(const Rhs* r, NodeRef node, std::uint32_t env) {
    auto key = std::make_tuple(r, node, env);
    auto [it, fresh] = thunk_ids_.emplace(key, static_cast<std::uint32_t>(thunks_.size()));
    if (fresh) thunks_.push_back(Thunk{r, node, env, NodeRef::bottom()});
    return it->second;
  }

  NodeRef force(std::uint32_t id) {
    if (thunks_[id].value.is_bottom()) {
      Thunk t = thunks_[id];
      NodeRef v = eval_rhs(*t.rhs, t.node, t.env);
      thunks_[id].value = v;
    }
    return thunks_[id].value;
  }

  NodeRef eval_state(std::size_t q, NodeRef node, std::uint32_t env) {
    auto key = std::make_tuple(q, node, env);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::string& label = in_.label(node);
    if (!m_.input.contains(label))
      throw Error(ErrorKind::alphabet_mismatch,
                  "symbol '" + label + "' is not in the input alphabet of " + m_.name);
    const auto& rules = m_.rules_for(q, label);
    NodeRef v = eval_rhs(rules.front(), node, env);
    memo_.emplace(key, v);
    return v;
  }

  struct Nesting {
    std::uint64_t& n;
    explicit Nesting(std::uint64_t& counter) : n(counter) { ++n; }
    ~Nesting() { --n; }
  };

  NodeRef eval_rhs(const Rhs& r, NodeRef node, std::uint32_t env) {
    Nesting frame(depth_);
    if (depth_ > kMaxDepth)
      throw Error(ErrorKind::budget_exceeded,
                  "evaluation nested deeper than " + std::to_string(kMaxDepth) + " frames");
    switch (r.kind) {
      case Rhs::Kind::param:
        return force(envs_[env][r.index]);
      case Rhs::Kind::output: {
        // every pending output node is an ancestor of the one being built
        Nesting pending(pending_outputs_);
        if (pending_outputs_ > bound_) throw SizeAbort{};
        std::vector<NodeRef> kids;
        kids.reserve(r.children.size());
        for (const auto& c : r.children) kids.push_back(eval_rhs(c, node, env));
        NodeRef v = out_.intern(r.symbol, kids);
        ++g_stats.nodes_built;
        if (out_.tree_size(v) > bound_) throw SizeAbort{};
        return v;
      }
      case Rhs::Kind::call: {
        std::vector<std::uint32_t> args;
        args.reserve(r.children.size());
        for (const auto& c : r.children) args.push_back(thunk(&c, node, env));
        return eval_state(r.state, in_.child(node, r.index + 1), env_id(std::move(args)));
      }
    }
    return NodeRef::bottom();
  }

  static constexpr std::uint64_t kMaxDepth = 8'000;

  const Mtt& m_;
  const TreeDag& in_;
  TreeDag& out_;
  std::uint64_t bound_;
  std::vector<std::vector<std::uint32_t>> envs_;
  std::map<std::vector<std::uint32_t>, std::uint32_t> env_ids_;
  std::vector<Thunk> thunks_;
  std::map<std::tuple<const Rhs*, NodeRef, std::uint32_t>, std::uint32_t> thunk_ids_;
  std::map<std::tuple<std::size_t, NodeRef, std::uint32_t>, NodeRef> memo_;
  std::uint64_t depth_ = 0;
  std::uint64_t pending_outputs_ = 0;
};

}  // namespace

DetStats last_det_stats() { return g_stats; }

bool member_det(const std::vector<Mtt>& mtts, Mode mode, const Tree& s, const Tree& t) {
  (void)mode;  // deterministic total mtts have one output under both modes
  g_stats = DetStats{};
  for (const auto& m : mtts) {
    MttClass c = validate(m);
    if (!c.deterministic)
      throw Error(ErrorKind::not_deterministic, "mtt " + m.name + " is not deterministic");
    if (!c.total) throw Error(ErrorKind::not_total, "mtt " + m.name + " is not total");
  }
  if (mtts.empty()) return s == t;
  check_tree(s, mtts.front().input);

  const std::size_t n = mtts.size();
  std::uint64_t bound = t.size();
  for (std::size_t i = 0; i < n && bound != std::numeric_limits<std::uint64_t>::max(); ++i)
    bound = bound > std::numeric_limits<std::uint64_t>::max() / 2
                ? std::numeric_limits<std::uint64_t>::max()
                : bound * 2;
  g_stats.bound = bound;

  DagBuild input = build_dag(s);
  TreeDag current = std::move(input.dag);
  NodeRef root = input.root;
  for (std::size_t i = 0; i < n; ++i) {
    TreeDag next;
    try {
      Stage stage(mtts[i], current, next, bound);
      root = stage.run(root);
    } catch (const SizeAbort&) {
      g_stats.aborted = true;
      bool later_monotone = true;
      for (std::size_t j = i + 1; j < n; ++j) later_monotone = later_monotone && size_monotone(mtts[j]);
      if (later_monotone) return false;
      throw Error(ErrorKind::budget_exceeded,
                  "stage " + std::to_string(i + 1) + " built a tree larger than " +
                      std::to_string(bound) + " nodes and a later stage may shrink it");
    }
    current = std::move(next);
  }
  return rho(current, t) == root;
}

}  // namespace mttkit
