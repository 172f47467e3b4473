// The splitting engine: decide whether an objective fits the hardware,
// pick the variable to branch on, and expand the branching tree whose
// leaves are all hardware-feasible.
//
// Cost model, for a device that allows interactions up to target_order and
// has qubit_budget qubits in total:
//   term_aux_cost(t)     = ramp(order(t) - target_order)   auxiliaries to
//                          reduce one term to the target order
//   hamiltonian_cost(H)  = |support(H)| + sum_t term_aux_cost(t)
//   variable_cost(H, v)  = sum_{t containing v} ramp(order(t) - target_order + 1)
// The +1 in variable_cost credits the simplification obtained when the
// chosen variable is fixed to 1.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "splitreduc/polynomial.hpp"

namespace splitreduc {

struct CostConfig {
  int qubit_budget = 128;
  int target_order = 2;
  bool allow_aux = false;
};

inline std::int64_t ramp(std::int64_t k) { return k > 0 ? k : 0; }

inline std::int64_t term_aux_cost(const Monomial& t, int target_order) {
  return ramp(static_cast<std::int64_t>(t.order()) - target_order);
}

/// Qubits needed to implement H after quadratizing every over-order term:
/// live variables plus the per-term auxiliary maximum.
inline std::int64_t hamiltonian_cost(const Polynomial& h, const CostConfig& cfg) {
  std::int64_t aux = 0;
  for (const auto& [m, c] : h.terms()) aux += term_aux_cost(m, cfg.target_order);
  return static_cast<std::int64_t>(h.support().size()) + aux;
}

/// Hardware feasibility. With auxiliaries allowed the cost must fit the
/// budget; without them the polynomial itself must already be at the target
/// order and fit the budget variable-for-qubit.
inline bool is_desirable(const Polynomial& h, const CostConfig& cfg) {
  if (cfg.allow_aux) return hamiltonian_cost(h, cfg) <= cfg.qubit_budget;
  return h.degree() <= cfg.target_order &&
         static_cast<std::int64_t>(h.support().size()) <= cfg.qubit_budget;
}

inline std::int64_t variable_cost(const Polynomial& h, VarId v, int target_order) {
  std::int64_t cost = 0;
  for (const auto& [m, c] : h.terms()) {
    if (m.contains(v))
      cost += ramp(static_cast<std::int64_t>(m.order()) - target_order + 1);
  }
  return cost;
}

class EmptySupportError : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// Per-support-variable costs in one pass over the terms.
inline std::vector<std::int64_t> all_variable_costs(const Polynomial& h,
                                                    int target_order) {
  const auto& sup = h.support();
  std::vector<std::int64_t> costs(sup.size(), 0);
  for (const auto& [m, c] : h.terms()) {
    std::int64_t w =
        ramp(static_cast<std::int64_t>(m.order()) - target_order + 1);
    if (w == 0) continue;
    for (VarId v : m.vars()) {
      auto it = std::lower_bound(sup.begin(), sup.end(), v);
      costs[static_cast<std::size_t>(it - sup.begin())] += w;
    }
  }
  return costs;
}

}  // namespace detail

/// Optional tie randomization; the default breaks ties by smallest id so
/// results are reproducible.
using TieBreaker = std::function<VarId(const std::vector<VarId>& tied)>;

inline TieBreaker seeded_tie_breaker(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const std::vector<VarId>& tied) {
    std::uniform_int_distribution<std::size_t> dist(0, tied.size() - 1);
    return tied[dist(*rng)];
  };
}

inline VarId select_split_variable(const Polynomial& h, const CostConfig& cfg,
                                   const TieBreaker& tie_break = nullptr) {
  const auto& sup = h.support();
  if (sup.empty()) throw EmptySupportError("cannot split a constant polynomial");
  auto costs = detail::all_variable_costs(h, cfg.target_order);
  std::int64_t best = costs[0];
  for (std::int64_t c : costs) best = std::max(best, c);
  if (!tie_break) {
    for (std::size_t i = 0; i < sup.size(); ++i)
      if (costs[i] == best) return sup[i];
  }
  std::vector<VarId> tied;
  for (std::size_t i = 0; i < sup.size(); ++i)
    if (costs[i] == best) tied.push_back(sup[i]);
  return tied.size() == 1 ? tied[0] : tie_break(tied);
}

struct SplitLimits {
  std::uint64_t max_leaves = 10'000'000;
  std::optional<int> max_depth;  // default: |support| of the root
};

/// One feasible endpoint: the fixings that led there and the residual
/// objective (root with the prefix substituted, canonical).
struct Leaf {
  Assignment prefix;
  Polynomial hamiltonian;
  int depth = 0;
};

/// Binary branching record. Node 0 is the root; each internal node stores
/// the variable it splits on and its children hold substitute(H, v, 0) and
/// substitute(H, v, 1).
class SplitTree {
 public:
  struct Node {
    Polynomial hamiltonian;
    std::optional<std::pair<VarId, bool>> incoming;  // fixing that led here
    std::optional<VarId> split_var;                  // set on internal nodes
    int zero_child = -1;
    int one_child = -1;
    int depth = 0;
  };

  const Node& root() const { return nodes_.at(0); }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  int size() const { return static_cast<int>(nodes_.size()); }
  bool complete() const { return complete_; }

 private:
  friend SplitTree build_split_tree(const Polynomial&, const CostConfig&,
                                    const SplitLimits&, const TieBreaker&);
  std::vector<Node> nodes_;
  bool complete_ = true;
};

class LimitExceededError : public Error {
 public:
  enum class Kind { leaves, depth };

  LimitExceededError(Kind kind, std::uint64_t limit,
                     std::shared_ptr<const SplitTree> partial = nullptr)
      : Error(std::string("split limit exceeded: ") +
              (kind == Kind::leaves ? "max_leaves=" : "max_depth=") +
              std::to_string(limit)),
        kind_(kind),
        partial_(std::move(partial)) {}

  Kind kind() const { return kind_; }
  /// The tree expanded so far (null when leaves were streamed to a callback).
  std::shared_ptr<const SplitTree> partial_tree() const { return partial_; }

 private:
  Kind kind_;
  std::shared_ptr<const SplitTree> partial_;
};

struct SplitStats {
  std::uint64_t leaf_count = 0;
  int max_depth = 0;
  std::int64_t max_leaf_cost = 0;
  bool stopped_by_callback = false;
};

/// Depth-first leaf enumeration without materializing the tree; the 0-branch
/// of every split is visited before the 1-branch. The callback may return
/// false to stop early. Throws LimitExceededError when a limit is hit.
inline SplitStats for_each_leaf(const Polynomial& root, const CostConfig& cfg,
                                const SplitLimits& limits,
                                const std::function<bool(const Leaf&)>& on_leaf,
                                const TieBreaker& tie_break = nullptr) {
  const int max_depth =
      limits.max_depth.value_or(static_cast<int>(root.support().size()));
  SplitStats stats;

  struct Pending {
    Polynomial h;
    std::vector<std::pair<VarId, bool>> path;
  };
  std::vector<Pending> stack;
  stack.push_back({root, {}});

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();

    if (is_desirable(cur.h, cfg)) {
      if (stats.leaf_count == limits.max_leaves)
        throw LimitExceededError(LimitExceededError::Kind::leaves,
                                 limits.max_leaves);
      Leaf leaf;
      for (auto [v, bit] : cur.path) leaf.prefix.set(v, bit);
      leaf.hamiltonian = std::move(cur.h);
      leaf.depth = static_cast<int>(cur.path.size());
      ++stats.leaf_count;
      stats.max_depth = std::max(stats.max_depth, leaf.depth);
      stats.max_leaf_cost =
          std::max(stats.max_leaf_cost, hamiltonian_cost(leaf.hamiltonian, cfg));
      if (!on_leaf(leaf)) {
        stats.stopped_by_callback = true;
        return stats;
      }
      continue;
    }
    if (static_cast<int>(cur.path.size()) >= max_depth)
      throw LimitExceededError(LimitExceededError::Kind::depth,
                               static_cast<std::uint64_t>(max_depth));

    VarId v = select_split_variable(cur.h, cfg, tie_break);
    auto path1 = cur.path;
    path1.emplace_back(v, true);
    auto path0 = std::move(cur.path);
    path0.emplace_back(v, false);
    // push the 1-branch first so the 0-branch pops first
    stack.push_back({substitute(cur.h, v, true), std::move(path1)});
    stack.push_back({substitute(cur.h, v, false), std::move(path0)});
  }
  return stats;
}

/// Materialized variant of for_each_leaf for inspection and small trees.
/// On a limit error the partially built tree travels with the exception.
inline SplitTree build_split_tree(const Polynomial& root, const CostConfig& cfg,
                                  const SplitLimits& limits = {},
                                  const TieBreaker& tie_break = nullptr) {
  const int max_depth =
      limits.max_depth.value_or(static_cast<int>(root.support().size()));
  SplitTree tree;
  std::uint64_t leaf_count = 0;

  struct Pending {
    int node_index;
  };
  tree.nodes_.push_back({root, std::nullopt, std::nullopt, -1, -1, 0});
  std::vector<Pending> stack{{0}};

  auto fail = [&](LimitExceededError::Kind kind, std::uint64_t limit) {
    auto partial = std::make_shared<SplitTree>(tree);
    partial->complete_ = false;
    throw LimitExceededError(kind, limit, std::move(partial));
  };

  while (!stack.empty()) {
    int idx = stack.back().node_index;
    stack.pop_back();
    const Polynomial h = tree.nodes_[static_cast<std::size_t>(idx)].hamiltonian;
    const int depth = tree.nodes_[static_cast<std::size_t>(idx)].depth;

    if (is_desirable(h, cfg)) {
      if (leaf_count == limits.max_leaves)
        fail(LimitExceededError::Kind::leaves, limits.max_leaves);
      ++leaf_count;
      continue;
    }
    if (depth >= max_depth)
      fail(LimitExceededError::Kind::depth, static_cast<std::uint64_t>(max_depth));

    VarId v = select_split_variable(h, cfg, tie_break);
    int zero_idx = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back(
        {substitute(h, v, false), std::make_pair(v, false), std::nullopt, -1, -1,
         depth + 1});
    int one_idx = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back(
        {substitute(h, v, true), std::make_pair(v, true), std::nullopt, -1, -1,
         depth + 1});
    auto& node = tree.nodes_[static_cast<std::size_t>(idx)];
    node.split_var = v;
    node.zero_child = zero_idx;
    node.one_child = one_idx;
    // 1-branch pushed first so the 0-branch expands first
    stack.push_back({one_idx});
    stack.push_back({zero_idx});
  }
  return tree;
}

/// Leaves in deterministic depth-first order (0-branch before 1-branch).
inline std::vector<Leaf> leaves(const SplitTree& tree) {
  std::vector<Leaf> out;
  struct Frame {
    int index;
    std::vector<std::pair<VarId, bool>> path;
  };
  std::vector<Frame> stack{{0, {}}};
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    const auto& node = tree.node(frame.index);
    if (!node.split_var) {
      Leaf leaf;
      for (auto [v, bit] : frame.path) leaf.prefix.set(v, bit);
      leaf.hamiltonian = node.hamiltonian;
      leaf.depth = node.depth;
      out.push_back(std::move(leaf));
      continue;
    }
    auto path1 = frame.path;
    path1.emplace_back(*node.split_var, true);
    auto path0 = std::move(frame.path);
    path0.emplace_back(*node.split_var, false);
    stack.push_back({node.one_child, std::move(path1)});
    stack.push_back({node.zero_child, std::move(path0)});
  }
  return out;
}

}  // namespace splitreduc
