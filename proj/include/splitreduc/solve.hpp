// Exact minimization of pseudo-Boolean polynomials.
//
// The enumeration follows the n-bit binary-reflected Gray sequence starting
// at all-zeros, so consecutive points differ in one bit and the energy is
// maintained incrementally: flipping bit v changes the energy by the sum of
// coefficients of monomials containing v whose other variables are all 1.
//
// Parallel search partitions the cube by the top K bit positions (the
// largest variable ids). Within the full Gray sequence those bits are
// constant on contiguous blocks of 2^(n-K) points, and the low bits of
// block b follow gray(r) XOR ((b&1) << (n-K-1)) for r = 0..2^(n-K)-1 (the
// reflection property), with the same flip schedule as a plain Gray walk.
// Workers therefore reproduce exact segments of the sequential enumeration,
// and merging per-block results by (energy, position) yields bit-identical
// winners for every worker count.

#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "splitreduc/polynomial.hpp"
#include "splitreduc/split.hpp"

namespace splitreduc {

class TooManyVariablesError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kMaxExhaustiveVars = 40;

struct SolveOptions {
  bool count_minima = false;     // exact minimizer count (disables early exit)
  bool early_exit_zero = false;  // stop at energy 0; assumes min >= 0
  std::uint64_t verify_every = 0;  // re-evaluate from scratch every N steps
};

struct SolveResult {
  std::int64_t min_energy = 0;
  Assignment witness;
  std::optional<std::uint64_t> num_minima;
  std::uint64_t evaluations = 0;
};

namespace detail {

/// Polynomial compiled to bitmask form over its support.
struct CompiledObjective {
  int n = 0;
  std::vector<VarId> vars;  // bit position -> variable id, ascending
  std::vector<std::pair<std::uint64_t, std::int64_t>> terms;
  // per bit: (mask of the other variables, coefficient) for each monomial
  // containing that bit
  std::vector<std::vector<std::pair<std::uint64_t, std::int64_t>>> adjacency;

  explicit CompiledObjective(const Polynomial& p) {
    vars = p.support();
    n = static_cast<int>(vars.size());
    if (n > kMaxExhaustiveVars)
      throw TooManyVariablesError("exhaustive search limited to " +
                                  std::to_string(kMaxExhaustiveVars) +
                                  " variables, got " + std::to_string(n));
    // guard once so the hot loop can use unchecked adds: any partial sum of
    // coefficients stays within the l1 norm
    std::int64_t l1 = 0;
    for (const auto& [m, c] : p.terms())
      l1 = checked_add(l1, c < 0 ? checked_neg(c) : c);
    if (l1 > std::numeric_limits<std::int64_t>::max() / 4)
      throw OverflowError("coefficient magnitudes too large for search");

    adjacency.resize(static_cast<std::size_t>(n));
    for (const auto& [m, c] : p.terms()) {
      std::uint64_t mask = 0;
      for (VarId v : m.vars()) mask |= std::uint64_t{1} << bit_of(v);
      terms.emplace_back(mask, c);
      for (VarId v : m.vars()) {
        int b = bit_of(v);
        adjacency[static_cast<std::size_t>(b)].emplace_back(
            mask & ~(std::uint64_t{1} << b), c);
      }
    }
  }

  int bit_of(VarId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    return static_cast<int>(it - vars.begin());
  }

  std::int64_t eval(std::uint64_t x) const {
    std::int64_t e = 0;
    for (const auto& [mask, c] : terms)
      if ((mask & x) == mask) e += c;
    return e;
  }

  /// Energy change of flipping `bit` from point `x` (x may be the value
  /// before or after the flip; the other variables are what matter).
  std::int64_t delta(int bit, std::uint64_t x) const {
    std::int64_t d = 0;
    for (const auto& [others, c] : adjacency[static_cast<std::size_t>(bit)])
      if ((others & x) == others) d += c;
    return d;
  }
};

struct WorkerBest {
  std::int64_t energy = std::numeric_limits<std::int64_t>::max();
  std::uint64_t position = 0;  // global Gray-sequence index
  std::uint64_t point = 0;
  std::uint64_t minima = 0;
  std::uint64_t evaluations = 0;
  bool found = false;
};

/// Walks the contiguous Gray-sequence blocks assigned to one worker.
inline void gray_walk_blocks(const CompiledObjective& obj, int low_bits,
                             std::uint64_t first_block,
                             std::uint64_t block_stride,
                             std::uint64_t num_blocks, const SolveOptions& opts,
                             std::atomic<bool>& stop, WorkerBest& best) {
  const std::uint64_t block_len = std::uint64_t{1} << low_bits;
  const bool counting = opts.count_minima;
  const bool early_zero = opts.early_exit_zero && !counting;

  auto consider = [&](std::int64_t e, std::uint64_t pos, std::uint64_t x) {
    if (e < best.energy) {
      best.energy = e;
      best.position = pos;
      best.point = x;
      best.minima = 1;
      best.found = true;
    } else if (counting && e == best.energy) {
      ++best.minima;
    }
  };

  for (std::uint64_t b = first_block; b < num_blocks; b += block_stride) {
    if (stop.load(std::memory_order_relaxed)) return;
    const std::uint64_t high = (b ^ (b >> 1)) << low_bits;
    std::uint64_t x = high;
    if ((b & 1) && low_bits > 0) x |= std::uint64_t{1} << (low_bits - 1);
    std::int64_t e = obj.eval(x);
    ++best.evaluations;
    consider(e, b * block_len, x);
    if (early_zero && e == 0) {
      stop.store(true, std::memory_order_relaxed);
      return;
    }
    for (std::uint64_t r = 1; r < block_len; ++r) {
      if ((r & 0x3ff) == 0 && stop.load(std::memory_order_relaxed)) return;
      const int bit = std::countr_zero(r);
      const std::int64_t d = obj.delta(bit, x);
      const std::uint64_t flipped = std::uint64_t{1} << bit;
      e += (x & flipped) ? -d : d;
      x ^= flipped;
      ++best.evaluations;
      if (opts.verify_every && r % opts.verify_every == 0 && e != obj.eval(x))
        throw Error("incremental energy diverged from re-evaluation");
      consider(e, b * block_len + r, x);
      if (early_zero && e == 0) {
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  }
}

inline int ceil_log2(std::uint64_t v) {
  int k = 0;
  while ((std::uint64_t{1} << k) < v) ++k;
  return k;
}

inline SolveResult run_search(const Polynomial& p, int worker_count,
                              const SolveOptions& opts) {
  if (worker_count < 1) throw Error("worker count must be positive");
  if (p.is_constant()) {
    SolveResult r;
    r.min_energy = p.constant_value();
    r.evaluations = 1;
    if (opts.count_minima) r.num_minima = 1;
    return r;
  }

  CompiledObjective obj(p);
  const int n = obj.n;
  const int high_bits = std::min(ceil_log2(static_cast<std::uint64_t>(worker_count)), n);
  const int low_bits = n - high_bits;
  const std::uint64_t num_blocks = std::uint64_t{1} << high_bits;

  std::atomic<bool> stop{false};
  std::vector<WorkerBest> bests(static_cast<std::size_t>(worker_count));

  if (worker_count == 1) {
    gray_walk_blocks(obj, low_bits, 0, 1, num_blocks, opts, stop, bests[0]);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(
        static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
      threads.emplace_back([&, w] {
        try {
          gray_walk_blocks(obj, low_bits, static_cast<std::uint64_t>(w),
                           static_cast<std::uint64_t>(worker_count), num_blocks,
                           opts, stop, bests[static_cast<std::size_t>(w)]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
          stop.store(true, std::memory_order_relaxed);
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  SolveResult result;
  const WorkerBest* winner = nullptr;
  for (const auto& b : bests) {
    result.evaluations += b.evaluations;
    if (!b.found) continue;
    if (!winner || b.energy < winner->energy ||
        (b.energy == winner->energy && b.position < winner->position))
      winner = &b;
  }
  result.min_energy = winner->energy;
  for (int bit = 0; bit < n; ++bit)
    result.witness.set(obj.vars[static_cast<std::size_t>(bit)],
                       (winner->point >> bit) & 1);
  if (opts.count_minima) {
    std::uint64_t total = 0;
    for (const auto& b : bests)
      if (b.found && b.energy == winner->energy) total += b.minima;
    result.num_minima = total;
  }
  return result;
}

}  // namespace detail

/// Exact global minimum by sequential Gray-code enumeration. The witness is
/// the first minimizing point in enumeration order.
inline SolveResult exhaustive_min(const Polynomial& p,
                                  const SolveOptions& opts = {}) {
  return detail::run_search(p, 1, opts);
}

/// Same result as exhaustive_min (including the witness), computed by
/// workers owning disjoint sub-cubes fixed on the highest variable ids.
inline SolveResult parallel_min(const Polynomial& p, int worker_count,
                                const SolveOptions& opts = {}) {
  return detail::run_search(p, worker_count, opts);
}

/// How to attack one instance: head-on, or split first and sweep the leaves.
struct SolvePlan {
  enum class Mode { exhaustive, split_then_exhaustive };
  Mode mode = Mode::exhaustive;
  int worker_count = 1;
  int per_leaf_cap = kMaxExhaustiveVars;
  std::optional<CostConfig> cost;  // required for split_then_exhaustive
  SplitLimits limits;
};

/// Split-assisted minimization: split-reduce under `cfg`, solve every leaf,
/// and take the best leaf minimum with the leaf prefix merged into the
/// witness. Variables cancelled along a branch are reported as 0 and counted
/// as free when minimizers are being counted.
inline SolveResult solve_via_split(const Polynomial& p, const CostConfig& cfg,
                                   int worker_count = 1,
                                   const SolveOptions& opts = {},
                                   const SplitLimits& limits = {},
                                   int per_leaf_cap = kMaxExhaustiveVars) {
  const auto& root_support = p.support();

  struct BestLeaf {
    std::int64_t energy = 0;
    Assignment witness;
    bool found = false;
  };
  BestLeaf best;
  std::uint64_t total_minima = 0;
  std::uint64_t evaluations = 0;

  SolveOptions leaf_opts = opts;
  for_each_leaf(p, cfg, limits, [&](const Leaf& leaf) {
    const auto& leaf_support = leaf.hamiltonian.support();
    if (static_cast<int>(leaf_support.size()) > per_leaf_cap)
      throw TooManyVariablesError(
          "leaf exceeds the per-leaf variable cap of " +
          std::to_string(per_leaf_cap));
    SolveResult r =
        (worker_count > 1 && leaf_support.size() > 18)
            ? parallel_min(leaf.hamiltonian, worker_count, leaf_opts)
            : exhaustive_min(leaf.hamiltonian, leaf_opts);
    evaluations += r.evaluations;

    if (opts.count_minima) {
      // free variables: in the root support, not fixed by the prefix,
      // cancelled out of this leaf
      int free_vars = 0;
      for (VarId v : root_support)
        if (!leaf.prefix.contains(v) &&
            !std::binary_search(leaf_support.begin(), leaf_support.end(), v))
          ++free_vars;
      if (!best.found || r.min_energy < best.energy) total_minima = 0;
      if (!best.found || r.min_energy <= best.energy) {
        if (free_vars >= 64) throw OverflowError("minimizer count overflows");
        std::uint64_t contribution = *r.num_minima;
        for (int i = 0; i < free_vars; ++i) {
          if (contribution > std::numeric_limits<std::uint64_t>::max() / 2)
            throw OverflowError("minimizer count overflows");
          contribution <<= 1;
        }
        total_minima += contribution;
      }
    }

    if (!best.found || r.min_energy < best.energy) {
      best.found = true;
      best.energy = r.min_energy;
      best.witness = Assignment::merged(leaf.prefix, r.witness);
      for (VarId v : root_support)
        if (!best.witness.contains(v)) best.witness.set(v, false);
    }
    if (opts.early_exit_zero && !opts.count_minima && best.found &&
        best.energy == 0)
      return false;
    return true;
  });

  if (!best.found) throw Error("split produced no leaves");
  SolveResult result;
  result.min_energy = best.energy;
  result.witness = std::move(best.witness);
  result.evaluations = evaluations;
  if (opts.count_minima) result.num_minima = total_minima;
  return result;
}

}  // namespace splitreduc
