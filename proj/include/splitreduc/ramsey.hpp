// Ramsey-number objectives over edge variables.
//
// For a graph on N vertices with one binary variable per edge, the objective
//   H = sum over m-vertex subsets of (product of their edge variables)
//     + sum over n-vertex subsets of (product of (1 - e) over their edges)
// counts the m-cliques plus the independent n-sets of the graph, so its
// global minimum is 0 exactly when some 2-coloring avoids both. The first N
// whose minimum is positive is the Ramsey number R(m, n).

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitreduc/expr_io.hpp"
#include "splitreduc/polynomial.hpp"
#include "splitreduc/solve.hpp"
#include "splitreduc/split.hpp"

namespace splitreduc {

struct RamseySpec {
  int clique_size = 2;           // m
  int independent_set_size = 2;  // n
  int num_vertices = 2;          // N
};

/// Row-major bijection between vertex pairs (i, j), i < j, and edge ids:
/// (0,1) -> 0, (0,2) -> 1, ..., (N-2,N-1) -> C(N,2)-1.
class EdgeIndexer {
 public:
  explicit EdgeIndexer(int num_vertices) : n_(num_vertices) {
    if (num_vertices < 2) throw Error("need at least 2 vertices");
  }

  int num_vertices() const { return n_; }
  int num_edges() const { return n_ * (n_ - 1) / 2; }

  VarId edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) throw Error("invalid vertex pair");
    // edges with first vertex < i precede the (i, *) row
    return static_cast<VarId>(i * n_ - i * (i + 1) / 2 + (j - i - 1));
  }

  std::pair<int, int> endpoints(VarId id) const {
    int i = 0;
    int remaining = static_cast<int>(id);
    while (remaining >= n_ - 1 - i) {
      remaining -= n_ - 1 - i;
      ++i;
    }
    return {i, i + 1 + remaining};
  }

  std::string edge_name(VarId id) const {
    auto [i, j] = endpoints(id);
    return "e" + std::to_string(i) + "_" + std::to_string(j);
  }

  SymbolTable make_symbols() const {
    SymbolTable table;
    for (int e = 0; e < num_edges(); ++e)
      table.intern(edge_name(static_cast<VarId>(e)));
    return table;
  }

 private:
  int n_;
};

class ExpansionLimitError : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// Visits every size-k subset of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int k, F&& visit) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

/// Expands the clique-plus-independent-set count to canonical multilinear
/// form. `max_terms` guards the expansion of the (1 - e) products.
inline Polynomial ramsey_hamiltonian(const RamseySpec& spec,
                                     std::size_t max_terms = 4'000'000) {
  if (spec.clique_size < 2 || spec.independent_set_size < 2)
    throw Error("clique and independent-set sizes must be at least 2");
  EdgeIndexer edges(spec.num_vertices);
  std::map<Monomial, std::int64_t, GradedLexLess> acc;

  auto add_term = [&](Monomial m, std::int64_t c) {
    auto [it, inserted] = acc.emplace(std::move(m), c);
    if (!inserted) {
      it->second = checked_add(it->second, c);
      if (it->second == 0) acc.erase(it);
    }
    if (acc.size() > max_terms)
      throw ExpansionLimitError("expansion exceeds " +
                                std::to_string(max_terms) + " terms");
  };

  // clique part: one monomial per m-subset
  detail::for_each_subset(spec.num_vertices, spec.clique_size,
                          [&](const std::vector<int>& vs) {
                            std::vector<VarId> mono;
                            for (std::size_t a = 0; a < vs.size(); ++a)
                              for (std::size_t b = a + 1; b < vs.size(); ++b)
                                mono.push_back(edges.edge(vs[a], vs[b]));
                            add_term(Monomial(std::move(mono)), 1);
                          });

  // independent-set part: expand the product of (1 - e) over each n-subset
  detail::for_each_subset(
      spec.num_vertices, spec.independent_set_size,
      [&](const std::vector<int>& vs) {
        std::vector<VarId> pair_edges;
        for (std::size_t a = 0; a < vs.size(); ++a)
          for (std::size_t b = a + 1; b < vs.size(); ++b)
            pair_edges.push_back(edges.edge(vs[a], vs[b]));
        Polynomial product = Polynomial::constant(1);
        for (VarId e : pair_edges) {
          product = multiply(
              product, Polynomial::constant(1) - Polynomial::variable(e));
          if (product.num_terms() > max_terms)
            throw ExpansionLimitError("expansion exceeds " +
                                      std::to_string(max_terms) + " terms");
        }
        for (const auto& [m, c] : product.terms()) add_term(m, c);
      });

  std::vector<Polynomial::Term> terms(acc.begin(), acc.end());
  return Polynomial::from_canonical_terms(std::move(terms));
}

/// Independent combinatorial check: counts m-cliques plus independent
/// n-sets of the graph by direct subset enumeration.
inline std::int64_t count_monochromatic(const RamseySpec& spec,
                                        const Assignment& graph) {
  EdgeIndexer edges(spec.num_vertices);
  auto edge_present = [&](int i, int j) {
    auto bit = graph.get(edges.edge(i, j));
    if (!bit)
      throw UnboundVariableError("edge " + edges.edge_name(edges.edge(i, j)) +
                                 " unbound");
    return *bit;
  };

  std::int64_t count = 0;
  detail::for_each_subset(spec.num_vertices, spec.clique_size,
                          [&](const std::vector<int>& vs) {
                            for (std::size_t a = 0; a < vs.size(); ++a)
                              for (std::size_t b = a + 1; b < vs.size(); ++b)
                                if (!edge_present(vs[a], vs[b])) return;
                            ++count;
                          });
  detail::for_each_subset(spec.num_vertices, spec.independent_set_size,
                          [&](const std::vector<int>& vs) {
                            for (std::size_t a = 0; a < vs.size(); ++a)
                              for (std::size_t b = a + 1; b < vs.size(); ++b)
                                if (edge_present(vs[a], vs[b])) return;
                            ++count;
                          });
  return count;
}

struct PipelineConfig {
  enum class Mode { automatic, exhaustive, split };
  Mode mode = Mode::automatic;
  CostConfig cost;                  // used by split mode
  int workers = 1;
  bool early_exit_zero = true;      // sound: the objective is a count
  bool stop_at_first_positive = true;
  int direct_var_threshold = 28;    // automatic mode: exhaustive up to here
  int per_leaf_cap = kMaxExhaustiveVars;
  SplitLimits limits;
};

struct RamseyEvidence {
  std::int64_t min_energy = 0;
  std::uint64_t leaf_count = 1;  // 1 when solved without splitting
  Assignment witness;
  std::uint64_t evaluations = 0;
};

struct RamseyResult {
  std::optional<int> ramsey_number;  // first N with positive minimum
  std::map<int, RamseyEvidence> evidence;
};

/// Decision loop: for each N, build H(m, n, N), minimize exactly, and record
/// the evidence. Returns the first N whose minimum is positive; when no
/// N <= n_max qualifies the result is undetermined (not an error).
inline RamseyResult determine_ramsey(int m, int n, int n_start, int n_max,
                                     const PipelineConfig& cfg = {}) {
  if (n_start > n_max) throw Error("n_start must not exceed n_max");
  RamseyResult result;
  SolveOptions opts;
  opts.early_exit_zero = cfg.early_exit_zero;

  for (int N = n_start; N <= n_max; ++N) {
    RamseySpec spec{m, n, N};
    Polynomial h = ramsey_hamiltonian(spec);

    bool use_split = cfg.mode == PipelineConfig::Mode::split;
    if (cfg.mode == PipelineConfig::Mode::automatic)
      use_split =
          static_cast<int>(h.support().size()) > cfg.direct_var_threshold;

    RamseyEvidence ev;
    if (use_split) {
      CostConfig cost = cfg.cost;
      if (cfg.mode == PipelineConfig::Mode::automatic) {
        // split for solvability only: feasible once few enough variables
        // remain, regardless of the interaction order
        cost.qubit_budget = std::min(cfg.per_leaf_cap, cfg.direct_var_threshold);
        cost.target_order = std::numeric_limits<int>::max() / 2;
        cost.allow_aux = true;
      }
      std::uint64_t leaf_count = 0;
      for_each_leaf(h, cost, cfg.limits, [&](const Leaf&) {
        ++leaf_count;
        return true;
      });
      ev.leaf_count = leaf_count;
      SolveResult r = solve_via_split(h, cost, cfg.workers, opts, cfg.limits,
                                      cfg.per_leaf_cap);
      ev.min_energy = r.min_energy;
      ev.witness = r.witness;
      ev.evaluations = r.evaluations;
    } else {
      SolveResult r = cfg.workers > 1 ? parallel_min(h, cfg.workers, opts)
                                      : exhaustive_min(h, opts);
      ev.min_energy = r.min_energy;
      ev.witness = r.witness;
      ev.evaluations = r.evaluations;
    }
    result.evidence.emplace(N, std::move(ev));
    if (result.evidence.at(N).min_energy > 0 && !result.ramsey_number) {
      result.ramsey_number = N;
      if (cfg.stop_at_first_positive) break;
    }
  }
  return result;
}

}  // namespace splitreduc
