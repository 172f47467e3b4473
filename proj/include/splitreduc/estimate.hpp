// A-priori estimates of how many feasible leaves a split will produce.
//
// Two greedy probes bound the tree shape: fixing the highest-cost variable
// to 0 until feasible gives the shortest path (length s), fixing to 1 gives
// the longest (length l). Walking the all-ones path and recording, before
// each step, how many zero-fixes would still reach feasibility yields the
// zero-need sequence of length l+1. The position where the remaining need
// drops below a given level tells how many one-fixes substitute for a
// zero-fix; these breakeven positions feed the refined estimate.
//
// All counts are exact big integers; 2^s and binomial sums overflow 64 bits
// long before the instances stop being interesting.

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "splitreduc/polynomial.hpp"
#include "splitreduc/split.hpp"

namespace splitreduc {

using BigInt = boost::multiprecision::cpp_int;

class EmptySequenceError : public Error {
 public:
  using Error::Error;
};

struct EstimateReport {
  int shortest_path = 0;                  // greedy zero-fixes to feasibility
  int longest_path = 0;                   // greedy one-fixes to feasibility
  std::vector<int> zero_need_sequence;    // length longest_path+1, ends in 0
  std::map<int, int> breakeven_positions; // level i (1..s) -> 1-based position
  BigInt lower_bound = 1;                 // 2^shortest_path
  BigInt upper_bound = 1;                 // 2^longest_path
  BigInt binomial_estimate = 1;
  BigInt refined_estimate = 1;
  std::uint64_t substitutions = 0;        // work done by the probes
};

/// Number of greedy highest-cost-variable zero-fixes until is_desirable.
/// Terminates because every fix shrinks the support.
inline int shortest_path_zero(const Polynomial& h, const CostConfig& cfg,
                              std::uint64_t* substitutions = nullptr) {
  Polynomial cur = h;
  int steps = 0;
  while (!is_desirable(cur, cfg)) {
    VarId v = select_split_variable(cur, cfg);
    cur = substitute(cur, v, false);
    if (substitutions) ++*substitutions;
    ++steps;
  }
  return steps;
}

/// Greedy one-fix walk. Returns the path length and the zero-need sequence:
/// entry j is the zero-fix distance to feasibility after j one-fixes.
inline std::pair<int, std::vector<int>> longest_path_one(
    const Polynomial& h, const CostConfig& cfg,
    std::uint64_t* substitutions = nullptr) {
  Polynomial cur = h;
  std::vector<int> need;
  int steps = 0;
  while (true) {
    need.push_back(shortest_path_zero(cur, cfg, substitutions));
    if (is_desirable(cur, cfg)) break;
    VarId v = select_split_variable(cur, cfg);
    cur = substitute(cur, v, true);
    if (substitutions) ++*substitutions;
    ++steps;
  }
  return {steps, std::move(need)};
}

/// Breakeven position for each level i = 1..s: one past the last index j
/// where the zero-need still equals s-i+1 (one more one-fix from there
/// removes the need for a zero-fix). When the sequence skips that value the
/// last index with a larger need is used instead.
inline std::map<int, int> breakeven_positions(const std::vector<int>& zero_need,
                                              int shortest_path) {
  if (zero_need.empty())
    throw EmptySequenceError("zero-need sequence must not be empty");
  std::map<int, int> out;
  for (int i = 1; i <= shortest_path; ++i) {
    const int level = shortest_path - i + 1;
    int last_equal = -1;
    int last_greater = -1;
    for (int j = 0; j < static_cast<int>(zero_need.size()); ++j) {
      if (zero_need[j] == level) last_equal = j;
      if (zero_need[j] > level) last_greater = j;
    }
    int pos = last_equal >= 0 ? last_equal : last_greater;
    if (pos < 0)
      throw Error("zero-need sequence inconsistent with shortest path " +
                  std::to_string(shortest_path));
    out[i] = pos + 1;  // 1-based
  }
  return out;
}

/// Exact binomial coefficient; 0 when k > n or k < 0.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is always an integer binomial prefix
  }
  return result;
}

inline BigInt pow2(int e) { return BigInt(1) << e; }

/// Leaf-count estimate assuming s zero-fixes always suffice:
/// sum_{k=0}^{s} C(l, k) paths of at most s zero-fixes along an l-step walk.
inline BigInt binomial_estimate(int longest_path, int shortest_path) {
  BigInt total = 0;
  for (int k = 0; k <= shortest_path; ++k)
    total += binomial(longest_path, k);
  return total;
}

/// Estimate crediting the simplification from one-fixes:
/// 1 + sum_{k=1}^{s} C(position(s-k+1) - 1 + k, k).
inline BigInt refined_estimate(const std::map<int, int>& breakeven,
                               int shortest_path) {
  BigInt total = 1;
  for (int k = 1; k <= shortest_path; ++k) {
    auto it = breakeven.find(shortest_path - k + 1);
    if (it == breakeven.end())
      throw Error("missing breakeven position for level " +
                  std::to_string(shortest_path - k + 1));
    total += binomial(it->second - 1 + k, k);
  }
  return total;
}

/// Full a-priori report for one objective under one hardware model.
/// Costs O(n^2) substitutions in the support size.
inline EstimateReport estimate(const Polynomial& h, const CostConfig& cfg) {
  EstimateReport report;
  auto [l, need] = longest_path_one(h, cfg, &report.substitutions);
  report.longest_path = l;
  report.zero_need_sequence = std::move(need);
  report.shortest_path = report.zero_need_sequence.front();
  report.breakeven_positions =
      breakeven_positions(report.zero_need_sequence, report.shortest_path);
  report.lower_bound = pow2(report.shortest_path);
  report.upper_bound = pow2(report.longest_path);
  report.binomial_estimate =
      binomial_estimate(report.longest_path, report.shortest_path);
  report.refined_estimate =
      refined_estimate(report.breakeven_positions, report.shortest_path);
  return report;
}

inline nlohmann::ordered_json report_to_json(const EstimateReport& r) {
  nlohmann::ordered_json doc;
  doc["shortest_path"] = r.shortest_path;
  doc["longest_path"] = r.longest_path;
  doc["zero_need_sequence"] = r.zero_need_sequence;
  nlohmann::ordered_json positions = nlohmann::ordered_json::object();
  for (const auto& [level, pos] : r.breakeven_positions)
    positions[std::to_string(level)] = pos;
  doc["breakeven_positions"] = std::move(positions);
  doc["lower_bound"] = r.lower_bound.str();
  doc["upper_bound"] = r.upper_bound.str();
  doc["binomial_estimate"] = r.binomial_estimate.str();
  doc["refined_estimate"] = r.refined_estimate.str();
  doc["substitutions"] = r.substitutions;
  return doc;
}

}  // namespace splitreduc
