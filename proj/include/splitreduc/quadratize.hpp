// Order reduction by penalty substitution: a product pair a1*a2 is replaced
// by a fresh variable b, and lambda * P(a1,a2;b) with
//   P(a1,a2;b) = a1*a2 - 2*a1*b - 2*a2*b + 3*b
// is added to the objective. P is 0 exactly when b = a1*a2 and at least 1
// otherwise, so a large enough lambda makes every minimizer consistent and
// the minimum value is preserved. One application lowers every monomial
// containing the pair by one order; iterating reaches the target order with
// at most sum_t ramp(order(t) - target) auxiliary variables.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "splitreduc/polynomial.hpp"
#include "splitreduc/split.hpp"

namespace splitreduc {

class NonFreshAuxError : public Error {
 public:
  using Error::Error;
};

class AuxBudgetExceededError : public Error {
 public:
  explicit AuxBudgetExceededError(std::size_t limit)
      : Error("auxiliary budget exceeded: " + std::to_string(limit)),
        limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

/// P(a1,a2;b): nonnegative, zero exactly on the four assignments with
/// b = a1*a2.
inline Polynomial penalty(VarId a1, VarId a2, VarId b) {
  if (a1 == a2 || a1 == b || a2 == b)
    throw Error("penalty requires three distinct variables");
  std::vector<RawTerm> raw;
  raw.push_back({1, {a1, a2}});
  raw.push_back({-2, {a1, b}});
  raw.push_back({-2, {a2, b}});
  raw.push_back({3, {b}});
  return canonicalize(raw);
}

/// Replaces the pair in every monomial containing both members and adds
/// lambda * P(a1,a2;b) once.
inline Polynomial reduce_once(const Polynomial& h, std::pair<VarId, VarId> pair,
                              VarId b, std::int64_t lambda) {
  auto [a1, a2] = pair;
  if (a1 == a2) throw Error("pair members must be distinct");
  if (lambda < 1) throw Error("penalty weight must be at least 1");
  for (VarId v : h.support())
    if (v == b)
      throw NonFreshAuxError("auxiliary variable " + std::to_string(b) +
                             " already occurs in the polynomial");
  if (a1 == b || a2 == b)
    throw NonFreshAuxError("auxiliary variable must differ from the pair");

  std::vector<Polynomial::Term> terms;
  terms.reserve(h.num_terms());
  for (const auto& [m, c] : h.terms()) {
    if (m.contains(a1) && m.contains(a2))
      terms.emplace_back(m.with_pair_replaced(a1, a2, b), c);
    else
      terms.emplace_back(m, c);
  }
  Polynomial replaced =
      Polynomial::from_canonical_terms(detail::normalize_terms(std::move(terms)));
  return add(replaced, scale(penalty(a1, a2, b), lambda));
}

/// Sufficient uniform penalty weight: one more than the l1 norm of the
/// coefficients. Any assignment violating a penalty then exceeds the true
/// minimum by at least one.
inline std::int64_t choose_lambda(const Polynomial& h) {
  std::int64_t total = 1;
  for (const auto& [m, c] : h.terms())
    total = checked_add(total, c < 0 ? checked_neg(c) : c);
  return total;
}

struct AuxDef {
  VarId aux;
  VarId first;
  VarId second;
};

struct QuadratizationResult {
  Polynomial reduced;
  std::vector<AuxDef> aux_defs;  // in application order
  std::int64_t lambda = 1;
};

struct QuadratizeOptions {
  std::optional<std::int64_t> lambda;   // default: choose_lambda(input)
  std::optional<std::size_t> max_aux;   // optional hard cap
};

/// Extends a total assignment of the original variables with the consistent
/// values of every auxiliary (b = a1*a2, in application order).
inline Assignment extend_with_aux(const Assignment& original,
                                  const std::vector<AuxDef>& aux_defs) {
  Assignment out = original;
  for (const auto& def : aux_defs) {
    auto x1 = out.get(def.first);
    auto x2 = out.get(def.second);
    if (!x1 || !x2)
      throw UnboundVariableError("pair member unbound while extending");
    out.set(def.aux, *x1 && *x2);
  }
  return out;
}

/// Iterated pair substitution until the degree reaches the target order.
/// The pair occurring in the most over-order monomials is replaced first
/// (ties by lexicographic pair order), and one shared auxiliary serves all
/// monomials containing the pair.
inline QuadratizationResult quadratize(const Polynomial& h, int target_order,
                                       const QuadratizeOptions& opts = {}) {
  if (target_order < 2) throw Error("target order must be at least 2");
  QuadratizationResult result;
  result.lambda = opts.lambda.value_or(choose_lambda(h));
  if (result.lambda < 1) throw Error("penalty weight must be at least 1");
  result.reduced = h;

  VarId next_aux = 0;
  for (VarId v : h.support()) next_aux = std::max(next_aux, v + 1);

  while (result.reduced.degree() > target_order) {
    if (opts.max_aux && result.aux_defs.size() >= *opts.max_aux)
      throw AuxBudgetExceededError(*opts.max_aux);

    // most frequent pair among over-order monomials
    std::map<std::pair<VarId, VarId>, std::size_t> counts;
    for (const auto& [m, c] : result.reduced.terms()) {
      if (m.order() <= target_order) continue;
      const auto& vars = m.vars();
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
          ++counts[{vars[i], vars[j]}];
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;

    VarId b = next_aux++;
    result.reduced = reduce_once(result.reduced, best->first, b, result.lambda);
    result.aux_defs.push_back({b, best->first.first, best->first.second});
  }
  return result;
}

}  // namespace splitreduc
