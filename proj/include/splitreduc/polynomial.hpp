// Canonical multilinear polynomials over binary variables.
//
// A pseudo-Boolean objective is stored as a graded-lexicographically sorted
// list of (monomial, coefficient) terms with exact signed 64-bit integer
// coefficients. Idempotence (x*x = x) is applied on construction, so a
// monomial is a strictly increasing variable-id sequence and the canonical
// form of a function is unique. All arithmetic is overflow-checked; values
// never wrap silently.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace splitreduc {

using VarId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class UnboundVariableError : public Error {
 public:
  using Error::Error;
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("integer overflow in coefficient addition");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("integer overflow in coefficient multiplication");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) {
  return checked_mul(a, -1);
}

/// Product of distinct binary variables; the empty product is the constant 1.
class Monomial {
 public:
  Monomial() = default;

  /// Builds from an arbitrary variable multiset; repeats collapse (x*x = x).
  explicit Monomial(std::vector<VarId> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  }

  int order() const { return static_cast<int>(vars_.size()); }
  bool is_constant() const { return vars_.empty(); }
  const std::vector<VarId>& vars() const { return vars_; }

  bool contains(VarId v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
  }

  /// Copy with one variable removed (no-op if absent).
  Monomial without(VarId v) const {
    Monomial m;
    m.vars_.reserve(vars_.size());
    for (VarId u : vars_)
      if (u != v) m.vars_.push_back(u);
    return m;
  }

  /// Copy with both pair members removed and `b` inserted.
  Monomial with_pair_replaced(VarId a1, VarId a2, VarId b) const {
    std::vector<VarId> out;
    out.reserve(vars_.size());
    for (VarId u : vars_)
      if (u != a1 && u != a2) out.push_back(u);
    out.push_back(b);
    return Monomial(std::move(out));
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<VarId> vars_;
};

/// Graded-lexicographic order: by order first, then by the id sequence.
inline int compare(const Monomial& a, const Monomial& b) {
  if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
  const auto& av = a.vars();
  const auto& bv = b.vars();
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (av[i] != bv[i]) return av[i] < bv[i] ? -1 : 1;
  }
  return 0;
}

struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare(a, b) < 0;
  }
};

/// Partial or total binding of variables to bits.
class Assignment {
 public:
  Assignment() = default;

  /// Binds v to bit. Rebinding with the same bit is a no-op; a conflicting
  /// rebind is an error.
  void set(VarId v, bool bit) {
    auto [it, inserted] = bits_.emplace(v, bit);
    if (!inserted && it->second != bit)
      throw Error("variable " + std::to_string(v) + " already bound");
  }

  std::optional<bool> get(VarId v) const {
    auto it = bits_.find(v);
    if (it == bits_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(VarId v) const { return bits_.count(v) != 0; }
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  const std::map<VarId, bool>& bindings() const { return bits_; }

  /// True if every binding of `this` agrees with `total`.
  bool consistent_with(const Assignment& total) const {
    for (auto [v, bit] : bits_) {
      auto other = total.get(v);
      if (!other || *other != bit) return false;
    }
    return true;
  }

  static Assignment merged(const Assignment& a, const Assignment& b) {
    Assignment out = a;
    for (auto [v, bit] : b.bits_) out.set(v, bit);
    return out;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::map<VarId, bool> bits_;
};

struct RawTerm {
  std::int64_t coeff = 0;
  std::vector<VarId> vars;  // may contain repeats; collapsed on canonicalize
};

/// Canonical multilinear pseudo-Boolean polynomial.
///
/// Invariants: terms sorted graded-lex with distinct monomials and nonzero
/// coefficients; support() is the sorted set of ids appearing in any term.
/// Immutable after construction; every operation returns a new value.
class Polynomial {
 public:
  using Term = std::pair<Monomial, std::int64_t>;

  Polynomial() = default;  // the zero polynomial

  static Polynomial constant(std::int64_t c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace_back(Monomial(), c);
    return p;
  }

  static Polynomial variable(VarId v) {
    Polynomial p;
    p.terms_.emplace_back(Monomial({v}), 1);
    p.support_.push_back(v);
    return p;
  }

  /// Trusted constructor: `terms` must already be canonical.
  static Polynomial from_canonical_terms(std::vector<Term> terms) {
    Polynomial p;
    p.terms_ = std::move(terms);
    p.rebuild_support();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Max monomial order; 0 for the zero polynomial.
  int degree() const {
    return terms_.empty() ? 0 : terms_.back().first.order();
  }

  const std::vector<VarId>& support() const { return support_; }

  bool is_constant() const { return degree() == 0; }

  /// Value of a constant polynomial (0 for the zero polynomial).
  std::int64_t constant_value() const {
    if (!is_constant()) throw Error("polynomial is not constant");
    return terms_.empty() ? 0 : terms_.front().second;
  }

  std::int64_t coefficient(const Monomial& m) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), m,
        [](const Term& t, const Monomial& key) { return compare(t.first, key) < 0; });
    if (it != terms_.end() && it->first == m) return it->second;
    return 0;
  }

  std::int64_t constant_term() const { return coefficient(Monomial()); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, std::int64_t c);
  friend Polynomial operator*(std::int64_t c, const Polynomial& a);
  friend Polynomial operator-(const Polynomial& a);

 private:
  void rebuild_support() {
    support_.clear();
    for (const auto& [m, c] : terms_)
      support_.insert(support_.end(), m.vars().begin(), m.vars().end());
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  }

  std::vector<Term> terms_;
  std::vector<VarId> support_;
};

namespace detail {

/// Merges two graded-lex sorted term runs, adding coefficients of equal
/// monomials and dropping zeros.
inline std::vector<Polynomial::Term> merge_sorted_terms(
    const std::vector<Polynomial::Term>& a, const std::vector<Polynomial::Term>& b) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int cmp = compare(a[i].first, b[j].first);
    if (cmp < 0) {
      out.push_back(a[i++]);
    } else if (cmp > 0) {
      out.push_back(b[j++]);
    } else {
      std::int64_t c = checked_add(a[i].second, b[j].second);
      if (c != 0) out.emplace_back(a[i].first, c);
      ++i;
      ++j;
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return out;
}

/// Sorts and merges an arbitrary term list into canonical form.
inline std::vector<Polynomial::Term> normalize_terms(
    std::vector<Polynomial::Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    return compare(x.first, y.first) < 0;
  });
  std::vector<Polynomial::Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second = checked_add(out.back().second, t.second);
      if (out.back().second == 0) out.pop_back();
    } else if (t.second != 0) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace detail

/// Multilinear normal form of an arbitrary (coefficient, variable-multiset)
/// list: powers collapse, like monomials merge, zero coefficients drop.
inline Polynomial canonicalize(const std::vector<RawTerm>& raw) {
  std::vector<Polynomial::Term> terms;
  terms.reserve(raw.size());
  for (const auto& rt : raw) {
    if (rt.coeff == 0) continue;
    terms.emplace_back(Monomial(rt.vars), rt.coeff);
  }
  return Polynomial::from_canonical_terms(detail::normalize_terms(std::move(terms)));
}

/// Exact energy of a total assignment. Every support variable must be bound.
inline std::int64_t evaluate(const Polynomial& p, const Assignment& a) {
  for (VarId v : p.support()) {
    if (!a.contains(v))
      throw UnboundVariableError("variable " + std::to_string(v) +
                                 " unbound in evaluation");
  }
  std::int64_t total = 0;
  for (const auto& [m, c] : p.terms()) {
    bool live = true;
    for (VarId v : m.vars()) {
      if (!*a.get(v)) {
        live = false;
        break;
      }
    }
    if (live) total = checked_add(total, c);
  }
  return total;
}

/// Fixes one variable to a bit and eliminates it from the support.
/// A variable absent from the support leaves the polynomial unchanged.
inline Polynomial substitute(const Polynomial& p, VarId v, bool bit) {
  std::vector<Polynomial::Term> untouched;
  std::vector<Polynomial::Term> modified;
  for (const auto& t : p.terms()) {
    if (!t.first.contains(v)) {
      untouched.push_back(t);
    } else if (bit) {
      // removing the same variable from monomials preserves their relative
      // graded-lex order, so `modified` stays sorted
      modified.emplace_back(t.first.without(v), t.second);
    }
    // bit == 0: the term vanishes
  }
  return Polynomial::from_canonical_terms(
      detail::merge_sorted_terms(untouched, modified));
}

inline Polynomial add(const Polynomial& a, const Polynomial& b) {
  return Polynomial::from_canonical_terms(
      detail::merge_sorted_terms(a.terms(), b.terms()));
}

inline Polynomial scale(const Polynomial& p, std::int64_t c) {
  if (c == 0) return Polynomial();
  std::vector<Polynomial::Term> terms = p.terms();
  for (auto& t : terms) t.second = checked_mul(t.second, c);
  return Polynomial::from_canonical_terms(std::move(terms));
}

/// Product with multilinear collapse (shared variables absorb: x*x = x).
inline Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  std::vector<Polynomial::Term> terms;
  terms.reserve(a.num_terms() * b.num_terms());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<VarId> vars;
      vars.reserve(ma.vars().size() + mb.vars().size());
      std::set_union(ma.vars().begin(), ma.vars().end(), mb.vars().begin(),
                     mb.vars().end(), std::back_inserter(vars));
      terms.emplace_back(Monomial(std::move(vars)), checked_mul(ca, cb));
    }
  }
  return Polynomial::from_canonical_terms(detail::normalize_terms(std::move(terms)));
}

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  return add(a, b);
}
inline Polynomial operator-(const Polynomial& a) { return scale(a, -1); }
inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return add(a, scale(b, -1));
}
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  return multiply(a, b);
}
inline Polynomial operator*(const Polynomial& a, std::int64_t c) {
  return scale(a, c);
}
inline Polynomial operator*(std::int64_t c, const Polynomial& a) {
  return scale(a, c);
}

}  // namespace splitreduc
