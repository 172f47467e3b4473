// Text and JSON formats for polynomials, plus the annealer-style QUBO export.
//
// Text grammar (whitespace insignificant):
//   expr    := ('+'|'-')? term (('+'|'-') term)*
//   term    := integer | integer '*' varprod | varprod
//   varprod := var ('*' var)*
//   var     := letter (letter|digit|'_')*
//
// Variable ids are assigned densely in first-appearance order; the symbol
// table carries the id<->name bijection.

#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "splitreduc/polynomial.hpp"

namespace splitreduc {

using json = nlohmann::ordered_json;

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class SymbolTable {
 public:
  /// Returns the id for `name`, assigning the next dense id on first use.
  VarId intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VarId id = static_cast<VarId>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
  }

  std::optional<VarId> find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(VarId id) const {
    if (id >= names_.size())
      throw Error("no name registered for variable " + std::to_string(id));
    return names_[id];
  }

  bool has(VarId id) const { return id < names_.size(); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> ids_;
};

namespace detail {

class ExprLexer {
 public:
  explicit ExprLexer(std::string_view text) : text_(text) {}

  struct Token {
    enum class Kind { integer, name, plus, minus, star, end };
    Kind kind;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int column = 1;
  };

  Token next() {
    skip_ws();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) {
      tok.kind = Token::Kind::end;
      return tok;
    }
    char c = text_[pos_];
    if (c == '+' || c == '-' || c == '*') {
      advance();
      tok.kind = c == '+'   ? Token::Kind::plus
                 : c == '-' ? Token::Kind::minus
                            : Token::Kind::star;
      tok.text = c;
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t value = 0;
      std::string digits;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        int d = text_[pos_] - '0';
        if (__builtin_mul_overflow(value, std::int64_t{10}, &value) ||
            __builtin_add_overflow(value, std::int64_t{d}, &value))
          throw ParseError("integer literal overflows 64 bits", tok.line,
                           tok.column);
        digits += text_[pos_];
        advance();
      }
      tok.kind = Token::Kind::integer;
      tok.text = digits;
      tok.value = value;
      return tok;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        name += text_[pos_];
        advance();
      }
      tok.kind = Token::Kind::name;
      tok.text = name;
      return tok;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     column_);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace detail

/// Parses an objective in the text grammar above into canonical form.
inline std::pair<Polynomial, SymbolTable> parse(std::string_view text) {
  using Token = detail::ExprLexer::Token;
  detail::ExprLexer lexer(text);
  SymbolTable table;
  std::vector<RawTerm> raw;

  Token tok = lexer.next();
  if (tok.kind == Token::Kind::end)
    throw ParseError("empty input", tok.line, tok.column);

  bool first = true;
  while (tok.kind != Token::Kind::end) {
    std::int64_t sign = 1;
    if (tok.kind == Token::Kind::plus || tok.kind == Token::Kind::minus) {
      sign = tok.kind == Token::Kind::minus ? -1 : 1;
      tok = lexer.next();
    } else if (!first) {
      throw ParseError("expected '+' or '-' between terms", tok.line,
                       tok.column);
    }
    first = false;

    RawTerm term;
    term.coeff = sign;
    bool have_coeff = false;
    if (tok.kind == Token::Kind::integer) {
      term.coeff = checked_mul(sign, tok.value);
      have_coeff = true;
      tok = lexer.next();
      if (tok.kind == Token::Kind::star) {
        tok = lexer.next();
        if (tok.kind != Token::Kind::name)
          throw ParseError("expected variable after '*'", tok.line, tok.column);
      }
    }
    while (tok.kind == Token::Kind::name) {
      term.vars.push_back(table.intern(tok.text));
      tok = lexer.next();
      if (tok.kind == Token::Kind::star) {
        tok = lexer.next();
        if (tok.kind != Token::Kind::name)
          throw ParseError("expected variable after '*'", tok.line, tok.column);
      } else {
        break;
      }
    }
    if (!have_coeff && term.vars.empty())
      throw ParseError("expected integer or variable", tok.line, tok.column);
    raw.push_back(std::move(term));
  }
  return {canonicalize(raw), std::move(table)};
}

/// Canonical text form: terms in graded-lex order, unit coefficients omitted.
inline std::string serialize(const Polynomial& p, const SymbolTable& table) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::int64_t mag = c;
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (c < 0) mag = checked_neg(c);
    if (m.is_constant()) {
      out += std::to_string(mag);
    } else {
      if (mag != 1) {
        out += std::to_string(mag);
        out += "*";
      }
      bool first_var = true;
      for (VarId v : m.vars()) {
        if (!first_var) out += "*";
        out += table.name(v);
        first_var = false;
      }
    }
  }
  return out;
}

/// Lossless JSON form: {"variables":[names...],"terms":[{"coeff","vars"}...]},
/// terms in graded-lex order, vars as ids into the variables array.
inline json to_json(const Polynomial& p, const SymbolTable& table) {
  json doc;
  doc["variables"] = json::array();
  for (const auto& name : table.names()) doc["variables"].push_back(name);
  doc["terms"] = json::array();
  for (const auto& [m, c] : p.terms()) {
    json term;
    term["coeff"] = c;
    term["vars"] = m.vars();
    doc["terms"].push_back(std::move(term));
  }
  return doc;
}

inline std::pair<Polynomial, SymbolTable> from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("variables") || !doc.contains("terms"))
    throw Error("malformed polynomial JSON: expected variables and terms");
  SymbolTable table;
  for (const auto& name : doc.at("variables")) {
    if (!name.is_string()) throw Error("malformed polynomial JSON: variable names must be strings");
    table.intern(name.get<std::string>());
  }
  std::vector<RawTerm> raw;
  for (const auto& term : doc.at("terms")) {
    RawTerm rt;
    rt.coeff = term.at("coeff").get<std::int64_t>();
    for (const auto& v : term.at("vars")) {
      VarId id = v.get<VarId>();
      if (!table.has(id))
        throw Error("malformed polynomial JSON: variable id " +
                    std::to_string(id) + " out of range");
      rt.vars.push_back(id);
    }
    raw.push_back(std::move(rt));
  }
  return {canonicalize(raw), std::move(table)};
}

/// Same named function: equal monomial name-sets with equal coefficients.
/// Text round-trips are compared this way because parsing renumbers ids in
/// first-appearance order.
inline bool named_equal(const Polynomial& pa, const SymbolTable& ta,
                        const Polynomial& pb, const SymbolTable& tb) {
  if (pa.num_terms() != pb.num_terms()) return false;
  auto named_terms = [](const Polynomial& p, const SymbolTable& t) {
    std::vector<std::pair<std::vector<std::string>, std::int64_t>> out;
    for (const auto& [m, c] : p.terms()) {
      std::vector<std::string> names;
      for (VarId v : m.vars()) names.push_back(t.name(v));
      std::sort(names.begin(), names.end());
      out.emplace_back(std::move(names), c);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return named_terms(pa, ta) == named_terms(pb, tb);
}

class DegreeTooHighError : public Error {
 public:
  DegreeTooHighError(const Monomial& offending, const std::string& rendered)
      : Error("polynomial exceeds degree 2: monomial " + rendered),
        offending_(offending) {}
  const Monomial& offending() const { return offending_; }

 private:
  Monomial offending_;
};

/// Degree-<=2 content split into offset, linear and quadratic parts.
struct QuboExport {
  std::int64_t offset = 0;
  std::map<VarId, std::int64_t> linear;
  std::map<std::pair<VarId, VarId>, std::int64_t> quadratic;  // keys i<j
};

/// Splits a polynomial into QUBO form. The offset is kept explicit so that
/// energy comparisons against 0 survive the export.
inline QuboExport export_qubo(const Polynomial& p, const SymbolTable& table) {
  QuboExport out;
  for (const auto& [m, c] : p.terms()) {
    switch (m.order()) {
      case 0:
        out.offset = c;
        break;
      case 1:
        out.linear[m.vars()[0]] = c;
        break;
      case 2:
        out.quadratic[{m.vars()[0], m.vars()[1]}] = c;
        break;
      default: {
        std::string rendered;
        for (VarId v : m.vars()) {
          if (!rendered.empty()) rendered += "*";
          rendered += table.has(v) ? table.name(v) : "#" + std::to_string(v);
        }
        throw DegreeTooHighError(m, rendered);
      }
    }
  }
  return out;
}

/// {"variables":[...],"offset":int,"linear":{id:coeff},"quadratic":[[i,j,c]...]}
inline json qubo_to_json(const QuboExport& q, const SymbolTable& table) {
  json doc;
  doc["variables"] = json::array();
  for (const auto& name : table.names()) doc["variables"].push_back(name);
  doc["offset"] = q.offset;
  json linear = json::object();
  for (const auto& [v, c] : q.linear) linear[std::to_string(v)] = c;
  doc["linear"] = std::move(linear);
  json quadratic = json::array();
  for (const auto& [pair, c] : q.quadratic)
    quadratic.push_back(json::array({pair.first, pair.second, c}));
  doc["quadratic"] = std::move(quadratic);
  return doc;
}

}  // namespace splitreduc
