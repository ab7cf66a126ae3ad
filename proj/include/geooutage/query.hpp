#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geooutage/rdf.hpp"
#include "geooutage/store.hpp"

namespace geooutage {

/// One slot of a triple pattern: either a variable (by name, without the
/// leading '?') or a concrete term.
struct PatternSlot {
  static PatternSlot variable(std::string name) { return {std::move(name), std::nullopt}; }
  static PatternSlot constant(Term term) { return {{}, std::move(term)}; }

  bool is_variable() const noexcept { return !term.has_value(); }

  std::string var;
  std::optional<Term> term;

  friend bool operator==(const PatternSlot&, const PatternSlot&) = default;
};

struct TriplePattern {
  PatternSlot subject;
  PatternSlot predicate;
  PatternSlot object;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class CompareOp { Less, LessEq, Greater, GreaterEq, Equal, NotEqual };

/// Comparison of a variable's binding against a literal constant.
struct Comparison {
  std::string var;
  CompareOp op = CompareOp::Equal;
  Term literal = Term::plain("");
};

/// Boolean filter expression tree.
struct FilterExpr {
  enum class Kind { Compare, And, Or, Not };

  Kind kind = Kind::Compare;
  Comparison comparison;           // when kind == Compare
  std::vector<FilterExpr> children;  // And/Or: two or more; Not: exactly one
};

struct OrderBy {
  std::string var;
  bool descending = false;
};

struct Query {
  bool distinct = false;
  std::vector<std::string> select_vars;
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<OrderBy> order_by;
  std::optional<std::size_t> limit;
};

/// Query results: one row of terms per solution, columns in select order.
struct SolutionTable {
  std::vector<std::string> variables;
  std::vector<std::vector<Term>> rows;
};

/// Parses the query language subset:
///
///   PREFIX pname: <iri>        (repeatable)
///   SELECT [DISTINCT] ?v+
///   WHERE { (triplepattern .)+ (FILTER(expr))* }
///   [ORDER BY [ASC|DESC](?v)] [LIMIT n]
///
/// where expr compares a variable against an integer, decimal, string or
/// "..."^^typed literal with <, <=, >, >=, =, != and combines comparisons
/// with &&, ||, ! and parentheses. Keywords are case-insensitive. Throws
/// ParseError with position on bad syntax and SemanticError when a selected,
/// ordered or filtered variable never occurs in the graph pattern.
Query parse_query(const std::string& text);

/// Total order on terms used by ORDER BY: numeric literals by value,
/// xsd:dateTime chronologically, xsd:date by day, everything else
/// lexicographically within its kind. Returns <0, 0 or >0.
int compare_terms_for_order(const Term& a, const Term& b);

/// Evaluates q against the store: joins the graph pattern (bag semantics),
/// applies filters, DISTINCT, ORDER BY (stable) and LIMIT in that order.
/// Comparisons across incompatible datatypes are false rather than errors.
SolutionTable evaluate(const Query& q, const Store& store);

}  // namespace geooutage
