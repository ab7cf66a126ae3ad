#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace geooutage {

/// One RDF term: an IRI, a plain literal, or a datatyped literal.
///
/// IRIs are stored in absolute form; prefix compaction is a serialization
/// concern. Equality and ordering are structural: (kind, text, datatype).
class Term {
 public:
  enum class Kind : std::uint8_t { Iri, PlainLiteral, TypedLiteral };

  static Term iri(std::string value) { return Term{Kind::Iri, std::move(value), {}}; }
  static Term plain(std::string lexical) { return Term{Kind::PlainLiteral, std::move(lexical), {}}; }
  static Term typed(std::string lexical, std::string datatype_iri) {
    return Term{Kind::TypedLiteral, std::move(lexical), std::move(datatype_iri)};
  }

  Kind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == Kind::Iri; }
  bool is_literal() const noexcept { return kind_ != Kind::Iri; }

  /// IRI text for IRIs, lexical form for literals.
  const std::string& text() const noexcept { return text_; }
  /// Datatype IRI; empty unless kind() == TypedLiteral.
  const std::string& datatype() const noexcept { return datatype_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string text, std::string datatype)
      : kind_(kind), text_(std::move(text)), datatype_(std::move(datatype)) {}

  Kind kind_;
  std::string text_;
  std::string datatype_;
};

/// One RDF statement. Subject and predicate must be IRIs.
struct Triple {
  Term subject;
  Term predicate;
  Term object;

  /// Throws std::invalid_argument when subject or predicate is not an IRI.
  Triple(Term s, Term p, Term o);

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;
};

/// Sorts by (subject, predicate, object) and removes duplicates.
void canonicalize(std::vector<Triple>& triples);

/// Canonical xsd:integer lexical form.
std::string canonical_integer(std::int64_t value);

/// Canonical xsd:decimal lexical form: plain decimal notation, no exponent,
/// no trailing zeros; integral values render without a point ("0", "3").
std::string canonical_decimal(double value);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

}  // namespace geooutage
