#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geooutage/errors.hpp"
#include "geooutage/rdf.hpp"

namespace geooutage::turtle {

/// Ordered prefix -> namespace IRI table.
class PrefixMap {
 public:
  /// Throws DataError on a conflicting duplicate prefix or an empty IRI.
  /// Re-adding an identical (prefix, iri) pair is a no-op, so concatenated
  /// per-class dumps that repeat their headers stay loadable.
  void add(std::string prefix, std::string iri);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

  const std::string* expansion(std::string_view prefix) const;

  /// Longest-prefix compaction to "pfx:local". Returns nullopt when no
  /// namespace matches or the remainder is not a safe local name.
  std::optional<std::string> compact(std::string_view iri) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct SerializeOptions {
  /// Group consecutive triples sharing a subject with ';' predicate lists.
  bool group_subjects = false;
};

/// Deterministic Turtle emission: @prefix directives in map order, then
/// triples sorted by (subject, predicate, object); IRIs compacted by longest
/// matching namespace; xsd:integer and xsd:decimal literals in bare numeric
/// form when their lexical allows it. Byte-identical across runs and
/// insertion orders; always newline-terminated.
std::string serialize(std::vector<Triple> triples, const PrefixMap& prefixes,
                      const SerializeOptions& options = {});

struct ParseResult {
  std::vector<Triple> triples;  // deduplicated, canonically ordered
  PrefixMap prefixes;
};

/// Parses the Turtle subset produced by serialize(): @prefix directives,
/// prefixed names, <absolute IRIs>, quoted literals with escapes, optional
/// ^^datatype, bare integers/decimals, 'a', and ';'/',' lists. No blank
/// nodes, collections, or @base. Throws ParseError with line/column.
ParseResult parse(std::string_view text);

}  // namespace geooutage::turtle
