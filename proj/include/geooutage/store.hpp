#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "geooutage/rdf.hpp"

namespace geooutage {

/// Bijection between Terms and dense integer ids. Ids are assigned in
/// insertion order and stay stable for the dictionary's lifetime.
class TermDictionary {
 public:
  /// Returns the existing id or assigns the next free one.
  std::uint32_t intern(const Term& term);

  /// Id for a term already in the dictionary, or nullopt.
  std::optional<std::uint32_t> id_of(const Term& term) const;

  const Term& term_of(std::uint32_t id) const { return terms_.at(id); }

  std::size_t size() const noexcept { return terms_.size(); }

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, std::uint32_t, TermHash> ids_;
};

/// A triple in id space.
struct IdTriple {
  std::uint32_t s = 0;
  std::uint32_t p = 0;
  std::uint32_t o = 0;

  friend bool operator==(const IdTriple&, const IdTriple&) = default;
};

/// The three index orderings. Every combination of bound pattern positions is
/// a prefix of at least one of them, so lookups are always a binary search
/// followed by a contiguous scan.
enum class IndexOrder { Spo, Pos, Osp };

/// A match pattern in id space; unbound positions are nullopt.
struct IdPattern {
  std::optional<std::uint32_t> s;
  std::optional<std::uint32_t> p;
  std::optional<std::uint32_t> o;
};

/// Immutable in-memory triple store. Terms are dictionary-encoded once at
/// load time; the deduplicated triple set is kept sorted in the three
/// orderings (S,P,O), (P,O,S) and (O,S,P).
class Store {
 public:
  /// Builds a store from triples, dropping duplicates.
  static Store load(const std::vector<Triple>& triples);

  std::size_t size() const noexcept { return spo_.size(); }

  const TermDictionary& dictionary() const noexcept { return dict_; }

  /// Translates a term-level pattern to id space. Returns nullopt when a
  /// bound term is absent from the dictionary (no triple can match).
  std::optional<IdPattern> to_ids(const std::optional<Term>& s, const std::optional<Term>& p,
                                  const std::optional<Term>& o) const;

  /// Matching triples as a contiguous range of the automatically selected
  /// index, in that index's order.
  struct Range {
    const IdTriple* first;
    const IdTriple* last;

    const IdTriple* begin() const noexcept { return first; }
    const IdTriple* end() const noexcept { return last; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(last - first); }
  };
  Range match_ids(const IdPattern& pattern) const;

  /// Same lookup forced through one specific index. The pattern's bound
  /// positions must form a prefix of that index's ordering.
  Range match_ids_using(IndexOrder order, const IdPattern& pattern) const;

  /// Number of matching triples, O(log n).
  std::size_t count(const IdPattern& pattern) const { return match_ids(pattern).size(); }

  /// Term-level convenience wrappers over match_ids.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;
  std::vector<Triple> match_using(IndexOrder order, const std::optional<Term>& s,
                                  const std::optional<Term>& p,
                                  const std::optional<Term>& o) const;

  Triple to_triple(const IdTriple& t) const;

 private:
  TermDictionary dict_;
  std::vector<IdTriple> spo_;
  std::vector<IdTriple> pos_;
  std::vector<IdTriple> osp_;
};

}  // namespace geooutage
