#include "geooutage/store.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace geooutage {

std::uint32_t TermDictionary::intern(const Term& term) {
  auto it = ids_.find(term);
  if (it != ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(terms_.size());
  terms_.push_back(term);
  ids_.emplace(term, id);
  return id;
}

std::optional<std::uint32_t> TermDictionary::id_of(const Term& term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) {
    return std::nullopt;
  }
  return it->second;
}

namespace {

// Key extractors for the three orderings.
std::array<std::uint32_t, 3> key_spo(const IdTriple& t) { return {t.s, t.p, t.o}; }
std::array<std::uint32_t, 3> key_pos(const IdTriple& t) { return {t.p, t.o, t.s}; }
std::array<std::uint32_t, 3> key_osp(const IdTriple& t) { return {t.o, t.s, t.p}; }

using KeyFn = std::array<std::uint32_t, 3> (*)(const IdTriple&);

KeyFn key_fn(IndexOrder order) {
  switch (order) {
    case IndexOrder::Spo:
      return &key_spo;
    case IndexOrder::Pos:
      return &key_pos;
    case IndexOrder::Osp:
      return &key_osp;
  }
  throw std::logic_error("unreachable index order");
}

void sort_by(std::vector<IdTriple>& triples, KeyFn key) {
  std::sort(triples.begin(), triples.end(),
            [key](const IdTriple& a, const IdTriple& b) { return key(a) < key(b); });
}

// The pattern's bound positions rearranged into the index's key order. The
// bound positions must occupy a prefix of the key; the returned count says
// how long that prefix is.
struct Probe {
  std::array<std::uint32_t, 3> prefix{};
  std::size_t bound = 0;
};

std::optional<Probe> make_probe(IndexOrder order, const IdPattern& pattern) {
  std::array<std::optional<std::uint32_t>, 3> slots;
  switch (order) {
    case IndexOrder::Spo:
      slots = {pattern.s, pattern.p, pattern.o};
      break;
    case IndexOrder::Pos:
      slots = {pattern.p, pattern.o, pattern.s};
      break;
    case IndexOrder::Osp:
      slots = {pattern.o, pattern.s, pattern.p};
      break;
  }
  Probe probe;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!slots[i].has_value()) {
      // Every later slot must be unbound too, or this index cannot serve
      // the pattern with one contiguous range.
      for (std::size_t j = i + 1; j < 3; ++j) {
        if (slots[j].has_value()) {
          return std::nullopt;
        }
      }
      break;
    }
    probe.prefix[i] = *slots[i];
    probe.bound = i + 1;
  }
  return probe;
}

Store::Range equal_range(const std::vector<IdTriple>& index, KeyFn key, const Probe& probe) {
  // Three-way comparison of a triple's key prefix against the probe.
  const auto cmp = [key, &probe](const IdTriple& t) {
    const auto k = key(t);
    for (std::size_t i = 0; i < probe.bound; ++i) {
      if (k[i] != probe.prefix[i]) {
        return k[i] < probe.prefix[i] ? -1 : 1;
      }
    }
    return 0;
  };
  auto lo = std::partition_point(index.begin(), index.end(),
                                 [&](const IdTriple& t) { return cmp(t) < 0; });
  auto hi = std::partition_point(lo, index.end(),
                                 [&](const IdTriple& t) { return cmp(t) <= 0; });
  return {index.data() + (lo - index.begin()), index.data() + (hi - index.begin())};
}

}  // namespace

Store Store::load(const std::vector<Triple>& triples) {
  Store store;
  store.spo_.reserve(triples.size());
  for (const Triple& t : triples) {
    store.spo_.push_back({store.dict_.intern(t.subject), store.dict_.intern(t.predicate),
                          store.dict_.intern(t.object)});
  }
  sort_by(store.spo_, &key_spo);
  store.spo_.erase(std::unique(store.spo_.begin(), store.spo_.end()), store.spo_.end());
  store.pos_ = store.spo_;
  sort_by(store.pos_, &key_pos);
  store.osp_ = store.spo_;
  sort_by(store.osp_, &key_osp);
  return store;
}

std::optional<IdPattern> Store::to_ids(const std::optional<Term>& s, const std::optional<Term>& p,
                                       const std::optional<Term>& o) const {
  IdPattern pattern;
  const auto translate = [this](const std::optional<Term>& term,
                                std::optional<std::uint32_t>& slot) {
    if (!term.has_value()) {
      return true;
    }
    slot = dict_.id_of(*term);
    return slot.has_value();
  };
  if (!translate(s, pattern.s) || !translate(p, pattern.p) || !translate(o, pattern.o)) {
    return std::nullopt;
  }
  return pattern;
}

Store::Range Store::match_ids(const IdPattern& pattern) const {
  // Pick the index whose ordering starts with the bound positions. Ties
  // (fully bound, fully unbound, or single-position patterns with two
  // candidate indexes) go to the first ordering that fits.
  for (const IndexOrder order : {IndexOrder::Spo, IndexOrder::Pos, IndexOrder::Osp}) {
    if (make_probe(order, pattern).has_value()) {
      return match_ids_using(order, pattern);
    }
  }
  throw std::logic_error("no index can serve the pattern");
}

Store::Range Store::match_ids_using(IndexOrder order, const IdPattern& pattern) const {
  const auto probe = make_probe(order, pattern);
  if (!probe.has_value()) {
    throw std::invalid_argument("bound positions are not a prefix of the chosen index");
  }
  const std::vector<IdTriple>& index =
      order == IndexOrder::Spo ? spo_ : (order == IndexOrder::Pos ? pos_ : osp_);
  if (probe->bound == 0) {
    return {index.data(), index.data() + index.size()};
  }
  return equal_range(index, key_fn(order), *probe);
}

std::vector<Triple> Store::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                 const std::optional<Term>& o) const {
  const auto pattern = to_ids(s, p, o);
  if (!pattern.has_value()) {
    return {};
  }
  std::vector<Triple> result;
  for (const IdTriple& t : match_ids(*pattern)) {
    result.push_back(to_triple(t));
  }
  return result;
}

std::vector<Triple> Store::match_using(IndexOrder order, const std::optional<Term>& s,
                                       const std::optional<Term>& p,
                                       const std::optional<Term>& o) const {
  const auto pattern = to_ids(s, p, o);
  if (!pattern.has_value()) {
    return {};
  }
  std::vector<Triple> result;
  for (const IdTriple& t : match_ids_using(order, *pattern)) {
    result.push_back(to_triple(t));
  }
  return result;
}

Triple Store::to_triple(const IdTriple& t) const {
  return Triple{dict_.term_of(t.s), dict_.term_of(t.p), dict_.term_of(t.o)};
}

}  // namespace geooutage
