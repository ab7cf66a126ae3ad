#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "geooutage/ingest.hpp"
#include "geooutage/kg.hpp"
#include "geooutage/store.hpp"
#include "geooutage/vocab.hpp"

using namespace geooutage;

namespace {

Term subj(int i) { return Term::iri("http://t.example/s" + std::to_string(i)); }
Term pred(int i) { return Term::iri("http://t.example/p" + std::to_string(i)); }

Term obj(std::mt19937& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return Term::iri("http://t.example/o" +
                       std::to_string(std::uniform_int_distribution<int>(0, 7)(rng)));
    case 1:
      return Term::plain(std::string(1, static_cast<char>(
                                            'a' + std::uniform_int_distribution<int>(0, 4)(rng))));
    default:
      return Term::typed(std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)),
                         "http://www.w3.org/2001/XMLSchema#integer");
  }
}

/// Random triples over a small vocabulary so patterns and duplicates hit.
std::vector<Triple> random_triples(std::mt19937& rng, std::size_t n) {
  std::vector<Triple> triples;
  triples.reserve(n);
  std::uniform_int_distribution<int> s_dist(0, 9);
  std::uniform_int_distribution<int> p_dist(0, 4);
  for (std::size_t i = 0; i < n; ++i) {
    triples.emplace_back(subj(s_dist(rng)), pred(p_dist(rng)), obj(rng));
  }
  return triples;
}

std::vector<Triple> sorted(std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end());
  return triples;
}

/// Reference match: linear scan of the deduplicated input.
std::vector<Triple> scan_match(const std::vector<Triple>& triples, const std::optional<Term>& s,
                               const std::optional<Term>& p, const std::optional<Term>& o) {
  std::vector<Triple> hits;
  for (const Triple& t : triples) {
    if ((!s || t.subject == *s) && (!p || t.predicate == *p) && (!o || t.object == *o)) {
      hits.push_back(t);
    }
  }
  return sorted(std::move(hits));
}

}  // namespace

TEST_CASE("dictionary ids are dense, stable and round-trip") {
  TermDictionary dict;
  const std::vector<Term> terms = {subj(1), pred(2), Term::plain("Lee"),
                                   Term::typed("5", "http://www.w3.org/2001/XMLSchema#integer")};
  std::vector<std::uint32_t> ids;
  for (const Term& t : terms) {
    ids.push_back(dict.intern(t));
  }
  CHECK(dict.size() == 4);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    CHECK(ids[i] == i);
    CHECK(dict.intern(terms[i]) == ids[i]);
    CHECK(dict.id_of(terms[i]) == ids[i]);
    CHECK(dict.term_of(ids[i]) == terms[i]);
  }
  CHECK_FALSE(dict.id_of(subj(99)).has_value());

  // A plain literal and an IRI with the same text are distinct terms.
  const auto a = dict.intern(Term::plain("http://t.example/s1"));
  CHECK(a != dict.id_of(subj(1)));
}

TEST_CASE("load deduplicates and size reports the set") {
  CHECK(Store::load({}).size() == 0);

  const Triple t{subj(1), pred(1), Term::plain("x")};
  CHECK(Store::load({t, t}).size() == 1);

  std::mt19937 rng(7);
  const std::vector<Triple> triples = random_triples(rng, 400);
  std::vector<Triple> unique = triples;
  canonicalize(unique);
  const Store store = Store::load(triples);
  CHECK(store.size() == unique.size());
  CHECK(sorted(store.match(std::nullopt, std::nullopt, std::nullopt)) == unique);
}

TEST_CASE("a record batch loads as one store triple per statement") {
  const CountyRegistry registry =
      load_county_registry(std::string(TESTDATA_DIR) + "/florida_counties.csv");
  const RecordBatch batch =
      load_record_csv(std::string(TESTDATA_DIR) + "/lee_county_records.csv", registry);
  REQUIRE(batch.rows.size() == 17);

  const Vocabulary vocab;
  const ExternalLinks links{vocab, registry};
  std::vector<Triple> triples;
  for (const OutageRecordRow& row : batch.rows) {
    const auto emitted = emit_record(row, vocab, links);
    triples.insert(triples.end(), emitted.begin(), emitted.end());
  }
  REQUIRE(triples.size() == 17 * 8);

  const Store store = Store::load(triples);
  CHECK(store.size() == 136);
  const auto records = store.match(
      std::nullopt, vocab.rdf("type"), vocab.onto("OutageRecord"));
  CHECK(records.size() == 17);
}

TEST_CASE("fully bound and fully free patterns") {
  std::mt19937 rng(11);
  const std::vector<Triple> triples = random_triples(rng, 120);
  const Store store = Store::load(triples);

  CHECK(store.match(triples[5].subject, triples[5].predicate, triples[5].object).size() == 1);
  CHECK(store.match(std::nullopt, std::nullopt, std::nullopt).size() == store.size());
  CHECK(store.match(subj(42), std::nullopt, std::nullopt).empty());
}

TEST_CASE("every binding shape matches a linear scan") {
  std::mt19937 rng(23);
  for (int round = 0; round < 20; ++round) {
    const std::vector<Triple> triples = random_triples(rng, 250);
    const Store store = Store::load(triples);
    std::vector<Triple> unique = triples;
    canonicalize(unique);

    const Triple& probe = triples[std::uniform_int_distribution<std::size_t>(
        0, triples.size() - 1)(rng)];
    for (int shape = 0; shape < 8; ++shape) {
      const std::optional<Term> s =
          (shape & 1) ? std::optional<Term>(probe.subject) : std::nullopt;
      const std::optional<Term> p =
          (shape & 2) ? std::optional<Term>(probe.predicate) : std::nullopt;
      const std::optional<Term> o =
          (shape & 4) ? std::optional<Term>(probe.object) : std::nullopt;
      CHECK(sorted(store.match(s, p, o)) == scan_match(unique, s, p, o));
    }
  }
}

TEST_CASE("all indexes that can serve a pattern return the same set") {
  std::mt19937 rng(31);
  const std::vector<Triple> triples = random_triples(rng, 300);
  const Store store = Store::load(triples);

  for (int round = 0; round < 40; ++round) {
    const Triple& probe =
        triples[std::uniform_int_distribution<std::size_t>(0, triples.size() - 1)(rng)];
    const int shape = std::uniform_int_distribution<int>(0, 7)(rng);
    const std::optional<Term> s = (shape & 1) ? std::optional<Term>(probe.subject) : std::nullopt;
    const std::optional<Term> p =
        (shape & 2) ? std::optional<Term>(probe.predicate) : std::nullopt;
    const std::optional<Term> o = (shape & 4) ? std::optional<Term>(probe.object) : std::nullopt;

    std::vector<std::vector<Triple>> results;
    for (const IndexOrder order : {IndexOrder::Spo, IndexOrder::Pos, IndexOrder::Osp}) {
      try {
        results.push_back(sorted(store.match_using(order, s, p, o)));
      } catch (const std::invalid_argument&) {
        // This index's ordering does not start with the bound positions.
      }
    }
    REQUIRE(!results.empty());
    for (const auto& r : results) {
      CHECK(r == results.front());
    }
  }
}

TEST_CASE("match_using rejects a pattern the index cannot serve contiguously") {
  const Store store = Store::load({{subj(1), pred(1), Term::plain("x")}});
  // Bound subject and object is a prefix of (O,S,P) only.
  CHECK_THROWS_AS(
      store.match_using(IndexOrder::Spo, subj(1), std::nullopt, Term::plain("x")),
      std::invalid_argument);
  CHECK(store.match_using(IndexOrder::Osp, subj(1), std::nullopt, Term::plain("x")).size() == 1);
}

TEST_CASE("patterns over terms the store never saw are empty") {
  std::mt19937 rng(43);
  const Store store = Store::load(random_triples(rng, 50));
  CHECK(store.match(std::nullopt, std::nullopt, Term::plain("no such literal")).empty());
  CHECK_FALSE(store.to_ids(std::nullopt, std::nullopt, Term::plain("no such literal")).has_value());
}
