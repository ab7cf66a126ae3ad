#include "doctest.h"

#include <chrono>
#include <limits>
#include <stdexcept>

#include "geooutage/datetime.hpp"
#include "geooutage/errors.hpp"
#include "geooutage/iri.hpp"
#include "geooutage/model.hpp"
#include "geooutage/rdf.hpp"

using namespace geooutage;

TEST_CASE("datetime round trip") {
  const char* stamps[] = {
      "1970-01-01T00:00:00Z", "2022-09-28T12:00:00Z", "2022-09-28T16:00:00Z",
      "2024-02-29T23:59:59Z", "1999-12-31T23:45:00Z", "2038-01-19T03:14:07Z",
  };
  for (const char* s : stamps) {
    CAPTURE(s);
    CHECK(format_datetime(parse_datetime(s)) == s);
  }
}

TEST_CASE("datetime accepts the space-separated source form") {
  CHECK(parse_datetime("2022-09-28 12:00:00") == parse_datetime("2022-09-28T12:00:00Z"));
  CHECK(parse_datetime("2022-09-28T12:00:00") == parse_datetime("2022-09-28T12:00:00Z"));
}

TEST_CASE("datetime rejects malformed input") {
  CHECK_THROWS_AS(parse_datetime(""), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-09-28"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-13-01T00:00:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-00-01T00:00:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-02-30T00:00:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2023-02-29T00:00:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-09-28T24:00:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-09-28T12:60:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-09-28T12:00:61Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022-09-28T12:00:00Zjunk"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("2022/09/28T12:00:00Z"), LexicalError);
  CHECK_THROWS_AS(parse_datetime("22-09-28T12:00:00Z"), LexicalError);
}

TEST_CASE("date round trip and validation") {
  CHECK(format_date(parse_date("2023-08-28")) == "2023-08-28");
  CHECK(format_date(parse_date("2024-02-29")) == "2024-02-29");
  CHECK_THROWS_AS(parse_date("2023-02-29"), LexicalError);
  CHECK_THROWS_AS(parse_date("2023-8-28"), LexicalError);
  CHECK_THROWS_AS(parse_date("2023-08-28T"), LexicalError);
}

TEST_CASE("day_of truncates to the containing date") {
  CHECK(format_date(day_of(parse_datetime("2022-09-28T23:59:59Z"))) == "2022-09-28");
  CHECK(format_date(day_of(parse_datetime("2022-09-28T00:00:00Z"))) == "2022-09-28");
}

TEST_CASE("quarter_hour_aligned") {
  CHECK(quarter_hour_aligned(parse_datetime("2022-09-28T12:00:00Z")));
  CHECK(quarter_hour_aligned(parse_datetime("2022-09-28T12:45:00Z")));
  CHECK_FALSE(quarter_hour_aligned(parse_datetime("2022-09-28T12:07:00Z")));
  CHECK_FALSE(quarter_hour_aligned(parse_datetime("2022-09-28T12:15:01Z")));
}

TEST_CASE("fips codes") {
  const FipsCode lee = FipsCode::parse("12071");
  CHECK(lee.str() == "12071");
  CHECK(lee.state_prefix() == "12");
  CHECK(FipsCode::parse("01001").str() == "01001");
  CHECK(FipsCode::parse("12001") < lee);
  CHECK_THROWS_AS(FipsCode::parse("1207"), LexicalError);
  CHECK_THROWS_AS(FipsCode::parse("120711"), LexicalError);
  CHECK_THROWS_AS(FipsCode::parse("12o71"), LexicalError);
  CHECK_THROWS_AS(FipsCode::parse(""), LexicalError);
  CHECK_THROWS_AS(FipsCode::parse(" 12071"), LexicalError);
}

TEST_CASE("geobox predicates") {
  const GeoBox a{-82.5, 26.0, -81.5, 27.0};
  CHECK(a.valid());
  CHECK(a.lon_extent() == doctest::Approx(1.0));
  CHECK_FALSE(GeoBox{-81.0, 26.0, -82.0, 27.0}.valid());
  CHECK(a.intersects(GeoBox{-82.0, 26.5, -81.0, 28.0}));
  // Shared edge only: open intervals, no overlap.
  CHECK_FALSE(a.intersects(GeoBox{-81.5, 26.0, -80.5, 27.0}));
}

TEST_CASE("terms order by kind, then text, then datatype") {
  const Term i = Term::iri("https://example.org/a");
  const Term p = Term::plain("a");
  const Term t = Term::typed("a", "https://example.org/dt");
  CHECK(i < p);
  CHECK(p < t);
  CHECK(Term::plain("5") != Term::typed("5", "http://www.w3.org/2001/XMLSchema#integer"));
  CHECK(Term::iri("x") == Term::iri("x"));
}

TEST_CASE("triples require IRI subject and predicate") {
  const Term s = Term::iri("https://example.org/s");
  const Term p = Term::iri("https://example.org/p");
  CHECK_NOTHROW(Triple(s, p, Term::plain("ok")));
  CHECK_THROWS_AS(Triple(Term::plain("s"), p, s), std::invalid_argument);
  CHECK_THROWS_AS(Triple(s, Term::plain("p"), s), std::invalid_argument);
}

TEST_CASE("canonicalize sorts and deduplicates") {
  const Term s = Term::iri("https://example.org/s");
  const Term p = Term::iri("https://example.org/p");
  std::vector<Triple> triples{
      {s, p, Term::plain("b")},
      {s, p, Term::plain("a")},
      {s, p, Term::plain("b")},
  };
  canonicalize(triples);
  REQUIRE(triples.size() == 2);
  CHECK(triples[0].object.text() == "a");
  CHECK(triples[1].object.text() == "b");
}

TEST_CASE("canonical integer and decimal forms") {
  CHECK(canonical_integer(0) == "0");
  CHECK(canonical_integer(-42) == "-42");
  CHECK(canonical_integer(120112) == "120112");

  CHECK(canonical_decimal(0.0) == "0");
  CHECK(canonical_decimal(-0.0) == "0");
  CHECK(canonical_decimal(9.0) == "9");
  CHECK(canonical_decimal(0.5) == "0.5");
  CHECK(canonical_decimal(-0.25) == "-0.25");
  CHECK(canonical_decimal(1.0 / 3.0) == "0.3333333333333333");
  CHECK(canonical_decimal(1e4) == "10000");
  CHECK(canonical_decimal(1e-4) == "0.0001");
  CHECK(canonical_decimal(139896.0 / 15544.0) == "9");
  CHECK_THROWS_AS(canonical_decimal(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(canonical_decimal(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("instance IRIs follow the published naming scheme") {
  const FipsCode alachua = FipsCode::parse("12001");
  const DayStamp day = parse_date("2023-08-28");
  const TimeStamp at = parse_datetime("2023-08-28T00:00:00Z");

  CHECK(image_local_name(alachua, day) == "ntlimage.12001.2023-08-28");
  CHECK(map_local_name(alachua, day) == "outagemap.12001.2023-08-28");
  CHECK(record_local_name(alachua, at) == "outagerecord.12001.2023-08-28T00-00-00Z");

  CHECK(mint_image_iri(alachua, day).text() ==
        "https://example.org/geooutagekg/ntlimage.12001.2023-08-28");
  CHECK(mint_record_iri(alachua, at).text() ==
        "https://example.org/geooutagekg/outagerecord.12001.2023-08-28T00-00-00Z");
  CHECK(mint_map_iri(alachua, day, "https://other.example/kg/").text() ==
        "https://other.example/kg/outagemap.12001.2023-08-28");
}

TEST_CASE("record IRIs separate adjacent quarter hours") {
  const FipsCode lee = FipsCode::parse("12071");
  const Term a = mint_record_iri(lee, parse_datetime("2022-09-28T12:00:00Z"));
  const Term b = mint_record_iri(lee, parse_datetime("2022-09-28T12:15:00Z"));
  CHECK(a != b);
}
