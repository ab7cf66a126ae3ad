#pragma once

#include <string>
#include <string_view>

#include "geooutage/ingest.hpp"
#include "geooutage/iri.hpp"
#include "geooutage/model.hpp"
#include "geooutage/rdf.hpp"
#include "geooutage/turtle.hpp"

namespace geooutage {

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kMa = "http://www.w3.org/ns/ma-ont#";
inline constexpr std::string_view kDbo = "http://dbpedia.org/ontology/";
inline constexpr std::string_view kDbr = "http://dbpedia.org/resource/";
inline constexpr std::string_view kOnto = "https://example.org/geooutageonto#";
inline constexpr std::string_view kGsdb = "https://example.org/geosatdb/";
}  // namespace ns

/// Deployment knobs: namespace expansions plus the external IRIs we link to
/// but never dereference. Loaded from key=value text; every field has a
/// working default.
struct KgConfig {
  std::string instance_base{kDefaultInstanceBase};
  std::string onto_base{ns::kOnto};
  std::string gsdb_base{ns::kGsdb};
  /// Empty means "derive from gsdb_base".
  std::string satellite_iri;
  std::string sensor_iri;
  /// Placeholders {name}, {state}, {fips}; spaces become underscores after
  /// substitution.
  std::string county_iri_pattern{std::string(ns::kDbr) + "{name}_County,_{state}"};

  static KgConfig parse(std::istream& in);
  static KgConfig load(const std::filesystem::path& path);
};

/// Namespace table and term factory shared by emission and serialization.
class Vocabulary {
 public:
  explicit Vocabulary(KgConfig config = {});

  const KgConfig& config() const noexcept { return config_; }

  /// Prefix table in the fixed dump order: ex, geo, ma, dbo, dbr, gsdb,
  /// rdf, rdfs, xsd.
  turtle::PrefixMap prefixes() const;

  Term instance(std::string_view local) const;  // ex:
  Term onto(std::string_view local) const;      // geo:
  Term media(std::string_view local) const;     // ma:
  Term rdf(std::string_view local) const;
  Term rdfs(std::string_view local) const;
  std::string xsd(std::string_view local) const;  // datatype IRI text

  Term typed_integer(std::int64_t value) const;
  Term typed_decimal(double value) const;
  Term typed_datetime(TimeStamp t) const;
  Term typed_date(DayStamp d) const;

 private:
  KgConfig config_;
};

/// The out-of-graph IRIs each instance links to: the DBpedia county
/// resource and the GEOSatDB satellite/sensor instances.
class ExternalLinks {
 public:
  ExternalLinks(const Vocabulary& vocab, const CountyRegistry& registry);

  const Term& satellite() const noexcept { return satellite_; }
  const Term& sensor() const noexcept { return sensor_; }

  /// Throws DataError for a FIPS code missing from the registry.
  Term county_iri(const FipsCode& fips) const;

 private:
  const CountyRegistry* registry_;
  std::string pattern_;
  Term satellite_;
  Term sensor_;
};

}  // namespace geooutage
