#include "geooutage/kg.hpp"

#include <string>

#include "geooutage/iri.hpp"
#include "geooutage/severity.hpp"

namespace geooutage {

std::vector<Triple> emit_schema(const Vocabulary& vocab) {
  const Term rdf_type = vocab.rdf("type");
  const Term rdfs_class = vocab.rdfs("Class");
  const Term rdf_property = vocab.rdf("Property");
  const Term subclass_of = vocab.rdfs("subClassOf");
  const Term ma_image = vocab.media("Image");

  std::vector<Triple> triples;
  for (const char* name : {"OutageRecord", "NTLImage", "OutageMap"}) {
    triples.emplace_back(vocab.onto(name), rdf_type, rdfs_class);
  }
  triples.emplace_back(vocab.onto("NTLImage"), subclass_of, ma_image);
  triples.emplace_back(vocab.onto("OutageMap"), subclass_of, ma_image);
  for (const char* name :
       {"representsCounty", "fromSatellite", "fromSensor", "derivedFromImage", "hasDate",
        "customersOut", "runStartTime", "fipsCode", "countyName", "stateName", "meanSeverity",
        "eventLabel", "productName", "layerName"}) {
    triples.emplace_back(vocab.onto(name), rdf_type, rdf_property);
  }
  canonicalize(triples);
  return triples;
}

std::vector<Triple> emit_record(const OutageRecordRow& row, const Vocabulary& vocab,
                                const ExternalLinks& links) {
  const Term subject = mint_record_iri(row.fips, row.run_start_time, vocab.config().instance_base);
  return {
      {subject, vocab.rdf("type"), vocab.onto("OutageRecord")},
      {subject, vocab.onto("representsCounty"), links.county_iri(row.fips)},
      {subject, vocab.onto("fipsCode"), Term::plain(row.fips.str())},
      {subject, vocab.onto("countyName"), Term::plain(row.county)},
      {subject, vocab.onto("stateName"), Term::plain(row.state)},
      {subject, vocab.onto("customersOut"), vocab.typed_integer(row.customers_out)},
      {subject, vocab.onto("runStartTime"), vocab.typed_datetime(row.run_start_time)},
      {subject, vocab.onto("hasDate"), vocab.typed_date(day_of(row.run_start_time))},
  };
}

std::vector<Triple> emit_image(const RadianceGrid& grid, std::string_view locator,
                               const Vocabulary& vocab, const ExternalLinks& links) {
  const GridFrame& frame = grid.frame();
  const Term subject = mint_image_iri(frame.fips, frame.date, vocab.config().instance_base);
  return {
      {subject, vocab.rdf("type"), vocab.onto("NTLImage")},
      {subject, vocab.onto("representsCounty"), links.county_iri(frame.fips)},
      {subject, vocab.onto("hasDate"), vocab.typed_date(frame.date)},
      {subject, vocab.media("frameHeight"), vocab.typed_integer(frame.height)},
      {subject, vocab.media("frameWidth"), vocab.typed_integer(frame.width)},
      {subject, vocab.media("locator"), Term::plain(std::string(locator))},
      {subject, vocab.onto("fromSatellite"), links.satellite()},
      {subject, vocab.onto("fromSensor"), links.sensor()},
      {subject, vocab.onto("productName"), Term::plain("VNP46A2")},
      {subject, vocab.onto("layerName"), Term::plain("Gap_Filled_DNB_BRDF-Corrected_NTL")},
  };
}

std::vector<Triple> emit_map(const OutageMapGrid& map, const Term& source_image,
                             std::string_view locator, const Vocabulary& vocab,
                             const ExternalLinks& links) {
  const GridFrame& frame = map.frame();
  const Term subject = mint_map_iri(frame.fips, frame.date, vocab.config().instance_base);
  return {
      {subject, vocab.rdf("type"), vocab.onto("OutageMap")},
      {subject, vocab.onto("representsCounty"), links.county_iri(frame.fips)},
      {subject, vocab.onto("hasDate"), vocab.typed_date(frame.date)},
      {subject, vocab.media("frameHeight"), vocab.typed_integer(frame.height)},
      {subject, vocab.media("frameWidth"), vocab.typed_integer(frame.width)},
      {subject, vocab.media("locator"), Term::plain(std::string(locator))},
      {subject, vocab.onto("derivedFromImage"), source_image},
      {subject, vocab.onto("eventLabel"), Term::plain(map.event_label())},
      {subject, vocab.onto("meanSeverity"), vocab.typed_decimal(mean_severity(map))},
  };
}

}  // namespace geooutage
