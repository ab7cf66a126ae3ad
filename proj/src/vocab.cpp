#include "geooutage/vocab.hpp"

#include <fstream>
#include <istream>

#include "geooutage/errors.hpp"

namespace geooutage {

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void replace_all(std::string& text, std::string_view needle, std::string_view with) {
  std::size_t at = 0;
  while ((at = text.find(needle, at)) != std::string::npos) {
    text.replace(at, needle.size(), with);
    at += with.size();
  }
}

}  // namespace

KgConfig KgConfig::parse(std::istream& in) {
  KgConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = strip(line);
    if (text.empty() || text.front() == '#') {
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = strip(text.substr(0, eq));
    const std::string value = strip(text.substr(eq + 1));
    if (value.empty()) {
      throw DataError("config line " + std::to_string(line_no) + ": empty value for '" + key +
                      "'");
    }
    if (key == "ns.ex") {
      config.instance_base = value;
    } else if (key == "ns.geo") {
      config.onto_base = value;
    } else if (key == "ns.gsdb") {
      config.gsdb_base = value;
    } else if (key == "satellite_iri") {
      config.satellite_iri = value;
    } else if (key == "sensor_iri") {
      config.sensor_iri = value;
    } else if (key == "county_iri_pattern") {
      config.county_iri_pattern = value;
    } else {
      throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return config;
}

KgConfig KgConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  try {
    return parse(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Vocabulary::Vocabulary(KgConfig config) : config_(std::move(config)) {
  for (const std::string* base :
       {&config_.instance_base, &config_.onto_base, &config_.gsdb_base}) {
    if (base->empty()) {
      throw DataError("namespace expansions must be nonempty");
    }
  }
}

turtle::PrefixMap Vocabulary::prefixes() const {
  turtle::PrefixMap map;
  map.add("ex", config_.instance_base);
  map.add("geo", config_.onto_base);
  map.add("ma", std::string(ns::kMa));
  map.add("dbo", std::string(ns::kDbo));
  map.add("dbr", std::string(ns::kDbr));
  map.add("gsdb", config_.gsdb_base);
  map.add("rdf", std::string(ns::kRdf));
  map.add("rdfs", std::string(ns::kRdfs));
  map.add("xsd", std::string(ns::kXsd));
  return map;
}

Term Vocabulary::instance(std::string_view local) const {
  return Term::iri(config_.instance_base + std::string(local));
}

Term Vocabulary::onto(std::string_view local) const {
  return Term::iri(config_.onto_base + std::string(local));
}

Term Vocabulary::media(std::string_view local) const {
  return Term::iri(std::string(ns::kMa) + std::string(local));
}

Term Vocabulary::rdf(std::string_view local) const {
  return Term::iri(std::string(ns::kRdf) + std::string(local));
}

Term Vocabulary::rdfs(std::string_view local) const {
  return Term::iri(std::string(ns::kRdfs) + std::string(local));
}

std::string Vocabulary::xsd(std::string_view local) const {
  return std::string(ns::kXsd) + std::string(local);
}

Term Vocabulary::typed_integer(std::int64_t value) const {
  return Term::typed(canonical_integer(value), xsd("integer"));
}

Term Vocabulary::typed_decimal(double value) const {
  return Term::typed(canonical_decimal(value), xsd("decimal"));
}

Term Vocabulary::typed_datetime(TimeStamp t) const {
  return Term::typed(format_datetime(t), xsd("dateTime"));
}

Term Vocabulary::typed_date(DayStamp d) const {
  return Term::typed(format_date(d), xsd("date"));
}

ExternalLinks::ExternalLinks(const Vocabulary& vocab, const CountyRegistry& registry)
    : registry_(&registry),
      pattern_(vocab.config().county_iri_pattern),
      satellite_(Term::iri(vocab.config().satellite_iri.empty()
                               ? vocab.config().gsdb_base + "Suomi_NPP"
                               : vocab.config().satellite_iri)),
      sensor_(Term::iri(vocab.config().sensor_iri.empty() ? vocab.config().gsdb_base + "VIIRS"
                                                          : vocab.config().sensor_iri)) {}

Term ExternalLinks::county_iri(const FipsCode& fips) const {
  const CountyMeta* county = registry_->find(fips);
  if (county == nullptr) {
    throw DataError("fips " + fips.str() + " is not in the county registry");
  }
  std::string iri = pattern_;
  replace_all(iri, "{name}", county->name);
  replace_all(iri, "{state}", county->state);
  replace_all(iri, "{fips}", county->fips.str());
  replace_all(iri, " ", "_");
  return Term::iri(std::move(iri));
}

}  // namespace geooutage
