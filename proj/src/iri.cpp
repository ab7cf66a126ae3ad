#include "geooutage/iri.hpp"

#include <algorithm>

namespace geooutage {

std::string record_local_name(const FipsCode& fips, TimeStamp t) {
  std::string stamp = format_datetime(t);
  std::replace(stamp.begin(), stamp.end(), ':', '-');
  return "outagerecord." + fips.str() + "." + stamp;
}

std::string image_local_name(const FipsCode& fips, DayStamp d) {
  return "ntlimage." + fips.str() + "." + format_date(d);
}

std::string map_local_name(const FipsCode& fips, DayStamp d) {
  return "outagemap." + fips.str() + "." + format_date(d);
}

Term mint_record_iri(const FipsCode& fips, TimeStamp t, std::string_view base) {
  return Term::iri(std::string{base} + record_local_name(fips, t));
}

Term mint_image_iri(const FipsCode& fips, DayStamp d, std::string_view base) {
  return Term::iri(std::string{base} + image_local_name(fips, d));
}

Term mint_map_iri(const FipsCode& fips, DayStamp d, std::string_view base) {
  return Term::iri(std::string{base} + map_local_name(fips, d));
}

}  // namespace geooutage
