#pragma once

#include <string>
#include <string_view>

#include "geooutage/datetime.hpp"
#include "geooutage/model.hpp"
#include "geooutage/rdf.hpp"

namespace geooutage {

/// Default expansion of the ex: instance namespace.
inline constexpr std::string_view kDefaultInstanceBase = "https://example.org/geooutagekg/";

/// Local name "outagerecord.{fips}.{stamp}" where the stamp is the
/// xsd:dateTime lexical form with every ':' replaced by '-'.
std::string record_local_name(const FipsCode& fips, TimeStamp t);

/// Local name "ntlimage.{fips}.{date}".
std::string image_local_name(const FipsCode& fips, DayStamp d);

/// Local name "outagemap.{fips}.{date}".
std::string map_local_name(const FipsCode& fips, DayStamp d);

/// Globally unique instance IRIs; deterministic in their inputs.
Term mint_record_iri(const FipsCode& fips, TimeStamp t, std::string_view base = kDefaultInstanceBase);
Term mint_image_iri(const FipsCode& fips, DayStamp d, std::string_view base = kDefaultInstanceBase);
Term mint_map_iri(const FipsCode& fips, DayStamp d, std::string_view base = kDefaultInstanceBase);

}  // namespace geooutage
