#pragma once

#include <string_view>
#include <vector>

#include "geooutage/grid.hpp"
#include "geooutage/model.hpp"
#include "geooutage/rdf.hpp"
#include "geooutage/vocab.hpp"

namespace geooutage {

/// Class and property declarations (T-box): the three instance classes,
/// their ma:Image subclass axioms, and every predicate the emitters use.
/// Deterministic and duplicate-free.
std::vector<Triple> emit_schema(const Vocabulary& vocab);

/// One outage record as exactly 8 triples sharing the minted subject IRI.
std::vector<Triple> emit_record(const OutageRecordRow& row, const Vocabulary& vocab,
                                const ExternalLinks& links);

/// One county-night image as exactly 10 triples. `locator` is the grid file
/// reference stored on ma:locator.
std::vector<Triple> emit_image(const RadianceGrid& grid, std::string_view locator,
                               const Vocabulary& vocab, const ExternalLinks& links);

/// One outage map as exactly 9 triples. `source_image` is the NTLImage IRI
/// the map was derived from; an absent event label is emitted as the empty
/// string to keep the shape fixed.
std::vector<Triple> emit_map(const OutageMapGrid& map, const Term& source_image,
                             std::string_view locator, const Vocabulary& vocab,
                             const ExternalLinks& links);

}  // namespace geooutage
