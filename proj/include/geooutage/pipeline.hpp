#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "geooutage/ingest.hpp"
#include "geooutage/severity.hpp"
#include "geooutage/store.hpp"
#include "geooutage/vocab.hpp"

namespace geooutage {

/// A named disturbance anchoring a ±30 day mapping window.
struct EventSpec {
  std::string label;
  DayStamp landfall{};

  /// Parses "LABEL:YYYY-MM-DD". Throws DataError on a malformed spec.
  static EventSpec parse(const std::string& text);
};

/// Everything one build run needs. Paths for records and NTL grids may stay
/// empty; the corresponding dumps then contain no triples.
struct BuildManifest {
  std::filesystem::path counties_csv;
  std::filesystem::path records_csv;
  std::filesystem::path ntl_dir;
  std::filesystem::path config_file;
  std::filesystem::path out_dir;
  std::vector<EventSpec> events;
  int window_days = kBaselineWindowDays;
  int min_valid = kMinValidNights;
  double dim_threshold = kDimThresholdRadiance;

  /// Throws DataError when required paths are missing or the baseline
  /// window is shorter than the required night count.
  void validate() const;
};

struct BuildReport {
  std::size_t counties = 0;
  std::size_t schema_triples = 0;
  std::size_t records = 0;
  std::size_t record_triples = 0;
  std::size_t images = 0;
  std::size_t image_triples = 0;
  std::size_t maps = 0;
  std::size_t map_triples = 0;
  IngestReport record_ingest;

  /// Stable-key JSON rendering written next to the dumps.
  std::string to_json(const BuildManifest& manifest) const;
};

/// Runs the whole pipeline: ingest, emission, map derivation, and writes
/// schema.ttl, outagerecords.ttl, ntlimages.ttl, outagemaps.ttl plus
/// build-report.json into manifest.out_dir. Output bytes are a pure
/// function of the manifest and the input files.
BuildReport run_build(const BuildManifest& manifest);

/// All *.ntl.csv files under root, ordered by relative path so consumers
/// never depend on directory enumeration order.
std::vector<std::filesystem::path> list_ntl_files(const std::filesystem::path& root);

/// Derives one outage map per county-night that falls inside an event
/// window (the first declared event claims a night in two windows). The
/// other nights of the same county feed that night's baseline. Results are
/// ordered by (fips, date).
std::vector<OutageMapGrid> derive_outage_maps(const std::vector<RadianceGrid>& grids,
                                              const std::vector<EventSpec>& events,
                                              int window_days = kBaselineWindowDays,
                                              int min_valid = kMinValidNights,
                                              double dim_threshold = kDimThresholdRadiance);

struct ClassStats {
  std::string name;
  std::size_t instances = 0;
  std::size_t statements = 0;
};

struct KgStats {
  std::vector<ClassStats> classes;  // OutageRecord, NTLImage, OutageMap
  std::size_t total_instances = 0;
  std::size_t total_statements = 0;
  std::size_t image_counties = 0;  // distinct counties among NTLImage instances
  std::string mean_images_per_county;  // "%.2f", or "n/a" without images
};

/// Instance and statement counts per class, in the style of the released
/// dataset's summary tables.
KgStats compute_stats(const Store& store, const Vocabulary& vocab);

/// Plain-text PGM (P2) render: severity s -> round(255*s), unlit and
/// missing pixels -> 0.
void write_outage_pgm(std::ostream& out, const OutageMapGrid& map);

/// Sibling mask: missing -> 0, unlit -> 128, scored -> 255.
void write_state_mask_pgm(std::ostream& out, const OutageMapGrid& map);

}  // namespace geooutage
