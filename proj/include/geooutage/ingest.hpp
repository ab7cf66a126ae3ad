#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "geooutage/grid.hpp"
#include "geooutage/model.hpp"

namespace geooutage {

/// County metadata keyed by FIPS code, iterable in FIPS order.
class CountyRegistry {
 public:
  /// Throws DataError on duplicate FIPS, empty name, or invalid bbox.
  void add(CountyMeta county);

  const CountyMeta* find(const FipsCode& fips) const;
  const std::vector<CountyMeta>& counties() const noexcept { return counties_; }
  std::size_t size() const noexcept { return counties_.size(); }

 private:
  std::vector<CountyMeta> counties_;  // sorted by fips
};

/// Per-file ingest outcome. Warnings carry 1-based source line numbers.
struct IngestReport {
  std::size_t rows_accepted = 0;
  std::size_t rows_rejected = 0;
  std::vector<std::pair<std::size_t, std::string>> warnings;
};

struct RecordBatch {
  std::vector<OutageRecordRow> rows;
  IngestReport report;
};

/// Reads `fips,name,state,min_lon,min_lat,max_lon,max_lat` rows (header
/// resolved by name). Registry files are curated inputs, so any malformed
/// row is a hard DataError rather than a skip-and-warn.
CountyRegistry read_county_registry(std::istream& in);
CountyRegistry load_county_registry(const std::filesystem::path& path);

/// Parses outage-record CSV with header columns fips_code, county, state,
/// customers_out, run_start_time in any order. Rows with unknown FIPS,
/// negative counts, or malformed fields are rejected and reported with
/// their line numbers; timestamps off the 15-minute lattice are accepted
/// with a warning.
RecordBatch parse_record_csv(std::istream& in, const CountyRegistry& registry);
RecordBatch load_record_csv(const std::filesystem::path& path, const CountyRegistry& registry);

/// Grid container: one JSON header line (fips, date, height, width,
/// min_lon, min_lat, max_lon, max_lat, cell_size) followed by height lines
/// of width comma-separated radiance values, `NA` marking missing pixels.
RadianceGrid read_ntl_grid(std::istream& in);
RadianceGrid load_ntl_grid(const std::filesystem::path& path);
void write_ntl_grid(std::ostream& out, const RadianceGrid& grid);
void save_ntl_grid(const std::filesystem::path& path, const RadianceGrid& grid);

/// Same container as the NTL grid with an extra "event" header key; cells
/// hold severity values, `U` for unlit pixels, `NA` for missing ones.
OutageMapGrid read_map_grid(std::istream& in);
OutageMapGrid load_map_grid(const std::filesystem::path& path);
void write_map_grid(std::ostream& out, const OutageMapGrid& map);
void save_map_grid(const std::filesystem::path& path, const OutageMapGrid& map);

/// Clips a statewide raster to the pixels whose cell centers lie inside the
/// county bbox (half-open on the max edges). The output bbox is snapped to
/// the enclosing pixel boundaries and the fips relabeled to the county's.
/// Throws DataError when no cell center falls inside the county.
RadianceGrid segment_by_bbox(const RadianceGrid& state_grid, const CountyMeta& county);

}  // namespace geooutage
