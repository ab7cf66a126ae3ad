#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "geooutage/datetime.hpp"

namespace geooutage {

/// Axis-aligned lon/lat box in decimal degrees.
struct GeoBox {
  double min_lon = 0;
  double min_lat = 0;
  double max_lon = 0;
  double max_lat = 0;

  bool valid() const { return min_lon < max_lon && min_lat < max_lat; }
  double lon_extent() const { return max_lon - min_lon; }
  double lat_extent() const { return max_lat - min_lat; }

  bool intersects(const GeoBox& other) const {
    return min_lon < other.max_lon && other.min_lon < max_lon && min_lat < other.max_lat &&
           other.min_lat < max_lat;
  }

  friend bool operator==(const GeoBox&, const GeoBox&) = default;
};

/// 5-digit county code; the first two digits identify the state. Leading
/// zeros are preserved.
class FipsCode {
 public:
  /// Throws LexicalError unless text is exactly five decimal digits.
  static FipsCode parse(std::string_view text);

  const std::string& str() const noexcept { return digits_; }
  std::string_view state_prefix() const noexcept { return std::string_view{digits_}.substr(0, 2); }

  friend bool operator==(const FipsCode&, const FipsCode&) = default;
  friend std::strong_ordering operator<=>(const FipsCode&, const FipsCode&) = default;

 private:
  explicit FipsCode(std::string digits) : digits_(std::move(digits)) {}
  std::string digits_;
};

/// FIPS code, names, and lon/lat bounding box for one county.
struct CountyMeta {
  FipsCode fips;
  std::string name;
  std::string state;
  GeoBox bbox;
};

/// One 15-minute utility report.
struct OutageRecordRow {
  FipsCode fips;
  std::string county;
  std::string state;
  std::int64_t customers_out = 0;
  TimeStamp run_start_time{};
};

}  // namespace geooutage
