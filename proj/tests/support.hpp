#pragma once

// Shared fixture helpers for the test binaries.

#include <random>
#include <string>

#include "geooutage/datetime.hpp"
#include "geooutage/grid.hpp"
#include "geooutage/model.hpp"

namespace testsupport {

inline geooutage::GridFrame make_frame(Eigen::Index height, Eigen::Index width,
                                       const std::string& fips = "12071",
                                       const std::string& date = "2022-09-28",
                                       double cell_size = 0.25, double min_lon = -82.0,
                                       double min_lat = 26.0) {
  geooutage::GridFrame frame{geooutage::FipsCode::parse(fips),
                             geooutage::parse_date(date),
                             geooutage::GeoBox{min_lon, min_lat,
                                               min_lon + double(width) * cell_size,
                                               min_lat + double(height) * cell_size},
                             cell_size,
                             height,
                             width};
  frame.validate();
  return frame;
}

inline geooutage::RadianceGrid random_radiance(std::mt19937& rng,
                                               const geooutage::GridFrame& frame,
                                               double missing_prob = 0.1,
                                               double max_value = 150.0) {
  std::uniform_real_distribution<double> value(0.0, max_value);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  geooutage::RadianceMatrix values =
      geooutage::RadianceMatrix::Zero(frame.height, frame.width);
  geooutage::MaskMatrix missing =
      geooutage::MaskMatrix::Constant(frame.height, frame.width, false);
  for (Eigen::Index r = 0; r < frame.height; ++r) {
    for (Eigen::Index c = 0; c < frame.width; ++c) {
      if (coin(rng) < missing_prob) {
        missing(r, c) = true;
      } else {
        values(r, c) = value(rng);
      }
    }
  }
  return geooutage::RadianceGrid{frame, std::move(values), std::move(missing)};
}

}  // namespace testsupport
