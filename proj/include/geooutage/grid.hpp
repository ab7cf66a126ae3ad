#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>

#include "geooutage/datetime.hpp"
#include "geooutage/errors.hpp"
#include "geooutage/model.hpp"

namespace geooutage {

using RadianceMatrix = Eigen::ArrayXXd;
using MaskMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using CountMatrix = Eigen::Array<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Georeference shared by all county-night rasters. Row 0 is the
/// northernmost row and column 0 the westernmost column; cell centers sit
/// half a cell inside the box edges.
struct GridFrame {
  FipsCode fips;
  DayStamp date{};
  GeoBox bbox;
  double cell_size = 0;
  Eigen::Index height = 0;
  Eigen::Index width = 0;

  double center_lon(Eigen::Index col) const { return bbox.min_lon + (double(col) + 0.5) * cell_size; }
  double center_lat(Eigen::Index row) const { return bbox.max_lat - (double(row) + 0.5) * cell_size; }

  /// Same raster geometry: box, cell size, and pixel counts (fips/date may differ).
  bool same_georeference(const GridFrame& other) const {
    return bbox == other.bbox && cell_size == other.cell_size && height == other.height &&
           width == other.width;
  }

  /// Throws DataError unless dimensions are positive and consistent with the
  /// box extent (within one pixel on each axis).
  void validate() const;
};

/// One county-night NTL raster: radiance values plus a per-pixel missing mask.
class RadianceGrid {
 public:
  /// Validates the frame, that matrix shapes match it, and that every
  /// non-missing radiance is finite and nonnegative.
  RadianceGrid(GridFrame frame, RadianceMatrix values, MaskMatrix missing);

  const GridFrame& frame() const noexcept { return frame_; }
  Eigen::Index height() const noexcept { return frame_.height; }
  Eigen::Index width() const noexcept { return frame_.width; }
  const RadianceMatrix& values() const noexcept { return values_; }
  const MaskMatrix& missing() const noexcept { return missing_; }

  double value(Eigen::Index row, Eigen::Index col) const { return values_(row, col); }
  bool is_missing(Eigen::Index row, Eigen::Index col) const { return missing_(row, col); }

 private:
  GridFrame frame_;
  RadianceMatrix values_;
  MaskMatrix missing_;
};

enum class PixelState : std::uint8_t { Severity = 0, Unlit = 1, Missing = 2 };

using StateMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-pixel outage severity in [0,1] derived from one night against its
/// trailing baseline; pixels may instead be marked unlit or missing.
class OutageMapGrid {
 public:
  /// severity holds the fractional radiance loss where state == Severity and
  /// zero elsewhere. Severity values must lie in [0,1].
  OutageMapGrid(GridFrame frame, RadianceMatrix severity, StateMatrix state,
                std::string event_label = {});

  const GridFrame& frame() const noexcept { return frame_; }
  Eigen::Index height() const noexcept { return frame_.height; }
  Eigen::Index width() const noexcept { return frame_.width; }
  const RadianceMatrix& severity() const noexcept { return severity_; }
  const StateMatrix& states() const noexcept { return state_; }
  const std::string& event_label() const noexcept { return event_label_; }

  PixelState state(Eigen::Index row, Eigen::Index col) const {
    return static_cast<PixelState>(state_(row, col));
  }
  double severity_at(Eigen::Index row, Eigen::Index col) const { return severity_(row, col); }

  void set_event_label(std::string label) { event_label_ = std::move(label); }

 private:
  GridFrame frame_;
  RadianceMatrix severity_;
  StateMatrix state_;
  std::string event_label_;
};

}  // namespace geooutage
