#include "geooutage/grid.hpp"

#include <cmath>
#include <cstdlib>

namespace geooutage {

void GridFrame::validate() const {
  if (height < 1 || width < 1) {
    throw DataError("grid dimensions must be at least 1x1");
  }
  if (!bbox.valid()) {
    throw DataError("grid bounding box is degenerate");
  }
  if (!(cell_size > 0)) {
    throw DataError("grid cell size must be positive");
  }
  const double cols = bbox.lon_extent() / cell_size;
  const double rows = bbox.lat_extent() / cell_size;
  if (std::abs(std::round(cols) - double(width)) > 1.0 ||
      std::abs(std::round(rows) - double(height)) > 1.0) {
    throw DataError("grid bounding box extent is inconsistent with its dimensions");
  }
}

RadianceGrid::RadianceGrid(GridFrame frame, RadianceMatrix values, MaskMatrix missing)
    : frame_(std::move(frame)), values_(std::move(values)), missing_(std::move(missing)) {
  frame_.validate();
  if (values_.rows() != frame_.height || values_.cols() != frame_.width ||
      missing_.rows() != frame_.height || missing_.cols() != frame_.width) {
    throw DataError("grid matrices do not match the declared dimensions");
  }
  for (Eigen::Index r = 0; r < frame_.height; ++r) {
    for (Eigen::Index c = 0; c < frame_.width; ++c) {
      if (!missing_(r, c) && (!std::isfinite(values_(r, c)) || values_(r, c) < 0)) {
        throw DataError("radiance values must be finite and nonnegative");
      }
    }
  }
}

OutageMapGrid::OutageMapGrid(GridFrame frame, RadianceMatrix severity, StateMatrix state,
                             std::string event_label)
    : frame_(std::move(frame)),
      severity_(std::move(severity)),
      state_(std::move(state)),
      event_label_(std::move(event_label)) {
  frame_.validate();
  if (severity_.rows() != frame_.height || severity_.cols() != frame_.width ||
      state_.rows() != frame_.height || state_.cols() != frame_.width) {
    throw DataError("map matrices do not match the declared dimensions");
  }
  for (Eigen::Index r = 0; r < frame_.height; ++r) {
    for (Eigen::Index c = 0; c < frame_.width; ++c) {
      if (state_(r, c) > static_cast<std::uint8_t>(PixelState::Missing)) {
        throw DataError("invalid pixel state");
      }
      if (state_(r, c) == static_cast<std::uint8_t>(PixelState::Severity) &&
          !(severity_(r, c) >= 0.0 && severity_(r, c) <= 1.0)) {
        throw DataError("severity values must lie in [0,1]");
      }
    }
  }
}

}  // namespace geooutage
