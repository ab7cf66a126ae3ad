#pragma once

#include <string>
#include <vector>

#include "geooutage/datetime.hpp"
#include "geooutage/grid.hpp"

namespace geooutage {

/// Trailing per-pixel statistics for one county raster: mean radiance over
/// the contributing nights and how many nights contributed.
class BaselineGrid {
 public:
  /// mean must be zero wherever count is zero and nonnegative elsewhere.
  BaselineGrid(GridFrame frame, RadianceMatrix mean, CountMatrix count);

  const GridFrame& frame() const noexcept { return frame_; }
  const RadianceMatrix& mean() const noexcept { return mean_; }
  const CountMatrix& count() const noexcept { return count_; }

  double mean_at(Eigen::Index row, Eigen::Index col) const { return mean_(row, col); }
  std::int32_t count_at(Eigen::Index row, Eigen::Index col) const { return count_(row, col); }

 private:
  GridFrame frame_;
  RadianceMatrix mean_;
  CountMatrix count_;
};

/// Analysis span around a hurricane landfall, inclusive on both ends.
struct EventWindow {
  std::string event_label;
  DayStamp landfall{};
  DayStamp start{};
  DayStamp end{};

  bool contains(DayStamp d) const { return start <= d && d <= end; }
};

inline constexpr int kBaselineWindowDays = 90;
inline constexpr int kMinValidNights = 30;
inline constexpr double kDimThresholdRadiance = 0.5;

/// Per-pixel mean over the non-missing values among history grids dated in
/// [target_date - window_days, target_date). The frame supplies the
/// georeference so an empty history still yields a (count 0) baseline.
/// Throws DataError on georeference mismatch or a history grid dated on or
/// after target_date.
BaselineGrid compute_baseline(const GridFrame& frame, const std::vector<RadianceGrid>& history,
                              DayStamp target_date, int window_days = kBaselineWindowDays);

/// Fractional radiance loss per pixel, clamped to [0,1]. Pixels missing in
/// `current` are marked missing; pixels whose baseline is thin
/// (count < min_valid) or dim (mean below dim_threshold, or zero) are
/// marked unlit instead of scored.
OutageMapGrid severity_map(const RadianceGrid& current, const BaselineGrid& baseline,
                           double dim_threshold = kDimThresholdRadiance,
                           int min_valid = kMinValidNights);

/// [landfall - 30 days, landfall + 30 days], 61 days inclusive.
EventWindow event_window(std::string label, DayStamp landfall);

/// Arithmetic mean of severity over scored pixels; 0 when none are scored.
double mean_severity(const OutageMapGrid& map);

}  // namespace geooutage
