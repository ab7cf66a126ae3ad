#include "geooutage/severity.hpp"

#include <utility>

#include "geooutage/errors.hpp"

namespace geooutage {

BaselineGrid::BaselineGrid(GridFrame frame, RadianceMatrix mean, CountMatrix count)
    : frame_(std::move(frame)), mean_(std::move(mean)), count_(std::move(count)) {
  frame_.validate();
  if (mean_.rows() != frame_.height || mean_.cols() != frame_.width ||
      count_.rows() != frame_.height || count_.cols() != frame_.width) {
    throw DataError("baseline matrices do not match the declared frame dimensions");
  }
  if ((count_ < 0).any()) {
    throw DataError("baseline day counts must be nonnegative");
  }
  if (((count_ == 0) && (mean_ != 0.0)).any()) {
    throw DataError("baseline mean must be zero where no nights contributed");
  }
  if ((mean_ < 0.0).any() || !mean_.isFinite().all()) {
    throw DataError("baseline mean radiance must be finite and nonnegative");
  }
}

BaselineGrid compute_baseline(const GridFrame& frame, const std::vector<RadianceGrid>& history,
                              DayStamp target_date, int window_days) {
  if (window_days < 1) {
    throw DataError("baseline window must span at least one day");
  }
  frame.validate();
  const DayStamp window_start = target_date - std::chrono::days{window_days};

  RadianceMatrix sum = RadianceMatrix::Zero(frame.height, frame.width);
  CountMatrix count = CountMatrix::Zero(frame.height, frame.width);
  for (const RadianceGrid& night : history) {
    if (!night.frame().same_georeference(frame)) {
      throw DataError("history grid for " + format_date(night.frame().date) +
                      " has a mismatched georeference");
    }
    if (night.frame().date >= target_date) {
      throw DataError("history grid dated " + format_date(night.frame().date) +
                      " is not before the target date");
    }
    if (night.frame().date < window_start) {
      continue;
    }
    sum += night.missing().select(RadianceMatrix::Zero(frame.height, frame.width), night.values());
    count += (!night.missing()).cast<std::int32_t>();
  }
  // max(1) only shields the division where count is zero; sum is zero there.
  RadianceMatrix mean = sum / count.cast<double>().max(1.0);
  GridFrame baseline_frame = frame;
  baseline_frame.date = target_date;
  return BaselineGrid{std::move(baseline_frame), std::move(mean), std::move(count)};
}

OutageMapGrid severity_map(const RadianceGrid& current, const BaselineGrid& baseline,
                           double dim_threshold, int min_valid) {
  const GridFrame& frame = current.frame();
  if (!frame.same_georeference(baseline.frame())) {
    throw DataError("current grid and baseline have mismatched georeferences");
  }

  const MaskMatrix scored = !current.missing() && (baseline.count() >= min_valid) &&
                            (baseline.mean() >= dim_threshold) && (baseline.mean() > 0.0);
  StateMatrix state = current.missing().select(
      StateMatrix::Constant(frame.height, frame.width, std::uint8_t(PixelState::Missing)),
      scored.select(
          StateMatrix::Constant(frame.height, frame.width, std::uint8_t(PixelState::Severity)),
          StateMatrix::Constant(frame.height, frame.width, std::uint8_t(PixelState::Unlit))));

  RadianceMatrix severity = RadianceMatrix::Zero(frame.height, frame.width);
  for (Eigen::Index row = 0; row < frame.height; ++row) {
    for (Eigen::Index col = 0; col < frame.width; ++col) {
      if (!scored(row, col)) {
        continue;
      }
      const double base = baseline.mean_at(row, col);
      double s = (base - current.value(row, col)) / base;
      if (s < 0.0) {
        s = 0.0;
      } else if (s > 1.0) {
        s = 1.0;
      }
      severity(row, col) = s;
    }
  }
  return OutageMapGrid{frame, std::move(severity), std::move(state)};
}

EventWindow event_window(std::string label, DayStamp landfall) {
  return EventWindow{std::move(label), landfall, landfall - std::chrono::days{30},
                     landfall + std::chrono::days{30}};
}

double mean_severity(const OutageMapGrid& map) {
  const auto scored = (map.states() == std::uint8_t(PixelState::Severity));
  const auto n = scored.count();
  if (n == 0) {
    return 0.0;
  }
  const double total = scored.select(map.severity(), 0.0).sum();
  return total / double(n);
}

}  // namespace geooutage
