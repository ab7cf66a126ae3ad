#include "doctest.h"

#include <cmath>

#include "geooutage/errors.hpp"
#include "geooutage/grid.hpp"
#include "support.hpp"

using namespace geooutage;
using testsupport::make_frame;

TEST_CASE("grid frame validation") {
  CHECK_NOTHROW(make_frame(2, 3).validate());

  GridFrame bad = make_frame(2, 3);
  bad.height = 0;
  CHECK_THROWS_AS(bad.validate(), DataError);

  bad = make_frame(2, 3);
  bad.cell_size = -0.25;
  CHECK_THROWS_AS(bad.validate(), DataError);

  bad = make_frame(2, 3);
  bad.bbox.max_lat = bad.bbox.min_lat;
  CHECK_THROWS_AS(bad.validate(), DataError);

  // Extent says 8 columns but the frame claims 3.
  bad = make_frame(2, 3);
  bad.bbox.max_lon = bad.bbox.min_lon + 2.0;
  CHECK_THROWS_AS(bad.validate(), DataError);

  // One pixel of slack on each axis is tolerated.
  GridFrame slack = make_frame(2, 3);
  slack.bbox.max_lon += 0.25;
  CHECK_NOTHROW(slack.validate());
}

TEST_CASE("cell centers sit half a cell inside the box") {
  const GridFrame frame = make_frame(4, 4, "12071", "2022-09-28", 0.5, -83.0, 26.0);
  CHECK(frame.center_lon(0) == doctest::Approx(-82.75));
  CHECK(frame.center_lon(3) == doctest::Approx(-81.25));
  // Row 0 is the northernmost row.
  CHECK(frame.center_lat(0) == doctest::Approx(27.75));
  CHECK(frame.center_lat(3) == doctest::Approx(26.25));
}

TEST_CASE("radiance grid shape and value validation") {
  const GridFrame frame = make_frame(2, 3);
  RadianceMatrix values = RadianceMatrix::Zero(2, 3);
  MaskMatrix missing = MaskMatrix::Constant(2, 3, false);
  CHECK_NOTHROW(RadianceGrid(frame, values, missing));

  CHECK_THROWS_AS(RadianceGrid(frame, RadianceMatrix::Zero(3, 2), missing), DataError);
  CHECK_THROWS_AS(RadianceGrid(frame, values, MaskMatrix::Constant(2, 2, false)), DataError);

  RadianceMatrix negative = values;
  negative(1, 2) = -0.5;
  CHECK_THROWS_AS(RadianceGrid(frame, negative, missing), DataError);

  RadianceMatrix nan = values;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(RadianceGrid(frame, nan, missing), DataError);

  // A masked pixel may carry any stored value; it is never read.
  MaskMatrix masked = missing;
  masked(0, 0) = true;
  CHECK_NOTHROW(RadianceGrid(frame, nan, masked));
}

TEST_CASE("outage map grid validation") {
  const GridFrame frame = make_frame(2, 2);
  RadianceMatrix severity = RadianceMatrix::Zero(2, 2);
  StateMatrix state = StateMatrix::Constant(2, 2, std::uint8_t(PixelState::Severity));

  severity(0, 1) = 0.75;
  CHECK_NOTHROW(OutageMapGrid(frame, severity, state, "Ian"));

  RadianceMatrix out_of_range = severity;
  out_of_range(0, 0) = 1.5;
  CHECK_THROWS_AS(OutageMapGrid(frame, out_of_range, state), DataError);

  StateMatrix bad_state = state;
  bad_state(1, 1) = 7;
  CHECK_THROWS_AS(OutageMapGrid(frame, severity, bad_state), DataError);

  OutageMapGrid map{frame, severity, state, "Ian"};
  CHECK(map.event_label() == "Ian");
  CHECK(map.severity_at(0, 1) == 0.75);
  CHECK(map.state(0, 1) == PixelState::Severity);
}

TEST_CASE("same_georeference ignores fips and date") {
  const GridFrame a = make_frame(2, 3, "12071", "2022-09-28");
  const GridFrame b = make_frame(2, 3, "12001", "2023-01-01");
  GridFrame c = make_frame(2, 3);
  c.cell_size += 1e-9;
  CHECK(a.same_georeference(b));
  CHECK_FALSE(a.same_georeference(c));
}
