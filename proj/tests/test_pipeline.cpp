#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "geooutage/iri.hpp"
#include "geooutage/kg.hpp"
#include "geooutage/pipeline.hpp"
#include "geooutage/turtle.hpp"
#include "support.hpp"

using namespace geooutage;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RadianceGrid constant_grid(const GridFrame& frame, double value) {
  return RadianceGrid{frame, RadianceMatrix::Constant(frame.height, frame.width, value),
                      MaskMatrix::Constant(frame.height, frame.width, false)};
}

GridFrame dated(GridFrame frame, DayStamp date) {
  frame.date = date;
  return frame;
}

/// 40 constant-radiance nights leading into one in-window night at half
/// the brightness, all for Lee County.
std::vector<RadianceGrid> lee_series() {
  const GridFrame base = testsupport::make_frame(2, 2);
  const DayStamp target = parse_date("2022-09-28");
  std::vector<RadianceGrid> grids;
  for (int back = 90; back > 50; --back) {
    grids.push_back(constant_grid(dated(base, target - std::chrono::days{back}), 10.0));
  }
  grids.push_back(constant_grid(dated(base, target), 5.0));
  return grids;
}

OutageMapGrid tiny_map(std::vector<double> severities, std::vector<int> states,
                       Eigen::Index height, Eigen::Index width) {
  const GridFrame frame = testsupport::make_frame(height, width);
  RadianceMatrix severity = RadianceMatrix::Zero(height, width);
  StateMatrix state = StateMatrix::Zero(height, width);
  for (Eigen::Index r = 0; r < height; ++r) {
    for (Eigen::Index c = 0; c < width; ++c) {
      severity(r, c) = severities[std::size_t(r * width + c)];
      state(r, c) = std::uint8_t(states[std::size_t(r * width + c)]);
    }
  }
  return OutageMapGrid{frame, std::move(severity), std::move(state)};
}

}  // namespace

TEST_CASE("event specs parse label and landfall date") {
  const EventSpec ian = EventSpec::parse("Ian:2022-09-28");
  CHECK(ian.label == "Ian");
  CHECK(format_date(ian.landfall) == "2022-09-28");

  CHECK_THROWS_AS(EventSpec::parse("Ian"), DataError);
  CHECK_THROWS_AS(EventSpec::parse(":2022-09-28"), DataError);
  CHECK_THROWS_AS(EventSpec::parse("Ian:2022-13-01"), DataError);
}

TEST_CASE("manifest validation") {
  BuildManifest manifest;
  manifest.counties_csv = std::string(TESTDATA_DIR) + "/florida_counties.csv";
  manifest.out_dir = fresh_dir("geooutage-manifest");
  CHECK_NOTHROW(manifest.validate());

  BuildManifest missing = manifest;
  missing.counties_csv.clear();
  CHECK_THROWS_AS(missing.validate(), DataError);

  BuildManifest nofile = manifest;
  nofile.records_csv = "/no/such/file.csv";
  CHECK_THROWS_AS(nofile.validate(), DataError);

  BuildManifest thin = manifest;
  thin.window_days = 10;
  thin.min_valid = 30;
  CHECK_THROWS_AS(thin.validate(), DataError);
}

TEST_CASE("records-only build writes deterministic dumps and a report") {
  BuildManifest manifest;
  manifest.counties_csv = std::string(TESTDATA_DIR) + "/florida_counties.csv";
  manifest.records_csv = std::string(TESTDATA_DIR) + "/lee_county_records.csv";
  manifest.out_dir = fresh_dir("geooutage-build");

  const BuildReport report = run_build(manifest);
  CHECK(report.counties == 67);
  CHECK(report.records == 17);
  CHECK(report.record_triples == 136);
  CHECK(report.images == 0);
  CHECK(report.image_triples == 0);
  CHECK(report.maps == 0);
  CHECK(report.schema_triples == 19);

  const auto records = turtle::parse(slurp(manifest.out_dir / "outagerecords.ttl"));
  CHECK(records.triples.size() == 136);
  CHECK(turtle::parse(slurp(manifest.out_dir / "ntlimages.ttl")).triples.empty());
  CHECK(turtle::parse(slurp(manifest.out_dir / "outagemaps.ttl")).triples.empty());
  CHECK(turtle::parse(slurp(manifest.out_dir / "schema.ttl")).triples.size() == 19);

  const nlohmann::json j = nlohmann::json::parse(slurp(manifest.out_dir / "build-report.json"));
  CHECK(j["classes"]["OutageRecord"]["instances"] == 17);
  CHECK(j["classes"]["OutageRecord"]["triples"] == 136);
  CHECK(j["counties"] == 67);
  CHECK(j["records"]["accepted"] == 17);
  CHECK(j["thresholds"]["window_days"] == 90);

  // A second run reproduces every output byte for byte.
  std::map<std::string, std::string> first;
  for (const auto& entry : fs::directory_iterator(manifest.out_dir)) {
    first[entry.path().filename().string()] = slurp(entry.path());
  }
  CHECK(first.size() == 5);
  run_build(manifest);
  for (const auto& [name, bytes] : first) {
    CHECK(slurp(manifest.out_dir / name) == bytes);
  }

  // Reloading a dump and re-serializing it is a fixpoint.
  const Vocabulary vocab;
  const std::string dump = slurp(manifest.out_dir / "outagerecords.ttl");
  CHECK(turtle::serialize(turtle::parse(dump).triples, vocab.prefixes()) == dump);
}

TEST_CASE("a build with grids and an event derives maps linked to their images") {
  const fs::path ntl_dir = fresh_dir("geooutage-ntl");
  for (const RadianceGrid& grid : lee_series()) {
    save_ntl_grid(ntl_dir / (grid.frame().fips.str() + "." + format_date(grid.frame().date) +
                             ".ntl.csv"),
                  grid);
  }

  BuildManifest manifest;
  manifest.counties_csv = std::string(TESTDATA_DIR) + "/florida_counties.csv";
  manifest.ntl_dir = ntl_dir;
  manifest.out_dir = fresh_dir("geooutage-build-maps");
  manifest.events.push_back(EventSpec::parse("Ian:2022-09-28"));

  const BuildReport report = run_build(manifest);
  CHECK(report.images == 41);
  CHECK(report.image_triples == 410);
  CHECK(report.maps == 1);
  CHECK(report.map_triples == 9);

  const auto maps = turtle::parse(slurp(manifest.out_dir / "outagemaps.ttl"));
  const auto images = turtle::parse(slurp(manifest.out_dir / "ntlimages.ttl"));
  const Term subject = mint_map_iri(FipsCode::parse("12071"), parse_date("2022-09-28"));
  const Term image = mint_image_iri(FipsCode::parse("12071"), parse_date("2022-09-28"));
  bool linked = false;
  for (const Triple& t : maps.triples) {
    if (t.subject == subject &&
        t.predicate.text() == "https://example.org/geooutageonto#derivedFromImage") {
      CHECK(t.object == image);
      linked = true;
    }
  }
  CHECK(linked);
  const bool image_present =
      std::any_of(images.triples.begin(), images.triples.end(),
                  [&image](const Triple& t) { return t.subject == image; });
  CHECK(image_present);
}

TEST_CASE("map derivation scores only event-window nights with enough history") {
  const std::vector<RadianceGrid> grids = lee_series();
  const std::vector<EventSpec> events = {EventSpec::parse("Ian:2022-09-28")};

  const std::vector<OutageMapGrid> maps = derive_outage_maps(grids, events);
  REQUIRE(maps.size() == 1);
  const OutageMapGrid& map = maps.front();
  CHECK(map.event_label() == "Ian");
  CHECK(format_date(map.frame().date) == "2022-09-28");
  for (Eigen::Index r = 0; r < map.height(); ++r) {
    for (Eigen::Index c = 0; c < map.width(); ++c) {
      CHECK(map.state(r, c) == PixelState::Severity);
      CHECK(map.severity_at(r, c) == 0.5);
    }
  }
  CHECK(mean_severity(map) == 0.5);

  // Without any event there is nothing to map.
  CHECK(derive_outage_maps(grids, {}).empty());

  // A night with too few baseline nights comes out unlit, not scored.
  const std::vector<RadianceGrid> short_series(grids.end() - 11, grids.end());
  const std::vector<OutageMapGrid> thin = derive_outage_maps(short_series, events);
  REQUIRE(thin.size() == 1);
  CHECK(thin.front().state(0, 0) == PixelState::Unlit);
}

TEST_CASE("stats counts instances and statements per class") {
  const CountyRegistry registry =
      load_county_registry(std::string(TESTDATA_DIR) + "/florida_counties.csv");
  const RecordBatch batch =
      load_record_csv(std::string(TESTDATA_DIR) + "/lee_county_records.csv", registry);
  const Vocabulary vocab;
  const ExternalLinks links{vocab, registry};

  std::vector<Triple> triples = emit_schema(vocab);
  for (const OutageRecordRow& row : batch.rows) {
    const auto emitted = emit_record(row, vocab, links);
    triples.insert(triples.end(), emitted.begin(), emitted.end());
  }

  KgStats stats = compute_stats(Store::load(triples), vocab);
  REQUIRE(stats.classes.size() == 3);
  CHECK(stats.classes[0].name == "OutageRecord");
  CHECK(stats.classes[0].instances == 17);
  CHECK(stats.classes[0].statements == 136);
  CHECK(stats.classes[1].instances == 0);
  CHECK(stats.classes[2].instances == 0);
  CHECK(stats.total_instances == 17);
  CHECK(stats.total_statements == 136);
  CHECK(stats.mean_images_per_county == "n/a");

  // Three counties, two nights each, plus one single-night county.
  std::vector<Triple> image_triples;
  std::mt19937 rng(5);
  for (const char* fips : {"12071", "12086", "12099"}) {
    for (const char* date : {"2022-09-27", "2022-09-28"}) {
      const RadianceGrid grid =
          testsupport::random_radiance(rng, testsupport::make_frame(2, 2, fips, date));
      const auto emitted = emit_image(grid, "x.ntl.csv", vocab, links);
      image_triples.insert(image_triples.end(), emitted.begin(), emitted.end());
    }
  }
  const RadianceGrid one =
      testsupport::random_radiance(rng, testsupport::make_frame(2, 2, "12001", "2022-09-28"));
  const auto emitted = emit_image(one, "y.ntl.csv", vocab, links);
  image_triples.insert(image_triples.end(), emitted.begin(), emitted.end());

  stats = compute_stats(Store::load(image_triples), vocab);
  CHECK(stats.classes[1].instances == 7);
  CHECK(stats.classes[1].statements == 70);
  CHECK(stats.image_counties == 4);
  CHECK(stats.mean_images_per_county == "1.75");
}

TEST_CASE("outage map grids render to PGM with a state mask") {
  const OutageMapGrid endpoints = tiny_map({0.0, 1.0}, {0, 0}, 1, 2);
  std::ostringstream pgm;
  write_outage_pgm(pgm, endpoints);
  CHECK(pgm.str() == "P2\n2 1\n255\n0 255\n");

  const OutageMapGrid half = tiny_map({0.5}, {0}, 1, 1);
  std::ostringstream half_pgm;
  write_outage_pgm(half_pgm, half);
  CHECK(half_pgm.str() == "P2\n1 1\n255\n128\n");

  const OutageMapGrid mixed = tiny_map({0.2, 0.0, 0.0, 0.8}, {0, 1, 2, 0}, 2, 2);
  std::ostringstream mixed_pgm;
  write_outage_pgm(mixed_pgm, mixed);
  CHECK(mixed_pgm.str() == "P2\n2 2\n255\n51 0\n0 204\n");
  std::ostringstream mask;
  write_state_mask_pgm(mask, mixed);
  CHECK(mask.str() == "P2\n2 2\n255\n255 128\n0 255\n");

  const OutageMapGrid gone = tiny_map({0.0, 0.0}, {2, 2}, 1, 2);
  std::ostringstream gone_pgm;
  write_outage_pgm(gone_pgm, gone);
  CHECK(gone_pgm.str() == "P2\n2 1\n255\n0 0\n");
  std::ostringstream gone_mask;
  write_state_mask_pgm(gone_mask, gone);
  CHECK(gone_mask.str() == "P2\n2 1\n255\n0 0\n");
}
