#include "geooutage/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "geooutage/iri.hpp"
#include "geooutage/kg.hpp"
#include "geooutage/turtle.hpp"

namespace geooutage {

namespace fs = std::filesystem;

EventSpec EventSpec::parse(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw DataError("event spec '" + text + "' is not LABEL:YYYY-MM-DD");
  }
  EventSpec spec;
  spec.label = text.substr(0, colon);
  try {
    spec.landfall = parse_date(text.substr(colon + 1));
  } catch (const LexicalError& e) {
    throw DataError("event spec '" + text + "': " + e.what());
  }
  return spec;
}

void BuildManifest::validate() const {
  if (counties_csv.empty()) {
    throw DataError("a county registry file is required");
  }
  if (out_dir.empty()) {
    throw DataError("an output directory is required");
  }
  for (const fs::path* p : {&counties_csv, &records_csv, &ntl_dir, &config_file}) {
    if (!p->empty() && !fs::exists(*p)) {
      throw DataError("input path does not exist: " + p->string());
    }
  }
  if (window_days < 1) {
    throw DataError("the baseline window must span at least one day");
  }
  if (min_valid < 0) {
    throw DataError("the minimum night count cannot be negative");
  }
  if (window_days < min_valid) {
    throw DataError("a " + std::to_string(window_days) +
                    "-day window cannot contain the required " + std::to_string(min_valid) +
                    " nights");
  }
  if (!(dim_threshold >= 0.0)) {
    throw DataError("the dim threshold must be a nonnegative radiance");
  }
}

std::string BuildReport::to_json(const BuildManifest& manifest) const {
  nlohmann::json j;
  j["counties"] = counties;
  j["schema_triples"] = schema_triples;
  j["classes"] = {
      {"OutageRecord", {{"instances", records}, {"triples", record_triples}}},
      {"NTLImage", {{"instances", images}, {"triples", image_triples}}},
      {"OutageMap", {{"instances", maps}, {"triples", map_triples}}},
  };
  j["records"] = {{"accepted", record_ingest.rows_accepted},
                  {"rejected", record_ingest.rows_rejected},
                  {"warnings", record_ingest.warnings.size()}};
  auto events_json = nlohmann::json::array();
  for (const EventSpec& event : manifest.events) {
    events_json.push_back({{"label", event.label}, {"landfall", format_date(event.landfall)}});
  }
  j["events"] = std::move(events_json);
  j["thresholds"] = {{"window_days", manifest.window_days},
                     {"min_valid", manifest.min_valid},
                     {"dim_threshold", manifest.dim_threshold}};
  return j.dump(2) + "\n";
}

std::vector<fs::path> list_ntl_files(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const std::string name = entry.path().filename().string();
    if (name.size() > 8 && name.ends_with(".ntl.csv")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [&root](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(root).generic_string() <
           b.lexically_relative(root).generic_string();
  });
  return files;
}

std::vector<OutageMapGrid> derive_outage_maps(const std::vector<RadianceGrid>& grids,
                                              const std::vector<EventSpec>& events,
                                              int window_days, int min_valid,
                                              double dim_threshold) {
  std::map<std::string, std::vector<RadianceGrid>> series;
  for (const RadianceGrid& grid : grids) {
    series[grid.frame().fips.str()].push_back(grid);
  }
  for (auto& [fips, nights] : series) {
    std::sort(nights.begin(), nights.end(), [](const RadianceGrid& a, const RadianceGrid& b) {
      return a.frame().date < b.frame().date;
    });
  }

  std::vector<EventWindow> windows;
  windows.reserve(events.size());
  for (const EventSpec& event : events) {
    windows.push_back(event_window(event.label, event.landfall));
  }

  std::vector<OutageMapGrid> maps;
  for (const auto& [fips, nights] : series) {
    for (std::size_t i = 0; i < nights.size(); ++i) {
      const RadianceGrid& night = nights[i];
      // The first declared event claims a night that falls in two windows.
      const EventWindow* window = nullptr;
      for (const EventWindow& w : windows) {
        if (w.contains(night.frame().date)) {
          window = &w;
          break;
        }
      }
      if (window == nullptr) {
        continue;
      }
      const std::vector<RadianceGrid> history(nights.begin(),
                                              nights.begin() + std::ptrdiff_t(i));
      const BaselineGrid baseline =
          compute_baseline(night.frame(), history, night.frame().date, window_days);
      OutageMapGrid map = severity_map(night, baseline, dim_threshold, min_valid);
      map.set_event_label(window->event_label);
      maps.push_back(std::move(map));
    }
  }
  return maps;
}

namespace {

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

std::string map_locator(const GridFrame& frame) {
  return frame.fips.str() + "." + format_date(frame.date) + ".map.csv";
}

}  // namespace

BuildReport run_build(const BuildManifest& manifest) {
  manifest.validate();
  const KgConfig config =
      manifest.config_file.empty() ? KgConfig{} : KgConfig::load(manifest.config_file);
  const Vocabulary vocab{config};
  const CountyRegistry registry = load_county_registry(manifest.counties_csv);
  const ExternalLinks links{vocab, registry};

  BuildReport report;
  report.counties = registry.size();

  std::vector<Triple> schema = emit_schema(vocab);
  std::vector<Triple> record_triples;
  std::vector<Triple> image_triples;
  std::vector<Triple> map_triples;

  if (!manifest.records_csv.empty()) {
    RecordBatch batch = load_record_csv(manifest.records_csv, registry);
    report.record_ingest = batch.report;
    report.records = batch.rows.size();
    for (const OutageRecordRow& row : batch.rows) {
      const auto emitted = emit_record(row, vocab, links);
      record_triples.insert(record_triples.end(), emitted.begin(), emitted.end());
    }
  }

  std::vector<RadianceGrid> grids;
  if (!manifest.ntl_dir.empty()) {
    for (const fs::path& path : list_ntl_files(manifest.ntl_dir)) {
      RadianceGrid grid = load_ntl_grid(path);
      const std::string locator = path.lexically_relative(manifest.ntl_dir).generic_string();
      const auto emitted = emit_image(grid, locator, vocab, links);
      image_triples.insert(image_triples.end(), emitted.begin(), emitted.end());
      ++report.images;
      grids.push_back(std::move(grid));
    }
  }

  for (const OutageMapGrid& map : derive_outage_maps(grids, manifest.events,
                                                     manifest.window_days, manifest.min_valid,
                                                     manifest.dim_threshold)) {
    const Term source =
        mint_image_iri(map.frame().fips, map.frame().date, vocab.config().instance_base);
    const auto emitted = emit_map(map, source, map_locator(map.frame()), vocab, links);
    map_triples.insert(map_triples.end(), emitted.begin(), emitted.end());
    ++report.maps;
  }

  canonicalize(record_triples);
  canonicalize(image_triples);
  canonicalize(map_triples);
  report.schema_triples = schema.size();
  report.record_triples = record_triples.size();
  report.image_triples = image_triples.size();
  report.map_triples = map_triples.size();

  fs::create_directories(manifest.out_dir);
  const turtle::PrefixMap prefixes = vocab.prefixes();
  write_text_file(manifest.out_dir / "schema.ttl", turtle::serialize(schema, prefixes));
  write_text_file(manifest.out_dir / "outagerecords.ttl",
                  turtle::serialize(record_triples, prefixes));
  write_text_file(manifest.out_dir / "ntlimages.ttl", turtle::serialize(image_triples, prefixes));
  write_text_file(manifest.out_dir / "outagemaps.ttl", turtle::serialize(map_triples, prefixes));
  write_text_file(manifest.out_dir / "build-report.json", report.to_json(manifest));
  return report;
}

KgStats compute_stats(const Store& store, const Vocabulary& vocab) {
  KgStats stats;
  const auto county_pred = store.dictionary().id_of(vocab.onto("representsCounty"));
  std::set<std::uint32_t> image_counties;

  for (const char* name : {"OutageRecord", "NTLImage", "OutageMap"}) {
    ClassStats cs;
    cs.name = name;
    const auto pattern =
        store.to_ids(std::nullopt, vocab.rdf("type"), vocab.onto(name));
    if (pattern.has_value()) {
      for (const IdTriple& t : store.match_ids(*pattern)) {
        ++cs.instances;
        cs.statements += store.count(IdPattern{t.s, std::nullopt, std::nullopt});
        if (std::string_view(name) == "NTLImage" && county_pred.has_value()) {
          for (const IdTriple& link :
               store.match_ids(IdPattern{t.s, *county_pred, std::nullopt})) {
            image_counties.insert(link.o);
          }
        }
      }
    }
    stats.total_instances += cs.instances;
    stats.total_statements += cs.statements;
    stats.classes.push_back(std::move(cs));
  }

  stats.image_counties = image_counties.size();
  if (image_counties.empty()) {
    stats.mean_images_per_county = "n/a";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f",
                  double(stats.classes[1].instances) / double(image_counties.size()));
    stats.mean_images_per_county = buf;
  }
  return stats;
}

namespace {

void write_pgm(std::ostream& out, const OutageMapGrid& map,
               int (*pixel)(PixelState, double)) {
  out << "P2\n" << map.width() << ' ' << map.height() << "\n255\n";
  for (Eigen::Index row = 0; row < map.height(); ++row) {
    for (Eigen::Index col = 0; col < map.width(); ++col) {
      out << pixel(map.state(row, col), map.severity_at(row, col));
      out << (col + 1 < map.width() ? ' ' : '\n');
    }
  }
}

}  // namespace

void write_outage_pgm(std::ostream& out, const OutageMapGrid& map) {
  write_pgm(out, map, [](PixelState state, double severity) {
    return state == PixelState::Severity ? int(std::lround(255.0 * severity)) : 0;
  });
}

void write_state_mask_pgm(std::ostream& out, const OutageMapGrid& map) {
  write_pgm(out, map, [](PixelState state, double) {
    switch (state) {
      case PixelState::Missing: return 0;
      case PixelState::Unlit: return 128;
      case PixelState::Severity: return 255;
    }
    return 0;
  });
}

}  // namespace geooutage
