#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geooutage/ingest.hpp"
#include "geooutage/pipeline.hpp"
#include "geooutage/query.hpp"
#include "geooutage/store.hpp"
#include "geooutage/turtle.hpp"
#include "geooutage/vocab.hpp"

namespace fs = std::filesystem;
using namespace geooutage;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Concatenates the triples of several Turtle dumps; a syntax error is
/// reported with the offending file's name.
std::vector<Triple> load_dumps(const std::vector<std::string>& files) {
  std::vector<Triple> triples;
  for (const std::string& file : files) {
    try {
      turtle::ParseResult result = turtle::parse(slurp(file));
      triples.insert(triples.end(), std::make_move_iterator(result.triples.begin()),
                     std::make_move_iterator(result.triples.end()));
    } catch (const ParseError& e) {
      throw DataError(file + ": " + e.what());
    }
  }
  return triples;
}

Vocabulary make_vocab(const std::string& config_file) {
  return Vocabulary{config_file.empty() ? KgConfig{} : KgConfig::load(config_file)};
}

std::vector<EventSpec> parse_events(const std::vector<std::string>& specs) {
  std::vector<EventSpec> events;
  events.reserve(specs.size());
  for (const std::string& spec : specs) {
    events.push_back(EventSpec::parse(spec));
  }
  return events;
}

std::string grid_basename(const GridFrame& frame, const char* suffix) {
  return frame.fips.str() + "." + format_date(frame.date) + suffix;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) {
    return text;
  }
  std::string quoted = "\"";
  for (const char c : text) {
    quoted += c;
    if (c == '"') {
      quoted += '"';
    }
  }
  quoted += '"';
  return quoted;
}

void print_csv_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      std::cout << ',';
    }
    std::cout << csv_field(fields[i]);
  }
  std::cout << '\n';
}

int run_ingest_records(const std::string& records, const std::string& counties) {
  const CountyRegistry registry = load_county_registry(counties);
  const RecordBatch batch = load_record_csv(records, registry);
  for (const auto& [line, message] : batch.report.warnings) {
    std::cerr << records << ":" << line << ": " << message << "\n";
  }
  std::cout << "accepted " << batch.report.rows_accepted << " rows, rejected "
            << batch.report.rows_rejected << "\n";
  return 0;
}

int run_ingest_ntl_validate(const std::string& ntl_dir) {
  const fs::path root = ntl_dir;
  const std::vector<fs::path> files = list_ntl_files(root);
  std::size_t failures = 0;
  for (const fs::path& path : files) {
    const std::string name = path.lexically_relative(root).generic_string();
    try {
      const RadianceGrid grid = load_ntl_grid(path);
      std::cout << name << ": fips=" << grid.frame().fips.str()
                << " date=" << format_date(grid.frame().date) << " size=" << grid.height() << "x"
                << grid.width() << " missing=" << grid.missing().count() << "\n";
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << "\n";
      ++failures;
    }
  }
  std::cout << files.size() - failures << " of " << files.size() << " grid files valid\n";
  return failures == 0 ? 0 : 1;
}

int run_ingest_ntl_segment(const std::string& statewide, const std::string& counties,
                           const std::string& out) {
  const CountyRegistry registry = load_county_registry(counties);
  const RadianceGrid state_grid = load_ntl_grid(statewide);
  fs::create_directories(out);
  std::size_t written = 0;
  for (const CountyMeta& county : registry.counties()) {
    try {
      const RadianceGrid clipped = segment_by_bbox(state_grid, county);
      save_ntl_grid(fs::path(out) / grid_basename(clipped.frame(), ".ntl.csv"), clipped);
      ++written;
    } catch (const DataError& e) {
      std::cerr << county.fips.str() << " " << county.name << ": " << e.what() << "\n";
    }
  }
  std::cout << "wrote " << written << " of " << registry.size() << " county grids to " << out
            << "\n";
  return 0;
}

int run_outage_maps(const std::string& ntl_dir, const std::vector<EventSpec>& events,
                    const std::string& out, int window_days, int min_valid,
                    double dim_threshold) {
  if (window_days < min_valid) {
    throw DataError("a " + std::to_string(window_days) + "-day window cannot contain the required " +
                    std::to_string(min_valid) + " nights");
  }
  std::vector<RadianceGrid> grids;
  for (const fs::path& path : list_ntl_files(ntl_dir)) {
    grids.push_back(load_ntl_grid(path));
  }
  const std::vector<OutageMapGrid> maps =
      derive_outage_maps(grids, events, window_days, min_valid, dim_threshold);
  fs::create_directories(out);
  for (const OutageMapGrid& map : maps) {
    save_map_grid(fs::path(out) / grid_basename(map.frame(), ".map.csv"), map);
  }
  std::cout << "derived " << maps.size() << " outage maps from " << grids.size() << " grids\n";
  return 0;
}

int run_build_cmd(const BuildManifest& manifest) {
  const BuildReport report = run_build(manifest);
  for (const auto& [line, message] : report.record_ingest.warnings) {
    std::cerr << manifest.records_csv.string() << ":" << line << ": " << message << "\n";
  }
  std::cout << "counties: " << report.counties << "\n"
            << "records: " << report.records << " accepted, " << report.record_ingest.rows_rejected
            << " rejected\n"
            << "images: " << report.images << "\n"
            << "outage maps: " << report.maps << "\n"
            << "triples: schema=" << report.schema_triples << " records=" << report.record_triples
            << " images=" << report.image_triples << " maps=" << report.map_triples << "\n"
            << "output: " << manifest.out_dir.string() << "\n";
  return 0;
}

int run_stats(const std::vector<std::string>& files, const std::string& config_file) {
  const Vocabulary vocab = make_vocab(config_file);
  const Store store = Store::load(load_dumps(files));
  const KgStats stats = compute_stats(store, vocab);
  std::printf("%-14s %10s %12s\n", "class", "instances", "statements");
  for (const ClassStats& row : stats.classes) {
    std::printf("%-14s %10zu %12zu\n", row.name.c_str(), row.instances, row.statements);
  }
  std::printf("%-14s %10zu %12zu\n", "total", stats.total_instances, stats.total_statements);
  std::printf("NTLImage mean per county: %s (%zu counties)\n", stats.mean_images_per_county.c_str(),
              stats.image_counties);
  return 0;
}

int run_query(const std::string& query_file, const std::vector<std::string>& files) {
  Query query;
  try {
    query = parse_query(slurp(query_file));
  } catch (const ParseError& e) {
    std::cerr << query_file << ": " << e.what() << "\n";
    return 2;
  } catch (const SemanticError& e) {
    std::cerr << query_file << ": " << e.what() << "\n";
    return 2;
  }
  const Store store = Store::load(load_dumps(files));
  const SolutionTable table = evaluate(query, store);
  print_csv_row(table.variables);
  std::vector<std::string> fields(table.variables.size());
  for (const std::vector<Term>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      fields[i] = row[i].text();
    }
    print_csv_row(fields);
  }
  return 0;
}

int run_export_map(const std::string& map_file, const std::string& out) {
  const OutageMapGrid map = load_map_grid(map_file);
  const fs::path pgm_path = out;
  fs::path mask_path = pgm_path;
  mask_path.replace_extension(".mask.pgm");

  std::ofstream pgm(pgm_path, std::ios::binary);
  if (!pgm) {
    throw DataError("cannot open " + pgm_path.string());
  }
  write_outage_pgm(pgm, map);
  std::ofstream mask(mask_path, std::ios::binary);
  if (!mask) {
    throw DataError("cannot open " + mask_path.string());
  }
  write_state_mask_pgm(mask, map);
  if (!pgm.good() || !mask.good()) {
    throw DataError("failed writing " + pgm_path.string());
  }
  std::cout << "wrote " << pgm_path.string() << " and " << mask_path.string() << "\n";
  return 0;
}

/// Rejects a malformed --event value at argument-parsing time so it
/// surfaces as a usage error, not a data error.
std::string check_event_spec(const std::string& value) {
  try {
    EventSpec::parse(value);
    return {};
  } catch (const std::exception& e) {
    return e.what();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power-outage knowledge graph toolchain"};
  app.require_subcommand(1);

  std::string records_csv;
  std::string counties_csv;
  std::string ntl_dir;
  std::string ntl_file;
  std::string config_file;
  std::string out_arg;
  std::string query_file;
  std::string map_file;
  std::vector<std::string> event_args;
  std::vector<std::string> ttl_files;
  int window_days = kBaselineWindowDays;
  int min_valid = kMinValidNights;
  double dim_threshold = kDimThresholdRadiance;

  CLI::App* ingest_records =
      app.add_subcommand("ingest-records", "Parse an outage-record CSV and report acceptance");
  ingest_records->add_option("--records", records_csv, "outage-record CSV")->required();
  ingest_records->add_option("--counties", counties_csv, "county registry CSV")->required();

  CLI::App* ingest_ntl = app.add_subcommand(
      "ingest-ntl", "Validate a directory of county-night grids, or clip a statewide raster");
  CLI::Option* dir_opt = ingest_ntl->add_option("--ntl-dir", ntl_dir, "directory of *.ntl.csv");
  CLI::Option* file_opt =
      ingest_ntl->add_option("--ntl", ntl_file, "statewide raster to clip per county");
  CLI::Option* seg_counties =
      ingest_ntl->add_option("--counties", counties_csv, "county registry CSV");
  CLI::Option* seg_out = ingest_ntl->add_option("--out", out_arg, "output directory");
  dir_opt->excludes(file_opt);
  file_opt->needs(seg_counties);
  file_opt->needs(seg_out);

  CLI::App* outage_maps =
      app.add_subcommand("outage-maps", "Derive severity maps for event windows");
  outage_maps->add_option("--ntl-dir", ntl_dir, "directory of *.ntl.csv")->required();
  outage_maps->add_option("--event", event_args, "event as LABEL:YYYY-MM-DD")
      ->required()
      ->check(CLI::Validator(check_event_spec, "EVENT"));
  outage_maps->add_option("--out", out_arg, "output directory")->required();
  outage_maps->add_option("--window-days", window_days, "baseline window length")
      ->check(CLI::PositiveNumber);
  outage_maps->add_option("--min-valid", min_valid, "baseline nights required per pixel")
      ->check(CLI::NonNegativeNumber);
  outage_maps->add_option("--dim-threshold", dim_threshold, "unlit-pixel radiance floor")
      ->check(CLI::NonNegativeNumber);

  CLI::App* build = app.add_subcommand("build", "Run the full pipeline and dump the graph");
  build->add_option("--counties", counties_csv, "county registry CSV")->required();
  build->add_option("--records", records_csv, "outage-record CSV");
  build->add_option("--ntl-dir", ntl_dir, "directory of *.ntl.csv");
  build->add_option("--config", config_file, "key=value namespace config");
  build->add_option("--out", out_arg, "output directory")->required();
  build->add_option("--event", event_args, "event as LABEL:YYYY-MM-DD")
      ->check(CLI::Validator(check_event_spec, "EVENT"));
  build->add_option("--window-days", window_days, "baseline window length");
  build->add_option("--min-valid", min_valid, "baseline nights required per pixel");
  build->add_option("--dim-threshold", dim_threshold, "unlit-pixel radiance floor");

  CLI::App* stats = app.add_subcommand("stats", "Per-class instance and statement counts");
  stats->add_option("files", ttl_files, "Turtle dumps")->required();
  stats->add_option("--config", config_file, "key=value namespace config");

  CLI::App* query = app.add_subcommand("query", "Evaluate a query file against Turtle dumps");
  query->add_option("--query", query_file, "query file")->required();
  query->add_option("files", ttl_files, "Turtle dumps")->required();

  CLI::App* export_map = app.add_subcommand("export-map", "Render an outage map file as PGM");
  export_map->add_option("--map", map_file, "outage map grid file")->required();
  export_map->add_option("--out", out_arg, "output PGM path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest_records->parsed()) {
      return run_ingest_records(records_csv, counties_csv);
    }
    if (ingest_ntl->parsed()) {
      if (!ntl_dir.empty()) {
        return run_ingest_ntl_validate(ntl_dir);
      }
      if (!ntl_file.empty()) {
        return run_ingest_ntl_segment(ntl_file, counties_csv, out_arg);
      }
      std::cerr << "ingest-ntl requires either --ntl-dir or --ntl\n";
      return 2;
    }
    if (outage_maps->parsed()) {
      return run_outage_maps(ntl_dir, parse_events(event_args), out_arg, window_days, min_valid,
                             dim_threshold);
    }
    if (build->parsed()) {
      BuildManifest manifest;
      manifest.counties_csv = counties_csv;
      manifest.records_csv = records_csv;
      manifest.ntl_dir = ntl_dir;
      manifest.config_file = config_file;
      manifest.out_dir = out_arg;
      manifest.events = parse_events(event_args);
      manifest.window_days = window_days;
      manifest.min_valid = min_valid;
      manifest.dim_threshold = dim_threshold;
      return run_build_cmd(manifest);
    }
    if (stats->parsed()) {
      return run_stats(ttl_files, config_file);
    }
    if (query->parsed()) {
      return run_query(query_file, ttl_files);
    }
    if (export_map->parsed()) {
      return run_export_map(map_file, out_arg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
