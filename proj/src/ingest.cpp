#include "geooutage/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "geooutage/datetime.hpp"
#include "geooutage/errors.hpp"

namespace geooutage {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && issp(s.back())) {
    s.pop_back();
  }
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) {
    ++i;
  }
  return s.substr(i);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_double_field(const std::string& token, const char* what) {
  double value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw DataError(std::string("bad ") + what + " value '" + token + "'");
  }
  return value;
}

std::int64_t parse_int_field(const std::string& token, const char* what) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    throw DataError(std::string("bad ") + what + " value '" + token + "'");
  }
  return value;
}

/// Maps each required column name to its position in the header row.
/// Unknown, missing, and duplicate columns are all format errors.
std::vector<std::size_t> resolve_header(const std::vector<std::string>& header,
                                        const std::vector<std::string>& required) {
  std::vector<std::size_t> positions(required.size(), SIZE_MAX);
  for (std::size_t col = 0; col < header.size(); ++col) {
    const auto it = std::find(required.begin(), required.end(), header[col]);
    if (it == required.end()) {
      throw DataError("unknown header column '" + header[col] + "'");
    }
    const std::size_t slot = std::size_t(it - required.begin());
    if (positions[slot] != SIZE_MAX) {
      throw DataError("duplicate header column '" + header[col] + "'");
    }
    positions[slot] = col;
  }
  for (std::size_t slot = 0; slot < required.size(); ++slot) {
    if (positions[slot] == SIZE_MAX) {
      throw DataError("missing header column '" + required[slot] + "'");
    }
  }
  return positions;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  return in;
}

json header_json(const GridFrame& frame) {
  json header;
  header["fips"] = frame.fips.str();
  header["date"] = format_date(frame.date);
  header["height"] = std::int64_t(frame.height);
  header["width"] = std::int64_t(frame.width);
  header["min_lon"] = frame.bbox.min_lon;
  header["min_lat"] = frame.bbox.min_lat;
  header["max_lon"] = frame.bbox.max_lon;
  header["max_lat"] = frame.bbox.max_lat;
  header["cell_size"] = frame.cell_size;
  return header;
}

GridFrame frame_from_header(const json& header) {
  for (const char* key : {"fips", "date", "height", "width", "min_lon", "min_lat", "max_lon",
                          "max_lat", "cell_size"}) {
    if (!header.contains(key)) {
      throw DataError(std::string("grid header is missing key '") + key + "'");
    }
  }
  GridFrame frame{FipsCode::parse(header.at("fips").get<std::string>()),
                  parse_date(header.at("date").get<std::string>()),
                  GeoBox{header.at("min_lon").get<double>(), header.at("min_lat").get<double>(),
                         header.at("max_lon").get<double>(), header.at("max_lat").get<double>()},
                  header.at("cell_size").get<double>(),
                  header.at("height").get<Eigen::Index>(),
                  header.at("width").get<Eigen::Index>()};
  frame.validate();
  return frame;
}

json read_header_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty grid file");
  }
  try {
    json header = json::parse(line);
    if (!header.is_object()) {
      throw DataError("grid header line is not a JSON object");
    }
    return header;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad grid header: ") + e.what());
  }
}

/// Reads frame.height body lines of frame.width cells each and hands every
/// cell token to `assign(row, col, token)`. Rejects short bodies, ragged
/// rows, and trailing non-blank content.
template <typename CellFn>
void read_grid_body(std::istream& in, const GridFrame& frame, CellFn&& assign) {
  std::string line;
  for (Eigen::Index row = 0; row < frame.height; ++row) {
    if (!std::getline(in, line)) {
      throw DataError("grid body ends after " + std::to_string(row) + " of " +
                      std::to_string(frame.height) + " rows");
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (Eigen::Index(cells.size()) != frame.width) {
      throw DataError("grid row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(frame.width));
    }
    for (Eigen::Index col = 0; col < frame.width; ++col) {
      assign(row, col, cells[std::size_t(col)]);
    }
  }
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      throw DataError("trailing content after grid body");
    }
  }
}

std::string format_cell(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace

void CountyRegistry::add(CountyMeta county) {
  if (county.name.empty()) {
    throw DataError("county " + county.fips.str() + " has an empty name");
  }
  if (!county.bbox.valid()) {
    throw DataError("county " + county.fips.str() + " has an invalid bounding box");
  }
  const auto at = std::lower_bound(
      counties_.begin(), counties_.end(), county,
      [](const CountyMeta& a, const CountyMeta& b) { return a.fips < b.fips; });
  if (at != counties_.end() && at->fips == county.fips) {
    throw DataError("duplicate county fips " + county.fips.str());
  }
  counties_.insert(at, std::move(county));
}

const CountyMeta* CountyRegistry::find(const FipsCode& fips) const {
  const auto at = std::lower_bound(
      counties_.begin(), counties_.end(), fips,
      [](const CountyMeta& a, const FipsCode& b) { return a.fips < b; });
  if (at == counties_.end() || !(at->fips == fips)) {
    return nullptr;
  }
  return &*at;
}

CountyRegistry read_county_registry(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("county registry is empty");
  }
  const std::vector<std::size_t> pos = resolve_header(
      split_csv_line(line),
      {"fips", "name", "state", "min_lon", "min_lat", "max_lon", "max_lat"});

  CountyRegistry registry;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 7) {
      throw DataError("registry line " + std::to_string(line_no) + ": expected 7 fields, got " +
                      std::to_string(cells.size()));
    }
    try {
      CountyMeta county{FipsCode::parse(cells[pos[0]]), cells[pos[1]], cells[pos[2]],
                        GeoBox{parse_double_field(cells[pos[3]], "min_lon"),
                               parse_double_field(cells[pos[4]], "min_lat"),
                               parse_double_field(cells[pos[5]], "max_lon"),
                               parse_double_field(cells[pos[6]], "max_lat")}};
      registry.add(std::move(county));
    } catch (const LexicalError& e) {
      throw DataError("registry line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("registry line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return registry;
}

CountyRegistry load_county_registry(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return read_county_registry(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

RecordBatch parse_record_csv(std::istream& in, const CountyRegistry& registry) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("record CSV is empty");
  }
  const std::vector<std::size_t> pos = resolve_header(
      split_csv_line(line), {"fips_code", "county", "state", "customers_out", "run_start_time"});

  RecordBatch batch;
  std::size_t line_no = 1;
  const auto reject = [&](std::size_t at, std::string message) {
    ++batch.report.rows_rejected;
    batch.report.warnings.emplace_back(at, std::move(message));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 5) {
      reject(line_no, "expected 5 fields, got " + std::to_string(cells.size()));
      continue;
    }

    OutageRecordRow row{FipsCode::parse("00000"), cells[pos[1]], cells[pos[2]], 0, {}};
    try {
      row.fips = FipsCode::parse(cells[pos[0]]);
      row.customers_out = parse_int_field(cells[pos[3]], "customers_out");
      row.run_start_time = parse_datetime(cells[pos[4]]);
    } catch (const LexicalError& e) {
      reject(line_no, e.what());
      continue;
    } catch (const DataError& e) {
      reject(line_no, e.what());
      continue;
    }
    if (row.customers_out < 0) {
      reject(line_no, "negative customers_out " + std::to_string(row.customers_out));
      continue;
    }
    if (registry.find(row.fips) == nullptr) {
      reject(line_no, "unknown fips " + row.fips.str());
      continue;
    }
    if (!quarter_hour_aligned(row.run_start_time)) {
      batch.report.warnings.emplace_back(
          line_no, "run_start_time " + format_datetime(row.run_start_time) +
                       " is not on a 15-minute boundary");
    }
    ++batch.report.rows_accepted;
    batch.rows.push_back(std::move(row));
  }
  return batch;
}

RecordBatch load_record_csv(const std::filesystem::path& path, const CountyRegistry& registry) {
  std::ifstream in = open_input(path);
  try {
    return parse_record_csv(in, registry);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

RadianceGrid read_ntl_grid(std::istream& in) {
  const GridFrame frame = frame_from_header(read_header_line(in));
  RadianceMatrix values = RadianceMatrix::Zero(frame.height, frame.width);
  MaskMatrix missing = MaskMatrix::Constant(frame.height, frame.width, false);
  read_grid_body(in, frame, [&](Eigen::Index row, Eigen::Index col, const std::string& cell) {
    if (cell == "NA") {
      missing(row, col) = true;
    } else {
      values(row, col) = parse_double_field(cell, "radiance");
    }
  });
  return RadianceGrid{frame, std::move(values), std::move(missing)};
}

RadianceGrid load_ntl_grid(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return read_ntl_grid(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_ntl_grid(std::ostream& out, const RadianceGrid& grid) {
  out << header_json(grid.frame()).dump() << '\n';
  for (Eigen::Index row = 0; row < grid.height(); ++row) {
    for (Eigen::Index col = 0; col < grid.width(); ++col) {
      if (col > 0) {
        out << ',';
      }
      if (grid.is_missing(row, col)) {
        out << "NA";
      } else {
        out << format_cell(grid.value(row, col));
      }
    }
    out << '\n';
  }
}

void save_ntl_grid(const std::filesystem::path& path, const RadianceGrid& grid) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  write_ntl_grid(out, grid);
}

OutageMapGrid read_map_grid(std::istream& in) {
  const json header = read_header_line(in);
  const GridFrame frame = frame_from_header(header);
  std::string event;
  if (header.contains("event")) {
    event = header.at("event").get<std::string>();
  }
  RadianceMatrix severity = RadianceMatrix::Zero(frame.height, frame.width);
  StateMatrix state =
      StateMatrix::Constant(frame.height, frame.width, std::uint8_t(PixelState::Severity));
  read_grid_body(in, frame, [&](Eigen::Index row, Eigen::Index col, const std::string& cell) {
    if (cell == "NA") {
      state(row, col) = std::uint8_t(PixelState::Missing);
    } else if (cell == "U") {
      state(row, col) = std::uint8_t(PixelState::Unlit);
    } else {
      severity(row, col) = parse_double_field(cell, "severity");
    }
  });
  return OutageMapGrid{frame, std::move(severity), std::move(state), std::move(event)};
}

OutageMapGrid load_map_grid(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return read_map_grid(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_map_grid(std::ostream& out, const OutageMapGrid& map) {
  json header = header_json(map.frame());
  header["event"] = map.event_label();
  out << header.dump() << '\n';
  for (Eigen::Index row = 0; row < map.height(); ++row) {
    for (Eigen::Index col = 0; col < map.width(); ++col) {
      if (col > 0) {
        out << ',';
      }
      switch (map.state(row, col)) {
        case PixelState::Missing:
          out << "NA";
          break;
        case PixelState::Unlit:
          out << 'U';
          break;
        case PixelState::Severity:
          out << format_cell(map.severity_at(row, col));
          break;
      }
    }
    out << '\n';
  }
}

void save_map_grid(const std::filesystem::path& path, const OutageMapGrid& map) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  write_map_grid(out, map);
}

RadianceGrid segment_by_bbox(const RadianceGrid& state_grid, const CountyMeta& county) {
  const GridFrame& frame = state_grid.frame();
  if (!frame.bbox.intersects(county.bbox)) {
    throw DataError("county " + county.fips.str() + " outside raster");
  }

  const auto inside = [](double coord, double lo, double hi) { return lo <= coord && coord < hi; };

  Eigen::Index first_row = -1, last_row = -1, first_col = -1, last_col = -1;
  for (Eigen::Index row = 0; row < frame.height; ++row) {
    if (inside(frame.center_lat(row), county.bbox.min_lat, county.bbox.max_lat)) {
      if (first_row < 0) {
        first_row = row;
      }
      last_row = row;
    }
  }
  for (Eigen::Index col = 0; col < frame.width; ++col) {
    if (inside(frame.center_lon(col), county.bbox.min_lon, county.bbox.max_lon)) {
      if (first_col < 0) {
        first_col = col;
      }
      last_col = col;
    }
  }
  if (first_row < 0 || first_col < 0) {
    throw DataError("county " + county.fips.str() + " outside raster");
  }

  const Eigen::Index rows = last_row - first_row + 1;
  const Eigen::Index cols = last_col - first_col + 1;
  GridFrame clipped{county.fips,
                    frame.date,
                    GeoBox{frame.bbox.min_lon + double(first_col) * frame.cell_size,
                           frame.bbox.max_lat - double(last_row + 1) * frame.cell_size,
                           frame.bbox.min_lon + double(last_col + 1) * frame.cell_size,
                           frame.bbox.max_lat - double(first_row) * frame.cell_size},
                    frame.cell_size,
                    rows,
                    cols};
  return RadianceGrid{std::move(clipped),
                      state_grid.values().block(first_row, first_col, rows, cols),
                      state_grid.missing().block(first_row, first_col, rows, cols)};
}

}  // namespace geooutage
