#include "voidplace/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "voidplace/rng.hpp"

namespace voidplace {

SegmentSpec::SegmentSpec(double lat_min_in, double lat_max_in,
                         double lon_center_in, double corridor_halfwidth_in,
                         std::int64_t window_start_in, std::int64_t window_end_in)
    : lat_min(lat_min_in), lat_max(lat_max_in), lon_center(lon_center_in),
      corridor_halfwidth(corridor_halfwidth_in),
      window_start_utc(window_start_in), window_end_utc(window_end_in) {
  if (!(lat_min < lat_max)) {
    throw std::invalid_argument("SegmentSpec: lat_min must be < lat_max");
  }
  if (!(corridor_halfwidth > 0.0)) {
    throw std::invalid_argument("SegmentSpec: corridor_halfwidth must be > 0");
  }
  if (!(window_start_utc < window_end_utc)) {
    throw std::invalid_argument("SegmentSpec: window start must precede end");
  }
}

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30,
                                         31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[m - 1];
}

// Splits one CSV record; double quotes wrap fields, doubled quotes escape.
std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

}  // namespace

std::optional<std::int64_t> parse_utc_timestamp(std::string_view text) {
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  const std::string buf(text);
  if (std::sscanf(buf.c_str(), "%4d-%2u-%2u%c%2u:%2u:%2u", &y, &mo, &d, &sep,
                  &h, &mi, &s) != 7) {
    return std::nullopt;
  }
  if (sep != 'T') return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return std::nullopt;
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_utc_timestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  // civil_from_days, inverse of the algorithm above.
  const std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<long long>(y + (m <= 2)), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem % 3600) / 60),
                static_cast<long long>(rem % 60));
  return buf;
}

LoadResult load_events(const std::string& path, const SegmentSpec& spec) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("load_events: cannot open " + path);
  }

  std::string line;
  if (!std::getline(file, line)) {
    throw std::runtime_error("load_events: empty file " + path);
  }
  const std::vector<std::string> header = split_csv_row(line);
  int col_lat = -1, col_lon = -1, col_time = -1, col_id = -1, col_type = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    const std::string name = to_upper(header[static_cast<std::size_t>(i)]);
    if (name == "LAT") col_lat = i;
    else if (name == "LON") col_lon = i;
    else if (name == "BASEDATETIME") col_time = i;
    else if (name == "MMSI") col_id = i;
    else if (name == "VESSELTYPE") col_type = i;
  }
  if (col_lat < 0 || col_lon < 0 || col_time < 0) {
    throw std::runtime_error(
        "load_events: header must contain LAT, LON, and BaseDateTime columns");
  }
  const int needed = std::max({col_lat, col_lon, col_time});

  LoadResult result;
  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_row(line);
    if (static_cast<int>(fields.size()) <= needed) {
      ++result.skipped_malformed;
      continue;
    }
    EventRecord rec;
    const auto ts = parse_utc_timestamp(fields[static_cast<std::size_t>(col_time)]);
    if (!ts || !parse_double(fields[static_cast<std::size_t>(col_lat)], rec.lat) ||
        !parse_double(fields[static_cast<std::size_t>(col_lon)], rec.lon) ||
        rec.lat < -90.0 || rec.lat > 90.0 || rec.lon < -180.0 || rec.lon > 180.0) {
      ++result.skipped_malformed;
      continue;
    }
    rec.timestamp_utc = *ts;
    if (col_id >= 0 && col_id < static_cast<int>(fields.size())) {
      rec.vessel_id = fields[static_cast<std::size_t>(col_id)];
    }
    if (col_type >= 0 && col_type < static_cast<int>(fields.size())) {
      rec.vessel_type = fields[static_cast<std::size_t>(col_type)];
    }

    const bool inside =
        rec.lat >= spec.lat_min && rec.lat <= spec.lat_max &&
        std::fabs(rec.lon - spec.lon_center) <= spec.corridor_halfwidth &&
        rec.timestamp_utc >= spec.window_start_utc &&
        rec.timestamp_utc < spec.window_end_utc;
    if (!inside) {
      ++result.filtered_out;
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

BinResult bin_events(const std::vector<EventRecord>& events,
                     const SegmentSpec& spec, const Grid1D& grid,
                     DedupePolicy dedupe) {
  if (std::fabs(grid.length_m() - spec.length_m()) > grid.spacing_m()) {
    throw std::invalid_argument(
        "bin_events: grid length does not match the projected segment length");
  }

  Eigen::VectorXi counts = Eigen::VectorXi::Zero(grid.n_cells());
  std::unordered_set<std::string> seen;
  std::size_t out_of_range = 0;

  for (const EventRecord& rec : events) {
    const double s = (rec.lat - spec.lat_min) * kMetersPerDegreeLatitude;
    const double cell_f = std::floor(s / grid.spacing_m());
    if (cell_f < 0.0 || cell_f >= static_cast<double>(grid.n_cells())) {
      ++out_of_range;
      continue;
    }
    const int cell = static_cast<int>(cell_f);
    if (dedupe == DedupePolicy::PerVesselPerCell && !rec.vessel_id.empty()) {
      std::string key = rec.vessel_id;
      key.push_back('\0');
      key += std::to_string(cell);
      if (!seen.insert(std::move(key)).second) continue;
    }
    ++counts[cell];
  }

  const double span_days =
      static_cast<double>(spec.window_end_utc - spec.window_start_utc) / 86400.0;
  return BinResult{EventCounts(grid, std::move(counts), span_days),
                   out_of_range};
}

EventCounts synth_generate(const Eigen::VectorXd& true_log_field,
                           const Grid1D& grid, std::uint64_t seed) {
  if (true_log_field.size() != grid.n_cells()) {
    throw std::invalid_argument("synth_generate: field length mismatch");
  }
  Rng rng(seed);
  Eigen::VectorXi counts(grid.n_cells());
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double mean = std::exp(true_log_field[i]) * grid.spacing_m();
    counts[i] = static_cast<int>(rng.next_poisson(mean));
  }
  return EventCounts(grid, std::move(counts), 1.0);
}

}  // namespace voidplace
