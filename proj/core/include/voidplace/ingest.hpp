#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "voidplace/grid.hpp"
#include "voidplace/lgcp_fit.hpp"

namespace voidplace {

/// Meters per degree of latitude used for the 1-D projection.
inline constexpr double kMetersPerDegreeLatitude = 111320.0;

/// One AIS-style position report.
struct EventRecord {
  std::int64_t timestamp_utc = 0;  ///< epoch seconds
  double lat = 0.0;
  double lon = 0.0;
  std::string vessel_id;           ///< MMSI when present, else empty
  std::string vessel_type;         ///< optional
};

/// Geometry and time window of the 1-D segment events are projected onto.
struct SegmentSpec {
  double lat_min;
  double lat_max;
  double lon_center;
  double corridor_halfwidth;       ///< degrees of longitude accepted
  std::int64_t window_start_utc;   ///< inclusive
  std::int64_t window_end_utc;     ///< exclusive

  SegmentSpec(double lat_min, double lat_max, double lon_center,
              double corridor_halfwidth, std::int64_t window_start_utc,
              std::int64_t window_end_utc);

  /// Segment length in meters under the latitude-only projection.
  double length_m() const {
    return (lat_max - lat_min) * kMetersPerDegreeLatitude;
  }
};

struct LoadResult {
  std::vector<EventRecord> records;
  std::size_t skipped_malformed = 0;  ///< unparseable rows
  std::size_t filtered_out = 0;       ///< parseable but outside the segment/window
};

/// Reads an AIS-schema CSV (LAT, LON, BaseDateTime required; MMSI and
/// VesselType optional, all matched case-insensitively) and keeps records
/// inside the latitude range, longitude corridor, and time window.
/// Malformed rows are counted, not fatal; missing required columns or an
/// unreadable file are.
LoadResult load_events(const std::string& path, const SegmentSpec& spec);

enum class DedupePolicy {
  None,             ///< every ping counts
  PerVesselPerCell  ///< a vessel increments a given cell at most once
};

struct BinResult {
  EventCounts counts;
  std::size_t out_of_range = 0;  ///< events mapping outside the grid
};

/// Projects events to the segment (s = (lat - lat_min) * 111320, cell =
/// floor(s / ds)) and accumulates counts. Records with an empty vessel id
/// cannot be deduplicated and always count. The grid length must match the
/// segment's projected length to within one cell.
BinResult bin_events(const std::vector<EventRecord>& events,
                     const SegmentSpec& spec, const Grid1D& grid,
                     DedupePolicy dedupe);

/// Synthetic counts from a known log-intensity field:
/// counts_i ~ Poisson(exp(f_i) * ds), deterministically from the seed.
EventCounts synth_generate(const Eigen::VectorXd& true_log_field,
                           const Grid1D& grid, std::uint64_t seed);

/// Parses "YYYY-MM-DDTHH:MM:SS" (UTC) to epoch seconds; nullopt when the
/// text does not match.
std::optional<std::int64_t> parse_utc_timestamp(std::string_view text);

/// Inverse of parse_utc_timestamp.
std::string format_utc_timestamp(std::int64_t epoch_seconds);

}  // namespace voidplace
