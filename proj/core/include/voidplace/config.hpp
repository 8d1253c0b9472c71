#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "voidplace/gp.hpp"
#include "voidplace/grid.hpp"
#include "voidplace/ingest.hpp"
#include "voidplace/sensor_model.hpp"

namespace voidplace {

/// Gaussian bump added to the synthetic log-intensity profile.
struct SyntheticBump {
  double center_m;
  double width_m;
  double amplitude;
};

/// Parametric synthetic log-intensity: log_offset plus Gaussian bumps.
struct SyntheticSpec {
  double log_offset = 0.0;
  std::vector<SyntheticBump> bumps;

  Eigen::VectorXd log_field(const Grid1D& grid) const;
};

/// One JSON document drives every command. The seed is mandatory (either
/// here or via --seed); there is no nondeterministic default.
class RunConfig {
 public:
  static RunConfig load(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j);

  /// Full echo including defaulted fields, for provenance in every report.
  nlohmann::json to_json() const;

  /// Seed after CLI overrides; throws ConfigError when absent.
  std::uint64_t required_seed() const;

  Grid1D grid;
  MaternParams matern;
  SensorParams sensor;
  double jitter = 0.0;
  double prior_mean = 0.0;
  double horizon_ratio = 1.0;
  int n_intensity_samples = 10000;
  int m_max = 100;
  std::optional<std::uint64_t> seed;
  double enumeration_cap = 5e6;
  int workers = 1;
  std::string out_dir = "out";
  DedupePolicy dedupe = DedupePolicy::PerVesselPerCell;
  std::optional<SegmentSpec> segment;
  std::optional<SyntheticSpec> synthetic;

 private:
  RunConfig(Grid1D g, MaternParams m, SensorParams s)
      : grid(g), matern(m), sensor(s) {}
};

std::string dedupe_to_string(DedupePolicy policy);
DedupePolicy dedupe_from_string(const std::string& text);

}  // namespace voidplace
