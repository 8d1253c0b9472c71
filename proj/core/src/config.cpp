#include "voidplace/config.hpp"

#include <cmath>
#include <fstream>

#include "voidplace/errors.hpp"

namespace voidplace {

using nlohmann::json;

Eigen::VectorXd SyntheticSpec::log_field(const Grid1D& grid) const {
  Eigen::VectorXd f = Eigen::VectorXd::Constant(grid.n_cells(), log_offset);
  for (const SyntheticBump& bump : bumps) {
    for (int i = 0; i < grid.n_cells(); ++i) {
      const double d = grid.cell_center(i) - bump.center_m;
      f[i] += bump.amplitude *
              std::exp(-(d * d) / (2.0 * bump.width_m * bump.width_m));
    }
  }
  return f;
}

std::string dedupe_to_string(DedupePolicy policy) {
  return policy == DedupePolicy::None ? "none" : "per-vessel-per-cell";
}

DedupePolicy dedupe_from_string(const std::string& text) {
  if (text == "none") return DedupePolicy::None;
  if (text == "per-vessel-per-cell") return DedupePolicy::PerVesselPerCell;
  throw ConfigError("unknown dedupe policy \"" + text +
                    "\" (expected \"none\" or \"per-vessel-per-cell\")");
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("cannot open config file " + path);
  }
  json j;
  try {
    file >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

RunConfig RunConfig::from_json(const json& j) {
  try {
    const json& jg = j.at("grid");
    Grid1D grid(jg.value("origin_m", 0.0), jg.at("spacing_m").get<double>(),
                jg.at("n_cells").get<int>());

    const json& jm = j.at("matern");
    MaternParams matern(jm.at("sigma2").get<double>(),
                        jm.value("zeta", 1.5),
                        jm.at("beta_m").get<double>());

    const json& js = j.at("sensor");
    SensorParams sensor(js.at("rho").get<double>(),
                        js.at("sigma_l").get<double>());

    RunConfig config(grid, matern, sensor);
    config.jitter = jm.value("jitter", 0.0);
    config.prior_mean = j.value("prior_mean", 0.0);
    config.horizon_ratio = j.value("horizon_ratio", 1.0);
    config.n_intensity_samples = j.value("n_intensity_samples", 10000);
    config.m_max = j.value("m_max", 100);
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    config.enumeration_cap = j.value("enumeration_cap", 5e6);
    config.workers = j.value("workers", 1);
    config.out_dir = j.value("out_dir", std::string("out"));
    config.dedupe =
        dedupe_from_string(j.value("dedupe", std::string("per-vessel-per-cell")));

    if (j.contains("segment")) {
      const json& seg = j.at("segment");
      const auto start =
          parse_utc_timestamp(seg.at("window_start").get<std::string>());
      const auto end =
          parse_utc_timestamp(seg.at("window_end").get<std::string>());
      if (!start || !end) {
        throw ConfigError(
            "segment window timestamps must be YYYY-MM-DDTHH:MM:SS");
      }
      config.segment.emplace(seg.at("lat_min").get<double>(),
                             seg.at("lat_max").get<double>(),
                             seg.at("lon_center").get<double>(),
                             seg.at("corridor_halfwidth").get<double>(),
                             *start, *end);
    }

    if (j.contains("synthetic")) {
      const json& syn = j.at("synthetic");
      SyntheticSpec spec;
      spec.log_offset = syn.value("log_offset", 0.0);
      if (syn.contains("bumps")) {
        for (const json& jb : syn.at("bumps")) {
          spec.bumps.push_back(SyntheticBump{jb.at("center_m").get<double>(),
                                             jb.at("width_m").get<double>(),
                                             jb.at("amplitude").get<double>()});
          if (!(spec.bumps.back().width_m > 0.0)) {
            throw ConfigError("synthetic bump width_m must be positive");
          }
        }
      }
      config.synthetic = std::move(spec);
    }

    if (config.n_intensity_samples < 2) {
      throw ConfigError("n_intensity_samples must be at least 2");
    }
    if (config.m_max < 0) throw ConfigError("m_max must be >= 0");
    if (config.workers < 1) throw ConfigError("workers must be >= 1");
    if (!(config.enumeration_cap > 0)) {
      throw ConfigError("enumeration_cap must be positive");
    }
    if (config.jitter < 0) throw ConfigError("jitter must be >= 0");
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

json RunConfig::to_json() const {
  // Echo of everything that determines results. Execution knobs (workers,
  // out_dir) are excluded: outputs must be byte-identical across them.
  json j;
  j["grid"] = {{"origin_m", grid.origin_m()},
               {"spacing_m", grid.spacing_m()},
               {"n_cells", grid.n_cells()}};
  j["matern"] = {{"sigma2", matern.sigma2},
                 {"zeta", matern.zeta},
                 {"beta_m", matern.beta_m},
                 {"jitter", jitter}};
  j["sensor"] = {{"rho", sensor.rho}, {"sigma_l", sensor.sigma_l}};
  j["prior_mean"] = prior_mean;
  j["horizon_ratio"] = horizon_ratio;
  j["n_intensity_samples"] = n_intensity_samples;
  j["m_max"] = m_max;
  if (seed) j["seed"] = *seed;
  j["enumeration_cap"] = enumeration_cap;
  j["dedupe"] = dedupe_to_string(dedupe);
  if (segment) {
    j["segment"] = {{"lat_min", segment->lat_min},
                    {"lat_max", segment->lat_max},
                    {"lon_center", segment->lon_center},
                    {"corridor_halfwidth", segment->corridor_halfwidth},
                    {"window_start", format_utc_timestamp(segment->window_start_utc)},
                    {"window_end", format_utc_timestamp(segment->window_end_utc)}};
  }
  if (synthetic) {
    json bumps = json::array();
    for (const SyntheticBump& bump : synthetic->bumps) {
      bumps.push_back({{"center_m", bump.center_m},
                       {"width_m", bump.width_m},
                       {"amplitude", bump.amplitude}});
    }
    j["synthetic"] = {{"log_offset", synthetic->log_offset}, {"bumps", bumps}};
  }
  return j;
}

std::uint64_t RunConfig::required_seed() const {
  if (!seed) {
    throw ConfigError("seed is required (set \"seed\" in the config or pass --seed)");
  }
  return *seed;
}

}  // namespace voidplace
