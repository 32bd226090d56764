#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "aisdet/records.hpp"

namespace aisdet {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SogUnit { mps, knots };

// IMM filter parameters. The motion/measurement equations are fixed; every
// noise figure here is an engineering default, overridable from the config
// file.
struct ImmConfig {
  double meas_sigma_pos_m = 10.0;
  double meas_sigma_sog = 0.5;
  double meas_sigma_cog_deg = 5.0;
  double process_sigma_accel = 0.5;          // m/s^2, shared by both models
  double process_sigma_yaw_accel_cv = 0.01;  // rad/s^2
  double process_sigma_yaw_accel_ctrv = 0.05;
  std::array<std::array<double, 2>, 2> mode_transition{{{0.95, 0.05}, {0.05, 0.95}}};
  std::array<double, 2> initial_mode_probs{0.5, 0.5};
  double ctrv_yaw_epsilon = 1e-4;  // rad/s, below this CTRV falls back to CV
  double reinit_gap_s = 600.0;     // reinitialize instead of predicting across gaps
  double init_sigma_vel = 2.0;
  double init_sigma_heading_deg = 10.0;
  double init_sigma_yaw_rate = 0.05;

  void validate() const;
};

// Every stage threshold plus the artifact-level knobs, serializable as one
// JSON document. Unknown keys are rejected.
struct PipelineConfig {
  // preprocessing
  double d_scatter = 116.9;  // m, same-timestamp position scattering limit

  // stage 1: communication-integrity diagnostics
  double eps_space_dup = 3600.0;        // m
  double eps_time_dup = 900.0;          // s
  double eps_speed_dup = 2.0;           // m/s
  double eps_heading_dup = 30.0;        // deg
  double subtrack_min_duration = 600.0; // s

  // stage 2: anomaly cue generation
  double v_th = 30.0;         // m/s physical speed limit
  double kappa = 3.0;         // median-gap multiplier
  double t_min = 60.0;        // s, threshold floor
  double sog_normal_min = 1.0;

  // stage 3: spatiotemporal clustering & categorization
  double eps_s = 10'000.0;    // m
  double eps_t = 1800.0;      // s
  int min_pts = 5;
  double th_group = 0.60;
  int min_event_mmsis = 5;
  double t_single_coastal = 120.0;   // s
  double t_single_offshore = 900.0;  // s
  double persistence_day_fraction = 0.8;
  double coastal_distance_m = 10'000.0;

  SogUnit sog_unit = SogUnit::mps;
  double max_parse_error_ratio = 0.01;
  int workers = 1;
  std::string coastline_path;  // optional GeoJSON polygon file; empty = all coastal

  ImmConfig imm;
  BoundingBox bbox{32.0, 37.0, 123.0, 133.0};

  void validate() const;

  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig from_json_text(const std::string& text);
  static PipelineConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

}  // namespace aisdet
