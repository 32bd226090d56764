#include "aisdet/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace aisdet {

namespace {

using nlohmann::json;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be strictly positive");
}

// Reads j[key] into out when present, tracking consumed keys.
template <typename T>
void take(const json& j, std::set<std::string>& seen, const char* key, T& out) {
  seen.insert(key);
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
  }
}

void reject_unknown(const json& j, const std::set<std::string>& seen, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!seen.count(it.key())) {
      throw ConfigError(std::string("unknown config key '") + it.key() + "' in " + where);
    }
  }
}

}  // namespace

void ImmConfig::validate() const {
  require_positive(meas_sigma_pos_m, "imm.meas_sigma_pos_m");
  require_positive(meas_sigma_sog, "imm.meas_sigma_sog");
  require_positive(meas_sigma_cog_deg, "imm.meas_sigma_cog_deg");
  require_positive(process_sigma_accel, "imm.process_sigma_accel");
  require_positive(process_sigma_yaw_accel_cv, "imm.process_sigma_yaw_accel_cv");
  require_positive(process_sigma_yaw_accel_ctrv, "imm.process_sigma_yaw_accel_ctrv");
  require_positive(ctrv_yaw_epsilon, "imm.ctrv_yaw_epsilon");
  require_positive(reinit_gap_s, "imm.reinit_gap_s");
  require_positive(init_sigma_vel, "imm.init_sigma_vel");
  require_positive(init_sigma_heading_deg, "imm.init_sigma_heading_deg");
  require_positive(init_sigma_yaw_rate, "imm.init_sigma_yaw_rate");
  for (int i = 0; i < 2; ++i) {
    double row = 0.0;
    for (int k = 0; k < 2; ++k) {
      if (mode_transition[i][k] < 0.0) throw ConfigError("imm.mode_transition entries must be >= 0");
      row += mode_transition[i][k];
    }
    if (std::abs(row - 1.0) > 1e-9) throw ConfigError("imm.mode_transition rows must sum to 1");
  }
  const double mu_sum = initial_mode_probs[0] + initial_mode_probs[1];
  if (initial_mode_probs[0] < 0.0 || initial_mode_probs[1] < 0.0 || std::abs(mu_sum - 1.0) > 1e-9) {
    throw ConfigError("imm.initial_mode_probs must be non-negative and sum to 1");
  }
}

void PipelineConfig::validate() const {
  require_positive(d_scatter, "d_scatter");
  require_positive(eps_space_dup, "eps_space_dup");
  require_positive(eps_time_dup, "eps_time_dup");
  require_positive(eps_speed_dup, "eps_speed_dup");
  require_positive(eps_heading_dup, "eps_heading_dup");
  require_positive(subtrack_min_duration, "subtrack_min_duration");
  require_positive(v_th, "v_th");
  require_positive(kappa, "kappa");
  require_positive(t_min, "t_min");
  require_positive(sog_normal_min, "sog_normal_min");
  require_positive(eps_s, "eps_s");
  require_positive(eps_t, "eps_t");
  require_positive(t_single_coastal, "t_single_coastal");
  require_positive(t_single_offshore, "t_single_offshore");
  require_positive(coastal_distance_m, "coastal_distance_m");
  if (min_pts < 1) throw ConfigError("min_pts must be >= 1");
  if (min_event_mmsis < 1) throw ConfigError("min_event_mmsis must be >= 1");
  if (!(th_group > 0.0 && th_group <= 1.0)) throw ConfigError("th_group must be in (0, 1]");
  if (!(persistence_day_fraction > 0.0 && persistence_day_fraction <= 1.0)) {
    throw ConfigError("persistence_day_fraction must be in (0, 1]");
  }
  if (!(max_parse_error_ratio >= 0.0 && max_parse_error_ratio <= 1.0)) {
    throw ConfigError("max_parse_error_ratio must be in [0, 1]");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!bbox.valid()) throw ConfigError("bbox requires lat_min < lat_max and lon_min < lon_max");
  imm.validate();
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  PipelineConfig c;
  std::set<std::string> seen;

  take(j, seen, "d_scatter", c.d_scatter);
  take(j, seen, "eps_space_dup", c.eps_space_dup);
  take(j, seen, "eps_time_dup", c.eps_time_dup);
  take(j, seen, "eps_speed_dup", c.eps_speed_dup);
  take(j, seen, "eps_heading_dup", c.eps_heading_dup);
  take(j, seen, "subtrack_min_duration", c.subtrack_min_duration);
  take(j, seen, "v_th", c.v_th);
  take(j, seen, "kappa", c.kappa);
  take(j, seen, "t_min", c.t_min);
  take(j, seen, "sog_normal_min", c.sog_normal_min);
  take(j, seen, "eps_s", c.eps_s);
  take(j, seen, "eps_t", c.eps_t);
  take(j, seen, "min_pts", c.min_pts);
  take(j, seen, "th_group", c.th_group);
  take(j, seen, "min_event_mmsis", c.min_event_mmsis);
  take(j, seen, "t_single_coastal", c.t_single_coastal);
  take(j, seen, "t_single_offshore", c.t_single_offshore);
  take(j, seen, "persistence_day_fraction", c.persistence_day_fraction);
  take(j, seen, "coastal_distance_m", c.coastal_distance_m);
  take(j, seen, "max_parse_error_ratio", c.max_parse_error_ratio);
  take(j, seen, "workers", c.workers);
  take(j, seen, "coastline_path", c.coastline_path);

  seen.insert("sog_unit");
  if (auto it = j.find("sog_unit"); it != j.end()) {
    const std::string unit = it->get<std::string>();
    if (unit == "mps") c.sog_unit = SogUnit::mps;
    else if (unit == "knots") c.sog_unit = SogUnit::knots;
    else throw ConfigError("sog_unit must be 'mps' or 'knots'");
  }

  seen.insert("bbox");
  if (auto it = j.find("bbox"); it != j.end()) {
    const json& b = *it;
    std::set<std::string> bseen;
    take(b, bseen, "lat_min", c.bbox.lat_min);
    take(b, bseen, "lat_max", c.bbox.lat_max);
    take(b, bseen, "lon_min", c.bbox.lon_min);
    take(b, bseen, "lon_max", c.bbox.lon_max);
    reject_unknown(b, bseen, "bbox");
  }

  seen.insert("imm");
  if (auto it = j.find("imm"); it != j.end()) {
    const json& m = *it;
    std::set<std::string> mseen;
    take(m, mseen, "meas_sigma_pos_m", c.imm.meas_sigma_pos_m);
    take(m, mseen, "meas_sigma_sog", c.imm.meas_sigma_sog);
    take(m, mseen, "meas_sigma_cog_deg", c.imm.meas_sigma_cog_deg);
    take(m, mseen, "process_sigma_accel", c.imm.process_sigma_accel);
    take(m, mseen, "process_sigma_yaw_accel_cv", c.imm.process_sigma_yaw_accel_cv);
    take(m, mseen, "process_sigma_yaw_accel_ctrv", c.imm.process_sigma_yaw_accel_ctrv);
    take(m, mseen, "ctrv_yaw_epsilon", c.imm.ctrv_yaw_epsilon);
    take(m, mseen, "reinit_gap_s", c.imm.reinit_gap_s);
    take(m, mseen, "init_sigma_vel", c.imm.init_sigma_vel);
    take(m, mseen, "init_sigma_heading_deg", c.imm.init_sigma_heading_deg);
    take(m, mseen, "init_sigma_yaw_rate", c.imm.init_sigma_yaw_rate);
    mseen.insert("mode_transition");
    if (auto mt = m.find("mode_transition"); mt != m.end()) {
      if (!mt->is_array() || mt->size() != 2 || !(*mt)[0].is_array() || (*mt)[0].size() != 2 ||
          !(*mt)[1].is_array() || (*mt)[1].size() != 2) {
        throw ConfigError("imm.mode_transition must be a 2x2 array");
      }
      for (int r = 0; r < 2; ++r)
        for (int col = 0; col < 2; ++col) c.imm.mode_transition[r][col] = (*mt)[r][col].get<double>();
    }
    mseen.insert("initial_mode_probs");
    if (auto ip = m.find("initial_mode_probs"); ip != m.end()) {
      if (!ip->is_array() || ip->size() != 2) throw ConfigError("imm.initial_mode_probs must have 2 entries");
      c.imm.initial_mode_probs[0] = (*ip)[0].get<double>();
      c.imm.initial_mode_probs[1] = (*ip)[1].get<double>();
    }
    reject_unknown(m, mseen, "imm");
  }

  reject_unknown(j, seen, "config");
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

nlohmann::json PipelineConfig::to_json() const {
  json m{{"meas_sigma_pos_m", imm.meas_sigma_pos_m},
         {"meas_sigma_sog", imm.meas_sigma_sog},
         {"meas_sigma_cog_deg", imm.meas_sigma_cog_deg},
         {"process_sigma_accel", imm.process_sigma_accel},
         {"process_sigma_yaw_accel_cv", imm.process_sigma_yaw_accel_cv},
         {"process_sigma_yaw_accel_ctrv", imm.process_sigma_yaw_accel_ctrv},
         {"mode_transition", {{imm.mode_transition[0][0], imm.mode_transition[0][1]},
                              {imm.mode_transition[1][0], imm.mode_transition[1][1]}}},
         {"initial_mode_probs", {imm.initial_mode_probs[0], imm.initial_mode_probs[1]}},
         {"ctrv_yaw_epsilon", imm.ctrv_yaw_epsilon},
         {"reinit_gap_s", imm.reinit_gap_s},
         {"init_sigma_vel", imm.init_sigma_vel},
         {"init_sigma_heading_deg", imm.init_sigma_heading_deg},
         {"init_sigma_yaw_rate", imm.init_sigma_yaw_rate}};
  return json{{"d_scatter", d_scatter},
              {"eps_space_dup", eps_space_dup},
              {"eps_time_dup", eps_time_dup},
              {"eps_speed_dup", eps_speed_dup},
              {"eps_heading_dup", eps_heading_dup},
              {"subtrack_min_duration", subtrack_min_duration},
              {"v_th", v_th},
              {"kappa", kappa},
              {"t_min", t_min},
              {"sog_normal_min", sog_normal_min},
              {"eps_s", eps_s},
              {"eps_t", eps_t},
              {"min_pts", min_pts},
              {"th_group", th_group},
              {"min_event_mmsis", min_event_mmsis},
              {"t_single_coastal", t_single_coastal},
              {"t_single_offshore", t_single_offshore},
              {"persistence_day_fraction", persistence_day_fraction},
              {"coastal_distance_m", coastal_distance_m},
              {"sog_unit", sog_unit == SogUnit::mps ? "mps" : "knots"},
              {"max_parse_error_ratio", max_parse_error_ratio},
              {"workers", workers},
              {"coastline_path", coastline_path},
              {"imm", m},
              {"bbox", {{"lat_min", bbox.lat_min}, {"lat_max", bbox.lat_max},
                        {"lon_min", bbox.lon_min}, {"lon_max", bbox.lon_max}}}};
}

}  // namespace aisdet
