#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aisdet/config.hpp"
#include "aisdet/records.hpp"

namespace aisdet {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

// State layout: [p_x (m), p_y (m), v (m/s), psi (rad), psi_dot (rad/s)].
enum ModelIndex { kModelCv = 0, kModelCtrv = 1 };

struct ModelState {
  Vec5 x = Vec5::Zero();
  Mat5 P = Mat5::Zero();
};

// Deterministic transition functions, exposed so tests can difference them.
Vec5 cv_transition(const Vec5& x, double dt);
Vec5 ctrv_transition(const Vec5& x, double dt, double yaw_epsilon);
Mat5 cv_jacobian(const Vec5& x, double dt);
Mat5 ctrv_jacobian(const Vec5& x, double dt, double yaw_epsilon);

ModelState cv_predict(const ModelState& s, double dt, const ImmConfig& cfg);
ModelState ctrv_predict(const ModelState& s, double dt, const ImmConfig& cfg);

struct ImmState {
  ModelState model[2];
  double mu[2] = {0.5, 0.5};
  Vec5 fused_x = Vec5::Zero();
  Mat5 fused_P = Mat5::Zero();
  GeoPos origin{};
  EpochMs last_t = 0;
};

// Measurement vector: [p_x, p_y, sog, psi] in the state's local plane, with
// psi already converted from compass COG to math convention.
Vec4 measurement_from_record(const AisRecord& r, const GeoPos& origin);

ImmState imm_init(const AisRecord& r, const GeoPos& origin, const ImmConfig& cfg);

struct ImmStepResult {
  bool accepted = false;
  double residual_distance = 0.0;  // fused predicted position vs measurement, m
};

// One full IMM cycle: mixing, per-model EKF predict/update with angle-wrapped
// COG innovation, likelihood-based mode update, fusion with spread-of-means
// covariance. Non-finite input leaves the state untouched.
ImmStepResult imm_step(ImmState& s, const Vec4& z, double dt, const ImmConfig& cfg);

struct KinematicCue {
  std::uint32_t mmsi = 0;
  EpochMs t = 0;
  GeoPos pos{};
  double implied_speed = 0.0;      // residual_distance / dt
  double residual_distance = 0.0;  // m
  double dt = 0.0;                 // s
};

// Runs the filter along a track and emits a cue whenever the residual-implied
// speed or the reported SOG exceeds v_th. The filter re-initializes from the
// offending measurement so one jump yields one cue.
std::vector<KinematicCue> extract_kinematic_cues(const Track& track, const PipelineConfig& cfg);

}  // namespace aisdet
