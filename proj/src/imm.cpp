#include "aisdet/imm.hpp"

#include <cmath>

#include "aisdet/geo.hpp"

namespace aisdet {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Piecewise process noise: white acceleration on (p, v) along the current
// heading, white yaw acceleration on (psi, psi_dot).
Mat5 process_noise(double psi, double dt, double sigma_accel, double sigma_yaw_accel) {
  Vec5 ga = Vec5::Zero();
  ga(0) = 0.5 * dt * dt * std::cos(psi);
  ga(1) = 0.5 * dt * dt * std::sin(psi);
  ga(2) = dt;
  Vec5 gw = Vec5::Zero();
  gw(3) = 0.5 * dt * dt;
  gw(4) = dt;
  return sigma_accel * sigma_accel * ga * ga.transpose() +
         sigma_yaw_accel * sigma_yaw_accel * gw * gw.transpose();
}

// Weighted mean of model states; the heading component is averaged on the
// circle relative to the largest-weight model.
Vec5 mix_states(const Vec5* xs, const double* w, int n) {
  int ref = 0;
  for (int i = 1; i < n; ++i) {
    if (w[i] > w[ref]) ref = i;
  }
  Vec5 out = Vec5::Zero();
  double dpsi = 0.0;
  for (int i = 0; i < n; ++i) {
    out += w[i] * xs[i];
    dpsi += w[i] * wrap_pi(xs[i](3) - xs[ref](3));
  }
  out(3) = wrap_pi(xs[ref](3) + dpsi);
  return out;
}

Vec5 state_residual(const Vec5& x, const Vec5& mean) {
  Vec5 d = x - mean;
  d(3) = wrap_pi(d(3));
  return d;
}

Mat4 measurement_noise(const ImmConfig& cfg) {
  Mat4 r = Mat4::Zero();
  r(0, 0) = cfg.meas_sigma_pos_m * cfg.meas_sigma_pos_m;
  r(1, 1) = cfg.meas_sigma_pos_m * cfg.meas_sigma_pos_m;
  r(2, 2) = cfg.meas_sigma_sog * cfg.meas_sigma_sog;
  const double sc = deg2rad(cfg.meas_sigma_cog_deg);
  r(3, 3) = sc * sc;
  return r;
}

Eigen::Matrix<double, 4, 5> measurement_matrix() {
  Eigen::Matrix<double, 4, 5> h = Eigen::Matrix<double, 4, 5>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  h(2, 2) = 1.0;
  h(3, 3) = 1.0;
  return h;
}

}  // namespace

Vec5 cv_transition(const Vec5& x, double dt) {
  Vec5 out = x;
  out(0) = x(0) + x(2) * std::cos(x(3)) * dt;
  out(1) = x(1) + x(2) * std::sin(x(3)) * dt;
  out(4) = 0.0;
  return out;
}

Vec5 ctrv_transition(const Vec5& x, double dt, double yaw_epsilon) {
  const double omega = x(4);
  if (std::abs(omega) < yaw_epsilon) {
    Vec5 out = x;
    out(0) = x(0) + x(2) * std::cos(x(3)) * dt;
    out(1) = x(1) + x(2) * std::sin(x(3)) * dt;
    out(3) = x(3) + omega * dt;
    return out;
  }
  const double psi = x(3);
  const double psi1 = psi + omega * dt;
  Vec5 out = x;
  out(0) = x(0) + x(2) / omega * (std::sin(psi1) - std::sin(psi));
  out(1) = x(1) + x(2) / omega * (std::cos(psi) - std::cos(psi1));
  out(3) = psi1;
  return out;
}

Mat5 cv_jacobian(const Vec5& x, double dt) {
  Mat5 f = Mat5::Identity();
  const double c = std::cos(x(3));
  const double s = std::sin(x(3));
  f(0, 2) = c * dt;
  f(0, 3) = -x(2) * s * dt;
  f(1, 2) = s * dt;
  f(1, 3) = x(2) * c * dt;
  f(4, 4) = 0.0;
  return f;
}

Mat5 ctrv_jacobian(const Vec5& x, double dt, double yaw_epsilon) {
  const double omega = x(4);
  if (std::abs(omega) < yaw_epsilon) {
    Mat5 f = cv_jacobian(x, dt);
    f(4, 4) = 1.0;
    f(3, 4) = dt;
    return f;
  }
  const double v = x(2);
  const double psi = x(3);
  const double psi1 = psi + omega * dt;
  const double sp = std::sin(psi), cp = std::cos(psi);
  const double sp1 = std::sin(psi1), cp1 = std::cos(psi1);

  Mat5 f = Mat5::Identity();
  f(0, 2) = (sp1 - sp) / omega;
  f(0, 3) = v / omega * (cp1 - cp);
  f(0, 4) = v * (cp1 * dt * omega - (sp1 - sp)) / (omega * omega);
  f(1, 2) = (cp - cp1) / omega;
  f(1, 3) = v / omega * (sp1 - sp);
  f(1, 4) = v * (sp1 * dt * omega - (cp - cp1)) / (omega * omega);
  f(3, 4) = dt;
  return f;
}

ModelState cv_predict(const ModelState& s, double dt, const ImmConfig& cfg) {
  ModelState out;
  out.x = cv_transition(s.x, dt);
  out.x(3) = wrap_pi(out.x(3));
  const Mat5 f = cv_jacobian(s.x, dt);
  out.P = f * s.P * f.transpose() +
          process_noise(s.x(3), dt, cfg.process_sigma_accel, cfg.process_sigma_yaw_accel_cv);
  return out;
}

ModelState ctrv_predict(const ModelState& s, double dt, const ImmConfig& cfg) {
  ModelState out;
  out.x = ctrv_transition(s.x, dt, cfg.ctrv_yaw_epsilon);
  out.x(3) = wrap_pi(out.x(3));
  const Mat5 f = ctrv_jacobian(s.x, dt, cfg.ctrv_yaw_epsilon);
  out.P = f * s.P * f.transpose() +
          process_noise(s.x(3), dt, cfg.process_sigma_accel, cfg.process_sigma_yaw_accel_ctrv);
  return out;
}

Vec4 measurement_from_record(const AisRecord& r, const GeoPos& origin) {
  const PlanarPos p = project_local(origin, r.pos());
  Vec4 z;
  z << p.x, p.y, r.sog, compass_to_math_rad(r.cog);
  return z;
}

ImmState imm_init(const AisRecord& r, const GeoPos& origin, const ImmConfig& cfg) {
  ImmState s;
  s.origin = origin;
  s.last_t = r.t;
  const PlanarPos p = project_local(origin, r.pos());

  Vec5 x;
  x << p.x, p.y, r.sog, compass_to_math_rad(r.cog), 0.0;
  Mat5 p0 = Mat5::Zero();
  p0(0, 0) = cfg.meas_sigma_pos_m * cfg.meas_sigma_pos_m;
  p0(1, 1) = cfg.meas_sigma_pos_m * cfg.meas_sigma_pos_m;
  p0(2, 2) = cfg.init_sigma_vel * cfg.init_sigma_vel;
  const double sh = deg2rad(cfg.init_sigma_heading_deg);
  p0(3, 3) = sh * sh;
  p0(4, 4) = cfg.init_sigma_yaw_rate * cfg.init_sigma_yaw_rate;

  for (int i = 0; i < 2; ++i) {
    s.model[i].x = x;
    s.model[i].P = p0;
    s.mu[i] = cfg.initial_mode_probs[static_cast<std::size_t>(i)];
  }
  s.fused_x = x;
  s.fused_P = p0;
  return s;
}

ImmStepResult imm_step(ImmState& s, const Vec4& z, double dt, const ImmConfig& cfg) {
  if (!z.allFinite() || !std::isfinite(dt) || dt <= 0.0) return {false, 0.0};

  // Mixing.
  double c[2];
  for (int j = 0; j < 2; ++j) {
    c[j] = cfg.mode_transition[0][static_cast<std::size_t>(j)] * s.mu[0] +
           cfg.mode_transition[1][static_cast<std::size_t>(j)] * s.mu[1];
  }
  ModelState mixed[2];
  for (int j = 0; j < 2; ++j) {
    if (c[j] <= 1e-300) {
      mixed[j] = s.model[j];  // dormant model, nothing flows into it
      continue;
    }
    double w[2];
    Vec5 xs[2];
    for (int i = 0; i < 2; ++i) {
      w[i] = cfg.mode_transition[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             s.mu[i] / c[j];
      xs[i] = s.model[i].x;
    }
    mixed[j].x = mix_states(xs, w, 2);
    mixed[j].P = Mat5::Zero();
    for (int i = 0; i < 2; ++i) {
      const Vec5 d = state_residual(s.model[i].x, mixed[j].x);
      mixed[j].P += w[i] * (s.model[i].P + d * d.transpose());
    }
  }

  // Model-matched prediction.
  ModelState pred[2];
  pred[kModelCv] = cv_predict(mixed[kModelCv], dt, cfg);
  pred[kModelCtrv] = ctrv_predict(mixed[kModelCtrv], dt, cfg);

  // Residual against the fused prediction, before any measurement influence.
  const double csum = c[0] + c[1];
  const double cw0 = csum > 0.0 ? c[0] / csum : 0.5;
  const double cw1 = 1.0 - cw0;
  const double px_pred = cw0 * pred[0].x(0) + cw1 * pred[1].x(0);
  const double py_pred = cw0 * pred[0].x(1) + cw1 * pred[1].x(1);
  const double residual = std::hypot(z(0) - px_pred, z(1) - py_pred);

  // Per-model EKF update.
  const Eigen::Matrix<double, 4, 5> h = measurement_matrix();
  const Mat4 r = measurement_noise(cfg);
  ModelState post[2];
  double loglike[2];
  for (int j = 0; j < 2; ++j) {
    Vec4 y = z - h * pred[j].x;
    y(3) = wrap_pi(y(3));
    const Mat4 innov_cov = h * pred[j].P * h.transpose() + r;
    const Eigen::LLT<Mat4> llt(innov_cov);
    const Eigen::Matrix<double, 5, 4> k = pred[j].P * h.transpose() * llt.solve(Mat4::Identity());

    post[j].x = pred[j].x + k * y;
    post[j].x(3) = wrap_pi(post[j].x(3));
    const Mat5 ikh = Mat5::Identity() - k * h;
    post[j].P = ikh * pred[j].P * ikh.transpose() + k * r * k.transpose();

    const Vec4 alpha = llt.solve(y);
    double logdet = 0.0;
    for (int d = 0; d < 4; ++d) logdet += 2.0 * std::log(llt.matrixL()(d, d));
    loglike[j] = -0.5 * (y.dot(alpha) + logdet + 4.0 * kLog2Pi);
  }

  // Mode probability update, scaled to dodge underflow on extreme outliers.
  double max_ll = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < 2; ++j) {
    if (c[j] > 0.0 && loglike[j] > max_ll) max_ll = loglike[j];
  }
  double mu_new[2] = {0.0, 0.0};
  double mu_sum = 0.0;
  for (int j = 0; j < 2; ++j) {
    if (c[j] > 0.0 && std::isfinite(loglike[j])) {
      mu_new[j] = c[j] * std::exp(loglike[j] - max_ll);
      mu_sum += mu_new[j];
    }
  }
  if (mu_sum > 0.0) {
    for (double& m : mu_new) m /= mu_sum;
  } else {
    mu_new[0] = csum > 0.0 ? c[0] / csum : 0.5;
    mu_new[1] = 1.0 - mu_new[0];
  }

  // Fusion with the spread-of-means term.
  Vec5 xs[2] = {post[0].x, post[1].x};
  const Vec5 fused = mix_states(xs, mu_new, 2);
  Mat5 fused_p = Mat5::Zero();
  for (int j = 0; j < 2; ++j) {
    const Vec5 d = state_residual(post[j].x, fused);
    fused_p += mu_new[j] * (post[j].P + d * d.transpose());
  }
  fused_p = 0.5 * (fused_p + fused_p.transpose()).eval();

  for (int j = 0; j < 2; ++j) {
    s.model[j] = post[j];
    s.mu[j] = mu_new[j];
  }
  s.fused_x = fused;
  s.fused_P = fused_p;
  return {true, residual};
}

std::vector<KinematicCue> extract_kinematic_cues(const Track& track, const PipelineConfig& cfg) {
  std::vector<KinematicCue> cues;
  const auto& recs = track.records;
  if (recs.size() < 2) return cues;

  GeoPos origin = recs.front().pos();
  ImmState state = imm_init(recs.front(), origin, cfg.imm);

  auto emit = [&](const AisRecord& r, double residual, double dt) {
    cues.push_back(KinematicCue{track.mmsi, r.t, r.pos(), residual / dt, residual, dt});
    origin = r.pos();
    state = imm_init(r, origin, cfg.imm);
  };

  for (std::size_t k = 1; k < recs.size(); ++k) {
    const AisRecord& r = recs[k];
    const AisRecord& prev = recs[k - 1];
    const double dt = static_cast<double>(r.t - state.last_t) / 1000.0;
    if (dt <= 0.0) continue;  // defensive; preprocessing guarantees strict order

    if (dt > cfg.imm.reinit_gap_s) {
      // Prediction across a long silence is meaningless; the gap itself is
      // tx_interval's business.
      origin = r.pos();
      state = imm_init(r, origin, cfg.imm);
      continue;
    }

    if (geodesic_distance(origin, r.pos()) > 200'000.0) {
      // Tangent plane no longer trustworthy: re-anchor at the previous fix and
      // keep checking so a long-range teleport still yields a cue.
      const double jump = geodesic_distance(prev.pos(), r.pos());
      if (jump > 450'000.0) {
        if (jump / dt > cfg.v_th || r.sog > cfg.v_th) {
          emit(r, jump, dt);
        } else {
          origin = r.pos();
          state = imm_init(r, origin, cfg.imm);
        }
        continue;
      }
      origin = prev.pos();
      state = imm_init(prev, origin, cfg.imm);
      state.last_t = prev.t;
    }

    const Vec4 z = measurement_from_record(r, origin);
    const ImmStepResult step = imm_step(state, z, dt, cfg.imm);
    if (!step.accepted) {
      origin = r.pos();
      state = imm_init(r, origin, cfg.imm);
      continue;
    }
    state.last_t = r.t;

    if (step.residual_distance / dt > cfg.v_th || r.sog > cfg.v_th) {
      emit(r, step.residual_distance, dt);
    }
  }
  return cues;
}

}  // namespace aisdet
