#pragma once

// Prescribed sleigh kinematics: acceleration impulse, constant
// deceleration, stop.

#include "palletbench/body.hpp"
#include "palletbench/config.hpp"
#include "palletbench/math.hpp"

namespace palletbench {

struct MotionProfile {
  double accel = 0.0;             // m/s^2 during the impulse
  double impulse_duration = 0.5;  // s
  double decel = 2.0;             // m/s^2, braking magnitude

  static MotionProfile from_conditions(const TestingConditions& c) {
    return {c.accel_g * kGravity, c.impulse_duration, c.decel_rate};
  }

  double peak_velocity() const { return accel * impulse_duration; }
  double stop_time() const { return impulse_duration + peak_velocity() / decel; }
};

// Right-continuous at both breakpoints.
inline double acceleration_at(const MotionProfile& p, double t) {
  if (t < p.impulse_duration) return p.accel;
  if (t < p.stop_time()) return -p.decel;
  return 0.0;
}

inline double velocity_at(const MotionProfile& p, double t) {
  if (t <= 0.0) return 0.0;
  if (t < p.impulse_duration) return p.accel * t;
  if (t < p.stop_time()) {
    const double v = p.peak_velocity() - p.decel * (t - p.impulse_duration);
    return v > 0.0 ? v : 0.0;
  }
  return 0.0;
}

// Analytic travel distance, for tests and reports.
inline double position_at(const MotionProfile& p, double t) {
  const double t_imp = p.impulse_duration;
  if (t <= 0.0) return 0.0;
  if (t < t_imp) return 0.5 * p.accel * t * t;
  const double x_imp = 0.5 * p.accel * t_imp * t_imp;
  const double v_peak = p.peak_velocity();
  if (t < p.stop_time()) {
    const double u = t - t_imp;
    return x_imp + v_peak * u - 0.5 * p.decel * u * u;
  }
  return x_imp + v_peak * v_peak / (2.0 * p.decel);
}

// The sleigh is kinematic: its velocity is assigned from the analytic
// profile every step and its position advances through the integrator so
// that bodies riding on it see a consistent velocity/position pair.
inline void drive_sleigh(RigidBody& sleigh, const MotionProfile& profile, double t) {
  sleigh.linear_velocity = {velocity_at(profile, t), 0.0, 0.0};
  sleigh.angular_velocity = {};
}

}  // namespace palletbench
