#pragma once

// EUMOS 40509 measurement and classification. Displacements are the
// horizontal (x-y) magnitudes of the 8 box corners per package, measured in
// the sleigh reference frame against the initial corners. Boundary
// semantics follow the standard's wording: permanent and elastic limits
// fail on "exceed" (strict >), the bottom-zone limit fails on >= ("must be
// less than").

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "palletbench/body.hpp"
#include "palletbench/config.hpp"
#include "palletbench/errors.hpp"
#include "palletbench/math.hpp"
#include "palletbench/scene.hpp"

namespace palletbench {

struct DeformationTrace {
  struct Frame {
    double t = 0.0;
    // per package, per corner: horizontal displacement magnitude, m
    std::vector<std::array<double, 8>> corner_disp;
    std::vector<double> speeds;  // per package, m/s
    double max_disp = 0.0;
  };

  std::vector<std::string> package_names;
  std::vector<Vec3> corner_local;                      // 8 per package, body frame
  std::vector<std::array<Vec3, 8>> initial_corners;    // sleigh frame
  std::vector<std::array<double, 8>> initial_heights;  // above pallet base, m
  double bench_stop_time = 0.0;
  std::vector<Frame> frames;

  static DeformationTrace for_scene(const Scene& scene, double bench_stop_time) {
    DeformationTrace trace;
    trace.bench_stop_time = bench_stop_time;
    const Vec3 sleigh_pos = scene.sleigh().position;
    for (const RigidBody& b : scene.bodies) {
      if (b.role != BodyRole::package) continue;
      trace.package_names.push_back(b.name);
      for (int sx : {-1, 1})
        for (int sy : {-1, 1})
          for (int sz : {-1, 1})
            trace.corner_local.push_back({sx * b.half_extents.x, sy * b.half_extents.y,
                                          sz * b.half_extents.z});
      const auto corners = b.corners();
      std::array<Vec3, 8> sleigh_frame;
      std::array<double, 8> heights;
      for (int k = 0; k < 8; ++k) {
        sleigh_frame[k] = corners[k] - sleigh_pos;
        heights[k] = corners[k].z;  // pallet base sits on the sleigh surface z=0
      }
      trace.initial_corners.push_back(sleigh_frame);
      trace.initial_heights.push_back(heights);
    }
    return trace;
  }

  size_t package_count() const { return package_names.size(); }
};

// Appends one frame. Poses in `frame` must include every package in trace
// order plus the sleigh; frames must arrive in time order.
inline void track(DeformationTrace& trace, const FrameRecord& frame, const BodyPose& sleigh_pose) {
  if (!trace.frames.empty() && frame.t < trace.frames.back().t)
    throw Error("track: frame out of time order");

  DeformationTrace::Frame out;
  out.t = frame.t;
  out.corner_disp.reserve(trace.package_count());
  out.speeds.reserve(trace.package_count());

  // scene order: sleigh, pallet, then packages
  size_t pkg = 0;
  for (size_t bi = 2; bi < frame.bodies.size() && pkg < trace.package_count(); ++bi) {
    const BodyPose& pose = frame.bodies[bi];
    const Mat3 r = pose.orientation.to_matrix();
    std::array<double, 8> disp;
    for (int k = 0; k < 8; ++k) {
      const Vec3 corner = pose.position + r * trace.corner_local[pkg * 8 + k];
      const Vec3 rel = (corner - sleigh_pose.position) - trace.initial_corners[pkg][k];
      disp[k] = std::hypot(rel.x, rel.y);
      out.max_disp = std::max(out.max_disp, disp[k]);
    }
    out.corner_disp.push_back(disp);
    out.speeds.push_back(length(pose.linear_velocity - sleigh_pose.linear_velocity));
    ++pkg;
  }
  if (pkg != trace.package_count()) throw Error("track: frame is missing package poses");
  trace.frames.push_back(std::move(out));
}

// First frame index at which every package speed has stayed below
// `settle_speed_eps` for `settle_hold` seconds, windows starting no earlier
// than the bench stop. nullopt = never settled.
inline std::optional<size_t> speed_monitor(const DeformationTrace& trace,
                                           const ValidationThresholds& thresholds) {
  std::optional<size_t> window_start;
  for (size_t f = 0; f < trace.frames.size(); ++f) {
    const auto& frame = trace.frames[f];
    if (frame.t < trace.bench_stop_time) continue;
    bool calm = true;
    for (double s : frame.speeds)
      if (s >= thresholds.settle_speed_eps) {
        calm = false;
        break;
      }
    if (!calm) {
      window_start.reset();
      continue;
    }
    if (!window_start) window_start = f;
    if (frame.t - trace.frames[*window_start].t >= thresholds.settle_hold) return f;
  }
  return std::nullopt;
}

// max over frames [0, last_frame] over packages and corners, / H
inline double elastic_deformation(const DeformationTrace& trace, double H,
                                  size_t last_frame = SIZE_MAX) {
  double peak = 0.0;
  const size_t end = std::min(last_frame, trace.frames.size() - 1);
  for (size_t f = 0; f <= end && f < trace.frames.size(); ++f)
    peak = std::max(peak, trace.frames[f].max_disp);
  return H > 0.0 ? peak / H : 0.0;
}

inline double permanent_deformation(const DeformationTrace& trace, double H, size_t settle_frame) {
  if (settle_frame >= trace.frames.size()) throw Error("permanent_deformation: bad settle frame");
  return H > 0.0 ? trace.frames[settle_frame].max_disp / H : 0.0;
}

struct BottomZoneResult {
  double displacement = 0.0;  // m, at the settled frame
  double limit = 0.0;
  bool pass = true;
};

inline BottomZoneResult bottom_zone_check(const DeformationTrace& trace, size_t settle_frame,
                                          double zone_height, double limit) {
  if (settle_frame >= trace.frames.size()) throw Error("bottom_zone_check: bad settle frame");
  BottomZoneResult result;
  result.limit = limit;
  const auto& frame = trace.frames[settle_frame];
  for (size_t p = 0; p < trace.package_count(); ++p)
    for (int k = 0; k < 8; ++k)
      if (trace.initial_heights[p][k] < zone_height)
        result.displacement = std::max(result.displacement, frame.corner_disp[p][k]);
  result.pass = result.displacement < limit;
  return result;
}

// ---------------------------------------------------------------------------
// Classification

enum class Outcome { success, failure, inconclusive };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::failure: return "failure";
    default: return "inconclusive";
  }
}

struct Violation {
  std::string criterion;  // elastic | permanent | bottom_zone | wrap_integrity
  std::string subject;    // package name or edge id
  long frame = -1;
  double value = 0.0;
  double threshold = 0.0;
};

struct ValidationReport {
  Outcome outcome = Outcome::inconclusive;
  double elastic_max_frac = 0.0;
  std::optional<double> permanent_max_frac;
  std::optional<double> bottom_zone_permanent_m;
  double max_wrap_strain = 0.0;
  std::optional<size_t> settle_frame;
  std::vector<Violation> violations;
};

// Running summary of wrap strain over the simulation.
struct WrapStrainTimeline {
  double tear_threshold = std::numeric_limits<double>::infinity();
  double max_strain = 0.0;
  long max_frame = -1;
  int max_edge = -1;
  long first_exceed_frame = -1;
  int first_exceed_edge = -1;

  void record(long frame, double strain, int edge) {
    if (strain > max_strain) {
      max_strain = strain;
      max_frame = frame;
      max_edge = edge;
    }
    if (strain >= tear_threshold && first_exceed_frame < 0) {
      first_exceed_frame = frame;
      first_exceed_edge = edge;
    }
  }
};

namespace detail {

// argmax location of a displacement peak, for violation details
struct Peak {
  double value = 0.0;
  size_t frame = 0;
  size_t package = 0;
};

inline Peak peak_displacement(const DeformationTrace& trace, size_t first_frame,
                              size_t last_frame) {
  Peak peak;
  for (size_t f = first_frame; f <= last_frame && f < trace.frames.size(); ++f) {
    const auto& frame = trace.frames[f];
    for (size_t p = 0; p < frame.corner_disp.size(); ++p)
      for (int k = 0; k < 8; ++k)
        if (frame.corner_disp[p][k] > peak.value) {
          peak.value = frame.corner_disp[p][k];
          peak.frame = f;
          peak.package = p;
        }
  }
  return peak;
}

}  // namespace detail

// All four criteria: elastic (iii), permanent (i), bottom zone (ii), and
// wrap integrity standing in for (iv). Unsettled runs classify as
// inconclusive unless the trace already proves a violation.
inline ValidationReport classify(const DeformationTrace& trace, const WrapStrainTimeline& wrap,
                                 const ValidationThresholds& thresholds, double H) {
  if (trace.frames.empty()) throw Error("classify: empty trace");
  ValidationReport report;
  report.max_wrap_strain = wrap.max_strain;

  const std::optional<size_t> settle = speed_monitor(trace, thresholds);
  report.settle_frame = settle;
  const size_t window_end = settle.value_or(trace.frames.size() - 1);

  report.elastic_max_frac = elastic_deformation(trace, H, window_end);
  if (report.elastic_max_frac > thresholds.elastic_frac) {
    const auto peak = detail::peak_displacement(trace, 0, window_end);
    report.violations.push_back({"elastic", trace.package_names[peak.package],
                                 static_cast<long>(peak.frame), report.elastic_max_frac,
                                 thresholds.elastic_frac});
  }

  if (wrap.first_exceed_frame >= 0) {
    report.violations.push_back({"wrap_integrity",
                                 "edge:" + std::to_string(wrap.first_exceed_edge),
                                 wrap.first_exceed_frame, wrap.max_strain, wrap.tear_threshold});
  }

  if (settle) {
    report.permanent_max_frac = permanent_deformation(trace, H, *settle);
    if (*report.permanent_max_frac > thresholds.permanent_frac) {
      const auto peak = detail::peak_displacement(trace, *settle, *settle);
      report.violations.push_back({"permanent", trace.package_names[peak.package],
                                   static_cast<long>(*settle), *report.permanent_max_frac,
                                   thresholds.permanent_frac});
    }
    const BottomZoneResult bottom = bottom_zone_check(
        trace, *settle, thresholds.bottom_zone_height, thresholds.bottom_zone_limit);
    report.bottom_zone_permanent_m = bottom.displacement;
    if (!bottom.pass) {
      // find the offending package at the settled frame
      size_t worst_pkg = 0;
      double worst = -1.0;
      const auto& frame = trace.frames[*settle];
      for (size_t p = 0; p < trace.package_count(); ++p)
        for (int k = 0; k < 8; ++k)
          if (trace.initial_heights[p][k] < thresholds.bottom_zone_height &&
              frame.corner_disp[p][k] > worst) {
            worst = frame.corner_disp[p][k];
            worst_pkg = p;
          }
      report.violations.push_back({"bottom_zone", trace.package_names[worst_pkg],
                                   static_cast<long>(*settle), bottom.displacement,
                                   thresholds.bottom_zone_limit});
    }
    report.outcome = report.violations.empty() ? Outcome::success : Outcome::failure;
  } else {
    report.outcome =
        report.violations.empty() ? Outcome::inconclusive : Outcome::failure;
  }
  return report;
}

}  // namespace palletbench
