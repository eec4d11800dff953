#pragma once

// Oriented-box collision detection: separating-axis test plus reference
// face clipping for up to 4 contact points per pair. Pairs and manifold
// points come out in canonical order for determinism.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "palletbench/body.hpp"
#include "palletbench/math.hpp"

namespace palletbench {

struct Contact {
  int body_a = 0;  // body ids, a appears before b in the body list
  int body_b = 0;
  Vec3 point;                // world, on the incident surface
  Vec3 normal;               // unit, a -> b
  double penetration = 0.0;  // >= 0
  double separation = 0.0;   // signed gap; negative = penetrating
  double combined_friction = 0.0;
};

namespace detail {

struct BoxFrame {
  Vec3 center;
  Vec3 axis[3];
  Vec3 half;
};

inline BoxFrame box_frame(const RigidBody& b) {
  const Mat3 r = b.orientation.to_matrix();
  return {b.position, {r.col(0), r.col(1), r.col(2)}, b.half_extents};
}

inline double project_radius(const BoxFrame& f, const Vec3& axis) {
  return f.half.x * std::abs(dot(f.axis[0], axis)) + f.half.y * std::abs(dot(f.axis[1], axis)) +
         f.half.z * std::abs(dot(f.axis[2], axis));
}

struct SatResult {
  bool separated_beyond_margin = false;
  double face_a_sep = -1e30;
  int face_a_axis = -1;
  double face_b_sep = -1e30;
  int face_b_axis = -1;
  double edge_sep = -1e30;
  int edge_a_axis = -1;
  int edge_b_axis = -1;
  Vec3 edge_axis;  // unit, oriented a -> b
};

inline SatResult sat_test(const BoxFrame& a, const BoxFrame& b, double margin) {
  SatResult r;
  const Vec3 d = b.center - a.center;

  for (int i = 0; i < 3; ++i) {
    const double sep = std::abs(dot(d, a.axis[i])) - (a.half[i] + project_radius(b, a.axis[i]));
    if (sep > margin) {
      r.separated_beyond_margin = true;
      return r;
    }
    if (sep > r.face_a_sep) {
      r.face_a_sep = sep;
      r.face_a_axis = i;
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double sep = std::abs(dot(d, b.axis[i])) - (b.half[i] + project_radius(a, b.axis[i]));
    if (sep > margin) {
      r.separated_beyond_margin = true;
      return r;
    }
    if (sep > r.face_b_sep) {
      r.face_b_sep = sep;
      r.face_b_axis = i;
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Vec3 axis = cross(a.axis[i], b.axis[j]);
      const double len2 = length_squared(axis);
      if (len2 < 1e-12) continue;  // near-parallel edge pair: face axes cover it
      axis = axis / std::sqrt(len2);
      const double sep =
          std::abs(dot(d, axis)) - (project_radius(a, axis) + project_radius(b, axis));
      if (sep > margin) {
        r.separated_beyond_margin = true;
        return r;
      }
      if (sep > r.edge_sep) {
        r.edge_sep = sep;
        r.edge_a_axis = i;
        r.edge_b_axis = j;
        r.edge_axis = dot(axis, d) >= 0.0 ? axis : -axis;
      }
    }
  }
  return r;
}

// Sutherland-Hodgman against the half-space dot(x - origin, n) <= limit
inline void clip_polygon(std::vector<Vec3>& poly, const Vec3& origin, const Vec3& n,
                         double limit) {
  std::vector<Vec3> out;
  out.reserve(poly.size() + 2);
  const size_t count = poly.size();
  for (size_t i = 0; i < count; ++i) {
    const Vec3& p0 = poly[i];
    const Vec3& p1 = poly[(i + 1) % count];
    const double d0 = dot(p0 - origin, n) - limit;
    const double d1 = dot(p1 - origin, n) - limit;
    if (d0 <= 0.0) out.push_back(p0);
    if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
      const double t = d0 / (d0 - d1);
      out.push_back(p0 + (p1 - p0) * t);
    }
  }
  poly = std::move(out);
}

inline std::array<Vec3, 4> face_corners(const BoxFrame& box, int k, double sign) {
  const int u = (k + 1) % 3;
  const int v = (k + 2) % 3;
  const Vec3 c = box.center + box.axis[k] * (sign * box.half[k]);
  const Vec3 du = box.axis[u] * box.half[u];
  const Vec3 dv = box.axis[v] * box.half[v];
  return {c + du + dv, c - du + dv, c - du - dv, c + du - dv};
}

// keep at most 4 points: deepest, farthest, then max spanned area each side
inline void reduce_manifold(std::vector<Contact>& points) {
  if (points.size() <= 4) return;
  std::vector<Contact> kept;
  kept.reserve(4);
  size_t deepest = 0;
  for (size_t i = 1; i < points.size(); ++i)
    if (points[i].separation < points[deepest].separation) deepest = i;
  kept.push_back(points[deepest]);
  size_t far = 0;
  double far_d = -1.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const double d = length_squared(points[i].point - kept[0].point);
    if (d > far_d) {
      far_d = d;
      far = i;
    }
  }
  kept.push_back(points[far]);
  const Vec3 seg = kept[1].point - kept[0].point;
  const Vec3 n = points[0].normal;
  double best_pos = 0.0, best_neg = 0.0;
  int idx_pos = -1, idx_neg = -1;
  for (size_t i = 0; i < points.size(); ++i) {
    const double area = dot(cross(seg, points[i].point - kept[0].point), n);
    if (area > best_pos) {
      best_pos = area;
      idx_pos = static_cast<int>(i);
    }
    if (area < best_neg) {
      best_neg = area;
      idx_neg = static_cast<int>(i);
    }
  }
  if (idx_pos >= 0) kept.push_back(points[idx_pos]);
  if (idx_neg >= 0) kept.push_back(points[idx_neg]);
  points = std::move(kept);
}

// supporting edge of `box` most extreme along dir, running along axis k
inline void support_edge(const BoxFrame& box, int k, const Vec3& dir, Vec3& e0, Vec3& e1) {
  const int u = (k + 1) % 3;
  const int v = (k + 2) % 3;
  const double su = dot(box.axis[u], dir) >= 0.0 ? 1.0 : -1.0;
  const double sv = dot(box.axis[v], dir) >= 0.0 ? 1.0 : -1.0;
  const Vec3 mid = box.center + box.axis[u] * (su * box.half[u]) + box.axis[v] * (sv * box.half[v]);
  e0 = mid - box.axis[k] * box.half[k];
  e1 = mid + box.axis[k] * box.half[k];
}

inline Vec3 closest_point_between_segments(const Vec3& p1, const Vec3& q1, const Vec3& p2,
                                           const Vec3& q2) {
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  const double c = dot(d1, r);
  const double b = dot(d1, d2);
  const double denom = a * e - b * b;
  double s = denom > 1e-12 ? clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = e > 1e-12 ? clamp((b * s + f) / e, 0.0, 1.0) : 0.0;
  s = a > 1e-12 ? clamp((b * t - c) / a, 0.0, 1.0) : 0.0;
  const Vec3 c1 = p1 + d1 * s;
  const Vec3 c2 = p2 + d2 * t;
  return (c1 + c2) * 0.5;
}

inline void collide_boxes(const RigidBody& a, const RigidBody& b, double margin,
                          std::vector<Contact>& out) {
  const BoxFrame fa = box_frame(a);
  const BoxFrame fb = box_frame(b);
  const SatResult sat = sat_test(fa, fb, margin);
  if (sat.separated_beyond_margin) return;

  const double mu = std::sqrt(a.friction * b.friction);
  const double face_best = std::max(sat.face_a_sep, sat.face_b_sep);

  // face contacts win unless an edge pair is clearly more separating
  constexpr double kRelBias = 0.95;
  constexpr double kAbsBias = 1e-3;
  if (sat.edge_a_axis >= 0 && sat.edge_sep > kRelBias * face_best + kAbsBias) {
    Vec3 ea0, ea1, eb0, eb1;
    support_edge(fa, sat.edge_a_axis, sat.edge_axis, ea0, ea1);
    support_edge(fb, sat.edge_b_axis, -sat.edge_axis, eb0, eb1);
    Contact c;
    c.body_a = a.id;
    c.body_b = b.id;
    c.point = closest_point_between_segments(ea0, ea1, eb0, eb1);
    c.normal = sat.edge_axis;
    c.separation = sat.edge_sep;
    c.penetration = std::max(0.0, -sat.edge_sep);
    c.combined_friction = mu;
    out.push_back(c);
    return;
  }

  const bool ref_is_b = sat.face_b_sep > kRelBias * sat.face_a_sep + kAbsBias;
  const BoxFrame& ref = ref_is_b ? fb : fa;
  const BoxFrame& inc = ref_is_b ? fa : fb;
  const int ref_axis = ref_is_b ? sat.face_b_axis : sat.face_a_axis;

  const Vec3 to_other = inc.center - ref.center;
  const double ref_sign = dot(ref.axis[ref_axis], to_other) >= 0.0 ? 1.0 : -1.0;
  const Vec3 ref_normal = ref.axis[ref_axis] * ref_sign;  // ref -> incident

  int inc_axis = 0;
  double most_anti = 1e30;
  double inc_sign = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double align = dot(inc.axis[k], ref_normal);
    if (align < most_anti) {
      most_anti = align;
      inc_axis = k;
      inc_sign = 1.0;
    }
    if (-align < most_anti) {
      most_anti = -align;
      inc_axis = k;
      inc_sign = -1.0;
    }
  }

  const auto corners = face_corners(inc, inc_axis, inc_sign);
  std::vector<Vec3> poly{corners[0], corners[1], corners[2], corners[3]};

  const int u = (ref_axis + 1) % 3;
  const int v = (ref_axis + 2) % 3;
  clip_polygon(poly, ref.center, ref.axis[u], ref.half[u]);
  if (!poly.empty()) clip_polygon(poly, ref.center, -ref.axis[u], ref.half[u]);
  if (!poly.empty()) clip_polygon(poly, ref.center, ref.axis[v], ref.half[v]);
  if (!poly.empty()) clip_polygon(poly, ref.center, -ref.axis[v], ref.half[v]);
  if (poly.empty()) return;

  const Vec3 face_point = ref.center + ref_normal * ref.half[ref_axis];
  std::vector<Contact> points;
  points.reserve(poly.size());
  for (const Vec3& p : poly) {
    const double sep = dot(p - face_point, ref_normal);
    if (sep > margin) continue;
    Contact c;
    c.body_a = a.id;
    c.body_b = b.id;
    c.point = p;
    c.normal = ref_is_b ? -ref_normal : ref_normal;  // orient a -> b
    c.separation = sep;
    c.penetration = std::max(0.0, -sep);
    c.combined_friction = mu;
    points.push_back(c);
  }
  if (points.empty()) return;
  reduce_manifold(points);
  out.insert(out.end(), points.begin(), points.end());
}

}  // namespace detail

inline std::vector<Contact> detect_contacts(std::span<const RigidBody> bodies,
                                            double margin = 0.002) {
  std::vector<Contact> contacts;
  for (size_t i = 0; i < bodies.size(); ++i) {
    for (size_t j = i + 1; j < bodies.size(); ++j) {
      const RigidBody& a = bodies[i];
      const RigidBody& b = bodies[j];
      if (a.kinematic() && b.kinematic()) continue;
      const Vec3 m{margin, margin, margin};
      const Aabb expanded{a.aabb.lo - m, a.aabb.hi + m};
      if (!expanded.overlaps(b.aabb)) continue;
      detail::collide_boxes(a, b, margin, contacts);
    }
  }
  return contacts;
}

}  // namespace palletbench
