#pragma once

#include <array>
#include <string>
#include <vector>

#include "palletbench/math.hpp"

namespace palletbench {

enum class BodyRole { sleigh, pallet, package };

inline const char* role_name(BodyRole r) {
  switch (r) {
    case BodyRole::sleigh: return "sleigh";
    case BodyRole::pallet: return "pallet";
    default: return "package";
  }
}

struct RigidBody {
  int id = 0;
  std::string name;
  BodyRole role = BodyRole::package;
  Vec3 half_extents;     // m
  double mass = 0.0;     // kg; kinematic bodies keep the nominal value
  double inv_mass = 0.0; // 0 for the kinematic sleigh
  Vec3 inertia_body;     // solid-box diagonal inertia, body frame
  Vec3 inv_inertia_body;
  Vec3 position;
  Quat orientation;
  Vec3 linear_velocity;
  Vec3 angular_velocity;
  double friction = 0.5;
  Vec3 force_accum;
  Aabb aabb;

  bool kinematic() const { return inv_mass == 0.0; }

  static Vec3 box_inertia(double mass, const Vec3& half) {
    const double dx = 2 * half.x, dy = 2 * half.y, dz = 2 * half.z;
    const double k = mass / 12.0;
    return {k * (dy * dy + dz * dz), k * (dx * dx + dz * dz), k * (dx * dx + dy * dy)};
  }

  void set_mass_box(double m, bool is_kinematic) {
    mass = m;
    inertia_body = box_inertia(m, half_extents);
    if (is_kinematic) {
      inv_mass = 0.0;
      inv_inertia_body = {};
    } else {
      inv_mass = 1.0 / m;
      inv_inertia_body = {1.0 / inertia_body.x, 1.0 / inertia_body.y, 1.0 / inertia_body.z};
    }
  }

  Mat3 world_inv_inertia() const {
    const Mat3 r = orientation.to_matrix();
    return r * Mat3::diagonal(inv_inertia_body) * r.transposed();
  }

  Mat3 world_inertia() const {
    const Mat3 r = orientation.to_matrix();
    return r * Mat3::diagonal(inertia_body) * r.transposed();
  }

  Vec3 angular_momentum() const { return world_inertia() * angular_velocity; }

  std::array<Vec3, 8> corners() const {
    const Mat3 r = orientation.to_matrix();
    std::array<Vec3, 8> out;
    int n = 0;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1})
          out[n++] = position + r * Vec3{sx * half_extents.x, sy * half_extents.y,
                                         sz * half_extents.z};
    return out;
  }

  void update_aabb() {
    const Mat3 r = orientation.to_matrix();
    // |R| * half_extents gives the world-frame extent of an oriented box
    Vec3 e{std::abs(r.m[0][0]) * half_extents.x + std::abs(r.m[0][1]) * half_extents.y +
               std::abs(r.m[0][2]) * half_extents.z,
           std::abs(r.m[1][0]) * half_extents.x + std::abs(r.m[1][1]) * half_extents.y +
               std::abs(r.m[1][2]) * half_extents.z,
           std::abs(r.m[2][0]) * half_extents.x + std::abs(r.m[2][1]) * half_extents.y +
               std::abs(r.m[2][2]) * half_extents.z};
    aabb = {position - e, position + e};
  }

  bool finite_state() const {
    return finite(position) && finite(orientation) && finite(linear_velocity) &&
           finite(angular_velocity) && finite(force_accum);
  }
};

struct BodyPose {
  int id = 0;
  Vec3 position;
  Quat orientation;
  Vec3 linear_velocity;
  Vec3 angular_velocity;
};

// Immutable copy of the dynamic state at one instant.
struct FrameRecord {
  double t = 0.0;
  std::vector<BodyPose> bodies;
  std::vector<Vec3> wrap_vertices;

  bool operator==(const FrameRecord& o) const {
    if (t != o.t || bodies.size() != o.bodies.size() ||
        wrap_vertices.size() != o.wrap_vertices.size())
      return false;
    for (size_t i = 0; i < bodies.size(); ++i) {
      const auto& a = bodies[i];
      const auto& b = o.bodies[i];
      if (a.id != b.id || !(a.position == b.position) || !(a.orientation == b.orientation) ||
          !(a.linear_velocity == b.linear_velocity) ||
          !(a.angular_velocity == b.angular_velocity))
        return false;
    }
    for (size_t i = 0; i < wrap_vertices.size(); ++i)
      if (!(wrap_vertices[i] == o.wrap_vertices[i])) return false;
    return true;
  }
};

}  // namespace palletbench
