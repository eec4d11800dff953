#pragma once

// Perimeter force fields: four vertical planes around the cargo that stand
// in for the mechanical restraint of the wrapping material. A field pushes
// a package back toward the cargo once its outer face crosses the cargo's
// initial perimeter, with linear falloff over the field's range.

#include <array>
#include <span>
#include <vector>

#include "palletbench/body.hpp"
#include "palletbench/config.hpp"
#include "palletbench/math.hpp"

namespace palletbench {

struct PerimeterField {
  int index = 0;          // 1..4: +x, -x, +y, -y
  Vec3 inward_normal;     // unit, toward cargo center
  int axis = 0;           // 0 = x, 1 = y
  double outward_sign = 1.0;
  double plane_coord = 0.0;      // field plane position along the axis
  double perimeter_coord = 0.0;  // initial cargo AABB side (activation boundary)
  double base_strength = 0.0;    // N
  PiecewiseLinear sigma_h;
  double d_max = 0.1;        // m
  double cargo_z0 = 0.0;     // cargo height span, for h_norm
  double cargo_z1 = 1.0;
};

struct ExternalForce {
  int body_id = 0;
  Vec3 force;  // N, at center of mass
};

// F_base = T/4 * total_mass * accel
inline double base_strength(double tension_T, double total_mass, double accel) {
  return tension_T / 4.0 * total_mass * accel;
}

inline double strength_at_height(const PerimeterField& f, double h_norm) {
  return f.base_strength * f.sigma_h(h_norm);
}

inline std::array<PerimeterField, 4> place_fields(const Aabb& cargo, double d_offset,
                                                  double d_max, double f_base,
                                                  const PiecewiseLinear& sigma_h) {
  std::array<PerimeterField, 4> fields;
  const struct {
    int axis;
    double sign;
    Vec3 normal;
  } sides[4] = {{0, +1.0, {-1, 0, 0}}, {0, -1.0, {1, 0, 0}},
                {1, +1.0, {0, -1, 0}}, {1, -1.0, {0, 1, 0}}};
  for (int k = 0; k < 4; ++k) {
    PerimeterField& f = fields[k];
    f.index = k + 1;
    f.axis = sides[k].axis;
    f.outward_sign = sides[k].sign;
    f.inward_normal = sides[k].normal;
    const double side = sides[k].sign > 0
                            ? (sides[k].axis == 0 ? cargo.hi.x : cargo.hi.y)
                            : (sides[k].axis == 0 ? cargo.lo.x : cargo.lo.y);
    f.perimeter_coord = side;
    f.plane_coord = side + sides[k].sign * d_offset;
    f.base_strength = f_base;
    f.sigma_h = sigma_h;
    f.d_max = d_max;
    f.cargo_z0 = cargo.lo.z;
    f.cargo_z1 = cargo.hi.z;
  }
  return fields;
}

// Per-package restraint forces. A field acts on a package when the package's
// outer face has crossed the cargo's initial perimeter on that side; the
// magnitude is the side strength at the package's height, scaled by linear
// falloff of the distance d remaining to the field plane and by the
// package's mass fraction.
inline std::vector<ExternalForce> field_forces(std::span<const PerimeterField> fields,
                                               std::span<const RigidBody> bodies,
                                               double total_mass) {
  std::vector<ExternalForce> out;
  if (total_mass <= 0.0) return out;
  for (const RigidBody& body : bodies) {
    if (body.role != BodyRole::package) continue;
    Vec3 force{};
    for (const PerimeterField& f : fields) {
      const double face = f.outward_sign > 0
                              ? (f.axis == 0 ? body.aabb.hi.x : body.aabb.hi.y)
                              : (f.axis == 0 ? body.aabb.lo.x : body.aabb.lo.y);
      const double beyond = f.outward_sign * (face - f.perimeter_coord);
      if (beyond <= 0.0) continue;
      const double d = f.outward_sign * (f.plane_coord - face);
      const double falloff = clamp(1.0 - d / f.d_max, 0.0, 1.0);
      if (falloff <= 0.0) continue;
      const double span = f.cargo_z1 - f.cargo_z0;
      const double h_norm = span > 0.0 ? clamp((body.position.z - f.cargo_z0) / span, 0.0, 1.0)
                                       : 0.0;
      const double magnitude =
          strength_at_height(f, h_norm) * falloff * (body.mass / total_mass);
      force += f.inward_normal * magnitude;
    }
    if (!(force == Vec3{})) out.push_back({body.id, force});
  }
  return out;
}

}  // namespace palletbench
