#pragma once

// Scene construction from a validated configuration, plus integrity
// verification. Coordinate frame: +x is the bench acceleration direction,
// +z is up, origin at the center of the sleigh's top surface.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "palletbench/body.hpp"
#include "palletbench/collision.hpp"
#include "palletbench/config.hpp"
#include "palletbench/math.hpp"
#include "palletbench/restraint.hpp"
#include "palletbench/wrap.hpp"

namespace palletbench {

inline constexpr double kSeedGap = 1e-4;        // 0.1 mm vertical separation at build
inline constexpr double kSupportGapMax = 5e-4;  // 0.5 mm resting tolerance
inline constexpr double kSleighFriction = 2.0;

struct Scene {
  std::vector<RigidBody> bodies;  // [0] sleigh, [1] pallet, then packages
  std::array<PerimeterField, 4> fields{};
  ClothMesh wrap;
  double unit_height = 0.0;       // m, pallet board included
  double total_cargo_mass = 0.0;  // kg, packages only
  Aabb cargo_aabb0;               // initial cargo bounds (packages union)
  std::vector<BodyPose> initial_poses;

  RigidBody& sleigh() { return bodies[0]; }
  const RigidBody& sleigh() const { return bodies[0]; }
  RigidBody& pallet() { return bodies[1]; }
  const RigidBody& pallet() const { return bodies[1]; }
};

inline FrameRecord snapshot(const Scene& scene, double t = 0.0) {
  FrameRecord frame;
  frame.t = t;
  frame.bodies.reserve(scene.bodies.size());
  for (const RigidBody& b : scene.bodies)
    frame.bodies.push_back(
        {b.id, b.position, b.orientation, b.linear_velocity, b.angular_velocity});
  frame.wrap_vertices = scene.wrap.positions;
  return frame;
}

inline Scene build_scene(const PalletizingSchema& schema, const SimulationParameters& params) {
  if (schema.layers.empty()) throw IntegrityError("schema has no layers");

  Scene scene;
  constexpr double mm = 1e-3;
  int next_id = 0;

  const Vec3 pallet_dims = schema.pallet.dims_mm * mm;

  {
    RigidBody sleigh;
    sleigh.id = next_id++;
    sleigh.name = "sleigh";
    sleigh.role = BodyRole::sleigh;
    // generously larger than any pallet so sliding loads stay on the bench
    sleigh.half_extents = {std::max(3.0, pallet_dims.x * 2.0),
                           std::max(2.0, pallet_dims.y * 2.0), 0.1};
    sleigh.position = {0.0, 0.0, -sleigh.half_extents.z};
    sleigh.friction = kSleighFriction;
    sleigh.set_mass_box(1.0, /*is_kinematic=*/true);
    sleigh.update_aabb();
    scene.bodies.push_back(sleigh);
  }

  {
    RigidBody pallet;
    pallet.id = next_id++;
    pallet.name = "pallet";
    pallet.role = BodyRole::pallet;
    pallet.half_extents = pallet_dims * 0.5;
    pallet.position = {0.0, 0.0, kSeedGap + pallet.half_extents.z};
    pallet.friction = schema.pallet.friction;
    pallet.set_mass_box(schema.pallet.mass_kg, false);
    pallet.update_aabb();
    scene.bodies.push_back(pallet);
  }

  double layer_base = kSeedGap + pallet_dims.z;  // top of the pallet board
  for (size_t li = 0; li < schema.layers.size(); ++li) {
    const LayerLayout& layer = schema.layers[li];
    double layer_height = 0.0;
    for (size_t pi = 0; pi < layer.placements.size(); ++pi) {
      const Placement& place = layer.placements[pi];
      const PackageSpec& spec = schema.package(place.package_id);
      Vec3 dims = spec.dims_mm * mm;
      if (place.rot_quarter % 2 != 0) std::swap(dims.x, dims.y);  // quarter turns bake exactly

      RigidBody pkg;
      pkg.id = next_id++;
      pkg.name = "L" + std::to_string(li + 1) + "P" + std::to_string(pi + 1) + ":" + spec.id;
      pkg.role = BodyRole::package;
      pkg.half_extents = dims * 0.5;
      pkg.position = {place.x_mm * mm, place.y_mm * mm, layer_base + kSeedGap + dims.z * 0.5};
      pkg.friction = spec.friction;
      pkg.set_mass_box(spec.mass_kg, false);
      pkg.update_aabb();

      if (pkg.aabb.lo.z < layer_base - kSupportGapMax)
        throw IntegrityError("package " + pkg.name + " extends below its layer base");
      scene.bodies.push_back(pkg);
      layer_height = std::max(layer_height, dims.z);

      if (scene.total_cargo_mass == 0.0 && li == 0 && pi == 0)
        scene.cargo_aabb0 = pkg.aabb;
      else
        scene.cargo_aabb0 = Aabb::united(scene.cargo_aabb0, pkg.aabb);
      scene.total_cargo_mass += spec.mass_kg;
    }
    layer_base += layer_height + kSeedGap;
  }

  scene.unit_height = schema.unit_height_mm() * mm;

  const double accel = params.conditions.accel_g * kGravity;
  const double f_base = base_strength(params.tension_T, scene.total_cargo_mass, accel);
  scene.fields = place_fields(scene.cargo_aabb0, params.field_offset_d, params.field_range_dmax,
                              f_base, params.sigma_h);

  if (params.cloth.enabled) {
    scene.wrap = generate_wrap(scene.cargo_aabb0, params.cloth.resolution, params.cloth.overlap,
                               params.cloth);
    pin_to_frame(scene.wrap, scene.pallet());
  }

  scene.initial_poses = snapshot(scene).bodies;
  return scene;
}

// ---------------------------------------------------------------------------
// Integrity verification

struct IntegrityIssue {
  std::string code;
  std::string subject;
  std::string message;
};

struct IntegrityReport {
  std::vector<IntegrityIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline IntegrityReport verify_integrity(const Scene& scene) {
  IntegrityReport report;
  auto add = [&report](const char* code, const std::string& subject, std::string msg) {
    report.issues.push_back({code, subject, std::move(msg)});
  };

  int sleighs = 0, pallets = 0, packages = 0;
  for (const RigidBody& b : scene.bodies) {
    if (b.role == BodyRole::sleigh) ++sleighs;
    if (b.role == BodyRole::pallet) ++pallets;
    if (b.role == BodyRole::package) ++packages;

    if (!b.finite_state()) {
      add("NonFiniteState", b.name, "body state contains non-finite values");
      continue;
    }
    if (std::abs(b.orientation.norm() - 1.0) > 1e-9)
      add("QuaternionNorm", b.name, "orientation quaternion not normalized");
    RigidBody probe = b;
    probe.update_aabb();
    if (length(probe.aabb.lo - b.aabb.lo) > 1e-9 || length(probe.aabb.hi - b.aabb.hi) > 1e-9)
      add("AabbStale", b.name, "aabb inconsistent with pose and half extents");
    if (!b.kinematic()) {
      const Vec3 expect = RigidBody::box_inertia(b.mass, b.half_extents);
      if (std::abs(expect.x - b.inertia_body.x) > 1e-9 * std::max(1.0, expect.x) ||
          std::abs(expect.y - b.inertia_body.y) > 1e-9 * std::max(1.0, expect.y) ||
          std::abs(expect.z - b.inertia_body.z) > 1e-9 * std::max(1.0, expect.z))
        add("InertiaMismatch", b.name, "inertia tensor is not the solid-box tensor");
    }
  }
  if (sleighs != 1) add("BodyCount", "scene", "expected exactly one sleigh");
  if (pallets != 1) add("BodyCount", "scene", "expected exactly one pallet");
  if (packages == 0) add("BodyCount", "scene", "scene has no packages");

  double mass_sum = 0.0;
  for (const RigidBody& b : scene.bodies)
    if (b.role == BodyRole::package) mass_sum += b.mass;
  if (std::abs(mass_sum - scene.total_cargo_mass) > 1e-9 * std::max(1.0, mass_sum))
    add("CargoMass", "scene", "total_cargo_mass does not match the package sum");

  // initial interpenetration and support gaps via the collision pipeline
  const std::vector<Contact> contacts = detect_contacts(scene.bodies, 2e-3);
  for (const Contact& c : contacts) {
    if (c.penetration > 5e-4)
      add("InitialPenetration",
          std::to_string(c.body_a) + "/" + std::to_string(c.body_b),
          "bodies interpenetrate by " + std::to_string(c.penetration * 1e3) + " mm");
  }
  for (const RigidBody& b : scene.bodies) {
    if (b.role == BodyRole::sleigh) continue;
    if (!b.finite_state()) continue;
    double support_gap = 1e30;
    for (const Contact& c : contacts) {
      if (c.body_a != b.id && c.body_b != b.id) continue;
      if (std::abs(c.normal.z) < 0.9) continue;  // vertical support only
      support_gap = std::min(support_gap, std::max(0.0, c.separation));
    }
    if (support_gap > kSupportGapMax)
      add("Unsupported", b.name, "no supporting surface within 0.5 mm below the body");
  }

  if (!scene.wrap.empty()) {
    Aabb wrap_bounds{scene.wrap.positions.front(), scene.wrap.positions.front()};
    for (const Vec3& p : scene.wrap.positions)
      wrap_bounds = Aabb::united(wrap_bounds, {p, p});
    const Aabb& cargo = scene.cargo_aabb0;
    const double tol = 1e-6;
    if (wrap_bounds.lo.x > cargo.lo.x + tol || wrap_bounds.hi.x < cargo.hi.x - tol ||
        wrap_bounds.lo.y > cargo.lo.y + tol || wrap_bounds.hi.y < cargo.hi.y - tol ||
        wrap_bounds.hi.z < cargo.hi.z - tol)
      add("WrapCoverage", "wrap", "wrap does not enclose the cargo bounds");
    for (const Vec3& p : scene.wrap.positions)
      if (!finite(p)) {
        add("NonFiniteState", "wrap", "wrap vertex contains non-finite values");
        break;
      }
  }

  return report;
}

// Cheap subset of verify_integrity used while the simulation runs;
// positions legitimately penetrate up to the solver slop mid-run.
inline IntegrityReport spot_check(const Scene& scene) {
  IntegrityReport report;
  for (const RigidBody& b : scene.bodies) {
    if (!b.finite_state())
      report.issues.push_back({"NonFiniteState", b.name, "body state contains non-finite values"});
    else if (std::abs(b.orientation.norm() - 1.0) > 1e-6)
      report.issues.push_back({"QuaternionNorm", b.name, "orientation drifted off unit length"});
  }
  for (const Vec3& p : scene.wrap.positions)
    if (!finite(p)) {
      report.issues.push_back({"NonFiniteState", "wrap", "wrap vertex non-finite"});
      break;
    }
  return report;
}

}  // namespace palletbench
