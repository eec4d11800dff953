#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "palletbench/dynamics.hpp"
#include "palletbench/scene.hpp"

using namespace palletbench;

namespace {

const char* kQuadSchema = R"(<palletizing>
  <pallet dx="1200" dy="800" dz="144" mass="25" friction="0.5"/>
  <package id="A" dx="400" dy="300" dz="250" mass="10" friction="0.45"/>
  <layer>
    <place ref="A" x="-200" y="-150" rot="0"/>
    <place ref="A" x="200" y="-150" rot="0"/>
    <place ref="A" x="-200" y="150" rot="0"/>
    <place ref="A" x="200" y="150" rot="0"/>
  </layer>
</palletizing>)";

// 8 packages per layer, 4 layers
std::string eight_per_layer_schema() {
  std::string xml = R"(<palletizing>
  <pallet dx="1200" dy="800" dz="144" mass="25" friction="0.5"/>
  <package id="A" dx="280" dy="180" dz="200" mass="7.5" friction="0.45"/>
)";
  for (int layer = 0; layer < 4; ++layer) {
    xml += "  <layer>\n";
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) {
        xml += "    <place ref=\"A\" x=\"" + std::to_string(-450 + i * 300) + "\" y=\"" +
               std::to_string(-100 + j * 200) + "\" rot=\"0\"/>\n";
      }
    xml += "  </layer>\n";
  }
  xml += "</palletizing>";
  return xml;
}

SimulationParameters params_for(const std::string& xml) {
  return parse_params_json("{}", xml);
}

}  // namespace

TEST_CASE("build_scene: 2x2 single layer geometry") {
  const SimulationParameters params = params_for(kQuadSchema);
  const Scene scene = build_scene(params.schema, params);

  REQUIRE(scene.bodies.size() == 6);  // sleigh + pallet + 4 packages
  CHECK(scene.sleigh().role == BodyRole::sleigh);
  CHECK(scene.pallet().role == BodyRole::pallet);
  CHECK(scene.sleigh().kinematic());
  CHECK_FALSE(scene.pallet().kinematic());

  const double pallet_top = scene.pallet().aabb.hi.z;
  for (size_t i = 2; i < scene.bodies.size(); ++i) {
    const RigidBody& pkg = scene.bodies[i];
    CHECK(pkg.role == BodyRole::package);
    // package center = pallet top + dz/2, within the seeding gap
    CHECK(pkg.position.z == Catch::Approx(pallet_top + 0.125).margin(3e-4));
    CHECK(pkg.linear_velocity == Vec3{});
    CHECK(pkg.angular_velocity == Vec3{});
  }
  CHECK(scene.total_cargo_mass == 40.0);
  CHECK(scene.unit_height == Catch::Approx(0.394));
  CHECK(scene.initial_poses.size() == 6);
}

TEST_CASE("build_scene: 4 layers of 8 packages") {
  const SimulationParameters params = params_for(eight_per_layer_schema());
  const Scene scene = build_scene(params.schema, params);
  int packages = 0;
  for (const RigidBody& b : scene.bodies)
    if (b.role == BodyRole::package) ++packages;
  CHECK(packages == 32);
  CHECK(scene.total_cargo_mass == Catch::Approx(32 * 7.5));
  CHECK(scene.unit_height == Catch::Approx(0.144 + 4 * 0.200));
}

TEST_CASE("build_scene rejects an empty schema") {
  SimulationParameters params = params_for(kQuadSchema);
  params.schema.layers.clear();
  CHECK_THROWS_AS(build_scene(params.schema, params), IntegrityError);
}

TEST_CASE("build_scene is deterministic") {
  const SimulationParameters params = params_for(kQuadSchema);
  const Scene a = build_scene(params.schema, params);
  const Scene b = build_scene(params.schema, params);
  REQUIRE(a.bodies.size() == b.bodies.size());
  for (size_t i = 0; i < a.bodies.size(); ++i) {
    CHECK(a.bodies[i].position == b.bodies[i].position);
    CHECK(a.bodies[i].orientation == b.bodies[i].orientation);
    CHECK(a.bodies[i].mass == b.bodies[i].mass);
  }
  CHECK(snapshot(a) == snapshot(b));
}

TEST_CASE("rotated placements swap footprint extents") {
  const char* rotated = R"(<palletizing>
    <pallet dx="1200" dy="800" dz="144" mass="25" friction="0.5"/>
    <package id="A" dx="400" dy="300" dz="250" mass="10" friction="0.45"/>
    <layer><place ref="A" x="0" y="0" rot="90"/></layer>
  </palletizing>)";
  const SimulationParameters params = params_for(rotated);
  const Scene scene = build_scene(params.schema, params);
  const RigidBody& pkg = scene.bodies[2];
  CHECK(pkg.half_extents.x == Catch::Approx(0.150));  // 300 mm now along x
  CHECK(pkg.half_extents.y == Catch::Approx(0.200));
}

TEST_CASE("verify_integrity: clean scene and injected faults") {
  const SimulationParameters params = params_for(kQuadSchema);
  Scene scene = build_scene(params.schema, params);
  CHECK(verify_integrity(scene).ok());

  SECTION("NaN pose is reported") {
    scene.bodies[3].position.x = std::numeric_limits<double>::quiet_NaN();
    const IntegrityReport report = verify_integrity(scene);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& issue : report.issues)
      if (issue.code == "NonFiniteState" && issue.subject == scene.bodies[3].name) found = true;
    CHECK(found);
  }

  SECTION("10 mm overlap is reported as initial penetration") {
    // shift one package towards its neighbour
    scene.bodies[2].position.x += 0.390;  // boxes were 400 mm apart in x
    scene.bodies[2].update_aabb();
    const IntegrityReport report = verify_integrity(scene);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& issue : report.issues)
      if (issue.code == "InitialPenetration") found = true;
    CHECK(found);
  }

  SECTION("floating package is reported as unsupported") {
    scene.bodies[2].position.z += 0.05;
    scene.bodies[2].update_aabb();
    const IntegrityReport report = verify_integrity(scene);
    REQUIRE_FALSE(report.ok());
    bool found = false;
    for (const auto& issue : report.issues)
      if (issue.code == "Unsupported" && issue.subject == scene.bodies[2].name) found = true;
    CHECK(found);
  }

  SECTION("stale aabb is reported") {
    scene.bodies[2].position.x += 0.001;  // aabb not updated
    const IntegrityReport report = verify_integrity(scene);
    REQUIRE_FALSE(report.ok());
    CHECK(report.issues.front().code == "AabbStale");
  }
}

TEST_CASE("snapshot: immutability and step sensitivity") {
  const SimulationParameters params = params_for(kQuadSchema);
  Scene scene = build_scene(params.schema, params);

  const FrameRecord s0 = snapshot(scene);
  REQUIRE(s0.bodies.size() == scene.initial_poses.size());
  for (size_t i = 0; i < s0.bodies.size(); ++i) {
    CHECK(s0.bodies[i].position == scene.initial_poses[i].position);
    CHECK(s0.bodies[i].orientation == scene.initial_poses[i].orientation);
  }
  CHECK(snapshot(scene) == s0);  // unstepped scene: snapshots are equal

  // zero-gravity world of two isolated bodies, one given velocity:
  // only the body with nonzero motion changes between snapshots
  WorldState world;
  world.gravity = {};
  RigidBody moving;
  moving.id = 0;
  moving.name = "moving";
  moving.half_extents = {0.1, 0.1, 0.1};
  moving.position = {0, 0, 0};
  moving.linear_velocity = {0.1, 0, 0};
  moving.set_mass_box(1.0, false);
  moving.update_aabb();
  RigidBody still = moving;
  still.id = 1;
  still.name = "still";
  still.position = {5, 0, 0};
  still.linear_velocity = {};
  still.update_aabb();
  world.scene.bodies = {moving, still};
  const FrameRecord before = snapshot(world.scene);
  step(world, world.solver.dt);
  const FrameRecord after = snapshot(world.scene, world.sim_time);
  CHECK_FALSE(before.bodies[0].position == after.bodies[0].position);
  CHECK(before.bodies[1].position == after.bodies[1].position);
}

TEST_CASE("rest stability: no package drifts more than 2 mm in one second") {
  const SimulationParameters params = params_for(kQuadSchema);
  Scene scene = build_scene(params.schema, params);
  WorldState world;
  world.scene = std::move(scene);
  const std::vector<Vec3> start = [&] {
    std::vector<Vec3> v;
    for (const auto& b : world.scene.bodies) v.push_back(b.position);
    return v;
  }();
  for (int i = 0; i < 240; ++i) step(world, world.solver.dt);
  for (size_t i = 2; i < world.scene.bodies.size(); ++i)
    CHECK(length(world.scene.bodies[i].position - start[i]) < 0.002);
}

TEST_CASE("unit height equals pallet plus layer heights for any schema") {
  const SimulationParameters params = params_for(eight_per_layer_schema());
  const Scene scene = build_scene(params.schema, params);
  // hand-computed: 144 mm pallet + 4 layers x 200 mm
  CHECK(scene.unit_height == Catch::Approx(0.944));
  CHECK(params.schema.unit_height_mm() == Catch::Approx(944.0));
}
