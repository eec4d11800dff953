#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "palletbench/collision.hpp"

using namespace palletbench;

namespace {

RigidBody make_box(int id, const Vec3& half, const Vec3& pos, double friction = 0.5,
                   double mass = 1.0, bool kinematic = false) {
  RigidBody b;
  b.id = id;
  b.name = "box" + std::to_string(id);
  b.half_extents = half;
  b.position = pos;
  b.friction = friction;
  b.set_mass_box(mass, kinematic);
  b.update_aabb();
  return b;
}

}  // namespace

TEST_CASE("distant boxes produce no contacts") {
  std::vector<RigidBody> bodies{make_box(0, {0.5, 0.5, 0.5}, {0, 0, 0}),
                                make_box(1, {0.5, 0.5, 0.5}, {2.0, 0, 0})};
  CHECK(detect_contacts(bodies).empty());
}

TEST_CASE("unit box resting exactly on another: 4 corner contacts, +z, zero depth") {
  std::vector<RigidBody> bodies{make_box(0, {0.5, 0.5, 0.5}, {0, 0, 0.5}),
                                make_box(1, {0.5, 0.5, 0.5}, {0, 0, 1.5})};
  const auto contacts = detect_contacts(bodies);
  REQUIRE(contacts.size() == 4);
  for (const Contact& c : contacts) {
    CHECK(c.normal.z == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c.normal.x) < 1e-12);
    CHECK(c.penetration == 0.0);
    CHECK(c.separation == Catch::Approx(0.0).margin(1e-12));
    CHECK(std::abs(std::abs(c.point.x) - 0.5) < 1e-9);  // corners of the shared face
    CHECK(std::abs(std::abs(c.point.y) - 0.5) < 1e-9);
    CHECK(c.combined_friction == Catch::Approx(0.5));
  }
}

TEST_CASE("5 mm overlap reports matching penetration") {
  std::vector<RigidBody> bodies{make_box(0, {0.5, 0.5, 0.5}, {0, 0, 0.5}),
                                make_box(1, {0.5, 0.5, 0.5}, {0, 0, 1.495})};
  const auto contacts = detect_contacts(bodies);
  REQUIRE(contacts.size() == 4);
  for (const Contact& c : contacts) {
    CHECK(c.penetration == Catch::Approx(0.005).margin(1e-6));
    CHECK(c.normal.z > 0.999999);
  }
}

TEST_CASE("manifold is symmetric in pair order up to normal sign") {
  const RigidBody lower = make_box(0, {0.5, 0.5, 0.5}, {0.1, -0.05, 0.5});
  const RigidBody upper = make_box(1, {0.4, 0.4, 0.4}, {0.0, 0.0, 1.395});

  std::vector<RigidBody> ab{lower, upper};
  std::vector<RigidBody> ba{upper, lower};
  ba[0].id = 0;
  ba[1].id = 1;

  const auto c_ab = detect_contacts(ab);
  const auto c_ba = detect_contacts(ba);
  REQUIRE(c_ab.size() == c_ba.size());
  REQUIRE(!c_ab.empty());
  // same contact geometry, opposite normals
  double sum_ab = 0.0, sum_ba = 0.0;
  for (const auto& c : c_ab) {
    sum_ab += c.penetration;
    CHECK(c.normal.z > 0.99);
  }
  for (const auto& c : c_ba) {
    sum_ba += c.penetration;
    CHECK(c.normal.z < -0.99);
  }
  CHECK(sum_ab == Catch::Approx(sum_ba).margin(1e-9));
}

TEST_CASE("rotated box on a slab clips to a 4-point manifold") {
  RigidBody slab = make_box(0, {1.0, 1.0, 0.1}, {0, 0, 0.1});
  RigidBody box = make_box(1, {0.2, 0.2, 0.2}, {0, 0, 0.399});
  box.orientation = Quat::from_axis_angle({0, 0, 1}, 0.6);
  box.update_aabb();
  std::vector<RigidBody> bodies{slab, box};
  const auto contacts = detect_contacts(bodies);
  REQUIRE(contacts.size() == 4);
  for (const Contact& c : contacts) {
    CHECK(c.normal.z > 0.999999);
    CHECK(c.penetration == Catch::Approx(0.001).margin(1e-6));
  }
}

TEST_CASE("crossed diagonal boxes meet at an edge-edge contact") {
  // two long boxes tilted 45 degrees about their long axes, ridges crossing
  RigidBody a = make_box(0, {0.5, 0.1, 0.1}, {0, 0, 0});
  a.orientation = Quat::from_axis_angle({1, 0, 0}, M_PI / 4.0);
  a.update_aabb();
  RigidBody b = make_box(1, {0.1, 0.5, 0.1}, {0, 0, 0.28});
  b.orientation = Quat::from_axis_angle({0, 1, 0}, M_PI / 4.0);
  b.update_aabb();

  std::vector<RigidBody> bodies{a, b};
  const auto contacts = detect_contacts(bodies);
  REQUIRE(contacts.size() == 1);
  const Contact& c = contacts[0];
  CHECK(std::abs(c.normal.z) > 0.99);
  // hand-computed: both project 0.1*sqrt(2) onto z, centers 0.28 apart
  const double expected_pen = 0.2 * std::sqrt(2.0) - 0.28;
  CHECK(c.penetration == Catch::Approx(expected_pen).margin(1e-6));
  CHECK(std::abs(c.point.x) < 0.05);
  CHECK(std::abs(c.point.y) < 0.05);
}

TEST_CASE("kinematic pairs are skipped") {
  std::vector<RigidBody> bodies{make_box(0, {1, 1, 1}, {0, 0, 0}, 0.5, 1.0, true),
                                make_box(1, {1, 1, 1}, {0.5, 0, 0}, 0.5, 1.0, true)};
  CHECK(detect_contacts(bodies).empty());
}
