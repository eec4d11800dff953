#pragma once

// Fixed-timestep stepping: sequential-impulse contact solver with Coulomb
// friction (restitution 0) and semi-implicit integration. Solver and
// integrator iterate in canonical order; identical inputs give bit-identical
// states after any number of steps.

#include <algorithm>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "palletbench/body.hpp"
#include "palletbench/collision.hpp"
#include "palletbench/errors.hpp"
#include "palletbench/math.hpp"
#include "palletbench/restraint.hpp"
#include "palletbench/scene.hpp"

namespace palletbench {

struct SolverConfig {
  double dt = 1.0 / 240.0;
  int iterations = 10;
  double slop = 0.001;    // m of tolerated penetration before bias pushes back
  double beta = 0.3;      // Baumgarte positional correction factor
  double margin = 0.002;  // m, speculative contact distance
};

// Accumulated impulses carried across steps (warm starting), matched by the
// contact point's coordinates in body a's frame.
struct ContactCache {
  struct Point {
    Vec3 local_a;
    double normal_impulse = 0.0;
    double tangent_impulse_1 = 0.0;
    double tangent_impulse_2 = 0.0;
    bool consumed = false;
  };
  std::map<std::pair<int, int>, std::vector<Point>> pairs;
};

struct WorldState {
  Scene scene;
  Vec3 gravity{0.0, 0.0, -kGravity};
  SolverConfig solver;
  double sim_time = 0.0;
  ContactCache cache;
};

namespace detail {

inline void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
  if (std::abs(n.x) >= 0.57735)
    t1 = normalized(Vec3{n.y, -n.x, 0.0});
  else
    t1 = normalized(Vec3{0.0, n.z, -n.y});
  t2 = cross(n, t1);
}

struct ContactConstraint {
  RigidBody* a;
  RigidBody* b;
  Mat3 iinv_a, iinv_b;  // world inverse inertia, fixed during the velocity solve
  Vec3 ra, rb;
  Vec3 normal, t1, t2;
  double mass_n = 0.0, mass_t1 = 0.0, mass_t2 = 0.0;
  double target_vn = 0.0;
  double friction = 0.0;
  double lambda_n = 0.0, lambda_t1 = 0.0, lambda_t2 = 0.0;
  Vec3 local_a;  // cache key

  double effective_mass(const Vec3& axis) const {
    const Vec3 ra_x = cross(ra, axis);
    const Vec3 rb_x = cross(rb, axis);
    const double k = a->inv_mass + b->inv_mass + dot(cross(iinv_a * ra_x, ra), axis) +
                     dot(cross(iinv_b * rb_x, rb), axis);
    return k > 0.0 ? 1.0 / k : 0.0;
  }

  Vec3 relative_velocity() const {
    return b->linear_velocity + cross(b->angular_velocity, rb) - a->linear_velocity -
           cross(a->angular_velocity, ra);
  }

  void apply(const Vec3& impulse) {
    b->linear_velocity += impulse * b->inv_mass;
    b->angular_velocity += iinv_b * cross(rb, impulse);
    a->linear_velocity -= impulse * a->inv_mass;
    a->angular_velocity -= iinv_a * cross(ra, impulse);
  }
};

}  // namespace detail

inline void resolve_contacts(WorldState& world, std::vector<Contact>& contacts, int iterations) {
  auto& bodies = world.scene.bodies;
  const SolverConfig& cfg = world.solver;
  const double dt = cfg.dt;

  std::map<int, RigidBody*> by_id;
  for (auto& b : bodies) by_id[b.id] = &b;

  std::vector<detail::ContactConstraint> cons;
  cons.reserve(contacts.size());
  for (const Contact& c : contacts) {
    detail::ContactConstraint cc;
    cc.a = by_id.at(c.body_a);
    cc.b = by_id.at(c.body_b);
    cc.iinv_a = cc.a->world_inv_inertia();
    cc.iinv_b = cc.b->world_inv_inertia();
    cc.ra = c.point - cc.a->position;
    cc.rb = c.point - cc.b->position;
    cc.normal = c.normal;
    detail::tangent_basis(c.normal, cc.t1, cc.t2);
    cc.mass_n = cc.effective_mass(cc.normal);
    cc.mass_t1 = cc.effective_mass(cc.t1);
    cc.mass_t2 = cc.effective_mass(cc.t2);
    cc.friction = c.combined_friction;
    // speculative gap closing for separated points, positional bias beyond slop
    cc.target_vn = c.separation > 0.0
                       ? -c.separation / dt
                       : cfg.beta / dt * std::max(-c.separation - cfg.slop, 0.0);
    cc.local_a = cc.a->orientation.to_matrix().transposed() * (c.point - cc.a->position);
    cons.push_back(cc);
  }

  for (auto& cc : cons) {
    const auto it = world.cache.pairs.find({cc.a->id, cc.b->id});
    if (it == world.cache.pairs.end()) continue;
    for (auto& cached : it->second) {
      if (cached.consumed || length_squared(cached.local_a - cc.local_a) > 25e-6) continue;
      cached.consumed = true;
      cc.lambda_n = cached.normal_impulse;
      cc.lambda_t1 = cached.tangent_impulse_1;
      cc.lambda_t2 = cached.tangent_impulse_2;
      cc.apply(cc.normal * cc.lambda_n + cc.t1 * cc.lambda_t1 + cc.t2 * cc.lambda_t2);
      break;
    }
  }

  for (int it = 0; it < iterations; ++it) {
    for (auto& cc : cons) {
      {
        const double vn = dot(cc.relative_velocity(), cc.normal);
        const double old = cc.lambda_n;
        cc.lambda_n = std::max(0.0, old + (cc.target_vn - vn) * cc.mass_n);
        cc.apply(cc.normal * (cc.lambda_n - old));
      }
      {
        const Vec3 rel = cc.relative_velocity();
        double new_t1 = cc.lambda_t1 - dot(rel, cc.t1) * cc.mass_t1;
        double new_t2 = cc.lambda_t2 - dot(rel, cc.t2) * cc.mass_t2;
        const double max_f = cc.friction * cc.lambda_n;
        const double mag2 = new_t1 * new_t1 + new_t2 * new_t2;
        if (mag2 > max_f * max_f) {
          const double scale = mag2 > 0.0 ? max_f / std::sqrt(mag2) : 0.0;
          new_t1 *= scale;
          new_t2 *= scale;
        }
        cc.apply(cc.t1 * (new_t1 - cc.lambda_t1) + cc.t2 * (new_t2 - cc.lambda_t2));
        cc.lambda_t1 = new_t1;
        cc.lambda_t2 = new_t2;
      }
    }
  }

  ContactCache next;
  for (const auto& cc : cons)
    next.pairs[{cc.a->id, cc.b->id}].push_back(
        {cc.local_a, cc.lambda_n, cc.lambda_t1, cc.lambda_t2, false});
  world.cache = std::move(next);
}

inline void apply_external(WorldState& world, int body_id, const Vec3& force) {
  for (auto& b : world.scene.bodies) {
    if (b.id == body_id) {
      if (!finite(force)) throw FatalNumericError("non-finite external force", b.name);
      b.force_accum += force;
      return;
    }
  }
  throw Error("apply_external: unknown body id " + std::to_string(body_id));
}

// Semi-implicit: v += (F/m + g) dt, then x += v dt. The quaternion advances
// from omega and omega is re-derived from the conserved angular momentum,
// so torque-free spin preserves L to rounding.
inline void integrate(WorldState& world, double dt) {
  for (RigidBody& b : world.scene.bodies) {
    if (b.kinematic()) {
      b.position += b.linear_velocity * dt;
      b.force_accum = {};
      b.update_aabb();
      continue;
    }
    b.linear_velocity += (b.force_accum * b.inv_mass + world.gravity) * dt;
    b.position += b.linear_velocity * dt;

    if (length_squared(b.angular_velocity) > 0.0) {
      const Vec3 momentum = b.angular_momentum();
      const Vec3& w = b.angular_velocity;
      const Quat spin = Quat{0.0, w.x, w.y, w.z} * b.orientation * 0.5;
      b.orientation = (b.orientation + spin * dt).normalized();
      b.angular_velocity = b.world_inv_inertia() * momentum;
    }
    b.force_accum = {};
    b.update_aabb();
    if (!b.finite_state())
      throw FatalNumericError("non-finite body state after integration", b.name);
  }
  world.sim_time += dt;
}

// One fixed step: externals -> detect -> resolve -> integrate.
inline void step(WorldState& world, double dt, std::span<const ExternalForce> externals = {}) {
  for (const ExternalForce& f : externals) apply_external(world, f.body_id, f.force);
  std::vector<Contact> contacts = detect_contacts(world.scene.bodies, world.solver.margin);
  resolve_contacts(world, contacts, world.solver.iterations);
  integrate(world, dt);
}

}  // namespace palletbench
