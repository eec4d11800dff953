// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//  1. restraint base-strength formula reproduction across a property grid
//  2. bench motion profile, analytic and numerically integrated
//  3. Coulomb slip oracle on the single-box-on-sleigh grid
//  4. EUMOS classifier vs a brute-force threshold checker, 1000 traces
//  5. one-way cloth coupling: rigid trajectories bit-identical
//  6. campaign determinism and parallelism independence
//  7. conservation suite (momentum, angular momentum, stack penetration)
//  8. qualitative behavior: accel-sensitive and layout-sensitive fixtures
//  9. out-of-scope note (neural-network metrics, rendered dataset)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "palletbench/palletbench.hpp"

using namespace palletbench;

namespace {

std::string fixture(const std::string& name) {
  return std::string(PALLETBENCH_FIXTURE_DIR) + "/" + name;
}

struct Criterion {
  int number;
  const char* label;
  std::function<bool(std::string&)> run;
};

// ---------------------------------------------------------------------------
// 1. formula reproduction

bool criterion_formula(std::string& detail) {
  int checked = 0;
  for (double T : {0.0, 0.5, 1.0, 2.0}) {
    for (double mass = 50.0; mass <= 1000.0; mass += 50.0) {
      for (int a10 = 3; a10 <= 8; ++a10) {
        const double accel = a10 / 10.0 * kGravity;
        const double expect = T / 4.0 * mass * accel;
        const double got = base_strength(T, mass, accel);
        const double scale = std::max(1.0, std::abs(expect));
        if (std::abs(got - expect) > 1e-12 * scale) {
          detail = "mismatch at T=" + std::to_string(T) + " m=" + std::to_string(mass);
          return false;
        }
        ++checked;
      }
    }
  }
  detail = std::to_string(checked) + " grid points within 1e-12 relative";
  return true;
}

// ---------------------------------------------------------------------------
// 2. motion profile

bool criterion_motion_profile(std::string& detail) {
  const double dt = 1.0 / 240.0;
  double worst = 0.0;
  for (int a10 = 3; a10 <= 8; ++a10) {
    for (double t_imp : {0.35, 0.40, 0.45, 0.50}) {
      const MotionProfile p{a10 / 10.0 * kGravity, t_imp, 2.0};
      if (std::abs(p.peak_velocity() - p.accel * t_imp) > 1e-12) {
        detail = "peak velocity mismatch";
        return false;
      }
      if (velocity_at(p, p.stop_time()) != 0.0) {
        detail = "v(t_stop) != 0";
        return false;
      }
      // forward-Euler integration of the acceleration profile; braking
      // cannot reverse motion, so velocity clamps at zero
      double v = 0.0;
      for (long k = 0; k * dt < p.stop_time() + 0.5; ++k) {
        const double t = k * dt;
        worst = std::max(worst, std::abs(v - velocity_at(p, t)));
        v += acceleration_at(p, t) * dt;
        if (t >= p.impulse_duration && v < 0.0) v = 0.0;
      }
    }
  }
  detail = "max |v_num - v_analytic| = " + std::to_string(worst) + " m/s";
  return worst < 1e-3;
}

// ---------------------------------------------------------------------------
// 3. Coulomb slip oracle

bool criterion_slip_oracle(std::string& detail) {
  int agree = 0, total = 0;
  for (int a10 = 3; a10 <= 8; ++a10) {
    for (int mu10 = 2; mu10 <= 9; ++mu10) {
      const double accel_g = a10 / 10.0;
      const double mu = mu10 / 10.0;
      if (std::abs(accel_g - mu) < 0.05) continue;  // boundary band excluded
      ++total;

      WorldState world;
      RigidBody sleigh;
      sleigh.id = 0;
      sleigh.name = "sleigh";
      sleigh.role = BodyRole::sleigh;
      sleigh.half_extents = {3, 2, 0.1};
      sleigh.position = {0, 0, -0.1};
      sleigh.friction = 2.0;
      sleigh.set_mass_box(1.0, true);
      sleigh.update_aabb();
      RigidBody box;
      box.id = 1;
      box.name = "box";
      box.role = BodyRole::package;
      box.half_extents = {0.2, 0.15, 0.125};
      box.position = {0, 0, 0.1251};
      box.friction = mu * mu / sleigh.friction;  // combined = sqrt(phi_s * phi_b) = mu
      box.set_mass_box(10.0, false);
      box.update_aabb();
      world.scene.bodies = {sleigh, box};

      const MotionProfile profile{accel_g * kGravity, 0.5, 2.0};
      const double dt = world.solver.dt;
      const double rel0 = world.scene.bodies[1].position.x - world.scene.bodies[0].position.x;
      while (world.sim_time < profile.impulse_duration + 0.1) {
        drive_sleigh(world.scene.bodies[0], profile, world.sim_time);
        step(world, dt);
      }
      const double rel = std::abs(world.scene.bodies[1].position.x -
                                  world.scene.bodies[0].position.x - rel0);
      const bool slipped = rel > 0.005;
      const bool predicted = accel_g > mu;
      if (slipped == predicted) ++agree;
    }
  }
  detail = std::to_string(agree) + "/" + std::to_string(total) + " cells match a > mu*g";
  return agree >= static_cast<int>(std::ceil(0.95 * total));
}

// ---------------------------------------------------------------------------
// 4. EUMOS threshold oracle

struct OracleVerdict {
  std::string outcome;
  std::set<std::string> criteria;
};

// brute-force threshold checker, independent of validation.hpp internals
OracleVerdict brute_force_check(const DeformationTrace& trace, const WrapStrainTimeline& wrap,
                                const ValidationThresholds& th, double H) {
  OracleVerdict verdict;

  long settle = -1;
  long window_start = -1;
  for (size_t f = 0; f < trace.frames.size(); ++f) {
    if (trace.frames[f].t < trace.bench_stop_time) continue;
    bool calm = true;
    for (double s : trace.frames[f].speeds) calm = calm && s < th.settle_speed_eps;
    if (!calm) {
      window_start = -1;
      continue;
    }
    if (window_start < 0) window_start = static_cast<long>(f);
    if (trace.frames[f].t - trace.frames[window_start].t >= th.settle_hold) {
      settle = static_cast<long>(f);
      break;
    }
  }

  const size_t last = settle >= 0 ? static_cast<size_t>(settle) : trace.frames.size() - 1;
  double elastic = 0.0;
  for (size_t f = 0; f <= last; ++f)
    for (const auto& pkg : trace.frames[f].corner_disp)
      for (double d : pkg) elastic = std::max(elastic, d);
  elastic /= H;
  if (elastic > th.elastic_frac) verdict.criteria.insert("elastic");

  if (wrap.first_exceed_frame >= 0) verdict.criteria.insert("wrap_integrity");

  if (settle >= 0) {
    double permanent = 0.0;
    double bottom = 0.0;
    const auto& frame = trace.frames[static_cast<size_t>(settle)];
    for (size_t p = 0; p < frame.corner_disp.size(); ++p) {
      for (int k = 0; k < 8; ++k) {
        permanent = std::max(permanent, frame.corner_disp[p][k]);
        if (trace.initial_heights[p][k] < th.bottom_zone_height)
          bottom = std::max(bottom, frame.corner_disp[p][k]);
      }
    }
    permanent /= H;
    if (permanent > th.permanent_frac) verdict.criteria.insert("permanent");
    if (bottom >= th.bottom_zone_limit) verdict.criteria.insert("bottom_zone");
    verdict.outcome = verdict.criteria.empty() ? "success" : "failure";
  } else {
    verdict.outcome = verdict.criteria.empty() ? "inconclusive" : "failure";
  }
  return verdict;
}

bool criterion_eumos_oracle(std::string& detail) {
  const ValidationThresholds th;
  const double H = 2.0;
  int agree = 0;
  const int n_traces = 1000;

  for (int trial = 0; trial < n_traces; ++trial) {
    SplitMix64 rng(derive_seed(424242, trial));
    DeformationTrace trace;
    trace.bench_stop_time = 0.0;
    const int n_pkg = 1 + static_cast<int>(rng.next_below(3));
    for (int p = 0; p < n_pkg; ++p) {
      trace.package_names.push_back("P" + std::to_string(p + 1));
      for (int k = 0; k < 8; ++k) trace.corner_local.push_back({});
      trace.initial_corners.push_back({});
      std::array<double, 8> heights{};
      for (int k = 0; k < 8; ++k)
        heights[k] = k < 4 ? 0.05 + 0.1 * rng.next_double() : 0.3 + 0.5 * rng.next_double();
      trace.initial_heights.push_back(heights);
    }

    const bool settles = rng.next_below(10) < 7;
    const int moving_frames = 4 + static_cast<int>(rng.next_below(12));
    const int total_frames = moving_frames + (settles ? 6 : 0);
    for (int f = 0; f < total_frames; ++f) {
      DeformationTrace::Frame frame;
      frame.t = 0.125 * f;
      for (int p = 0; p < n_pkg; ++p) {
        std::array<double, 8> corners{};
        for (int k = 0; k < 8; ++k) {
          double d = rng.uniform(0.0, 0.25);
          // force exact boundary values into the field regularly
          const auto pick = rng.next_below(40);
          if (pick == 0) d = 0.05 * H;   // exactly 5% of H
          if (pick == 1) d = 0.10 * H;   // exactly 10% of H
          if (pick == 2) d = 0.04;       // exactly the 4 cm bottom limit
          if (pick == 3) d = 0.0;
          corners[k] = d;
        }
        frame.corner_disp.push_back(corners);
        frame.max_disp = std::max(frame.max_disp,
                                  *std::max_element(corners.begin(), corners.end()));
        frame.speeds.push_back(f < moving_frames ? 0.5 : 0.0);
      }
      trace.frames.push_back(frame);
    }

    WrapStrainTimeline wrap;
    wrap.tear_threshold = 0.25;
    const auto wrap_case = rng.next_below(4);
    if (wrap_case == 1) wrap.record(2, 0.24, 5);
    if (wrap_case == 2) wrap.record(2, 0.25, 5);  // exactly at the threshold: torn
    if (wrap_case == 3) wrap.record(2, rng.uniform(0.0, 0.5), 5);

    const ValidationReport report = classify(trace, wrap, th, H);
    const OracleVerdict oracle = brute_force_check(trace, wrap, th, H);

    std::set<std::string> reported;
    for (const auto& v : report.violations) reported.insert(v.criterion);
    if (oracle.outcome == outcome_name(report.outcome) && oracle.criteria == reported) {
      ++agree;
    } else if (agree == trial) {
      detail = "first disagreement at trace " + std::to_string(trial) + ": classify=" +
               outcome_name(report.outcome) + " oracle=" + oracle.outcome;
    }
  }
  if (agree == n_traces) detail = "1000/1000 traces agree, boundary values included";
  return agree == n_traces;
}

// ---------------------------------------------------------------------------
// 5. one-way coupling

bool criterion_one_way_coupling(std::string& detail) {
  SimulationParameters params = load_params_file(fixture("layout_flat.json"));
  params.conditions.accel_g = 0.5;
  params.tension_T = 1.0;

  SimulationParameters with_cloth = params;
  with_cloth.cloth.enabled = true;
  SimulationParameters without_cloth = params;
  without_cloth.cloth.enabled = false;

  WorldState a, b;
  a.scene = build_scene(with_cloth.schema, with_cloth);
  b.scene = build_scene(without_cloth.schema, without_cloth);
  const MotionProfile profile = MotionProfile::from_conditions(params.conditions);
  const double dt = params.timestep;

  long frames = 0;
  while (a.sim_time < profile.stop_time() + 1.0) {
    drive_sleigh(a.scene.sleigh(), profile, a.sim_time);
    drive_sleigh(b.scene.sleigh(), profile, b.sim_time);
    const auto ext_a = field_forces(a.scene.fields, a.scene.bodies, a.scene.total_cargo_mass);
    const auto ext_b = field_forces(b.scene.fields, b.scene.bodies, b.scene.total_cargo_mass);
    step(a, dt, ext_a);
    step(b, dt, ext_b);
    if (!a.scene.wrap.empty()) step_cloth(a.scene.wrap, a.scene.bodies, a.gravity, dt);
    ++frames;
    for (size_t i = 0; i < a.scene.bodies.size(); ++i) {
      const RigidBody& ba = a.scene.bodies[i];
      const RigidBody& bb = b.scene.bodies[i];
      if (!(ba.position == bb.position) || !(ba.orientation == bb.orientation) ||
          !(ba.linear_velocity == bb.linear_velocity) ||
          !(ba.angular_velocity == bb.angular_velocity)) {
        detail = "diverged at frame " + std::to_string(frames) + " body " + ba.name;
        return false;
      }
    }
  }
  detail = "bit-identical over " + std::to_string(frames) + " steps at 0.5 g";
  return true;
}

// ---------------------------------------------------------------------------
// 6. determinism & parallelism independence

bool criterion_campaign_determinism(std::string& detail) {
  CampaignConfig config;
  {
    const std::string xml = read_file(fixture("campaign_base.xml"));
    config.ranges.base = parse_params_json(R"({"max_duration": 8.0})", xml);
  }
  config.n_runs = 20;
  config.seed = 20260810;

  config.parallelism = 1;
  const CampaignOutcome serial = run_campaign(config);
  config.parallelism = 8;
  const CampaignOutcome parallel = run_campaign(config);

  for (int i = 0; i < config.n_runs; ++i) {
    json a = report_to_json(serial.results[i]);
    json b = report_to_json(parallel.results[i]);
    a.erase("timing");
    b.erase("timing");
    if (a.dump() != b.dump()) {
      detail = "run " + std::to_string(i) + " differs between parallelism 1 and 8";
      return false;
    }
  }
  if (campaign_to_json(serial).dump() != campaign_to_json(parallel).dump()) {
    detail = "aggregate statistics differ";
    return false;
  }
  const auto& s = serial.stats;
  if (s.successes + s.failures + s.inconclusive != s.runs || s.errors != 0) {
    detail = "statistics tally broken or engine errors present";
    return false;
  }
  detail = "20 runs byte-identical at parallelism 1 vs 8 (successes=" +
           std::to_string(s.successes) + ", failures=" + std::to_string(s.failures) +
           ", inconclusive=" + std::to_string(s.inconclusive) + ")";
  return true;
}

// ---------------------------------------------------------------------------
// 7. conservation suite

bool criterion_conservation(std::string& detail) {
  // momentum: frictionless two-box collisions, 1000 steps each
  SplitMix64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    WorldState world;
    world.gravity = {};
    for (int i = 0; i < 2; ++i) {
      RigidBody b;
      b.id = i;
      b.name = "b" + std::to_string(i);
      b.half_extents = {0.3 + 0.2 * rng.next_double(), 0.3, 0.3};
      b.position = {i == 0 ? -0.7 : 0.7, rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)};
      b.friction = 0.0;
      b.set_mass_box(1.0 + 4.0 * rng.next_double(), false);
      b.update_aabb();
      b.linear_velocity = {i == 0 ? 1.0 : -1.0, rng.uniform(-0.2, 0.2), 0};
      world.scene.bodies.push_back(b);
    }
    Vec3 p0{};
    for (const auto& b : world.scene.bodies) p0 += b.linear_velocity * b.mass;
    for (int i = 0; i < 1000; ++i) step(world, world.solver.dt);
    Vec3 p1{};
    for (const auto& b : world.scene.bodies) p1 += b.linear_velocity * b.mass;
    if (length(p1 - p0) / std::max(1.0, length(p0)) > 1e-9) {
      detail = "momentum drift in trial " + std::to_string(trial);
      return false;
    }
  }

  // angular momentum: torque-free tumble for 1 s
  {
    WorldState world;
    world.gravity = {};
    RigidBody b;
    b.id = 0;
    b.name = "tumbler";
    b.half_extents = {0.3, 0.2, 0.1};
    b.position = {0, 0, 0};
    b.set_mass_box(6.0, false);
    b.update_aabb();
    b.angular_velocity = {3.0, 5.0, 1.0};
    world.scene.bodies.push_back(b);
    const Vec3 L0 = world.scene.bodies[0].angular_momentum();
    for (int i = 0; i < 240; ++i) step(world, world.solver.dt);
    const Vec3 L1 = world.scene.bodies[0].angular_momentum();
    if (length(L1 - L0) / length(L0) > 1e-6) {
      detail = "angular momentum drift " + std::to_string(length(L1 - L0) / length(L0));
      return false;
    }
  }

  // resting 8-layer stack: steady-state penetration within 2 mm
  {
    std::string xml = R"(<palletizing>
      <pallet dx="1200" dy="800" dz="144" mass="25" friction="0.6"/>
      <package id="S" dx="380" dy="280" dz="220" mass="9" friction="0.6"/>
)";
    for (int layer = 0; layer < 8; ++layer) {
      xml += "<layer>";
      xml += R"(<place ref="S" x="-195" y="-145" rot="0"/>)";
      xml += R"(<place ref="S" x="195" y="-145" rot="0"/>)";
      xml += R"(<place ref="S" x="-195" y="145" rot="0"/>)";
      xml += R"(<place ref="S" x="195" y="145" rot="0"/>)";
      xml += "</layer>\n";
    }
    xml += "</palletizing>";
    const SimulationParameters params = parse_params_json(R"({"cloth":{"enabled":false}})", xml);
    WorldState world;
    world.scene = build_scene(params.schema, params);
    for (int i = 0; i < 720; ++i) step(world, world.solver.dt);  // settle 3 s
    double max_pen = 0.0;
    for (int i = 0; i < 240; ++i) {
      step(world, world.solver.dt);
      for (const Contact& c : detect_contacts(world.scene.bodies, world.solver.margin))
        max_pen = std::max(max_pen, c.penetration);
    }
    if (max_pen > 0.002) {
      detail = "8-layer stack penetration " + std::to_string(max_pen * 1e3) + " mm";
      return false;
    }
    detail = "momentum 1e-9, angular momentum 1e-6, stack penetration " +
             std::to_string(max_pen * 1e3) + " mm";
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. qualitative paper behavior

bool criterion_qualitative(std::string& detail) {
  const Outcome low =
      run_simulation(load_params_file(fixture("accel_sensitive_low.json"))).report.outcome;
  const Outcome high =
      run_simulation(load_params_file(fixture("accel_sensitive_high.json"))).report.outcome;
  const Outcome flat =
      run_simulation(load_params_file(fixture("layout_flat.json"))).report.outcome;
  const Outcome column =
      run_simulation(load_params_file(fixture("layout_column.json"))).report.outcome;

  detail = std::string("same schema: 0.3g=") + outcome_name(low) + " 0.8g=" +
           outcome_name(high) + "; same conditions: flat=" + outcome_name(flat) +
           " column=" + outcome_name(column);
  return low == Outcome::success && high == Outcome::failure && flat == Outcome::success &&
         column == Outcome::failure;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "formula reproduction (restraint base strength)", criterion_formula},
      {2, "motion profile (analytic + integrated)", criterion_motion_profile},
      {3, "Coulomb slip oracle", criterion_slip_oracle},
      {4, "EUMOS threshold oracle (1000 traces)", criterion_eumos_oracle},
      {5, "one-way cloth coupling", criterion_one_way_coupling},
      {6, "campaign determinism & parallelism independence", criterion_campaign_determinism},
      {7, "conservation suite", criterion_conservation},
      {8, "qualitative accel/layout sensitivity", criterion_qualitative},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", c.number, c.label,
                detail.c_str(), secs);
    if (!ok) ++failures;
  }
  std::printf("[NOTE] criterion 9: neural-network metrics and the 1500-video rendered dataset "
              "are out of scope at desk scale; covered by criteria 3-8, with the dataset "
              "sweep machinery exercised in criterion 6.\n");
  return failures;
}
