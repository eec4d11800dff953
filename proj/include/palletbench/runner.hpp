#pragma once

// Simulation controller, statistics, output. Single runs, randomized
// campaigns over a bounded worker pool, canonical JSON reports, and frame
// exports (poses-ndjson / obj-sequence).

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "palletbench/bench.hpp"
#include "palletbench/config.hpp"
#include "palletbench/dynamics.hpp"
#include "palletbench/errors.hpp"
#include "palletbench/scene.hpp"
#include "palletbench/validation.hpp"
#include "palletbench/wrap.hpp"

namespace palletbench {

inline constexpr int kReportVersion = 1;
inline constexpr double kReportRateHz = 60.0;

enum class ExportFormat { none, poses_ndjson, obj_sequence };

struct ExportOptions {
  ExportFormat format = ExportFormat::none;
  std::filesystem::path out_dir;
  bool include_wrap = true;
};

struct SimulationResult {
  SimulationParameters params;  // sufficient to reproduce the run
  ValidationReport report;
  std::vector<double> frame_max_disp;    // per report frame
  std::vector<double> frame_max_strain;  // per report frame
  double wall_seconds = 0.0;
  long steps = 0;
  std::vector<std::string> exported_files;
  std::string error;  // non-empty when the run aborted
};

// ---------------------------------------------------------------------------
// Frame export

namespace detail {

inline json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
inline json quat_json(const Quat& q) { return json::array({q.w, q.x, q.y, q.z}); }

class FrameExporter {
 public:
  FrameExporter(const ExportOptions& options, const Scene& scene, double report_dt,
                double unit_height, double bench_stop_time)
      : options_(options), report_dt_(report_dt) {
    if (options_.format == ExportFormat::none) return;
    std::filesystem::create_directories(options_.out_dir);
    for (const RigidBody& b : scene.bodies) {
      json jb;
      jb["id"] = b.id;
      jb["name"] = b.name;
      jb["role"] = role_name(b.role);
      jb["half_extents"] = vec_json(b.half_extents);
      meta_bodies_.push_back(jb);
    }
    wrap_rows_ = scene.wrap.rows;
    wrap_ring_ = scene.wrap.ring_size;
    wrap_vertex_count_ = scene.wrap.positions.size();
    tear_threshold_ = scene.wrap.tear_threshold;
    unit_height_ = unit_height;
    bench_stop_time_ = bench_stop_time;
    if (options_.format == ExportFormat::poses_ndjson) open_ndjson();
  }

  void frame(const FrameRecord& record, double max_wrap_strain) {
    if (options_.format == ExportFormat::poses_ndjson) write_ndjson(record, max_wrap_strain);
    if (options_.format == ExportFormat::obj_sequence) write_obj(record);
    ++frame_index_;
  }

  std::vector<std::string> files() const { return files_; }

 private:
  void open_ndjson() {
    const auto path = options_.out_dir / "frames.ndjson";
    stream_.open(path);
    if (!stream_) throw IoError("cannot open frame export", path.string());
    files_.push_back(path.string());
    json meta;
    meta["meta"] = {{"version", kReportVersion},
                    {"report_dt", report_dt_},
                    {"unit_height", unit_height_},
                    {"bench_stop_time", bench_stop_time_},
                    {"bodies", meta_bodies_},
                    {"wrap_vertex_count", wrap_vertex_count_},
                    {"tear_threshold", tear_threshold_}};
    stream_ << meta.dump() << "\n";
  }

  void write_ndjson(const FrameRecord& record, double max_wrap_strain) {
    json line;
    line["t"] = record.t;
    json bodies = json::array();
    for (const BodyPose& p : record.bodies) {
      json jb;
      jb["id"] = p.id;
      jb["pos"] = vec_json(p.position);
      jb["quat"] = quat_json(p.orientation);
      bodies.push_back(jb);
    }
    line["bodies"] = bodies;
    if (options_.include_wrap && !record.wrap_vertices.empty()) {
      json verts = json::array();
      for (const Vec3& v : record.wrap_vertices) verts.push_back(vec_json(v));
      line["wrap_vertices"] = verts;
      line["max_wrap_strain"] = max_wrap_strain;
    }
    stream_ << line.dump() << "\n";
    if (!stream_) throw IoError("frame export write failed", files_.back());
  }

  void write_obj(const FrameRecord& record) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06zu.obj", frame_index_);
    const auto path = options_.out_dir / name;
    std::ofstream obj(path);
    if (!obj) throw IoError("cannot open frame export", path.string());
    files_.push_back(path.string());
    obj << "# t=" << record.t << "\n";
    long base = 1;
    for (size_t bi = 0; bi < record.bodies.size(); ++bi) {
      const BodyPose& p = record.bodies[bi];
      const json& jb = meta_bodies_[bi];
      const auto he = jb["half_extents"];
      RigidBody shape;
      shape.half_extents = {he[0].get<double>(), he[1].get<double>(), he[2].get<double>()};
      shape.position = p.position;
      shape.orientation = p.orientation;
      for (const Vec3& c : shape.corners())
        obj << "v " << c.x << " " << c.y << " " << c.z << "\n";
      static constexpr int faces[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                                          {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
      for (const auto& f : faces)
        obj << "f " << base + f[0] << " " << base + f[1] << " " << base + f[2] << " "
            << base + f[3] << "\n";
      base += 8;
    }
    if (options_.include_wrap && !record.wrap_vertices.empty()) {
      for (const Vec3& v : record.wrap_vertices)
        obj << "v " << v.x << " " << v.y << " " << v.z << "\n";
      for (int row = 0; row + 1 < wrap_rows_; ++row)
        for (int i = 0; i < wrap_ring_; ++i) {
          const long a = base + row * wrap_ring_ + i;
          const long b = base + row * wrap_ring_ + (i + 1) % wrap_ring_;
          const long c = base + (row + 1) * wrap_ring_ + (i + 1) % wrap_ring_;
          const long d = base + (row + 1) * wrap_ring_ + i;
          obj << "f " << a << " " << b << " " << c << " " << d << "\n";
        }
    }
    if (!obj) throw IoError("frame export write failed", path.string());
  }

  ExportOptions options_;
  double report_dt_;
  double unit_height_ = 0.0;
  double bench_stop_time_ = 0.0;
  json meta_bodies_ = json::array();
  size_t wrap_vertex_count_ = 0;
  int wrap_rows_ = 0;
  int wrap_ring_ = 0;
  double tear_threshold_ = 0.0;
  std::ofstream stream_;
  std::vector<std::string> files_;
  size_t frame_index_ = 0;
};

}  // namespace detail

// Batch form for retained trajectories (tests, re-exports).
inline std::vector<std::string> export_frames(const Scene& initial_scene,
                                              const std::vector<FrameRecord>& trajectory,
                                              ExportFormat format,
                                              const std::filesystem::path& out_dir,
                                              double report_dt, double unit_height,
                                              double bench_stop_time) {
  ExportOptions options{format, out_dir, true};
  detail::FrameExporter exporter(options, initial_scene, report_dt, unit_height, bench_stop_time);
  for (const FrameRecord& f : trajectory) exporter.frame(f, 0.0);
  return exporter.files();
}

// ---------------------------------------------------------------------------
// Single run

inline SimulationResult run_simulation(const SimulationParameters& params,
                                       const ExportOptions& export_options = {}) {
  const auto t_start = std::chrono::steady_clock::now();

  {
    const auto violations = validate_params(params);
    if (!violations.empty()) {
      std::string msg = "invalid parameters:";
      for (const auto& v : violations) msg += " [" + v.code + "] " + v.message;
      throw IntegrityError(msg);
    }
  }

  SimulationResult result;
  result.params = params;

  Scene scene = build_scene(params.schema, params);
  {
    const IntegrityReport integrity = verify_integrity(scene);
    if (!integrity.ok()) {
      std::string msg = "scene integrity check failed:";
      for (const auto& issue : integrity.issues)
        msg += " [" + issue.code + " " + issue.subject + "] " + issue.message;
      throw IntegrityError(msg);
    }
  }

  WorldState world;
  world.scene = std::move(scene);
  world.solver.dt = params.timestep;

  const MotionProfile profile = MotionProfile::from_conditions(params.conditions);
  DeformationTrace trace = DeformationTrace::for_scene(world.scene, profile.stop_time());
  WrapStrainTimeline strain_timeline;
  strain_timeline.tear_threshold = params.cloth.enabled
                                       ? params.cloth.tear_threshold
                                       : std::numeric_limits<double>::infinity();

  const double dt = params.timestep;
  const long steps_per_report =
      std::max(1L, static_cast<long>(std::llround(1.0 / (kReportRateHz * dt))));
  const double report_dt = steps_per_report * dt;

  detail::FrameExporter exporter(export_options, world.scene, report_dt, world.scene.unit_height,
                                 profile.stop_time());

  const auto record_frame = [&](long step_index) {
    const FrameRecord frame = snapshot(world.scene, world.sim_time);
    const BodyPose& sleigh_pose = frame.bodies[0];
    track(trace, frame, sleigh_pose);
    double max_strain = 0.0;
    if (!world.scene.wrap.empty()) {
      const StrainField field = compute_strain(world.scene.wrap);
      max_strain = field.max_strain;
      strain_timeline.record(step_index, field.max_strain, field.max_edge);
    }
    if (step_index % steps_per_report == 0) {
      result.frame_max_disp.push_back(trace.frames.back().max_disp);
      result.frame_max_strain.push_back(max_strain);
      exporter.frame(frame, max_strain);
    }
    return max_strain;
  };

  record_frame(0);

  std::optional<double> calm_since;
  bool settled = false;
  long step_index = 0;
  while (!settled && world.sim_time < params.max_duration - 0.5 * dt) {
    drive_sleigh(world.scene.sleigh(), profile, world.sim_time);
    const std::vector<ExternalForce> externals =
        field_forces(world.scene.fields, world.scene.bodies, world.scene.total_cargo_mass);
    step(world, dt, externals);
    if (!world.scene.wrap.empty())
      step_cloth(world.scene.wrap, world.scene.bodies, world.gravity, dt);
    ++step_index;
    record_frame(step_index);

    if (step_index % 60 == 0) {
      const IntegrityReport check = spot_check(world.scene);
      if (!check.ok())
        throw FatalNumericError("integrity spot check failed", check.issues.front().subject);
    }

    // settle detection, same convention as speed_monitor
    const auto& frame = trace.frames.back();
    if (frame.t >= trace.bench_stop_time) {
      bool calm = true;
      for (double s : frame.speeds)
        if (s >= params.thresholds.settle_speed_eps) {
          calm = false;
          break;
        }
      if (!calm)
        calm_since.reset();
      else {
        if (!calm_since) calm_since = frame.t;
        if (frame.t - *calm_since >= params.thresholds.settle_hold) settled = true;
      }
    }
  }

  result.report = classify(trace, strain_timeline, params.thresholds, world.scene.unit_height);
  result.steps = step_index;
  result.exported_files = exporter.files();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

// ---------------------------------------------------------------------------
// Reports

inline json report_to_json(const SimulationResult& result) {
  json j;
  j["version"] = kReportVersion;
  j["params"] = params_to_json(result.params);
  j["seed"] = result.params.seed;
  j["outcome"] = result.error.empty() ? outcome_name(result.report.outcome) : "error";
  if (!result.error.empty()) j["error"] = result.error;

  json m;
  m["elastic_max_frac"] = result.report.elastic_max_frac;
  m["permanent_max_frac"] = result.report.permanent_max_frac
                                ? json(*result.report.permanent_max_frac)
                                : json(nullptr);
  m["bottom_zone_permanent_m"] = result.report.bottom_zone_permanent_m
                                     ? json(*result.report.bottom_zone_permanent_m)
                                     : json(nullptr);
  m["max_wrap_strain"] = result.report.max_wrap_strain;
  m["settle_frame"] = result.report.settle_frame ? json(*result.report.settle_frame)
                                                 : json(nullptr);
  j["measurements"] = m;

  json violations = json::array();
  for (const Violation& v : result.report.violations) {
    violations.push_back({{"criterion", v.criterion},
                          {"subject", v.subject},
                          {"frame", v.frame},
                          {"value", v.value},
                          {"threshold", v.threshold}});
  }
  j["violations"] = violations;

  j["summary"] = {{"frame_max_disp", result.frame_max_disp},
                  {"frame_max_strain", result.frame_max_strain}};
  j["timing"] = {{"wall_seconds", result.wall_seconds}, {"steps", result.steps}};
  return j;
}

inline std::string emit_report_json(const SimulationResult& result) {
  return report_to_json(result).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Campaigns

struct CampaignConfig {
  ParameterRanges ranges;  // base parameters (with schema) plus sweep ranges
  int n_runs = 1;
  std::uint64_t seed = 0;
  int parallelism = 1;
};

struct BucketStats {
  long runs = 0;
  long successes = 0;
  long failures = 0;
  long inconclusive = 0;
};

struct CampaignStatistics {
  long runs = 0;
  long successes = 0;
  long failures = 0;
  long inconclusive = 0;  // includes errored runs
  long errors = 0;
  double success_rate = 0.0;
  std::map<std::string, long> violation_histogram;
  std::map<std::string, BucketStats> by_accel;
  std::map<int, BucketStats> by_layer_count;
};

struct CampaignOutcome {
  CampaignStatistics stats;
  std::vector<SimulationResult> results;  // run order
};

namespace detail {

inline int thread_cap() {
  if (const char* env = std::getenv("PALLETBENCH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return 1 << 16;
}

inline std::string accel_bucket(double accel_g) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1fg", accel_g);
  return buf;
}

// Parameter set for run `index`, a pure function of (config, index).
inline SimulationParameters campaign_run_params(const CampaignConfig& config, int index) {
  const std::uint64_t run_seed = derive_seed(config.seed, static_cast<std::uint64_t>(index));
  SplitMix64 rng(run_seed);
  const int rotation = static_cast<int>(rng.next_below(4));
  const int original_layers = static_cast<int>(config.ranges.base.schema.layers.size());
  const int max_layers = std::max(4, original_layers);
  const int n_layers = 4 + static_cast<int>(rng.next_below(max_layers - 4 + 1));

  SimulationParameters params = generate_random_params(config.ranges, rng.next());
  params.schema = augment_schema(config.ranges.base.schema, rotation, n_layers);
  params.seed = run_seed;
  return params;
}

}  // namespace detail

inline CampaignOutcome run_campaign(const CampaignConfig& config,
                                    const ExportOptions& export_options = {}) {
  if (config.n_runs < 1) throw Error("run_campaign: n_runs must be >= 1");
  const int parallelism =
      std::max(1, std::min(config.parallelism, detail::thread_cap()));

  CampaignOutcome outcome;
  outcome.results.resize(config.n_runs);

  const auto run_one = [&config, &export_options](int index) {
    SimulationResult result;
    try {
      const SimulationParameters params = detail::campaign_run_params(config, index);
      ExportOptions options = export_options;
      if (options.format != ExportFormat::none) {
        char sub[32];
        std::snprintf(sub, sizeof sub, "run_%05d", index);
        options.out_dir = export_options.out_dir / sub;
      }
      result = run_simulation(params, options);
    } catch (const std::exception& e) {
      result.error = e.what();
      result.report.outcome = Outcome::inconclusive;
    }
    return result;
  };

  if (parallelism == 1) {
    for (int i = 0; i < config.n_runs; ++i) outcome.results[i] = run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(parallelism);
    for (int w = 0; w < parallelism; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= config.n_runs) return;
          outcome.results[i] = run_one(i);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  // aggregate in run order, independent of execution order
  CampaignStatistics& stats = outcome.stats;
  stats.runs = config.n_runs;
  for (const SimulationResult& r : outcome.results) {
    const bool errored = !r.error.empty();
    if (errored) ++stats.errors;
    Outcome o = errored ? Outcome::inconclusive : r.report.outcome;
    if (o == Outcome::success) ++stats.successes;
    if (o == Outcome::failure) ++stats.failures;
    if (o == Outcome::inconclusive) ++stats.inconclusive;
    for (const Violation& v : r.report.violations) ++stats.violation_histogram[v.criterion];
    if (!errored) {
      BucketStats& accel = stats.by_accel[detail::accel_bucket(r.params.conditions.accel_g)];
      BucketStats& layers = stats.by_layer_count[static_cast<int>(r.params.schema.layers.size())];
      for (BucketStats* bucket : {&accel, &layers}) {
        ++bucket->runs;
        if (o == Outcome::success) ++bucket->successes;
        if (o == Outcome::failure) ++bucket->failures;
        if (o == Outcome::inconclusive) ++bucket->inconclusive;
      }
    }
  }
  stats.success_rate = stats.runs > 0 ? static_cast<double>(stats.successes) / stats.runs : 0.0;
  return outcome;
}

inline json campaign_to_json(const CampaignOutcome& outcome) {
  const CampaignStatistics& s = outcome.stats;
  json j;
  j["runs"] = s.runs;
  j["successes"] = s.successes;
  j["failures"] = s.failures;
  j["inconclusive"] = s.inconclusive;
  j["errors"] = s.errors;
  j["success_rate"] = s.success_rate;
  j["violation_histogram"] = s.violation_histogram;
  json by_accel;
  for (const auto& [key, b] : s.by_accel)
    by_accel[key] = {{"runs", b.runs},
                     {"successes", b.successes},
                     {"failures", b.failures},
                     {"inconclusive", b.inconclusive}};
  j["by_accel"] = by_accel;
  json by_layers;
  for (const auto& [key, b] : s.by_layer_count)
    by_layers[std::to_string(key)] = {{"runs", b.runs},
                                      {"successes", b.successes},
                                      {"failures", b.failures},
                                      {"inconclusive", b.inconclusive}};
  j["by_layer_count"] = by_layers;
  return j;
}

// ---------------------------------------------------------------------------
// Trace re-import: classify an exported poses-ndjson without re-simulating.
// Speeds are finite-differenced from consecutive poses.

struct ImportedTrajectory {
  struct BodyMeta {
    int id = 0;
    std::string name;
    std::string role;
    Vec3 half_extents;
  };
  double report_dt = 1.0 / kReportRateHz;
  double unit_height = 0.0;
  double bench_stop_time = 0.0;
  double tear_threshold = std::numeric_limits<double>::infinity();
  std::vector<BodyMeta> bodies;        // scene order: sleigh, pallet, packages
  std::vector<FrameRecord> frames;     // velocities finite-differenced
  std::vector<double> max_wrap_strain; // per frame, 0 when absent
};

inline ImportedTrajectory import_frames_ndjson(const std::string& text) {
  ImportedTrajectory traj;
  size_t start = 0;
  bool have_meta = false;
  long line_no = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("frames.ndjson line " + std::to_string(line_no), e.what());
    }
    if (!have_meta) {
      if (!j.contains("meta")) throw ParseError("frames.ndjson", "first line must carry meta");
      const json& meta = j.at("meta");
      traj.report_dt = meta.value("report_dt", traj.report_dt);
      traj.unit_height = meta.value("unit_height", 0.0);
      traj.bench_stop_time = meta.value("bench_stop_time", 0.0);
      if (meta.contains("tear_threshold") && meta.at("tear_threshold").is_number())
        traj.tear_threshold = meta.at("tear_threshold").get<double>();
      for (const json& jb : meta.at("bodies")) {
        ImportedTrajectory::BodyMeta b;
        b.id = jb.at("id").get<int>();
        b.name = jb.at("name").get<std::string>();
        b.role = jb.at("role").get<std::string>();
        const json& he = jb.at("half_extents");
        b.half_extents = {he[0].get<double>(), he[1].get<double>(), he[2].get<double>()};
        traj.bodies.push_back(std::move(b));
      }
      have_meta = true;
      continue;
    }
    FrameRecord frame;
    frame.t = j.at("t").get<double>();
    for (const json& jb : j.at("bodies")) {
      BodyPose p;
      p.id = jb.at("id").get<int>();
      const json& pos = jb.at("pos");
      p.position = {pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>()};
      const json& quat = jb.at("quat");
      p.orientation = {quat[0].get<double>(), quat[1].get<double>(), quat[2].get<double>(),
                       quat[3].get<double>()};
      frame.bodies.push_back(p);
    }
    if (frame.bodies.size() != traj.bodies.size())
      throw ParseError("frames.ndjson line " + std::to_string(line_no),
                       "body count does not match meta");
    traj.max_wrap_strain.push_back(j.value("max_wrap_strain", 0.0));
    traj.frames.push_back(std::move(frame));
  }
  if (!have_meta || traj.frames.empty())
    throw ParseError("frames.ndjson", "no frames to classify");

  for (size_t f = 1; f < traj.frames.size(); ++f) {
    const double dt = traj.frames[f].t - traj.frames[f - 1].t;
    if (dt <= 0.0) throw ParseError("frames.ndjson", "frame times must be increasing");
    for (size_t b = 0; b < traj.bodies.size(); ++b)
      traj.frames[f].bodies[b].linear_velocity =
          (traj.frames[f].bodies[b].position - traj.frames[f - 1].bodies[b].position) / dt;
  }
  return traj;
}

inline ValidationReport reclassify(const ImportedTrajectory& traj,
                                   const ValidationThresholds& thresholds) {
  if (traj.bodies.size() < 3 || traj.bodies[0].role != std::string("sleigh"))
    throw ParseError("frames.ndjson", "expected sleigh, pallet and packages in meta order");

  DeformationTrace trace;
  trace.bench_stop_time = traj.bench_stop_time;
  const FrameRecord& first = traj.frames.front();
  const Vec3 sleigh_pos = first.bodies[0].position;
  for (size_t b = 2; b < traj.bodies.size(); ++b) {
    trace.package_names.push_back(traj.bodies[b].name);
    const Vec3 he = traj.bodies[b].half_extents;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) trace.corner_local.push_back({sx * he.x, sy * he.y, sz * he.z});
    const Mat3 r = first.bodies[b].orientation.to_matrix();
    std::array<Vec3, 8> corners;
    std::array<double, 8> heights;
    for (int k = 0; k < 8; ++k) {
      const Vec3 c = first.bodies[b].position + r * trace.corner_local[(b - 2) * 8 + k];
      corners[k] = c - sleigh_pos;
      heights[k] = c.z;
    }
    trace.initial_corners.push_back(corners);
    trace.initial_heights.push_back(heights);
  }

  WrapStrainTimeline timeline;
  timeline.tear_threshold = traj.tear_threshold;
  for (size_t f = 0; f < traj.frames.size(); ++f) {
    track(trace, traj.frames[f], traj.frames[f].bodies[0]);
    timeline.record(static_cast<long>(f), traj.max_wrap_strain[f], -1);
  }
  return classify(trace, timeline, thresholds, traj.unit_height);
}

// ---------------------------------------------------------------------------
// File plumbing

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file", path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Loads a params JSON from disk, resolving a "schema_file" reference
// relative to the JSON file's directory.
inline SimulationParameters load_params_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
  std::string schema_xml;
  if (j.contains("schema_file")) {
    const auto schema_path = path.parent_path() / j.at("schema_file").get<std::string>();
    schema_xml = read_file(schema_path);
  }
  return parse_params_json(text, schema_xml);
}

}  // namespace palletbench
