// Command-line front end: single runs, campaigns, trace re-classification,
// schema checking. Exit codes: 0 completed (failure verdicts included),
// 1 usage or input error, 2 integrity or numeric error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "palletbench/palletbench.hpp"

namespace fs = std::filesystem;
using namespace palletbench;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write", path.string());
  out << text;
}

void print_report_line(const SimulationResult& result) {
  const auto& r = result.report;
  std::printf("outcome=%s elastic=%.4f permanent=%s bottom=%s wrap_strain=%.4f steps=%ld\n",
              outcome_name(r.outcome), r.elastic_max_frac,
              r.permanent_max_frac ? std::to_string(*r.permanent_max_frac).c_str() : "n/a",
              r.bottom_zone_permanent_m ? std::to_string(*r.bottom_zone_permanent_m).c_str()
                                        : "n/a",
              r.max_wrap_strain, result.steps);
  for (const Violation& v : r.violations)
    std::printf("violation criterion=%s subject=%s frame=%ld value=%.4f threshold=%.4f\n",
                v.criterion.c_str(), v.subject.c_str(), v.frame, v.value, v.threshold);
}

int cmd_simulate(const std::string& params_path, const std::string& export_format,
                 const std::string& out_dir) {
  SimulationParameters params = load_params_file(params_path);

  ExportOptions options;
  options.out_dir = out_dir;
  if (export_format == "poses-ndjson") options.format = ExportFormat::poses_ndjson;
  else if (export_format == "obj-sequence") options.format = ExportFormat::obj_sequence;

  const SimulationResult result = run_simulation(params, options);
  write_text(fs::path(out_dir) / "report.json", emit_report_json(result));
  print_report_line(result);
  std::printf("report: %s\n", (fs::path(out_dir) / "report.json").string().c_str());
  return 0;
}

int cmd_campaign(const std::string& schema_path, const std::string& ranges_path, int runs,
                 std::uint64_t seed, int parallel, const std::string& out_dir,
                 const std::string& export_format) {
  CampaignConfig config;
  config.n_runs = runs;
  config.seed = seed;
  config.parallelism = parallel;

  const std::string schema_xml = read_file(schema_path);
  json ranges = json::object();
  if (!ranges_path.empty()) {
    try {
      ranges = json::parse(read_file(ranges_path));
    } catch (const json::exception& e) {
      throw ParseError(ranges_path, e.what());
    }
  }

  // base params come from an optional "params" block in the ranges file
  const std::string base_params_text =
      ranges.contains("params") ? ranges.at("params").dump() : "{}";
  config.ranges.base = parse_params_json(base_params_text, schema_xml);
  if (ranges.contains("accel_g")) {
    config.ranges.accel_g_min = ranges.at("accel_g").at(0).get<double>();
    config.ranges.accel_g_max = ranges.at("accel_g").at(1).get<double>();
  }
  if (ranges.contains("impulse_duration")) {
    config.ranges.impulse_min = ranges.at("impulse_duration").at(0).get<double>();
    config.ranges.impulse_max = ranges.at("impulse_duration").at(1).get<double>();
  }

  ExportOptions options;
  options.out_dir = out_dir;
  if (export_format == "poses-ndjson") options.format = ExportFormat::poses_ndjson;
  else if (export_format == "obj-sequence") options.format = ExportFormat::obj_sequence;

  const CampaignOutcome outcome = run_campaign(config, options);

  fs::create_directories(out_dir);
  for (size_t i = 0; i < outcome.results.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%05zu.json", i);
    write_text(fs::path(out_dir) / name, emit_report_json(outcome.results[i]));
  }
  write_text(fs::path(out_dir) / "campaign.json", campaign_to_json(outcome).dump(2) + "\n");

  const CampaignStatistics& s = outcome.stats;
  std::printf("runs=%ld successes=%ld failures=%ld inconclusive=%ld errors=%ld rate=%.3f\n",
              s.runs, s.successes, s.failures, s.inconclusive, s.errors, s.success_rate);
  std::printf("reports: %s\n", out_dir.c_str());
  return 0;
}

int cmd_validate(const std::string& trace_path, const std::string& thresholds_path) {
  ValidationThresholds thresholds;
  if (!thresholds_path.empty()) {
    json j;
    try {
      j = json::parse(read_file(thresholds_path));
    } catch (const json::exception& e) {
      throw ParseError(thresholds_path, e.what());
    }
    thresholds.permanent_frac = j.value("permanent_frac", thresholds.permanent_frac);
    thresholds.elastic_frac = j.value("elastic_frac", thresholds.elastic_frac);
    thresholds.bottom_zone_height = j.value("bottom_zone_height", thresholds.bottom_zone_height);
    thresholds.bottom_zone_limit = j.value("bottom_zone_limit", thresholds.bottom_zone_limit);
    thresholds.settle_speed_eps = j.value("settle_speed_eps", thresholds.settle_speed_eps);
    thresholds.settle_hold = j.value("settle_hold", thresholds.settle_hold);
  }

  const ImportedTrajectory traj = import_frames_ndjson(read_file(trace_path));
  const ValidationReport report = reclassify(traj, thresholds);

  std::printf("outcome=%s elastic=%.4f permanent=%s bottom=%s\n", outcome_name(report.outcome),
              report.elastic_max_frac,
              report.permanent_max_frac ? std::to_string(*report.permanent_max_frac).c_str()
                                        : "n/a",
              report.bottom_zone_permanent_m
                  ? std::to_string(*report.bottom_zone_permanent_m).c_str()
                  : "n/a");
  for (const Violation& v : report.violations)
    std::printf("violation criterion=%s subject=%s frame=%ld value=%.4f threshold=%.4f\n",
                v.criterion.c_str(), v.subject.c_str(), v.frame, v.value, v.threshold);
  return 0;
}

int cmd_schema_check(const std::string& xml_path) {
  const PalletizingSchema schema = parse_schema_xml(read_file(xml_path));
  std::printf("schema ok: %zu layers, %zu package types, %zu placements\n", schema.layers.size(),
              schema.package_catalog.size(),
              [&schema] {
                size_t n = 0;
                for (const auto& l : schema.layers) n += l.placements.size();
                return n;
              }());
  std::printf("pallet %.0fx%.0fx%.0f mm, cargo mass %.2f kg, unit height %.0f mm\n",
              schema.pallet.dims_mm.x, schema.pallet.dims_mm.y, schema.pallet.dims_mm.z,
              schema.total_cargo_mass_kg(), schema.unit_height_mm());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"palletbench - palletized-load crash-test simulator"};
  app.require_subcommand(1);

  std::string params_path, export_format, out_dir = "out";
  auto* simulate = app.add_subcommand("simulate", "run one configured simulation");
  simulate->add_option("--params", params_path, "simulation parameter JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--export", export_format, "frame export format")
      ->check(CLI::IsMember({"poses-ndjson", "obj-sequence"}));
  simulate->add_option("--out", out_dir, "output directory");

  std::string schema_path, ranges_path, campaign_out = "campaign_out", campaign_export;
  int runs = 1, parallel = 1;
  std::uint64_t seed = 0;
  auto* campaign = app.add_subcommand("campaign", "run a randomized batch");
  campaign->add_option("--schema", schema_path, "base palletizing schema XML")
      ->required()
      ->check(CLI::ExistingFile);
  campaign->add_option("--ranges", ranges_path, "parameter ranges JSON")
      ->check(CLI::ExistingFile);
  campaign->add_option("--runs", runs, "number of runs")->required();
  campaign->add_option("--seed", seed, "campaign seed");
  campaign->add_option("--parallel", parallel, "worker count (capped by PALLETBENCH_THREADS)");
  campaign->add_option("--out", campaign_out, "output directory");
  campaign->add_option("--export", campaign_export, "per-run frame export format")
      ->check(CLI::IsMember({"poses-ndjson", "obj-sequence"}));

  std::string trace_path, thresholds_path;
  auto* validate = app.add_subcommand("validate", "re-classify an exported trace");
  validate->add_option("--trace", trace_path, "poses-ndjson trace file")
      ->required()
      ->check(CLI::ExistingFile);
  validate->add_option("--thresholds", thresholds_path, "threshold overrides JSON")
      ->check(CLI::ExistingFile);

  auto* schema_cmd = app.add_subcommand("schema", "schema utilities");
  schema_cmd->require_subcommand(1);
  std::string check_path;
  auto* check = schema_cmd->add_subcommand("check", "parse and summarize a schema file");
  check->add_option("xml", check_path, "schema XML file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(params_path, export_format, out_dir);
    if (campaign->parsed())
      return cmd_campaign(schema_path, ranges_path, runs, seed, parallel, campaign_out,
                          campaign_export);
    if (validate->parsed()) return cmd_validate(trace_path, thresholds_path);
    if (check->parsed()) return cmd_schema_check(check_path);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IntegrityError& e) {
    std::fprintf(stderr, "integrity error: %s\n", e.what());
    return 2;
  } catch (const FatalNumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
