#pragma once

// Configuration layer: palletizing-schema XML, simulation-parameter JSON,
// range validation, randomized and augmented configurations.
//
// File units are millimeters and kilograms (packaging convention); every
// consumer past this boundary works in SI meters.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "palletbench/errors.hpp"
#include "palletbench/math.hpp"
#include "palletbench/rng.hpp"
#include "palletbench/xml.hpp"

namespace palletbench {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Domain types

inline constexpr double kAccelGMin = 0.3;
inline constexpr double kAccelGMax = 0.8;
inline constexpr double kImpulseMin = 0.35;   // s
inline constexpr double kImpulseMax = 0.5;    // s
inline constexpr double kFrictionMax = 2.0;
inline constexpr double kMaxTimestep = 1.0 / 60.0;
inline constexpr double kOverhangToleranceMm = 20.0;
inline constexpr double kOverlapToleranceMm2 = 1.0;

struct PackageSpec {
  std::string id;
  Vec3 dims_mm;      // (dx, dy, dz)
  double mass_kg = 0.0;
  double friction = 0.5;
};

struct Placement {
  std::string package_id;
  double x_mm = 0.0;  // package center offset from pallet center
  double y_mm = 0.0;
  int rot_quarter = 0;  // quarter turns about +z, 0..3
};

struct LayerLayout {
  std::vector<Placement> placements;
};

struct PalletizingSchema {
  PackageSpec pallet;  // id is "pallet"
  std::map<std::string, PackageSpec> package_catalog;
  std::vector<LayerLayout> layers;  // bottom to top

  const PackageSpec& package(const std::string& id) const {
    auto it = package_catalog.find(id);
    if (it == package_catalog.end()) throw UnknownPackageIdError(id, "schema");
    return it->second;
  }

  // footprint dims of a placement, rotation applied
  Vec3 placed_dims_mm(const Placement& p) const {
    Vec3 d = package(p.package_id).dims_mm;
    if (p.rot_quarter % 2 != 0) std::swap(d.x, d.y);
    return d;
  }

  double layer_height_mm(size_t i) const {
    double h = 0.0;
    for (const auto& p : layers[i].placements)
      h = std::max(h, package(p.package_id).dims_mm.z);
    return h;
  }

  double unit_height_mm() const {
    double h = pallet.dims_mm.z;
    for (size_t i = 0; i < layers.size(); ++i) h += layer_height_mm(i);
    return h;
  }

  double total_cargo_mass_kg() const {
    double m = 0.0;
    for (const auto& layer : layers)
      for (const auto& p : layer.placements) m += package(p.package_id).mass_kg;
    return m;
  }
};

struct TestingConditions {
  double accel_g = 0.5;
  double impulse_duration = 0.5;  // s
  double decel_rate = 2.0;        // m/s^2
};

// Piecewise-linear profile on [0,1]; evaluation clamps outside the knots.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> points;  // (x, value), x ascending

  static PiecewiseLinear constant(double v) { return {{{0.0, v}, {1.0, v}}}; }

  double operator()(double x) const {
    if (points.empty()) return 1.0;
    if (x <= points.front().first) return points.front().second;
    if (x >= points.back().first) return points.back().second;
    for (size_t i = 1; i < points.size(); ++i) {
      if (x <= points[i].first) {
        const auto& [x0, v0] = points[i - 1];
        const auto& [x1, v1] = points[i];
        const double t = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
        return v0 + (v1 - v0) * t;
      }
    }
    return points.back().second;
  }

  bool operator==(const PiecewiseLinear& o) const { return points == o.points; }
};

struct ClothParams {
  bool enabled = true;
  std::string preset = "lldpe-stretch";
  double area_density = 0.02;   // kg/m^2
  double stiffness = 0.9;       // constraint projection factor (0,1]
  double damping = 0.01;        // Verlet velocity damping per step
  int resolution = 9;           // vertices per side, per ring row count
  double thickness = 0.002;     // m, collision offset
  double overlap = 0.05;        // m, band extends below cargo bottom
  double tear_threshold = 0.25; // strain at which the material is considered torn
  bool cover_top = false;
};

struct ValidationThresholds {
  double permanent_frac = 0.05;
  double elastic_frac = 0.10;
  double bottom_zone_height = 0.20;  // m
  double bottom_zone_limit = 0.04;   // m
  double settle_speed_eps = 0.01;    // m/s
  double settle_hold = 0.5;          // s
};

struct SimulationParameters {
  PalletizingSchema schema;
  TestingConditions conditions;
  double tension_T = 1.0;
  PiecewiseLinear sigma_h = PiecewiseLinear::constant(1.0);
  double field_offset_d = 0.05;    // m
  double field_range_dmax = 0.10;  // m
  ClothParams cloth;
  ValidationThresholds thresholds;
  double timestep = 1.0 / 240.0;
  double max_duration = 10.0;  // s
  std::uint64_t seed = 0;
  json visual = json::object();  // recorded verbatim, never interpreted
};

struct ParamViolation {
  std::string code;
  std::string message;
};

// ---------------------------------------------------------------------------
// helpers

namespace detail {

inline double parse_number(const XmlElement& el, const std::string& path, const char* key) {
  const std::string* raw = el.attr(key);
  if (!raw) throw ParseError(path + "@" + key, "missing required attribute");
  double value = 0.0;
  const char* begin = raw->c_str();
  const char* end = begin + raw->size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(path + "@" + key, "not a number: \"" + *raw + "\"");
  return value;
}

inline std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void check_positive_dims(const PackageSpec& s, const std::string& path) {
  if (!(s.dims_mm.x > 0) || !(s.dims_mm.y > 0) || !(s.dims_mm.z > 0))
    throw ParseError(path, "dimensions must be > 0");
  if (!(s.mass_kg > 0)) throw ParseError(path, "mass must be > 0");
  if (s.friction < 0 || s.friction > kFrictionMax)
    throw OutOfRangeError(path + "@friction", 0.0, kFrictionMax, s.friction);
}

struct Rect {
  double x0, y0, x1, y1;
  double intersection_area(const Rect& o) const {
    const double w = std::min(x1, o.x1) - std::max(x0, o.x0);
    const double h = std::min(y1, o.y1) - std::max(y0, o.y0);
    return (w > 0 && h > 0) ? w * h : 0.0;
  }
};

inline Rect footprint_mm(const PalletizingSchema& schema, const Placement& p) {
  const Vec3 d = schema.placed_dims_mm(p);
  return {p.x_mm - d.x / 2, p.y_mm - d.y / 2, p.x_mm + d.x / 2, p.y_mm + d.y / 2};
}

// footprint containment and pairwise overlap for one layer
inline void check_layer_geometry(const PalletizingSchema& schema, size_t layer_idx,
                                 const std::string& path) {
  const auto& placements = schema.layers[layer_idx].placements;
  const double px = schema.pallet.dims_mm.x / 2 + kOverhangToleranceMm;
  const double py = schema.pallet.dims_mm.y / 2 + kOverhangToleranceMm;
  std::vector<Rect> rects;
  rects.reserve(placements.size());
  for (size_t i = 0; i < placements.size(); ++i) {
    const Rect r = footprint_mm(schema, placements[i]);
    const std::string ppath = path + "/place[" + std::to_string(i + 1) + "]";
    if (r.x0 < -px || r.x1 > px || r.y0 < -py || r.y1 > py)
      throw ParseError(ppath, "footprint exceeds pallet bounds plus overhang tolerance");
    for (size_t j = 0; j < rects.size(); ++j) {
      if (rects[j].intersection_area(r) > kOverlapToleranceMm2)
        throw ParseError(ppath, "footprint overlaps place[" + std::to_string(j + 1) + "]");
    }
    rects.push_back(r);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Schema XML

inline PalletizingSchema parse_schema_xml(std::string_view xml_text) {
  const XmlElement root = parse_xml(xml_text);
  if (root.name != "palletizing")
    throw ParseError("/" + root.name, "root element must be <palletizing>");

  PalletizingSchema schema;
  bool have_pallet = false;
  size_t layer_idx = 0;

  for (const auto& child : root.children) {
    if (child.name == "pallet") {
      const std::string path = "/palletizing/pallet";
      if (have_pallet) throw ParseError(path, "more than one <pallet>");
      schema.pallet.id = "pallet";
      schema.pallet.dims_mm = {detail::parse_number(child, path, "dx"),
                               detail::parse_number(child, path, "dy"),
                               detail::parse_number(child, path, "dz")};
      schema.pallet.mass_kg = detail::parse_number(child, path, "mass");
      schema.pallet.friction = detail::parse_number(child, path, "friction");
      detail::check_positive_dims(schema.pallet, path);
      have_pallet = true;
    } else if (child.name == "package") {
      const std::string* id = child.attr("id");
      if (!id || id->empty())
        throw ParseError("/palletizing/package@id", "missing required attribute");
      const std::string path = "/palletizing/package[" + *id + "]";
      if (schema.package_catalog.count(*id))
        throw ParseError(path, "duplicate package id");
      PackageSpec spec;
      spec.id = *id;
      spec.dims_mm = {detail::parse_number(child, path, "dx"),
                      detail::parse_number(child, path, "dy"),
                      detail::parse_number(child, path, "dz")};
      spec.mass_kg = detail::parse_number(child, path, "mass");
      spec.friction = detail::parse_number(child, path, "friction");
      detail::check_positive_dims(spec, path);
      schema.package_catalog.emplace(*id, std::move(spec));
    } else if (child.name == "layer") {
      ++layer_idx;
      const std::string path = "/palletizing/layer[" + std::to_string(layer_idx) + "]";
      LayerLayout layout;
      size_t place_idx = 0;
      for (const auto& place : child.children) {
        ++place_idx;
        const std::string ppath = path + "/place[" + std::to_string(place_idx) + "]";
        if (place.name != "place") throw ParseError(ppath, "expected <place>");
        Placement p;
        const std::string* ref = place.attr("ref");
        if (!ref) throw ParseError(ppath + "@ref", "missing required attribute");
        p.package_id = *ref;
        if (!schema.package_catalog.count(p.package_id))
          throw UnknownPackageIdError(p.package_id, ppath + "@ref");
        p.x_mm = detail::parse_number(place, ppath, "x");
        p.y_mm = detail::parse_number(place, ppath, "y");
        const double rot = detail::parse_number(place, ppath, "rot");
        if (rot != 0 && rot != 90 && rot != 180 && rot != 270)
          throw ParseError(ppath + "@rot", "rotation must be one of 0, 90, 180, 270");
        p.rot_quarter = static_cast<int>(rot) / 90;
        layout.placements.push_back(std::move(p));
      }
      if (layout.placements.empty()) throw ParseError(path, "layer has no placements");
      schema.layers.push_back(std::move(layout));
      detail::check_layer_geometry(schema, schema.layers.size() - 1, path);
    } else {
      throw ParseError("/palletizing/" + child.name, "unexpected element");
    }
  }

  if (!have_pallet) throw ParseError("/palletizing", "missing <pallet>");
  if (schema.layers.empty()) throw ParseError("/palletizing", "schema has no layers");
  return schema;
}

inline std::string serialize_schema_xml(const PalletizingSchema& schema) {
  std::string out = "<palletizing>\n";
  auto spec_attrs = [](const PackageSpec& s) {
    return "dx=\"" + detail::format_number(s.dims_mm.x) + "\" dy=\"" +
           detail::format_number(s.dims_mm.y) + "\" dz=\"" +
           detail::format_number(s.dims_mm.z) + "\" mass=\"" +
           detail::format_number(s.mass_kg) + "\" friction=\"" +
           detail::format_number(s.friction) + "\"";
  };
  out += "  <pallet " + spec_attrs(schema.pallet) + "/>\n";
  for (const auto& [id, spec] : schema.package_catalog)
    out += "  <package id=\"" + detail::xml_escape(id) + "\" " + spec_attrs(spec) + "/>\n";
  for (const auto& layer : schema.layers) {
    out += "  <layer>\n";
    for (const auto& p : layer.placements) {
      out += "    <place ref=\"" + detail::xml_escape(p.package_id) + "\" x=\"" +
             detail::format_number(p.x_mm) + "\" y=\"" + detail::format_number(p.y_mm) +
             "\" rot=\"" + std::to_string(p.rot_quarter * 90) + "\"/>\n";
    }
    out += "  </layer>\n";
  }
  out += "</palletizing>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parameter JSON

namespace detail {

inline double require_range(const json& j, const std::string& field, double lo, double hi,
                            double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number())
    throw ParseError(field, "expected a number");
  const double v = j.at(field).get<double>();
  if (v < lo || v > hi) throw OutOfRangeError(field, lo, hi, v);
  return v;
}

inline double optional_number(const json& j, const std::string& field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number()) throw ParseError(field, "expected a number");
  return j.at(field).get<double>();
}

inline PiecewiseLinear parse_sigma(const json& j) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (v < 0 || v > 1) throw OutOfRangeError("sigma_h", 0.0, 1.0, v);
    return PiecewiseLinear::constant(v);
  }
  if (!j.is_array() || j.empty()) throw ParseError("sigma_h", "expected a number or [[h,v],...]");
  PiecewiseLinear p;
  double prev_x = -1.0;
  for (const auto& pt : j) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      throw ParseError("sigma_h", "each knot must be [h, value]");
    const double x = pt[0].get<double>();
    const double v = pt[1].get<double>();
    if (x < 0 || x > 1) throw OutOfRangeError("sigma_h knot position", 0.0, 1.0, x);
    if (v < 0 || v > 1) throw OutOfRangeError("sigma_h knot value", 0.0, 1.0, v);
    if (x <= prev_x) throw ParseError("sigma_h", "knot positions must be strictly ascending");
    prev_x = x;
    p.points.emplace_back(x, v);
  }
  return p;
}

inline ClothParams cloth_preset(const std::string& name) {
  // Calibration placeholders, not measured material data; see README.
  ClothParams c;
  if (name == "lldpe-stretch" || name == "llpde-stretch") {
    c.preset = "lldpe-stretch";
    c.area_density = 0.02;
    c.stiffness = 0.9;
    c.tear_threshold = 0.25;
  } else if (name == "heat-shrink") {
    c.preset = "heat-shrink";
    c.area_density = 0.06;
    c.stiffness = 0.98;
    c.tear_threshold = 0.10;
    c.cover_top = true;
  } else if (name == "kraft-paper") {
    c.preset = "kraft-paper";
    c.area_density = 0.08;
    c.stiffness = 0.99;
    c.tear_threshold = 0.05;
  } else {
    throw ParseError("cloth.preset", "unknown preset \"" + name + "\"");
  }
  return c;
}

}  // namespace detail

// Parse simulation parameters. The schema arrives either through
// `schema_xml` (caller resolved the file) or inline under a "schema_xml"
// key; a bare "schema_file" reference without resolved text is an error
// here — load_params_file() in runner.hpp does the file plumbing.
inline SimulationParameters parse_params_json(std::string_view json_text,
                                              std::string_view schema_xml = {}) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError("params", e.what());
  }
  if (!j.is_object()) throw ParseError("params", "top level must be an object");

  SimulationParameters p;

  if (!schema_xml.empty()) {
    p.schema = parse_schema_xml(schema_xml);
  } else if (j.contains("schema_xml") && j.at("schema_xml").is_string()) {
    p.schema = parse_schema_xml(j.at("schema_xml").get<std::string>());
  } else if (j.contains("schema_file")) {
    throw ParseError("schema_file",
                     "schema file reference was not resolved; load it and pass the text");
  } else {
    throw ParseError("params", "missing schema reference (schema_file or schema_xml)");
  }

  if (j.contains("conditions")) {
    const json& c = j.at("conditions");
    if (!c.is_object()) throw ParseError("conditions", "expected an object");
    p.conditions.accel_g =
        detail::require_range(c, "accel_g", kAccelGMin, kAccelGMax, p.conditions.accel_g);
    p.conditions.impulse_duration = detail::require_range(
        c, "impulse_duration", kImpulseMin, kImpulseMax, p.conditions.impulse_duration);
    p.conditions.decel_rate = detail::optional_number(c, "decel_rate", p.conditions.decel_rate);
    if (!(p.conditions.decel_rate > 0))
      throw OutOfRangeError("conditions.decel_rate", 0.0,
                            std::numeric_limits<double>::infinity(), p.conditions.decel_rate);
  }

  p.tension_T = detail::optional_number(j, "tension_T", p.tension_T);
  if (p.tension_T < 0)
    throw OutOfRangeError("tension_T", 0.0, std::numeric_limits<double>::infinity(), p.tension_T);
  if (j.contains("sigma_h")) p.sigma_h = detail::parse_sigma(j.at("sigma_h"));
  p.field_offset_d = detail::optional_number(j, "field_offset_d", p.field_offset_d);
  if (p.field_offset_d < 0)
    throw OutOfRangeError("field_offset_d", 0.0, std::numeric_limits<double>::infinity(),
                          p.field_offset_d);
  p.field_range_dmax = detail::optional_number(j, "field_range_dmax", p.field_range_dmax);
  if (!(p.field_range_dmax > 0))
    throw OutOfRangeError("field_range_dmax", 0.0, std::numeric_limits<double>::infinity(),
                          p.field_range_dmax);

  if (j.contains("cloth")) {
    const json& c = j.at("cloth");
    if (!c.is_object()) throw ParseError("cloth", "expected an object");
    if (c.contains("preset")) p.cloth = detail::cloth_preset(c.at("preset").get<std::string>());
    if (c.contains("enabled")) p.cloth.enabled = c.at("enabled").get<bool>();
    p.cloth.area_density = detail::optional_number(c, "area_density", p.cloth.area_density);
    p.cloth.stiffness = detail::optional_number(c, "stiffness", p.cloth.stiffness);
    p.cloth.damping = detail::optional_number(c, "damping", p.cloth.damping);
    if (c.contains("resolution")) p.cloth.resolution = c.at("resolution").get<int>();
    p.cloth.thickness = detail::optional_number(c, "thickness", p.cloth.thickness);
    p.cloth.overlap = detail::optional_number(c, "overlap", p.cloth.overlap);
    p.cloth.tear_threshold = detail::optional_number(c, "tear_threshold", p.cloth.tear_threshold);
    if (c.contains("cover_top")) p.cloth.cover_top = c.at("cover_top").get<bool>();
    if (p.cloth.resolution < 2) throw ParseError("cloth.resolution", "must be >= 2");
  }

  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    if (!t.is_object()) throw ParseError("thresholds", "expected an object");
    auto& th = p.thresholds;
    th.permanent_frac = detail::optional_number(t, "permanent_frac", th.permanent_frac);
    th.elastic_frac = detail::optional_number(t, "elastic_frac", th.elastic_frac);
    th.bottom_zone_height = detail::optional_number(t, "bottom_zone_height", th.bottom_zone_height);
    th.bottom_zone_limit = detail::optional_number(t, "bottom_zone_limit", th.bottom_zone_limit);
    th.settle_speed_eps = detail::optional_number(t, "settle_speed_eps", th.settle_speed_eps);
    th.settle_hold = detail::optional_number(t, "settle_hold", th.settle_hold);
  }

  p.timestep = detail::optional_number(j, "timestep", p.timestep);
  if (!(p.timestep > 0) || p.timestep > kMaxTimestep)
    throw OutOfRangeError("timestep", 0.0, kMaxTimestep, p.timestep);
  p.max_duration = detail::optional_number(j, "max_duration", p.max_duration);
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("visual")) p.visual = j.at("visual");

  return p;
}

// Canonical JSON form: the schema is embedded as XML text, keys are
// alphabetically ordered (nlohmann default), so emit(parse(emit(x))) is
// byte-identical.
inline json params_to_json(const SimulationParameters& p) {
  json j;
  j["schema_xml"] = serialize_schema_xml(p.schema);
  j["conditions"] = {{"accel_g", p.conditions.accel_g},
                     {"impulse_duration", p.conditions.impulse_duration},
                     {"decel_rate", p.conditions.decel_rate}};
  j["tension_T"] = p.tension_T;
  json sigma = json::array();
  for (const auto& [x, v] : p.sigma_h.points) sigma.push_back({x, v});
  j["sigma_h"] = sigma;
  j["field_offset_d"] = p.field_offset_d;
  j["field_range_dmax"] = p.field_range_dmax;
  j["cloth"] = {{"enabled", p.cloth.enabled},
                {"preset", p.cloth.preset},
                {"area_density", p.cloth.area_density},
                {"stiffness", p.cloth.stiffness},
                {"damping", p.cloth.damping},
                {"resolution", p.cloth.resolution},
                {"thickness", p.cloth.thickness},
                {"overlap", p.cloth.overlap},
                {"tear_threshold", p.cloth.tear_threshold},
                {"cover_top", p.cloth.cover_top}};
  j["thresholds"] = {{"permanent_frac", p.thresholds.permanent_frac},
                     {"elastic_frac", p.thresholds.elastic_frac},
                     {"bottom_zone_height", p.thresholds.bottom_zone_height},
                     {"bottom_zone_limit", p.thresholds.bottom_zone_limit},
                     {"settle_speed_eps", p.thresholds.settle_speed_eps},
                     {"settle_hold", p.thresholds.settle_hold}};
  j["timestep"] = p.timestep;
  j["max_duration"] = p.max_duration;
  j["seed"] = p.seed;
  j["visual"] = p.visual;
  return j;
}

inline std::string serialize_params_json(const SimulationParameters& p) {
  return params_to_json(p).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<ParamViolation> validate_params(const SimulationParameters& p) {
  std::vector<ParamViolation> v;
  auto add = [&v](const char* code, std::string msg) { v.push_back({code, std::move(msg)}); };

  if (p.schema.layers.empty()) add("EmptySchema", "schema has no layers");
  for (const auto& layer : p.schema.layers) {
    if (layer.placements.empty()) add("EmptyLayer", "layer has no placements");
    for (const auto& place : layer.placements)
      if (!p.schema.package_catalog.count(place.package_id))
        add("UnknownPackageId", "placement references \"" + place.package_id + "\"");
  }
  if (!(p.timestep > 0))
    add("NonPositiveTimestep", "timestep must be positive");
  else if (p.timestep > kMaxTimestep)
    add("TimestepTooLarge", "timestep must be <= 1/60 s");
  if (!(p.thresholds.permanent_frac > 0) || !(p.thresholds.elastic_frac > 0) ||
      !(p.thresholds.bottom_zone_height > 0) || !(p.thresholds.bottom_zone_limit > 0) ||
      !(p.thresholds.settle_speed_eps > 0) || !(p.thresholds.settle_hold > 0))
    add("NonPositiveThreshold", "all validation thresholds must be positive");
  if (p.thresholds.permanent_frac >= p.thresholds.elastic_frac)
    add("ThresholdOrdering", "permanent_frac must be < elastic_frac");
  if (p.conditions.accel_g < kAccelGMin || p.conditions.accel_g > kAccelGMax)
    add("AccelOutOfRange", "accel_g outside [0.3, 0.8]");
  if (p.conditions.impulse_duration < kImpulseMin || p.conditions.impulse_duration > kImpulseMax)
    add("ImpulseOutOfRange", "impulse_duration outside [0.35, 0.5] s");
  if (!(p.conditions.decel_rate > 0)) add("NonPositiveDecel", "decel_rate must be > 0");
  if (p.tension_T < 0) add("NegativeTension", "tension_T must be >= 0");
  if (!(p.field_range_dmax > 0)) add("NonPositiveFieldRange", "field_range_dmax must be > 0");
  for (const auto& [x, val] : p.sigma_h.points)
    if (val < 0 || val > 1 || x < 0 || x > 1) {
      add("SigmaOutOfRange", "sigma_h knots must lie in [0,1]x[0,1]");
      break;
    }
  if (p.cloth.resolution < 2) add("ClothResolution", "cloth resolution must be >= 2");
  return v;
}

// ---------------------------------------------------------------------------
// Randomized and augmented configurations

struct ParameterRanges {
  SimulationParameters base;  // schema and all non-swept parameters
  double accel_g_min = kAccelGMin;
  double accel_g_max = kAccelGMax;
  double impulse_min = kImpulseMin;
  double impulse_max = kImpulseMax;
};

namespace detail {

// quantized values lo, lo+step, ... <= hi (fuzzy hi to absorb fp noise)
inline int quantized_count(double lo, double hi, double step) {
  if (lo > hi) return 0;
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

}  // namespace detail

// Pure function of (ranges, seed). accel_g is drawn on the standard's 0.1 g
// grid, impulse duration on a 0.05 s grid.
inline SimulationParameters generate_random_params(const ParameterRanges& ranges,
                                                   std::uint64_t seed) {
  if (ranges.accel_g_min < kAccelGMin || ranges.accel_g_max > kAccelGMax)
    throw OutOfRangeError("ranges.accel_g", kAccelGMin, kAccelGMax,
                          ranges.accel_g_min < kAccelGMin ? ranges.accel_g_min
                                                          : ranges.accel_g_max);
  if (ranges.impulse_min < kImpulseMin || ranges.impulse_max > kImpulseMax)
    throw OutOfRangeError("ranges.impulse_duration", kImpulseMin, kImpulseMax,
                          ranges.impulse_min < kImpulseMin ? ranges.impulse_min
                                                           : ranges.impulse_max);
  const int n_accel = detail::quantized_count(ranges.accel_g_min, ranges.accel_g_max, 0.1);
  const int n_imp = detail::quantized_count(ranges.impulse_min, ranges.impulse_max, 0.05);
  if (n_accel <= 0) throw EmptyRangeError("accel_g");
  if (n_imp <= 0) throw EmptyRangeError("impulse_duration");

  SplitMix64 rng(seed);
  SimulationParameters p = ranges.base;
  p.conditions.accel_g = ranges.accel_g_min + 0.1 * static_cast<double>(rng.next_below(n_accel));
  p.conditions.impulse_duration =
      ranges.impulse_min + 0.05 * static_cast<double>(rng.next_below(n_imp));
  p.seed = seed;
  return p;
}

// Layer-cycle expansion and quarter-turn rotation about the pallet center.
inline PalletizingSchema augment_schema(const PalletizingSchema& schema, int rotation_quarter,
                                        int n_layers) {
  if (rotation_quarter < 0 || rotation_quarter > 3)
    throw OutOfRangeError("rotation", 0, 3, rotation_quarter);
  if (n_layers < 1) throw OutOfRangeError("n_layers", 1, 1e9, n_layers);
  if (schema.layers.empty()) throw ParseError("schema", "schema has no layers");

  PalletizingSchema out = schema;
  out.layers.clear();
  const size_t original = schema.layers.size();
  for (int i = 0; i < n_layers; ++i) {
    LayerLayout layer = schema.layers[static_cast<size_t>(i) % original];
    for (auto& p : layer.placements) {
      const double x = p.x_mm, y = p.y_mm;
      switch (rotation_quarter) {
        case 0: break;
        case 1: p.x_mm = -y; p.y_mm = x; break;
        case 2: p.x_mm = -x; p.y_mm = -y; break;
        case 3: p.x_mm = y; p.y_mm = -x; break;
      }
      p.rot_quarter = (p.rot_quarter + rotation_quarter) % 4;
    }
    out.layers.push_back(std::move(layer));
  }
  for (size_t i = 0; i < out.layers.size(); ++i)
    detail::check_layer_geometry(out, i, "/augmented/layer[" + std::to_string(i + 1) + "]");
  return out;
}

}  // namespace palletbench
