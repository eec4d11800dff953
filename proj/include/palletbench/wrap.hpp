#pragma once

// Wrapping band as position-based cloth: Verlet integration, distance
// constraint projection, one-way collision against the rigid boxes.
// The band never pushes back on rigid bodies; it exists to report
// per-edge strain and stress hotspots.

#include <algorithm>
#include <span>
#include <vector>

#include "palletbench/body.hpp"
#include "palletbench/config.hpp"
#include "palletbench/errors.hpp"
#include "palletbench/math.hpp"

namespace palletbench {

struct ClothEdge {
  int i = 0, j = 0;
  double rest = 0.0;
  double stiffness = 1.0;
};

struct ClothMesh {
  std::vector<Vec3> positions;
  std::vector<Vec3> prev_positions;
  std::vector<double> inv_mass;
  std::vector<ClothEdge> edges;
  std::vector<int> pinned;        // vertex ids attached to the pallet frame
  std::vector<Vec3> pin_local;    // pallet-frame coordinates, index-aligned with pinned
  double thickness = 0.002;       // m
  double damping = 0.01;
  double tear_threshold = 0.25;
  int ring_size = 0;  // vertices per horizontal ring
  int rows = 0;

  bool empty() const { return positions.empty(); }
};

struct StrainField {
  struct EdgeStrain {
    int i = 0, j = 0;
    double strain = 0.0;
  };
  std::vector<EdgeStrain> edges;  // index-aligned with mesh edges
  double max_strain = 0.0;
  int max_edge = -1;
  std::vector<int> stressed_edges;  // strain >= tear threshold
};

struct StressRegion {
  std::vector<int> edge_ids;  // ascending
  double max_strain = 0.0;
  int max_edge = -1;
};

// ---------------------------------------------------------------------------

// Closed vertical band around the cargo AABB: `resolution` vertices per side
// and per column, the bottom ring extended `overlap` below the cargo so it
// can be pinned to the pallet. Optionally a top cover grid (heat-shrink).
inline ClothMesh generate_wrap(const Aabb& cargo, int resolution, double overlap,
                               const ClothParams& params = {}) {
  const Vec3 ext = cargo.extent();
  if (!(ext.x > 0) || !(ext.y > 0) || !(ext.z > 0))
    throw Error("generate_wrap: degenerate cargo bounds");
  if (resolution < 2) throw Error("generate_wrap: resolution must be >= 2");

  ClothMesh mesh;
  mesh.thickness = params.thickness;
  mesh.damping = params.damping;
  mesh.tear_threshold = params.tear_threshold;

  const int r = resolution;
  const int ring = 4 * (r - 1);
  mesh.ring_size = ring;
  mesh.rows = r;
  const double z0 = cargo.lo.z - overlap;
  const double z1 = cargo.hi.z;

  // ring positions walk the AABB perimeter corner to corner
  const Vec3 c0{cargo.lo.x, cargo.lo.y, 0}, c1{cargo.hi.x, cargo.lo.y, 0};
  const Vec3 c2{cargo.hi.x, cargo.hi.y, 0}, c3{cargo.lo.x, cargo.hi.y, 0};
  const Vec3 corners[4] = {c0, c1, c2, c3};
  std::vector<Vec3> ring_xy(ring);
  for (int side = 0; side < 4; ++side) {
    const Vec3 a = corners[side];
    const Vec3 b = corners[(side + 1) % 4];
    for (int k = 0; k < r - 1; ++k) {
      const double t = static_cast<double>(k) / (r - 1);
      ring_xy[side * (r - 1) + k] = a + (b - a) * t;
    }
  }

  for (int row = 0; row < r; ++row) {
    const double z = z0 + (z1 - z0) * static_cast<double>(row) / (r - 1);
    for (int i = 0; i < ring; ++i)
      mesh.positions.push_back({ring_xy[i].x, ring_xy[i].y, z});
  }

  auto vid = [ring](int row, int i) { return row * ring + i; };
  auto add_edge = [&mesh](int i, int j, double stiffness) {
    mesh.edges.push_back({i, j, length(mesh.positions[j] - mesh.positions[i]), stiffness});
  };

  for (int row = 0; row < r; ++row)
    for (int i = 0; i < ring; ++i) add_edge(vid(row, i), vid(row, (i + 1) % ring), params.stiffness);
  for (int row = 0; row + 1 < r; ++row) {
    for (int i = 0; i < ring; ++i) {
      add_edge(vid(row, i), vid(row + 1, i), params.stiffness);
      // shear diagonals keep the band from collapsing sideways
      add_edge(vid(row, i), vid(row + 1, (i + 1) % ring), params.stiffness * 0.5);
      add_edge(vid(row, (i + 1) % ring), vid(row + 1, i), params.stiffness * 0.5);
    }
  }

  if (params.cover_top) {
    // interior grid across the top opening; the boundary reuses the top ring
    auto top_index = [&](int gi, int gj) -> int {
      const bool boundary = gi == 0 || gi == r - 1 || gj == 0 || gj == r - 1;
      if (boundary) {
        if (gj == 0) return vid(r - 1, gi);                       // side 0
        if (gi == r - 1) return vid(r - 1, (r - 1) + gj);         // side 1
        if (gj == r - 1) return vid(r - 1, 2 * (r - 1) + (r - 1 - gi));  // side 2
        return vid(r - 1, 3 * (r - 1) + (r - 1 - gj));            // side 3
      }
      return -1;  // filled in below
    };
    std::vector<int> grid(static_cast<size_t>(r) * r, -1);
    for (int gj = 0; gj < r; ++gj)
      for (int gi = 0; gi < r; ++gi) {
        int idx = top_index(gi, gj);
        if (idx < 0) {
          idx = static_cast<int>(mesh.positions.size());
          mesh.positions.push_back({cargo.lo.x + ext.x * gi / (r - 1),
                                    cargo.lo.y + ext.y * gj / (r - 1), z1});
        }
        grid[gj * r + gi] = idx;
      }
    for (int gj = 0; gj < r; ++gj)
      for (int gi = 0; gi < r; ++gi) {
        if (gi + 1 < r) add_edge(grid[gj * r + gi], grid[gj * r + gi + 1], params.stiffness);
        if (gj + 1 < r) add_edge(grid[gj * r + gi], grid[(gj + 1) * r + gi], params.stiffness);
        if (gi + 1 < r && gj + 1 < r) {
          add_edge(grid[gj * r + gi], grid[(gj + 1) * r + gi + 1], params.stiffness * 0.5);
          add_edge(grid[gj * r + gi + 1], grid[(gj + 1) * r + gi], params.stiffness * 0.5);
        }
      }
  }

  mesh.prev_positions = mesh.positions;

  const double height = z1 - z0;
  const double perimeter = 2.0 * (ext.x + ext.y);
  double total_mass = params.area_density * perimeter * height;
  if (params.cover_top) total_mass += params.area_density * ext.x * ext.y;
  const double per_vertex =
      total_mass > 0 ? total_mass / static_cast<double>(mesh.positions.size()) : 1.0;
  mesh.inv_mass.assign(mesh.positions.size(), per_vertex > 0 ? 1.0 / per_vertex : 1.0);

  for (int i = 0; i < ring; ++i) mesh.pinned.push_back(vid(0, i));
  for (int idx : mesh.pinned) mesh.inv_mass[idx] = 0.0;
  return mesh;
}

inline void pin_to_frame(ClothMesh& mesh, const RigidBody& pallet) {
  mesh.pin_local.clear();
  const Mat3 rt = pallet.orientation.to_matrix().transposed();
  for (int idx : mesh.pinned)
    mesh.pin_local.push_back(rt * (mesh.positions[idx] - pallet.position));
}

namespace detail {

inline void push_out_of_box(Vec3& p, const RigidBody& box, double thickness) {
  const Mat3 r = box.orientation.to_matrix();
  const Vec3 local = r.transposed() * (p - box.position);
  const Vec3 limit = box.half_extents + Vec3{thickness, thickness, thickness};
  if (std::abs(local.x) >= limit.x || std::abs(local.y) >= limit.y ||
      std::abs(local.z) >= limit.z)
    return;
  const double dx = limit.x - std::abs(local.x);
  const double dy = limit.y - std::abs(local.y);
  const double dz = limit.z - std::abs(local.z);
  Vec3 out = local;
  if (dx <= dy && dx <= dz)
    out.x = (local.x >= 0 ? limit.x : -limit.x);
  else if (dy <= dz)
    out.y = (local.y >= 0 ? limit.y : -limit.y);
  else
    out.z = (local.z >= 0 ? limit.z : -limit.z);
  p = box.position + r * out;
}

}  // namespace detail

// Stiffness-weighted distance constraint projection (Gauss-Seidel).
inline void project_edges(ClothMesh& mesh, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    for (const ClothEdge& e : mesh.edges) {
      const double wi = mesh.inv_mass[e.i];
      const double wj = mesh.inv_mass[e.j];
      const double wsum = wi + wj;
      if (wsum == 0.0) continue;
      const Vec3 d = mesh.positions[e.j] - mesh.positions[e.i];
      const double len = length(d);
      if (len <= 0.0) continue;
      const Vec3 corr = d * (e.stiffness * (len - e.rest) / (len * wsum));
      mesh.positions[e.i] += corr * wi;
      mesh.positions[e.j] -= corr * wj;
    }
  }
}

// One step of the band: Verlet update, `iterations` rounds of distance
// constraint projection, vertex push-out against every rigid box. Rigid
// bodies are read, never written.
inline void step_cloth(ClothMesh& mesh, std::span<const RigidBody> colliders, const Vec3& gravity,
                       double dt, int iterations = 8) {
  if (mesh.empty()) return;

  const RigidBody* pallet = nullptr;
  for (const RigidBody& b : colliders)
    if (b.role == BodyRole::pallet) pallet = &b;

  const double keep = 1.0 - mesh.damping;
  for (size_t i = 0; i < mesh.positions.size(); ++i) {
    if (mesh.inv_mass[i] == 0.0) continue;
    const Vec3 cur = mesh.positions[i];
    mesh.positions[i] = cur + (cur - mesh.prev_positions[i]) * keep + gravity * (dt * dt);
    mesh.prev_positions[i] = cur;
  }

  if (pallet && !mesh.pin_local.empty()) {
    const Mat3 r = pallet->orientation.to_matrix();
    for (size_t k = 0; k < mesh.pinned.size(); ++k) {
      const Vec3 p = pallet->position + r * mesh.pin_local[k];
      mesh.positions[mesh.pinned[k]] = p;
      mesh.prev_positions[mesh.pinned[k]] = p;
    }
  }

  project_edges(mesh, iterations);

  for (size_t i = 0; i < mesh.positions.size(); ++i) {
    if (mesh.inv_mass[i] == 0.0) continue;
    for (const RigidBody& box : colliders) detail::push_out_of_box(mesh.positions[i], box, mesh.thickness);
  }

  for (size_t i = 0; i < mesh.positions.size(); ++i)
    if (!finite(mesh.positions[i]))
      throw FatalNumericError("non-finite cloth vertex", "vertex " + std::to_string(i));
}

inline StrainField compute_strain(const ClothMesh& mesh) {
  StrainField field;
  field.edges.reserve(mesh.edges.size());
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    const ClothEdge& edge = mesh.edges[e];
    const double len = length(mesh.positions[edge.j] - mesh.positions[edge.i]);
    const double strain = (len - edge.rest) / edge.rest;
    field.edges.push_back({edge.i, edge.j, strain});
    if (strain > field.max_strain) {
      field.max_strain = strain;
      field.max_edge = static_cast<int>(e);
    }
    if (strain >= mesh.tear_threshold) field.stressed_edges.push_back(static_cast<int>(e));
  }
  return field;
}

// Stressed edges grouped into vertex-connected regions, strongest first.
inline std::vector<StressRegion> stress_report(const StrainField& field, double tear_threshold) {
  std::vector<int> hot;
  for (size_t e = 0; e < field.edges.size(); ++e)
    if (field.edges[e].strain >= tear_threshold) hot.push_back(static_cast<int>(e));

  std::vector<StressRegion> regions;
  std::vector<char> used(hot.size(), 0);
  for (size_t s = 0; s < hot.size(); ++s) {
    if (used[s]) continue;
    StressRegion region;
    std::vector<size_t> queue{s};
    used[s] = 1;
    while (!queue.empty()) {
      const size_t k = queue.back();
      queue.pop_back();
      const int e = hot[k];
      region.edge_ids.push_back(e);
      const double strain = field.edges[e].strain;
      if (strain > region.max_strain) {
        region.max_strain = strain;
        region.max_edge = e;
      }
      for (size_t n = 0; n < hot.size(); ++n) {
        if (used[n]) continue;
        const auto& a = field.edges[e];
        const auto& b = field.edges[hot[n]];
        if (a.i == b.i || a.i == b.j || a.j == b.i || a.j == b.j) {
          used[n] = 1;
          queue.push_back(n);
        }
      }
    }
    std::sort(region.edge_ids.begin(), region.edge_ids.end());
    regions.push_back(std::move(region));
  }
  std::sort(regions.begin(), regions.end(),
            [](const StressRegion& a, const StressRegion& b) { return a.max_strain > b.max_strain; });
  return regions;
}

}  // namespace palletbench
