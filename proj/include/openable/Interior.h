// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "openable/OrientedBox.h"
#include "openable/Parts.h"
#include "openable/SpatialIndex.h"

namespace openable {

struct DepthProbe {
    double d_center = 0.0;
    double d_left = 0.0;
    double d_right = 0.0;
    bool clamped_center = false;
    bool clamped_left = false;
    bool clamped_right = false;

    double min_depth() const { return std::min({d_center, d_left, d_right}); }
};

enum class DrawerKind { Standard, Corner };

/// Casts three rays along -front from just behind the front slab (center and
/// +-40% of the width). Depths are measured from the slab's back plane; a
/// ray that hits nothing is clamped to where it leaves `object_bounds`.
DepthProbe probe_drawer_depth(const SpatialIndex& index, const OrientedBox& front_box,
                              const Aabb& object_bounds);
/// Convenience overload probing `mesh` with its own bounding box.
DepthProbe probe_drawer_depth(const TriMesh& mesh, const OrientedBox& front_box);

/// Corner iff d_center > margin * max(d_left, d_right).
DrawerKind classify_drawer(const DepthProbe& probe, double margin = 1.25);

/// clamp(2% of min(width, height), 1 mm, 20 mm).
double default_wall_thickness(const OrientedBox& front_box);

/// Drawer body behind the front slab, one closed box (or prism) per slab.
/// Standard: bottom, left, right and back slabs reaching min depth minus
/// the thickness. Corner: pentagonal bottom, two sides and two angled back
/// slabs set one thickness inside the probed walls. Thickness below 1e-5
/// is raised to 1e-3. Throws DepthTooSmall when a depth is below twice the
/// thickness.
TriMesh build_drawer_body(const OrientedBox& front_box, const DepthProbe& probe, DrawerKind kind,
                          double thickness);

/// Gives `generated` the attribute layout of `reference`: area-weighted mean
/// color, area-weighted mean UV, and vertex normals from its own faces.
void match_attributes(TriMesh& generated, const TriMesh& reference);

struct InteriorOptions {
    double corner_margin = 1.25;
    double thickness = 0.0;  // <= 0 selects default_wall_thickness
};

/// Adds a body to every drawer with prismatic motion; other parts and the
/// base are untouched. Per-part failures are logged and leave the part as is.
ArticulatedObject complete_interiors(const ArticulatedObject& obj, const InteriorOptions& options = {},
                                     std::vector<std::string>* diagnostics = nullptr);

struct ConnectivitySegment {
    std::int32_t id = 0;
    std::vector<std::int32_t> triangle_ids;
};

/// Edge-connected components after welding vertices closer than `weld_tol`.
/// Segments are ordered by their lowest triangle id.
std::vector<ConnectivitySegment> connectivity_segments(const TriMesh& mesh, double weld_tol = 1e-6);

/// View directions on a Fibonacci sphere.
std::vector<Vec3> fibonacci_directions(int count);

/// Triangles seen in any orthographic view along `directions`.
std::vector<char> visible_triangles(const TriMesh& mesh, const std::vector<Vec3>& directions, int width,
                                    int height);

/// Keeps the connectivity segments with at least one triangle visible in
/// one of `views` orthographic renders. Triangle order is preserved.
TriMesh strip_interior(const TriMesh& mesh, int views = 64, int width = 512, int height = 512);

/// Share of a grid of downward rays (over the frame-aligned footprint) that
/// hit within max(2 cm, 5% of the height) of the top.
double top_coverage(const TriMesh& mesh, const Frame& frame, int grid = 32);

/// Appends a closed 2 cm slab covering the footprint, flush with the top,
/// when top_coverage is below 50%.
TriMesh add_countertop(const TriMesh& mesh, const Frame& frame, int grid = 32);

}  // namespace openable
