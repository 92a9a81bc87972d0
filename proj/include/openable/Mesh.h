// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace openable {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Tri = Eigen::Matrix<std::int32_t, 3, 1>;

/// Indexed triangle mesh. Positions are in meters. Optional per-vertex
/// attributes are either empty or sized to the vertex count.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Tri> triangles;
    std::vector<Vec3> normals;
    std::vector<Vec3> colors;  // linear RGB in [0,1]
    std::vector<Vec2> uvs;
    std::optional<std::string> texture_path;

    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }
    bool has_normals() const { return !normals.empty(); }
    bool has_colors() const { return !colors.empty(); }
    bool has_uvs() const { return !uvs.empty(); }

    /// Throws IndexOutOfRange / DegenerateMesh / SchemaError on violations
    /// of the index and attribute-size invariants.
    void validate() const;
};

/// Canonical object frame: unit up and front, mutually orthogonal.
struct Frame {
    Vec3 up = Vec3::UnitZ();
    Vec3 front = Vec3::UnitX();

    /// Completes a right-handed (right, front, up) basis.
    Vec3 right() const { return front.cross(up); }
    void validate() const;
};

struct Aabb {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    static Aabb from_points(std::span<const Vec3> points);
    static Aabb from_min_max(const Vec3& lo, const Vec3& hi) { return {lo, hi}; }

    bool valid() const { return (min.array() <= max.array()).all(); }
    void extend(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void extend(const Aabb& b) {
        min = min.cwiseMin(b.min);
        max = max.cwiseMax(b.max);
    }
    Vec3 extent() const { return valid() ? Vec3(max - min) : Vec3::Zero(); }
    Vec3 center() const { return 0.5 * (min + max); }
    double volume() const {
        const Vec3 e = extent();
        return e.x() * e.y() * e.z();
    }
    double diagonal() const { return extent().norm(); }
    bool contains(const Vec3& p, double tol = 0.0) const {
        return (p.array() >= min.array() - tol).all() &&
               (p.array() <= max.array() + tol).all();
    }
};

double triangle_area(const TriMesh& mesh, std::size_t t);
/// Unit face normal; zero vector for degenerate triangles.
Vec3 triangle_normal(const TriMesh& mesh, std::size_t t);
Vec3 triangle_centroid(const TriMesh& mesh, std::size_t t);
std::vector<double> triangle_areas(const TriMesh& mesh);
double total_area(const TriMesh& mesh);
Aabb bounding_box(const TriMesh& mesh);
/// Area-weighted centroid of the surface. Falls back to the vertex mean
/// when the surface has zero area.
Vec3 surface_centroid(const TriMesh& mesh);

/// Extracts the listed triangles into a compact mesh, keeping attributes.
/// Triangle order follows `triangle_ids`.
TriMesh submesh(const TriMesh& mesh, std::span<const std::int32_t> triangle_ids);

/// Appends `other` to `mesh`. Attributes present on only one side are
/// dropped from the result unless `mesh` was empty.
void append(TriMesh& mesh, const TriMesh& other);

/// Applies x -> R*x + t (with uniform scale folded into R by the caller).
/// Normals are rotated and renormalized.
TriMesh transformed(const TriMesh& mesh, const Eigen::Matrix3d& linear, const Vec3& translation);

/// Closed axis-aligned box mesh in a local (right, front, up) basis,
/// 12 triangles with outward winding.
TriMesh make_box(const Vec3& center,
                 const Eigen::Matrix3d& axes,
                 const Vec3& half_extents);
TriMesh make_box(const Aabb& box);

/// Closed prism over a convex polygon (counter-clockwise about `up`)
/// extruded by `height` along `up`.
TriMesh make_prism(std::span<const Vec3> base_polygon, const Vec3& up, double height);

}  // namespace openable
