// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "openable/Parts.h"

namespace openable {

/// Confidence carried by base votes.
inline constexpr double kBaseConfidence = 0.5;

/// Per-point instance assignment. Instance -1 is the base.
struct PointLabel {
    std::int32_t instance = -1;
    PartLabel label = PartLabel::Base;
    double confidence = kBaseConfidence;

    bool is_base() const { return instance < 0; }
    bool operator==(const PointLabel&) const = default;
};

/// Points sampled from a mesh surface. vertex_id is the mesh vertex a point
/// was copied from, or -1 for interior samples; vertex points vote for
/// every incident triangle in triangle_vote.
struct SampledPointCloud {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;
    std::vector<std::int32_t> source_triangle;
    std::vector<std::int32_t> vertex_id;
    std::optional<std::vector<PointLabel>> labels;

    std::size_t size() const { return positions.size(); }
    /// Throws SchemaError on length mismatches, IndexOutOfRange on bad
    /// triangle ids.
    void validate(std::size_t num_triangles) const;
};

/// Draws n points area-proportionally with uniform barycentric coordinates,
/// then (optionally) appends every referenced mesh vertex with the lowest
/// incident triangle as its source. Normals are face normals.
/// Deterministic for a given seed. Throws DegenerateMesh when n > 0 and the
/// mesh has zero area.
SampledPointCloud sample_surface(const TriMesh& mesh, std::size_t n, bool include_vertices,
                                 std::uint64_t seed);

/// Training protocol: `per_part` points inside each part (and the base),
/// labeled by part, then farthest point sampling down to `total` points.
/// Zero-area parts are skipped with a warning.
SampledPointCloud sample_per_part(const TriMesh& mesh, const PartSegmentation& seg,
                                  std::size_t per_part, std::size_t total, std::uint64_t seed);

/// Greedy max-min subset. Starts at the point farthest from the centroid;
/// each step takes the point with the largest squared distance to the
/// selected set, lowest index on ties. Exact; a kd-tree only prunes work.
/// Throws InvalidCount unless 1 <= m <= |points|.
std::vector<std::int32_t> farthest_point_sample(std::span<const Vec3> points, std::size_t m);

SampledPointCloud subset(const SampledPointCloud& cloud, std::span<const std::int32_t> indices);

/// Labels each query point by majority instance among its k nearest labeled
/// points; ties go to the smaller mean distance, then the lower instance
/// id. A labeled point at zero distance decides on its own. Throws
/// EmptyInput for an empty labeled cloud, SchemaError if it has no labels.
std::vector<PointLabel> knn_propagate(const SampledPointCloud& labeled,
                                      const SampledPointCloud& query, std::size_t k);

/// Per-triangle majority over the labeled points sampled from it; ties go
/// to higher summed confidence, then the base, then the lower instance id.
/// Throws UncoveredTriangle when a triangle receives no vote.
std::vector<PointLabel> triangle_vote(const TriMesh& mesh, const SampledPointCloud& labeled);

/// Builds a segmentation whose part i is `instances[i]` with the triangles
/// labeled instance i.
PartSegmentation segmentation_from_labels(std::span<const PointLabel> triangle_labels,
                                          std::vector<PartInstance> instances);

/// Point cloud PLY: x y z nx ny nz (double), source_triangle and vertex_id
/// (int), plus instance/label/confidence when labeled.
void save_point_cloud(const SampledPointCloud& cloud, const std::filesystem::path& path);
SampledPointCloud load_point_cloud(const std::filesystem::path& path);

}  // namespace openable
