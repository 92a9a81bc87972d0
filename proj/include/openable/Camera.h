// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "openable/Mesh.h"
#include "openable/SpatialIndex.h"

namespace openable {

/// Background value of a triangle-index image.
inline constexpr std::int32_t kBackground = -1;

/// Pinhole camera in the computer-vision convention: camera x right, y down,
/// z forward. `rotation` maps world directions into camera coordinates.
struct PinholeCamera {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 1;
    int height = 1;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 position = Vec3::Zero();

    /// Camera at `eye` looking at `target`, with `up` mapped to image -y and a
    /// vertical field of view in degrees.
    static PinholeCamera look_at(const Vec3& eye, const Vec3& target, const Vec3& up,
                                 double fov_y_degrees, int width, int height);

    /// Unit world-space direction through the center of pixel (x, y).
    Vec3 pixel_ray(int x, int y) const;

    /// Throws InvalidCamera for non-positive focal lengths or resolution,
    /// non-finite values or a non-orthonormal rotation.
    void validate() const;
};

struct IndexMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> ids;  // row-major, kBackground where nothing is hit

    std::int32_t at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }
};

IndexMap render_index_map(const SpatialIndex& index, const PinholeCamera& camera);

/// One index map per camera. An empty mesh yields all-background maps.
std::vector<IndexMap> render_index_maps(const TriMesh& mesh, const std::vector<PinholeCamera>& cameras);

/// Cameras on a circle around the object: azimuths spread symmetrically
/// about frame.front (-30, 0, +30 degrees for three views), 20 degrees of
/// elevation, framing the bounding sphere.
std::vector<PinholeCamera> default_cameras(const TriMesh& mesh, const Frame& frame, int views,
                                           int width, int height);

/// Orthographic triangle-index image looking along `direction` and framing
/// `bounds` with a square extent.
IndexMap render_orthographic(const SpatialIndex& index, const Vec3& direction, const Aabb& bounds,
                             int width, int height);

}  // namespace openable
