// SPDX-License-Identifier: MIT
#include "openable/Camera.h"

#include <cmath>
#include <numbers>

#include "openable/Error.h"

namespace openable {

PinholeCamera PinholeCamera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up,
                                     double fov_y_degrees, int width, int height) {
    const Vec3 forward = (target - eye).normalized();
    Vec3 right = forward.cross(up);
    if (right.norm() < 1e-12) right = forward.unitOrthogonal();
    right.normalize();
    const Vec3 down = forward.cross(right);
    PinholeCamera cam;
    cam.rotation.row(0) = right.transpose();
    cam.rotation.row(1) = down.transpose();
    cam.rotation.row(2) = forward.transpose();
    cam.position = eye;
    cam.width = width;
    cam.height = height;
    const double f = 0.5 * height / std::tan(0.5 * fov_y_degrees * std::numbers::pi / 180.0);
    cam.fx = f;
    cam.fy = f;
    cam.cx = 0.5 * width;
    cam.cy = 0.5 * height;
    cam.validate();
    return cam;
}

Vec3 PinholeCamera::pixel_ray(int x, int y) const {
    const Vec3 local((x + 0.5 - cx) / fx, (y + 0.5 - cy) / fy, 1.0);
    return (rotation.transpose() * local).normalized();
}

void PinholeCamera::validate() const {
    const bool finite = std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) &&
                        std::isfinite(cy) && rotation.allFinite() && position.allFinite();
    if (!finite || !(fx > 0.0) || !(fy > 0.0) || width <= 0 || height <= 0) {
        throw Error(ErrorKind::InvalidCamera, "camera needs finite positive intrinsics and resolution");
    }
    if (!(rotation * rotation.transpose()).isIdentity(1e-6)) {
        throw Error(ErrorKind::InvalidCamera, "camera rotation is not orthonormal");
    }
}

IndexMap render_index_map(const SpatialIndex& index, const PinholeCamera& camera) {
    camera.validate();
    IndexMap map{camera.width, camera.height,
                 std::vector<std::int32_t>(static_cast<std::size_t>(camera.width) * camera.height, kBackground)};
    for (int y = 0; y < camera.height; ++y) {
        for (int x = 0; x < camera.width; ++x) {
            if (auto hit = index.ray_cast(camera.position, camera.pixel_ray(x, y))) {
                map.ids[static_cast<std::size_t>(y) * camera.width + x] = hit->triangle_id;
            }
        }
    }
    return map;
}

std::vector<IndexMap> render_index_maps(const TriMesh& mesh, const std::vector<PinholeCamera>& cameras) {
    std::vector<IndexMap> maps;
    maps.reserve(cameras.size());
    if (mesh.empty()) {
        for (const auto& cam : cameras) {
            cam.validate();
            maps.push_back({cam.width, cam.height,
                            std::vector<std::int32_t>(static_cast<std::size_t>(cam.width) * cam.height, kBackground)});
        }
        return maps;
    }
    const SpatialIndex index(mesh);
    for (const auto& cam : cameras) maps.push_back(render_index_map(index, cam));
    return maps;
}

std::vector<PinholeCamera> default_cameras(const TriMesh& mesh, const Frame& frame, int views,
                                           int width, int height) {
    frame.validate();
    if (views < 1) throw Error(ErrorKind::InvalidCamera, "at least one view is required");
    const Aabb box = bounding_box(mesh);
    const Vec3 center = box.valid() ? box.center() : Vec3::Zero();
    const double radius = std::max(0.5 * box.diagonal(), 1e-3);
    const double fov = 40.0;
    const double distance = radius / std::sin(0.5 * fov * std::numbers::pi / 180.0) * 1.05;
    const double elevation = 20.0 * std::numbers::pi / 180.0;
    std::vector<PinholeCamera> cams;
    for (int i = 0; i < views; ++i) {
        const double azimuth_deg = views == 1 ? 0.0 : -30.0 + 60.0 * i / (views - 1);
        const double az = azimuth_deg * std::numbers::pi / 180.0;
        const Vec3 horizontal = std::cos(az) * frame.front + std::sin(az) * frame.right();
        const Vec3 dir = std::cos(elevation) * horizontal + std::sin(elevation) * frame.up;
        cams.push_back(PinholeCamera::look_at(center + distance * dir, center, frame.up, fov, width, height));
    }
    return cams;
}

IndexMap render_orthographic(const SpatialIndex& index, const Vec3& direction, const Aabb& bounds,
                             int width, int height) {
    if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidCamera, "resolution must be positive");
    const Vec3 d = direction.normalized();
    const Vec3 u = d.unitOrthogonal();
    const Vec3 v = d.cross(u);
    const Vec3 center = bounds.center();
    const double half = 0.5 * bounds.diagonal() * (1.0 + 1e-6) + 1e-9;
    const Vec3 start = center - d * (2.0 * half + 1.0);
    IndexMap map{width, height, std::vector<std::int32_t>(static_cast<std::size_t>(width) * height, kBackground)};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double a = -half + 2.0 * half * (x + 0.5) / width;
            const double b = half - 2.0 * half * (y + 0.5) / height;
            if (auto hit = index.ray_cast(start + a * u + b * v, d)) {
                map.ids[static_cast<std::size_t>(y) * width + x] = hit->triangle_id;
            }
        }
    }
    return map;
}

}  // namespace openable
