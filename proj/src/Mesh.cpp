// SPDX-License-Identifier: MIT
#include "openable/Mesh.h"

#include <cmath>
#include <unordered_map>

#include "openable/Error.h"

namespace openable {

void TriMesh::validate() const {
    const auto n = static_cast<std::int64_t>(vertices.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const Tri& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= n) {
                throw Error(ErrorKind::IndexOutOfRange,
                            "triangle " + std::to_string(t) + " references vertex " +
                                    std::to_string(tri[k]) + " of " + std::to_string(n));
            }
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
            throw Error(ErrorKind::DegenerateMesh,
                        "triangle " + std::to_string(t) + " repeats a vertex index");
        }
    }
    auto check_size = [&](std::size_t size, const char* what) {
        if (size != 0 && size != vertices.size()) {
            throw Error(ErrorKind::SchemaError,
                        std::string(what) + " count does not match vertex count");
        }
    };
    check_size(normals.size(), "normal");
    check_size(colors.size(), "color");
    check_size(uvs.size(), "uv");
}

void Frame::validate() const {
    if (std::abs(up.norm() - 1.0) > 1e-6 || std::abs(front.norm() - 1.0) > 1e-6) {
        throw Error(ErrorKind::SchemaError, "frame vectors must be unit length");
    }
    if (std::abs(up.dot(front)) >= 1e-6) {
        throw Error(ErrorKind::SchemaError, "frame up and front must be orthogonal");
    }
}

Aabb Aabb::from_points(std::span<const Vec3> points) {
    Aabb box;
    for (const auto& p : points) box.extend(p);
    return box;
}

double triangle_area(const TriMesh& mesh, std::size_t t) {
    const Tri& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 triangle_normal(const TriMesh& mesh, std::size_t t) {
    const Tri& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3 n = (mesh.vertices[tri[1]] - a).cross(mesh.vertices[tri[2]] - a);
    const double len = n.norm();
    return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

Vec3 triangle_centroid(const TriMesh& mesh, std::size_t t) {
    const Tri& tri = mesh.triangles[t];
    return (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
}

std::vector<double> triangle_areas(const TriMesh& mesh) {
    std::vector<double> areas(mesh.num_triangles());
    for (std::size_t t = 0; t < areas.size(); ++t) areas[t] = triangle_area(mesh, t);
    return areas;
}

double total_area(const TriMesh& mesh) {
    double sum = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) sum += triangle_area(mesh, t);
    return sum;
}

Aabb bounding_box(const TriMesh& mesh) { return Aabb::from_points(mesh.vertices); }

Vec3 surface_centroid(const TriMesh& mesh) {
    Vec3 acc = Vec3::Zero();
    double area = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const double a = triangle_area(mesh, t);
        acc += a * triangle_centroid(mesh, t);
        area += a;
    }
    if (area > 0.0) return acc / area;
    if (mesh.vertices.empty()) return Vec3::Zero();
    Vec3 mean = Vec3::Zero();
    for (const auto& v : mesh.vertices) mean += v;
    return mean / static_cast<double>(mesh.vertices.size());
}

TriMesh submesh(const TriMesh& mesh, std::span<const std::int32_t> triangle_ids) {
    TriMesh out;
    out.texture_path = mesh.texture_path;
    std::unordered_map<std::int32_t, std::int32_t> remap;
    auto map_vertex = [&](std::int32_t v) {
        auto [it, inserted] = remap.try_emplace(v, static_cast<std::int32_t>(out.vertices.size()));
        if (inserted) {
            out.vertices.push_back(mesh.vertices[v]);
            if (mesh.has_normals()) out.normals.push_back(mesh.normals[v]);
            if (mesh.has_colors()) out.colors.push_back(mesh.colors[v]);
            if (mesh.has_uvs()) out.uvs.push_back(mesh.uvs[v]);
        }
        return it->second;
    };
    out.triangles.reserve(triangle_ids.size());
    for (std::int32_t t : triangle_ids) {
        const Tri& tri = mesh.triangles.at(static_cast<std::size_t>(t));
        out.triangles.emplace_back(map_vertex(tri[0]), map_vertex(tri[1]), map_vertex(tri[2]));
    }
    return out;
}

void append(TriMesh& mesh, const TriMesh& other) {
    if (mesh.vertices.empty()) {
        mesh = other;
        return;
    }
    const auto offset = static_cast<std::int32_t>(mesh.vertices.size());
    const bool keep_normals = mesh.has_normals() && other.has_normals();
    const bool keep_colors = mesh.has_colors() && other.has_colors();
    const bool keep_uvs = mesh.has_uvs() && other.has_uvs();
    mesh.vertices.insert(mesh.vertices.end(), other.vertices.begin(), other.vertices.end());
    if (keep_normals) {
        mesh.normals.insert(mesh.normals.end(), other.normals.begin(), other.normals.end());
    } else {
        mesh.normals.clear();
    }
    if (keep_colors) {
        mesh.colors.insert(mesh.colors.end(), other.colors.begin(), other.colors.end());
    } else {
        mesh.colors.clear();
    }
    if (keep_uvs) {
        mesh.uvs.insert(mesh.uvs.end(), other.uvs.begin(), other.uvs.end());
    } else {
        mesh.uvs.clear();
    }
    for (const Tri& tri : other.triangles) {
        mesh.triangles.emplace_back(tri.array() + offset);
    }
    if (!mesh.texture_path) mesh.texture_path = other.texture_path;
}

TriMesh transformed(const TriMesh& mesh, const Eigen::Matrix3d& linear, const Vec3& translation) {
    TriMesh out = mesh;
    for (auto& v : out.vertices) v = linear * v + translation;
    if (out.has_normals()) {
        const Eigen::Matrix3d normal_matrix = linear.inverse().transpose();
        for (auto& n : out.normals) {
            n = normal_matrix * n;
            const double len = n.norm();
            if (len > 0.0) n /= len;
        }
    }
    return out;
}

namespace {

// Appends quad (a,b,c,d) as two triangles, flipping the winding when the
// geometric normal points toward `inside`.
void add_quad(TriMesh& mesh, std::int32_t a, std::int32_t b, std::int32_t c, std::int32_t d,
              const Vec3& inside) {
    const Vec3& pa = mesh.vertices[a];
    const Vec3 n = (mesh.vertices[b] - pa).cross(mesh.vertices[c] - pa);
    const Vec3 centre = 0.25 * (pa + mesh.vertices[b] + mesh.vertices[c] + mesh.vertices[d]);
    if (n.dot(centre - inside) < 0.0) {
        std::swap(b, d);
    }
    mesh.triangles.emplace_back(a, b, c);
    mesh.triangles.emplace_back(a, c, d);
}

}  // namespace

TriMesh make_box(const Vec3& center, const Eigen::Matrix3d& axes, const Vec3& half_extents) {
    TriMesh mesh;
    mesh.vertices.reserve(8);
    // Corner index bits: 1 -> +axis0, 2 -> +axis1, 4 -> +axis2.
    for (int i = 0; i < 8; ++i) {
        Vec3 p = center;
        for (int k = 0; k < 3; ++k) {
            const double s = (i >> k) & 1 ? 1.0 : -1.0;
            p += s * half_extents[k] * axes.col(k);
        }
        mesh.vertices.push_back(p);
    }
    add_quad(mesh, 0, 2, 6, 4, center);  // -axis0
    add_quad(mesh, 1, 5, 7, 3, center);  // +axis0
    add_quad(mesh, 0, 4, 5, 1, center);  // -axis1
    add_quad(mesh, 2, 3, 7, 6, center);  // +axis1
    add_quad(mesh, 0, 1, 3, 2, center);  // -axis2
    add_quad(mesh, 4, 6, 7, 5, center);  // +axis2
    return mesh;
}

TriMesh make_box(const Aabb& box) {
    return make_box(box.center(), Eigen::Matrix3d::Identity(), 0.5 * box.extent());
}

TriMesh make_prism(std::span<const Vec3> base_polygon, const Vec3& up, double height) {
    TriMesh mesh;
    const auto n = static_cast<std::int32_t>(base_polygon.size());
    Vec3 centre = Vec3::Zero();
    for (const auto& p : base_polygon) centre += p;
    centre /= static_cast<double>(n);
    centre += 0.5 * height * up;
    for (const auto& p : base_polygon) mesh.vertices.push_back(p);
    for (const auto& p : base_polygon) mesh.vertices.push_back(p + height * up);
    auto add_tri = [&](std::int32_t a, std::int32_t b, std::int32_t c) {
        const Vec3& pa = mesh.vertices[a];
        const Vec3 nrm = (mesh.vertices[b] - pa).cross(mesh.vertices[c] - pa);
        const Vec3 mid = (pa + mesh.vertices[b] + mesh.vertices[c]) / 3.0;
        if (nrm.dot(mid - centre) < 0.0) std::swap(b, c);
        mesh.triangles.emplace_back(a, b, c);
    };
    for (std::int32_t i = 1; i + 1 < n; ++i) {
        add_tri(0, i, i + 1);
        add_tri(n, n + i, n + i + 1);
    }
    for (std::int32_t i = 0; i < n; ++i) {
        const std::int32_t j = (i + 1) % n;
        add_quad(mesh, i, j, n + j, n + i, centre);
    }
    return mesh;
}

}  // namespace openable
