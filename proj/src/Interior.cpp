// SPDX-License-Identifier: MIT
#include "openable/Interior.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "openable/Camera.h"
#include "openable/Error.h"

namespace openable {

namespace {

// Distance along the ray until it leaves the box; 0 when it starts outside.
double exit_distance(const Vec3& origin, const Vec3& dir, const Aabb& box) {
    double t_exit = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        if (dir[k] > 0.0) {
            t_exit = std::min(t_exit, (box.max[k] - origin[k]) / dir[k]);
        } else if (dir[k] < 0.0) {
            t_exit = std::min(t_exit, (box.min[k] - origin[k]) / dir[k]);
        }
    }
    return std::max(0.0, t_exit);
}

Vec3 from_local(const OrientedBox& box, double x, double y, double z) {
    return box.center + x * box.right() + y * box.front() + z * box.up();
}

}  // namespace

DepthProbe probe_drawer_depth(const SpatialIndex& index, const OrientedBox& front_box,
                              const Aabb& object_bounds) {
    const double hw = front_box.half_extents[0];
    const double hd = front_box.half_extents[1];
    if (!(hw > 0.0) || !(front_box.half_extents[2] > 0.0)) {
        throw Error(ErrorKind::DegenerateBox, "drawer front needs positive width and height");
    }
    Aabb bounds = object_bounds;
    bounds.extend(front_box.aabb());
    const double eps = 1e-4 * bounds.diagonal();
    const Vec3 dir = -front_box.front();
    auto probe = [&](double x, double& depth, bool& clamped) {
        const Vec3 origin = from_local(front_box, x, -hd, 0.0) + eps * dir;
        const double t_exit = exit_distance(origin, dir, bounds);
        const auto hit = index.ray_cast(origin, dir, 0.0, std::max(t_exit, 1e-300));
        if (hit) {
            depth = hit->distance + eps;
            clamped = false;
        } else {
            depth = t_exit + eps;
            clamped = true;
        }
    };
    DepthProbe out;
    probe(0.0, out.d_center, out.clamped_center);
    probe(-0.8 * hw, out.d_left, out.clamped_left);
    probe(0.8 * hw, out.d_right, out.clamped_right);
    return out;
}

DepthProbe probe_drawer_depth(const TriMesh& mesh, const OrientedBox& front_box) {
    const SpatialIndex index(mesh);
    return probe_drawer_depth(index, front_box, bounding_box(mesh));
}

DrawerKind classify_drawer(const DepthProbe& probe, double margin) {
    return probe.d_center > margin * std::max(probe.d_left, probe.d_right) ? DrawerKind::Corner
                                                                            : DrawerKind::Standard;
}

double default_wall_thickness(const OrientedBox& front_box) {
    const double w = 2.0 * front_box.half_extents[0];
    const double h = 2.0 * front_box.half_extents[2];
    return std::clamp(0.02 * std::min(w, h), 0.001, 0.02);
}

namespace {

// Box slab spanning local ranges [x0,x1] x [y0,y1] x [z0,z1] of the front box.
TriMesh local_slab(const OrientedBox& box, double x0, double x1, double y0, double y1, double z0, double z1) {
    const Vec3 center = from_local(box, 0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.5 * (z0 + z1));
    return make_box(center, box.axes, Vec3(0.5 * (x1 - x0), 0.5 * (y1 - y0), 0.5 * (z1 - z0)));
}

// Prism over a polygon given in (x, depth) coordinates behind the front
// slab, spanning heights [z0, z1].
TriMesh local_prism(const OrientedBox& box, const std::vector<Vec2>& polygon, double z0, double z1) {
    const double back = -box.half_extents[1];
    std::vector<Vec3> base;
    for (const auto& p : polygon) base.push_back(from_local(box, p.x(), back - p.y(), z0));
    return make_prism(base, box.up(), z1 - z0);
}

}  // namespace

TriMesh build_drawer_body(const OrientedBox& front_box, const DepthProbe& probe, DrawerKind kind,
                          double thickness) {
    if (thickness < 1e-5) {
        spdlog::warn("wall thickness {} too small, using 1 mm", thickness);
        thickness = 1e-3;
    }
    const double t = thickness;
    const double hw = front_box.half_extents[0];
    const double hh = front_box.half_extents[2];
    const double back = -front_box.half_extents[1];
    if (probe.min_depth() < 2.0 * t) {
        throw Error(ErrorKind::DepthTooSmall,
                    "drawer depth " + std::to_string(probe.min_depth()) + " below twice the wall thickness");
    }
    if (2.0 * hw <= 2.0 * t || 2.0 * hh <= t) {
        throw Error(ErrorKind::DepthTooSmall, "drawer front too small for the wall thickness");
    }
    TriMesh body;
    const double z0 = -hh;
    const double z1 = hh;
    if (kind == DrawerKind::Standard) {
        const double L = probe.min_depth() - t;
        append(body, local_slab(front_box, -hw, hw, back - L, back, z0, z0 + t));
        append(body, local_slab(front_box, -hw, -hw + t, back - L, back, z0 + t, z1));
        append(body, local_slab(front_box, hw - t, hw, back - L, back, z0 + t, z1));
        append(body, local_slab(front_box, -hw + t, hw - t, back - L, back - L + t, z0 + t, z1));
        return body;
    }

    // Walls through the side hits (x = -+0.8 hw) and the center hit (x = 0),
    // moved one thickness toward the front.
    const double xs = 0.8 * hw;
    const double m_left = (probe.d_center - probe.d_left) / xs;    // depth rises by m per unit x toward 0
    const double m_right = (probe.d_center - probe.d_right) / xs;
    const double c_left = probe.d_center - t * std::sqrt(1.0 + m_left * m_left);
    const double c_right = probe.d_center - t * std::sqrt(1.0 + m_right * m_right);
    auto left_wall = [&](double x) { return c_left + m_left * x; };     // valid for x <= 0
    auto right_wall = [&](double x) { return c_right - m_right * x; };  // valid for x >= 0
    // Apex where the two offset walls meet.
    double slope = m_left + m_right;
    double xa = slope > 0.0 ? (c_right - c_left) / slope : 0.0;
    xa = std::clamp(xa, -hw + t, hw - t);
    const double da = std::min(left_wall(xa), right_wall(xa));
    const double dl = left_wall(-hw);
    const double dr = right_wall(hw);
    if (dl < 2.0 * t || dr < 2.0 * t) {
        throw Error(ErrorKind::DepthTooSmall, "corner walls leave no room for the drawer sides");
    }

    const std::vector<Vec2> bottom{{-hw, 0.0}, {hw, 0.0}, {hw, dr}, {xa, da}, {-hw, dl}};
    append(body, local_prism(front_box, bottom, z0, z0 + t));
    append(body, local_prism(front_box, {{-hw, 0.0}, {-hw + t, 0.0}, {-hw + t, dl}, {-hw, dl}}, z0 + t, z1));
    append(body, local_prism(front_box, {{hw - t, 0.0}, {hw, 0.0}, {hw, dr}, {hw - t, dr}}, z0 + t, z1));
    // Back slabs: strips of width t in front of each offset wall.
    const Vec2 nl = Vec2(m_left, -1.0).normalized();   // toward the front for the left wall
    const Vec2 nr = Vec2(-m_right, -1.0).normalized();
    const Vec2 a0(-hw, dl), a1(xa, da);
    const Vec2 b0(xa, da), b1(hw, dr);
    append(body, local_prism(front_box, {a0, a1, a1 + t * nl, a0 + t * nl}, z0 + t, z1));
    append(body, local_prism(front_box, {b0, b1, b1 + t * nr, b0 + t * nr}, z0 + t, z1));
    return body;
}

void match_attributes(TriMesh& generated, const TriMesh& reference) {
    const std::size_t nv = generated.num_vertices();
    generated.colors.clear();
    generated.uvs.clear();
    generated.normals.clear();
    generated.texture_path = reference.texture_path;
    if (reference.has_colors() || reference.has_uvs()) {
        Vec3 color = Vec3::Zero();
        Vec2 uv = Vec2::Zero();
        double total = 0.0;
        for (std::size_t t = 0; t < reference.num_triangles(); ++t) {
            const double a = triangle_area(reference, t);
            const Tri& tri = reference.triangles[t];
            for (int k = 0; k < 3; ++k) {
                if (reference.has_colors()) color += a / 3.0 * reference.colors[tri[k]];
                if (reference.has_uvs()) uv += a / 3.0 * reference.uvs[tri[k]];
            }
            total += a;
        }
        if (total > 0.0) {
            color /= total;
            uv /= total;
        } else if (!reference.vertices.empty()) {
            color = Vec3::Zero();
            uv = Vec2::Zero();
            for (std::size_t v = 0; v < reference.num_vertices(); ++v) {
                if (reference.has_colors()) color += reference.colors[v];
                if (reference.has_uvs()) uv += reference.uvs[v];
            }
            color /= static_cast<double>(reference.num_vertices());
            uv /= static_cast<double>(reference.num_vertices());
        }
        if (reference.has_colors()) generated.colors.assign(nv, color);
        if (reference.has_uvs()) generated.uvs.assign(nv, uv);
    }
    if (reference.has_normals()) {
        generated.normals.assign(nv, Vec3::Zero());
        for (std::size_t t = 0; t < generated.num_triangles(); ++t) {
            const Tri& tri = generated.triangles[t];
            const Vec3 n = (generated.vertices[tri[1]] - generated.vertices[tri[0]])
                                   .cross(generated.vertices[tri[2]] - generated.vertices[tri[0]]);
            for (int k = 0; k < 3; ++k) generated.normals[tri[k]] += n;
        }
        for (auto& n : generated.normals) {
            const double len = n.norm();
            n = len > 0.0 ? Vec3(n / len) : Vec3::UnitZ();
        }
    }
}

ArticulatedObject complete_interiors(const ArticulatedObject& obj, const InteriorOptions& options,
                                     std::vector<std::string>* diagnostics) {
    ArticulatedObject out = obj;
    bool any = false;
    for (const auto& part : obj.parts) {
        any |= part.label == PartLabel::Drawer && part.motion.type == MotionType::Prismatic;
    }
    if (!any) return out;

    Aabb bounds = bounding_box(obj.base);
    for (const auto& part : obj.parts) bounds.extend(bounding_box(part.mesh));
    std::optional<SpatialIndex> index;
    if (!obj.base.empty()) index.emplace(obj.base);

    for (auto& part : out.parts) {
        if (part.label != PartLabel::Drawer || part.motion.type != MotionType::Prismatic) continue;
        try {
            OrientedBox box = gravity_obb(part.mesh.vertices, obj.frame);
            if (box.front().dot(part.motion.axis) < 0.0) box = box.turned();
            DepthProbe probe;
            if (index) {
                probe = probe_drawer_depth(*index, box, bounds);
            } else {
                const Vec3 origin = box.center - box.half_extents[1] * box.front();
                const double d = exit_distance(origin, -box.front(), bounds);
                probe = {d, d, d, true, true, true};
            }
            const DrawerKind kind = classify_drawer(probe, options.corner_margin);
            const double t = options.thickness > 0.0 ? options.thickness : default_wall_thickness(box);
            TriMesh body = build_drawer_body(box, probe, kind, t);
            match_attributes(body, part.mesh);
            append(part.mesh, body);
        } catch (const Error& e) {
            spdlog::warn("interior completion failed for part '{}': {}", part.id, e.what());
            if (diagnostics) diagnostics->push_back(part.id + ": " + e.what());
        }
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent[a] = b;
    }
};

struct CellHash {
    std::size_t operator()(const std::array<std::int64_t, 3>& c) const {
        std::size_t h = 1469598103934665603ull;
        for (auto v : c) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

}  // namespace

std::vector<ConnectivitySegment> connectivity_segments(const TriMesh& mesh, double weld_tol) {
    const std::size_t nv = mesh.num_vertices();
    UnionFind weld(nv);
    if (weld_tol > 0.0) {
        std::unordered_map<std::array<std::int64_t, 3>, std::vector<std::int32_t>, CellHash> grid;
        auto cell_of = [&](const Vec3& p) {
            return std::array<std::int64_t, 3>{static_cast<std::int64_t>(std::floor(p.x() / weld_tol)),
                                               static_cast<std::int64_t>(std::floor(p.y() / weld_tol)),
                                               static_cast<std::int64_t>(std::floor(p.z() / weld_tol))};
        };
        for (std::size_t v = 0; v < nv; ++v) {
            const auto c = cell_of(mesh.vertices[v]);
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                for (std::int64_t dy = -1; dy <= 1; ++dy) {
                    for (std::int64_t dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
                        if (it == grid.end()) continue;
                        for (std::int32_t u : it->second) {
                            if ((mesh.vertices[u] - mesh.vertices[v]).norm() <= weld_tol) {
                                weld.unite(u, static_cast<std::int32_t>(v));
                            }
                        }
                    }
                }
            }
            grid[c].push_back(static_cast<std::int32_t>(v));
        }
    }

    const std::size_t nt = mesh.num_triangles();
    UnionFind tris(nt);
    std::unordered_map<std::uint64_t, std::int32_t> edge_owner;
    edge_owner.reserve(3 * nt);
    for (std::size_t t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            auto a = static_cast<std::uint32_t>(weld.find(mesh.triangles[t][k]));
            auto b = static_cast<std::uint32_t>(weld.find(mesh.triangles[t][(k + 1) % 3]));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
            auto [it, inserted] = edge_owner.try_emplace(key, static_cast<std::int32_t>(t));
            if (!inserted) tris.unite(it->second, static_cast<std::int32_t>(t));
        }
    }

    std::vector<ConnectivitySegment> segments;
    std::unordered_map<std::int32_t, std::int32_t> index_of_root;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::int32_t root = tris.find(static_cast<std::int32_t>(t));
        auto [it, inserted] = index_of_root.try_emplace(root, static_cast<std::int32_t>(segments.size()));
        if (inserted) segments.push_back({it->second, {}});
        segments[it->second].triangle_ids.push_back(static_cast<std::int32_t>(t));
    }
    return segments;
}

std::vector<Vec3> fibonacci_directions(int count) {
    std::vector<Vec3> dirs;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return dirs;
}

std::vector<char> visible_triangles(const TriMesh& mesh, const std::vector<Vec3>& directions, int width,
                                    int height) {
    std::vector<char> seen(mesh.num_triangles(), 0);
    if (mesh.empty() || directions.empty()) return seen;
    const SpatialIndex index(mesh);
    const Aabb bounds = index.bounds();
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(directions.size())));
    std::vector<std::vector<char>> partial(workers, std::vector<char>(mesh.num_triangles(), 0));
    auto work = [&](unsigned w) {
        for (std::size_t v = w; v < directions.size(); v += workers) {
            const IndexMap map = render_orthographic(index, directions[v], bounds, width, height);
            for (std::int32_t id : map.ids) {
                if (id != kBackground) partial[w][id] = 1;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& th : threads) th.join();
    }
    for (const auto& p : partial) {
        for (std::size_t t = 0; t < p.size(); ++t) seen[t] |= p[t];
    }
    return seen;
}

TriMesh strip_interior(const TriMesh& mesh, int views, int width, int height) {
    if (mesh.empty()) return mesh;
    const auto seen = visible_triangles(mesh, fibonacci_directions(views), width, height);
    std::vector<std::int32_t> keep;
    for (const auto& seg : connectivity_segments(mesh)) {
        const bool visible = std::any_of(seg.triangle_ids.begin(), seg.triangle_ids.end(),
                                         [&](std::int32_t t) { return seen[t] != 0; });
        if (visible) keep.insert(keep.end(), seg.triangle_ids.begin(), seg.triangle_ids.end());
    }
    std::sort(keep.begin(), keep.end());
    if (keep.size() == mesh.num_triangles()) return mesh;
    return submesh(mesh, keep);
}

namespace {

struct FrameBox {
    Eigen::Matrix3d axes;  // columns right, front, up
    Vec3 lo;
    Vec3 hi;
};

FrameBox frame_box(const TriMesh& mesh, const Frame& frame) {
    frame.validate();
    FrameBox fb;
    fb.axes.col(0) = frame.right();
    fb.axes.col(1) = frame.front;
    fb.axes.col(2) = frame.up;
    fb.lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    fb.hi = -fb.lo;
    for (const auto& v : mesh.vertices) {
        const Vec3 q = fb.axes.transpose() * v;
        fb.lo = fb.lo.cwiseMin(q);
        fb.hi = fb.hi.cwiseMax(q);
    }
    return fb;
}

}  // namespace

double top_coverage(const TriMesh& mesh, const Frame& frame, int grid) {
    if (mesh.empty()) throw Error(ErrorKind::EmptyMesh, "coverage needs a non-empty mesh");
    if (grid < 1) throw Error(ErrorKind::InvalidCount, "grid must be positive");
    const FrameBox fb = frame_box(mesh, frame);
    const SpatialIndex index(mesh);
    const double height = fb.hi.z() - fb.lo.z();
    const double tol = std::max(0.02, 0.05 * height);
    const double lift = 0.01 * (fb.hi - fb.lo).norm() + 1e-6;
    int covered = 0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double x = fb.lo.x() + (fb.hi.x() - fb.lo.x()) * (i + 0.5) / grid;
            const double y = fb.lo.y() + (fb.hi.y() - fb.lo.y()) * (j + 0.5) / grid;
            const Vec3 origin = fb.axes * Vec3(x, y, fb.hi.z() + lift);
            if (auto hit = index.ray_cast(origin, -frame.up)) {
                if (hit->distance - lift <= tol) ++covered;
            }
        }
    }
    return static_cast<double>(covered) / (static_cast<double>(grid) * grid);
}

TriMesh add_countertop(const TriMesh& mesh, const Frame& frame, int grid) {
    if (top_coverage(mesh, frame, grid) >= 0.5) return mesh;
    const FrameBox fb = frame_box(mesh, frame);
    constexpr double kSlab = 0.02;
    const Vec3 lo(fb.lo.x(), fb.lo.y(), fb.hi.z() - kSlab);
    const Vec3 hi = fb.hi;
    TriMesh slab = make_box(fb.axes * (0.5 * (lo + hi)), fb.axes, 0.5 * (hi - lo));
    // Pin the top face exactly to the bounding-box top.
    for (auto& v : slab.vertices) {
        const Vec3 q = fb.axes.transpose() * v;
        if (q.z() > fb.hi.z() - 0.5 * kSlab) v += (fb.hi.z() - q.z()) * frame.up;
    }
    match_attributes(slab, mesh);
    TriMesh out = mesh;
    append(out, slab);
    return out;
}

}  // namespace openable
