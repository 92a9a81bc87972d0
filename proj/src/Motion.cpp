// SPDX-License-Identifier: MIT
#include "openable/Motion.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "openable/Error.h"

namespace openable {

using json = nlohmann::json;

MotionTypeStats MotionTypeStats::defaults() {
    MotionTypeStats s;
    s.counts[PartLabel::Drawer] = {1, 0};
    s.counts[PartLabel::Door] = {0, 1};
    s.counts[PartLabel::Lid] = {0, 1};
    return s;
}

MotionTypeStats MotionTypeStats::from_segmentations(const std::vector<PartSegmentation>& segs) {
    MotionTypeStats s;
    for (const auto& seg : segs) {
        for (const auto& part : seg.parts) {
            if (!part.motion || !is_openable(part.label)) continue;
            ++s.counts[part.label][part.motion->type == MotionType::Prismatic ? 0 : 1];
        }
    }
    return s;
}

MotionTypeStats MotionTypeStats::from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "motion stats must be an object");
    MotionTypeStats s;
    for (const auto& [name, entry] : doc.items()) {
        const PartLabel label = parse_part_label(name);
        if (!is_openable(label)) throw Error(ErrorKind::SchemaError, "stats for 'base' are not allowed");
        const auto p = entry.value("prismatic", std::int64_t{0});
        const auto r = entry.value("revolute", std::int64_t{0});
        if (p < 0 || r < 0) throw Error(ErrorKind::SchemaError, "motion counts must be nonnegative");
        s.counts[label] = {p, r};
    }
    return s;
}

json MotionTypeStats::to_json() const {
    json doc = json::object();
    for (const auto& [label, c] : counts) {
        doc[std::string(to_string(label))] = {{"prismatic", c[0]}, {"revolute", c[1]}};
    }
    return doc;
}

MotionType predict_motion_type(PartLabel label, const MotionTypeStats& stats) {
    if (!is_openable(label)) throw Error(ErrorKind::NotOpenable, "base has no motion");
    const MotionType fallback = label == PartLabel::Drawer ? MotionType::Prismatic : MotionType::Revolute;
    auto it = stats.counts.find(label);
    if (it == stats.counts.end()) return fallback;
    const auto [p, r] = it->second;
    if (p > r) return MotionType::Prismatic;
    if (r > p) return MotionType::Revolute;
    return fallback;
}

Vec3 predict_prismatic_axis(const OrientedBox& part_box, const Vec3& object_centroid) {
    const Vec3 front = part_box.front();
    return front.dot(object_centroid - part_box.center) > 0.0 ? Vec3(-front) : front;
}

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    const Vec3 d1 = p1 - p0;
    const Vec3 d2 = q1 - q0;
    const Vec3 r = p0 - q0;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    double s = 0.0;
    double t = 0.0;
    constexpr double kEps = 1e-300;
    if (a <= kEps && e <= kEps) return r.norm();
    if (a <= kEps) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= kEps) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

std::array<std::pair<Vec3, Vec3>, 12> box_edges(const OrientedBox& box) {
    const auto c = box.corners();
    std::array<std::pair<Vec3, Vec3>, 12> out;
    std::size_t n = 0;
    for (int i = 0; i < 8; ++i) {
        for (int k = 0; k < 3; ++k) {
            if (!((i >> k) & 1)) out[n++] = {c[i], c[i | (1 << k)]};
        }
    }
    return out;
}

namespace {

struct FaceFrame {
    Vec3 normal;   // facing direction (outward for the "front" side)
    Vec3 lateral;  // first in-face axis
    Vec3 second;   // second in-face axis
    double h_normal;
    double h_lateral;
    double h_second;
};

// Door faces span (right, up); lid faces span (right, front).
FaceFrame face_frame(const OrientedBox& box, BoxAxis facing) {
    if (facing == BoxAxis::Up) {
        return {box.up(), box.right(), box.front(), box.half_extents[2], box.half_extents[0], box.half_extents[1]};
    }
    return {box.front(), box.right(), box.up(), box.half_extents[1], box.half_extents[0], box.half_extents[2]};
}

std::array<std::pair<Vec3, Vec3>, 4> face_edges(const OrientedBox& box, BoxAxis facing, FaceSide side) {
    const FaceFrame f = face_frame(box, facing);
    const Vec3 c = box.center + (side == FaceSide::Front ? 1.0 : -1.0) * f.h_normal * f.normal;
    const Vec3 L = f.h_lateral * f.lateral;
    const Vec3 S = f.h_second * f.second;
    return {{{c - L - S, c - L + S}, {c + L - S, c + L + S}, {c - S - L, c - S + L}, {c + S - L, c + S + L}}};
}

}  // namespace

FaceSide select_face(const OrientedBox& part_box, const OrientedBox& base_box, BoxAxis facing) {
    const auto base = box_edges(base_box);
    auto score = [&](FaceSide side) {
        double total = 0.0;
        for (const auto& [a, b] : face_edges(part_box, facing, side)) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [p, q] : base) best = std::min(best, segment_distance(a, b, p, q));
            total += best;
        }
        return total;
    };
    const double front = score(FaceSide::Front);
    const double back = score(FaceSide::Back);
    const double tol = 1e-9 * std::max(part_box.diagonal(), base_box.diagonal());
    return back < front - tol ? FaceSide::Back : FaceSide::Front;
}

HandleEstimate detect_handle(const TriMesh& part_mesh, const OrientedBox& part_box,
                             const HandleOptions& options, BoxAxis facing) {
    if (part_mesh.vertices.empty()) throw Error(ErrorKind::EmptyInput, "part mesh has no vertices");
    if (options.bins < 1) throw Error(ErrorKind::InvalidCount, "bin count must be positive");
    const FaceFrame f = face_frame(part_box, facing);
    const int bins = options.bins;
    HandleEstimate out;
    out.depth_profile.assign(static_cast<std::size_t>(bins), 0);
    out.centroid = part_box.center;

    // Slab 0 is the front-most.
    std::vector<int> slab(part_mesh.vertices.size());
    for (std::size_t i = 0; i < part_mesh.vertices.size(); ++i) {
        const double s = f.normal.dot(part_mesh.vertices[i] - part_box.center);
        int b = 0;
        if (f.h_normal > 0.0) {
            b = static_cast<int>(std::floor((f.h_normal - s) / (2.0 * f.h_normal) * bins));
        }
        b = std::clamp(b, 0, bins - 1);
        slab[i] = b;
        ++out.depth_profile[b];
    }
    int dominant = 0;
    for (int b = 1; b < bins; ++b) {
        if (out.depth_profile[b] > out.depth_profile[dominant]) dominant = b;
    }
    int deepest = 0;
    for (int b = 0; b < bins; ++b) {
        if (out.depth_profile[b] > 0) deepest = b;
    }

    const double total = static_cast<double>(part_mesh.vertices.size());
    const double face_area = 4.0 * f.h_lateral * f.h_second;
    auto try_region = [&](auto&& in_region, HandleRegion region) {
        std::vector<Vec3> pts;
        for (std::size_t i = 0; i < slab.size(); ++i) {
            if (in_region(slab[i])) pts.push_back(part_mesh.vertices[i]);
        }
        if (pts.empty() || pts.size() < options.min_fraction * total) return false;
        double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, lo2 = lo1, hi2 = -lo1;
        Vec3 sum = Vec3::Zero();
        for (const auto& p : pts) {
            const Vec3 d = p - part_box.center;
            lo1 = std::min(lo1, d.dot(f.lateral));
            hi1 = std::max(hi1, d.dot(f.lateral));
            lo2 = std::min(lo2, d.dot(f.second));
            hi2 = std::max(hi2, d.dot(f.second));
            sum += p;
        }
        if ((hi1 - lo1) * (hi2 - lo2) >= options.max_area_fraction * face_area) return false;
        out.region = region;
        out.centroid = sum / static_cast<double>(pts.size());
        return true;
    };
    if (try_region([&](int b) { return b < dominant; }, HandleRegion::Raised)) return out;
    try_region([&](int b) { return b > dominant && b < deepest; }, HandleRegion::Concave);
    return out;
}

RevoluteAxis predict_revolute_axis(const OrientedBox& part_box, FaceSide face, const HandleEstimate& handle,
                                   PartLabel label, const Vec3& object_centroid) {
    const BoxAxis facing = label == PartLabel::Lid ? BoxAxis::Up : BoxAxis::Front;
    const FaceFrame f = face_frame(part_box, facing);
    const double scale = std::max(part_box.diagonal(), std::numeric_limits<double>::min());
    if (f.h_lateral <= 1e-12 * scale || f.h_second <= 1e-12 * scale) {
        throw Error(ErrorKind::DegenerateBox, "selected face has zero extent");
    }
    // Edge k: offset along (axis, sign) and the edge direction.
    // Doors: 0 left, 1 right, 2 bottom, 3 top. Lids: 0 back, 1 front, 2 left, 3 right.
    struct EdgeDef {
        Vec3 offset_axis;
        double half;
        double sign;
        Vec3 direction;
        double span;
    };
    std::array<EdgeDef, 4> edges;
    if (facing == BoxAxis::Front) {
        edges = {{{f.lateral, f.h_lateral, -1.0, f.second, f.h_second},
                  {f.lateral, f.h_lateral, 1.0, f.second, f.h_second},
                  {f.second, f.h_second, -1.0, f.lateral, f.h_lateral},
                  {f.second, f.h_second, 1.0, f.lateral, f.h_lateral}}};
    } else {
        edges = {{{f.second, f.h_second, -1.0, f.lateral, f.h_lateral},
                  {f.second, f.h_second, 1.0, f.lateral, f.h_lateral},
                  {f.lateral, f.h_lateral, -1.0, f.second, f.h_second},
                  {f.lateral, f.h_lateral, 1.0, f.second, f.h_second}}};
    }

    int chosen = 0;
    if (handle.region != HandleRegion::None) {
        double best = -1.0;
        const Vec3 d = handle.centroid - part_box.center;
        for (int k = 0; k < 4; ++k) {
            const auto& e = edges[k];
            const double dist = std::abs(d.dot(e.offset_axis) - e.sign * e.half) / (2.0 * e.half);
            if (dist > best + 1e-9) {
                best = dist;
                chosen = k;
            }
        }
    } else if (facing == BoxAxis::Front) {
        const double x = f.lateral.dot(object_centroid - part_box.center);
        const double to_left = std::abs(x + f.h_lateral);
        const double to_right = std::abs(x - f.h_lateral);
        chosen = to_right > to_left + 1e-9 * scale ? 1 : 0;
    }

    const auto& e = edges[chosen];
    const Vec3 face_center = part_box.center + (face == FaceSide::Front ? 1.0 : -1.0) * f.h_normal * f.normal;
    RevoluteAxis out;
    out.edge = chosen;
    out.origin = face_center + e.sign * e.half * e.offset_axis;
    out.axis = e.direction;
    if (out.axis.cross(part_box.center - out.origin).dot(f.normal) < 0.0) out.axis = -out.axis;
    return out;
}

PartSegmentation predict_motion(const PartSegmentation& seg, const TriMesh& mesh, const Frame& frame,
                                const MotionTypeStats& stats, const MotionOptions& options,
                                std::vector<std::string>* diagnostics) {
    seg.validate(mesh.num_triangles());
    frame.validate();
    PartSegmentation out = seg;
    if (seg.parts.empty()) return out;

    auto vertices_of = [&](std::span<const std::int32_t> tris) {
        std::vector<char> used(mesh.num_vertices(), 0);
        std::vector<Vec3> pts;
        for (std::int32_t t : tris) {
            for (int k = 0; k < 3; ++k) {
                const auto v = mesh.triangles[t][k];
                if (!used[v]) {
                    used[v] = 1;
                    pts.push_back(mesh.vertices[v]);
                }
            }
        }
        return pts;
    };
    const std::vector<Vec3> base_pts = seg.base_triangles.empty() ? mesh.vertices : vertices_of(seg.base_triangles);
    const OrientedBox base_box = gravity_obb(base_pts, frame);
    const Vec3 object_centroid = surface_centroid(mesh);

    for (auto& part : out.parts) {
        try {
            const MotionType type = predict_motion_type(part.label, stats);
            const std::vector<Vec3> pts = vertices_of(part.triangle_ids);
            const OrientedBox box = gravity_obb(pts, frame);
            MotionSpec motion;
            motion.type = type;
            if (type == MotionType::Prismatic) {
                motion.axis = predict_prismatic_axis(box, object_centroid);
            } else {
                const BoxAxis facing = part.label == PartLabel::Lid ? BoxAxis::Up : BoxAxis::Front;
                const FaceSide face = select_face(box, base_box, facing);
                const TriMesh part_mesh = submesh(mesh, part.triangle_ids);
                const HandleEstimate handle = detect_handle(part_mesh, box, options.handle, facing);
                const RevoluteAxis rev = predict_revolute_axis(box, face, handle, part.label, object_centroid);
                motion.axis = rev.axis;
                motion.origin = rev.origin;
            }
            if (part.motion && part.motion->type == type) motion.range = part.motion->range;
            motion.validate();
            part.motion = motion;
        } catch (const Error& e) {
            spdlog::warn("motion prediction failed for part '{}': {}", part.id, e.what());
            if (diagnostics) diagnostics->push_back(part.id + ": " + e.what());
            part.motion.reset();
        }
    }
    return out;
}

}  // namespace openable
