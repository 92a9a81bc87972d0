// SPDX-License-Identifier: MIT
#include "Fixtures.h"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace openable::testing {

Frame fixture_frame() { return Frame{Vec3::UnitZ(), Vec3::UnitY()}; }

void FixtureBuilder::add_base(const TriMesh& piece) {
    append(mesh_, piece);
    owner_.resize(mesh_.num_triangles(), -1);
}

void FixtureBuilder::add_part(const std::string& id, PartLabel label, const TriMesh& piece) {
    std::int32_t index = -1;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].id == id) index = static_cast<std::int32_t>(i);
    }
    if (index < 0) {
        PartInstance p;
        p.id = id;
        p.label = label;
        parts_.push_back(p);
        index = static_cast<std::int32_t>(parts_.size() - 1);
    }
    append(mesh_, piece);
    owner_.resize(mesh_.num_triangles(), index);
}

void FixtureBuilder::set_motion(const std::string& id, const MotionSpec& motion) {
    for (auto& p : parts_) {
        if (p.id == id) {
            p.motion = motion;
            return;
        }
    }
    throw std::runtime_error("unknown part " + id);
}

Fixture FixtureBuilder::build(std::string name, const Frame& frame) const {
    Fixture f;
    f.name = std::move(name);
    f.mesh = mesh_;
    f.frame = frame;
    f.gt = PartSegmentation::from_owners(owner_, parts_);
    return f;
}

TriMesh box(const Vec3& lo, const Vec3& hi) { return make_box(Aabb::from_min_max(lo, hi)); }

TriMesh grid_box(const Vec3& lo, const Vec3& hi, int nx, int ny, int nz) {
    const std::array<int, 3> n{nx, ny, nz};
    TriMesh mesh;
    std::map<std::array<int, 3>, std::int32_t> index;
    auto vertex = [&](std::array<int, 3> c) {
        auto [it, inserted] = index.try_emplace(c, static_cast<std::int32_t>(mesh.vertices.size()));
        if (inserted) {
            Vec3 p;
            for (int k = 0; k < 3; ++k) p[k] = lo[k] + (hi[k] - lo[k]) * c[k] / n[k];
            mesh.vertices.push_back(p);
        }
        return it->second;
    };
    const Vec3 center = 0.5 * (lo + hi);
    auto tri = [&](std::int32_t a, std::int32_t b, std::int32_t c) {
        const Vec3& pa = mesh.vertices[a];
        const Vec3 nrm = (mesh.vertices[b] - pa).cross(mesh.vertices[c] - pa);
        const Vec3 mid = (pa + mesh.vertices[b] + mesh.vertices[c]) / 3.0;
        if (nrm.dot(mid - center) < 0.0) std::swap(b, c);
        mesh.triangles.emplace_back(a, b, c);
    };
    for (int axis = 0; axis < 3; ++axis) {
        const int u = (axis + 1) % 3;
        const int v = (axis + 2) % 3;
        for (int side : {0, n[axis]}) {
            for (int i = 0; i < n[u]; ++i) {
                for (int j = 0; j < n[v]; ++j) {
                    std::array<int, 3> c00{}, c10{}, c11{}, c01{};
                    c00[axis] = c10[axis] = c11[axis] = c01[axis] = side;
                    c00[u] = i, c00[v] = j;
                    c10[u] = i + 1, c10[v] = j;
                    c11[u] = i + 1, c11[v] = j + 1;
                    c01[u] = i, c01[v] = j + 1;
                    const auto a = vertex(c00), b = vertex(c10), c = vertex(c11), d = vertex(c01);
                    tri(a, b, c);
                    tri(a, c, d);
                }
            }
        }
    }
    return mesh;
}

TriMesh cylinder(const Vec3& base, const Vec3& axis, double radius, double length, int segments, int rings) {
    const Vec3 a = axis.normalized();
    const Vec3 helper = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = a.cross(helper).normalized();
    const Vec3 e2 = a.cross(e1);
    TriMesh mesh;
    for (int r = 0; r < rings; ++r) {
        const Vec3 c = base + a * (length * r / (rings - 1));
        for (int s = 0; s < segments; ++s) {
            const double phi = 2.0 * std::numbers::pi * s / segments;
            mesh.vertices.push_back(c + radius * (std::cos(phi) * e1 + std::sin(phi) * e2));
        }
    }
    const auto bottom = static_cast<std::int32_t>(mesh.vertices.size());
    mesh.vertices.push_back(base);
    mesh.vertices.push_back(base + length * a);
    const Vec3 center = base + 0.5 * length * a;
    auto tri = [&](std::int32_t p, std::int32_t q, std::int32_t w) {
        const Vec3& pa = mesh.vertices[p];
        const Vec3 nrm = (mesh.vertices[q] - pa).cross(mesh.vertices[w] - pa);
        const Vec3 mid = (pa + mesh.vertices[q] + mesh.vertices[w]) / 3.0;
        if (nrm.dot(mid - center) < 0.0) std::swap(q, w);
        mesh.triangles.emplace_back(p, q, w);
    };
    for (int r = 0; r + 1 < rings; ++r) {
        for (int s = 0; s < segments; ++s) {
            const std::int32_t i0 = r * segments + s, i1 = r * segments + (s + 1) % segments;
            const std::int32_t j0 = i0 + segments, j1 = i1 + segments;
            tri(i0, i1, j1);
            tri(i0, j1, j0);
        }
    }
    const std::int32_t top_ring = (rings - 1) * segments;
    for (int s = 0; s < segments; ++s) {
        tri(bottom, s, (s + 1) % segments);
        tri(bottom + 1, top_ring + s, top_ring + (s + 1) % segments);
    }
    return mesh;
}

TriMesh carcass(const CarcassSpec& s) {
    const double hw = 0.5 * s.width, hd = 0.5 * s.depth, t = s.thickness;
    TriMesh m;
    append(m, box({-hw, -hd, 0.0}, {-hw + t, hd, s.height}));
    append(m, box({hw - t, -hd, 0.0}, {hw, hd, s.height}));
    append(m, box({-hw + t, -hd, 0.0}, {hw - t, hd, t}));
    if (s.top) append(m, box({-hw + t, -hd, s.height - t}, {hw - t, hd, s.height}));
    if (s.back) append(m, box({-hw + t, -hd, t}, {hw - t, -hd + t, s.top ? s.height - t : s.height}));
    const double y0 = s.back ? -hd + t : -hd;
    for (double z : s.dividers) append(m, box({-hw + t, y0, z}, {hw - t, hd, z + t}));
    return m;
}

namespace {

constexpr double kT = 0.02;       // panel thickness
constexpr double kGap = 0.003;    // gap around inset fronts
constexpr double kDoor = 0.02;    // door / lid thickness
constexpr double kKnobR = 0.015;
constexpr double kKnobLen = 0.03;

MotionSpec prismatic(const Vec3& axis) {
    MotionSpec m;
    m.type = MotionType::Prismatic;
    m.axis = axis;
    return m;
}

MotionSpec revolute(const Vec3& axis, const Vec3& origin) {
    MotionSpec m;
    m.type = MotionType::Revolute;
    m.axis = axis;
    m.origin = origin;
    return m;
}

// Inset drawer front filling a cell [z0, z1] of an opening, with a bar pull.
void add_drawer(FixtureBuilder& b, const std::string& id, double hw_inner, double hd, double z0, double z1) {
    const double x0 = -hw_inner + kGap, x1 = hw_inner - kGap;
    b.add_part(id, PartLabel::Drawer, box({x0, hd - kT, z0 + kGap}, {x1, hd, z1 - kGap}));
    const double zc = 0.5 * (z0 + z1);
    const double bar = std::min(0.08, 0.3 * (x1 - x0));
    b.add_part(id, PartLabel::Drawer, box({-bar, hd, zc - 0.01}, {bar, hd + 0.02, zc + 0.01}));
    b.set_motion(id, prismatic(Vec3::UnitY()));
}

// Recessed grip: a small block inside the door panel, behind the front face.
TriMesh grip(double x, double z, double front_y, bool horizontal) {
    const double a = horizontal ? 0.05 : 0.015;
    const double c = horizontal ? 0.015 : 0.05;
    return box({x - a, front_y - 0.012, z - c}, {x + a, front_y - 0.008, z + c});
}

std::string fixture_name(const char* kind, const char* tag, double w, double h) {
    return std::string(kind) + "_" + tag + "_" + std::to_string(static_cast<int>(std::lround(w * 100))) + "x" +
           std::to_string(static_cast<int>(std::lround(h * 100)));
}

const char* handle_tag(HandleSide h) {
    switch (h) {
        case HandleSide::Left: return "left";
        case HandleSide::Right: return "right";
        case HandleSide::Top: return "top";
        case HandleSide::None: return "none";
    }
    return "none";
}

TriMesh front_knob(double x, double z, double y) {
    return cylinder({x, y, z}, Vec3::UnitY(), kKnobR, kKnobLen, 16, 4);
}

}  // namespace

Fixture dresser(int drawers, double width, double depth, double height) {
    CarcassSpec spec{width, depth, height, kT, true, true, {}};
    const double cell = (height - 2.0 * kT - (drawers - 1) * kT) / drawers;
    for (int i = 0; i + 1 < drawers; ++i) spec.dividers.push_back(kT + (i + 1) * cell + i * kT);
    FixtureBuilder b;
    b.add_base(carcass(spec));
    for (int i = 0; i < drawers; ++i) {
        const double z0 = kT + i * (cell + kT);
        add_drawer(b, "drawer_" + std::to_string(i), 0.5 * width - kT, 0.5 * depth, z0, z0 + cell);
    }
    return b.build("dresser_" + std::to_string(drawers) + "_" + std::to_string(static_cast<int>(width * 100)));
}

Fixture overlay_door_cabinet(HandleSide handle, double width, double height) {
    const double depth = 0.45, hw = 0.5 * width, hd = 0.5 * depth;
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, true, true, {0.5 * height}}));
    b.add_part("door", PartLabel::Door, grid_box({-hw, hd, 0.0}, {hw, hd + kDoor, height}, 10, 1, 10));
    const double y = hd + kDoor;
    switch (handle) {
        case HandleSide::Right:
            b.add_part("door", PartLabel::Door, front_knob(hw - 0.06, 0.5 * height, y));
            b.set_motion("door", revolute(Vec3::UnitZ(), {-hw, hd, 0.5 * height}));
            break;
        case HandleSide::Left:
            b.add_part("door", PartLabel::Door, front_knob(-hw + 0.06, 0.5 * height, y));
            b.set_motion("door", revolute(-Vec3::UnitZ(), {hw, hd, 0.5 * height}));
            break;
        case HandleSide::Top:
            b.add_part("door", PartLabel::Door, front_knob(0.0, height - 0.06, y));
            b.set_motion("door", revolute(-Vec3::UnitX(), {0.0, hd, 0.0}));
            break;
        case HandleSide::None:
            b.set_motion("door", revolute(Vec3::UnitZ(), {-hw, hd, 0.5 * height}));
            break;
    }
    return b.build(fixture_name("overlay_door", handle_tag(handle), width, height));
}

Fixture inset_door_cabinet(HandleSide handle, double width, double height) {
    const double depth = 0.45, hw = 0.5 * width, hd = 0.5 * depth;
    const double x0 = -hw + kT + kGap, x1 = hw - kT - kGap;
    const double z0 = kT + kGap, z1 = height - kT - kGap;
    const double zc = 0.5 * (z0 + z1);
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, true, true, {0.5 * height}}));
    b.add_part("door", PartLabel::Door, grid_box({x0, hd - kDoor, z0}, {x1, hd, z1}, 10, 1, 10));
    switch (handle) {
        case HandleSide::Right:
            b.add_part("door", PartLabel::Door, grip(x1 - 0.05, zc, hd, false));
            b.set_motion("door", revolute(Vec3::UnitZ(), {x0, hd, zc}));
            break;
        case HandleSide::Left:
            b.add_part("door", PartLabel::Door, grip(x0 + 0.05, zc, hd, false));
            b.set_motion("door", revolute(-Vec3::UnitZ(), {x1, hd, zc}));
            break;
        case HandleSide::Top:
            b.add_part("door", PartLabel::Door, grip(0.0, z1 - 0.05, hd, true));
            b.set_motion("door", revolute(-Vec3::UnitX(), {0.0, hd, z0}));
            break;
        case HandleSide::None:
            b.set_motion("door", revolute(Vec3::UnitZ(), {x0, hd, zc}));
            break;
    }
    return b.build(fixture_name("inset_door", handle_tag(handle), width, height));
}

Fixture double_door_cabinet(double width, double height) {
    const double depth = 0.45, hw = 0.5 * width, hd = 0.5 * depth;
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, true, true, {0.5 * height}}));
    b.add_part("door_left", PartLabel::Door, grid_box({-hw, hd, 0.0}, {-0.001, hd + kDoor, height}, 10, 1, 10));
    b.add_part("door_right", PartLabel::Door, grid_box({0.001, hd, 0.0}, {hw, hd + kDoor, height}, 10, 1, 10));
    b.set_motion("door_left", revolute(Vec3::UnitZ(), {-hw, hd, 0.5 * height}));
    b.set_motion("door_right", revolute(-Vec3::UnitZ(), {hw, hd, 0.5 * height}));
    return b.build(fixture_name("double_door", "none", width, height));
}

Fixture double_inset_cabinet(double width, double height) {
    const double depth = 0.45, hw = 0.5 * width, hd = 0.5 * depth;
    const double x0 = -hw + kT + kGap, x1 = hw - kT - kGap;
    const double z0 = kT + kGap, z1 = height - kT - kGap;
    const double zc = 0.5 * (z0 + z1);
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, true, true, {}}));
    b.add_part("door_left", PartLabel::Door, grid_box({x0, hd - kDoor, z0}, {-kGap, hd, z1}, 10, 1, 10));
    b.add_part("door_left", PartLabel::Door, grip(-kGap - 0.05, zc, hd, false));
    b.add_part("door_right", PartLabel::Door, grid_box({kGap, hd - kDoor, z0}, {x1, hd, z1}, 10, 1, 10));
    b.add_part("door_right", PartLabel::Door, grip(kGap + 0.05, zc, hd, false));
    b.set_motion("door_left", revolute(Vec3::UnitZ(), {x0, hd, zc}));
    b.set_motion("door_right", revolute(-Vec3::UnitZ(), {x1, hd, zc}));
    return b.build(fixture_name("double_inset", "inner", width, height));
}

Fixture chest(bool knob, double width, double depth, double height) {
    const double hw = 0.5 * width, hd = 0.5 * depth;
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, false, true, {}}));
    b.add_part("lid", PartLabel::Lid, grid_box({-hw, -hd, height}, {hw, hd, height + kDoor}, 10, 10, 1));
    if (knob) {
        b.add_part("lid", PartLabel::Lid,
                   cylinder({0.0, 0.7 * hd, height + kDoor}, Vec3::UnitZ(), kKnobR, kKnobLen, 16, 4));
    }
    b.set_motion("lid", revolute(Vec3::UnitX(), {0.0, -hd, height}));
    return b.build(fixture_name("chest", knob ? "knob" : "plain", width, height));
}

Fixture drawer_over_door(HandleSide door_handle) {
    const double width = 0.6, depth = 0.5, height = 0.9, split = 0.68;
    const double hw = 0.5 * width, hd = 0.5 * depth;
    const double x0 = -hw + kT + kGap, x1 = hw - kT - kGap;
    const double z0 = kT + kGap, z1 = split - kGap;
    const double zc = 0.5 * (z0 + z1);
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, true, true, {split}}));
    add_drawer(b, "drawer", hw - kT, hd, split + kT, height - kT);
    b.add_part("door", PartLabel::Door, grid_box({x0, hd - kDoor, z0}, {x1, hd, z1}, 10, 1, 10));
    if (door_handle == HandleSide::Left) {
        b.add_part("door", PartLabel::Door, grip(x0 + 0.05, zc, hd, false));
        b.set_motion("door", revolute(-Vec3::UnitZ(), {x1, hd, zc}));
    } else {
        b.add_part("door", PartLabel::Door, grip(x1 - 0.05, zc, hd, false));
        b.set_motion("door", revolute(Vec3::UnitZ(), {x0, hd, zc}));
    }
    return b.build(fixture_name("drawer_over_door", handle_tag(door_handle), width, height));
}

Fixture corner_cabinet(double width) {
    const double depth = 1.0, height = 0.6, hw = 0.5 * width, hd = 0.5 * depth;
    FixtureBuilder b;
    b.add_base(carcass({width, depth, height, kT, true, true, {}}));
    // Two walls at 45 degrees meeting 0.8 behind the drawer front.
    const double yb = hd - kT;
    const double apex = yb - 0.8;
    const double span = hw - kT;
    const double z0 = kT, z1 = height - kT;
    for (double s : {-1.0, 1.0}) {
        std::vector<Vec3> poly{{0.0, apex, z0}, {s * span, apex + span, z0},
                               {s * span, apex + span - 0.03, z0}, {0.0, apex - 0.03, z0}};
        b.add_base(make_prism(poly, Vec3::UnitZ(), z1 - z0));
    }
    add_drawer(b, "drawer", hw - kT, hd, kT, height - kT);
    return b.build(fixture_name("corner", "v", width, height));
}

std::vector<Fixture> motion_fixtures() {
    std::vector<Fixture> out;
    for (int n = 1; n <= 6; ++n) out.push_back(dresser(n));
    for (int n = 1; n <= 6; ++n) out.push_back(dresser(n, 1.2, 0.55, 0.85));
    out.push_back(dresser(3, 0.5, 0.4, 0.6));
    out.push_back(dresser(4, 1.0, 0.6, 1.3));
    for (auto h : {HandleSide::Right, HandleSide::Left, HandleSide::Top}) {
        out.push_back(overlay_door_cabinet(h));
        out.push_back(inset_door_cabinet(h));
    }
    out.push_back(overlay_door_cabinet(HandleSide::Right, 0.4, 1.6));
    out.push_back(overlay_door_cabinet(HandleSide::Left, 0.6, 0.6));
    out.push_back(inset_door_cabinet(HandleSide::Right, 0.45, 1.8));
    out.push_back(inset_door_cabinet(HandleSide::Left, 0.7, 0.7));
    out.push_back(double_door_cabinet());
    out.push_back(double_door_cabinet(1.2, 1.8));
    out.push_back(double_inset_cabinet());
    out.push_back(chest(true));
    out.push_back(chest(false));
    out.push_back(chest(true, 1.2, 0.6, 0.45));
    out.push_back(drawer_over_door(HandleSide::Right));
    out.push_back(drawer_over_door(HandleSide::Left));
    out.push_back(corner_cabinet());
    return out;
}

std::vector<Fixture> drawer_fixtures() {
    std::vector<Fixture> out;
    for (int n = 1; n <= 6; ++n) out.push_back(dresser(n));
    out.push_back(dresser(2, 1.2, 0.55, 0.85));
    out.push_back(dresser(3, 0.5, 0.4, 0.6));
    out.push_back(drawer_over_door(HandleSide::Right));
    out.push_back(corner_cabinet());
    return out;
}

Fixture transformed(const Fixture& f, const Eigen::Matrix3d& rotation, const Vec3& translation, double scale) {
    Fixture out = f;
    out.mesh = openable::transformed(f.mesh, scale * rotation, translation);
    out.frame.up = rotation * f.frame.up;
    out.frame.front = rotation * f.frame.front;
    for (auto& p : out.gt.parts) {
        if (!p.motion) continue;
        p.motion->axis = rotation * p.motion->axis;
        if (p.motion->origin) p.motion->origin = Vec3(scale * (rotation * *p.motion->origin) + translation);
    }
    return out;
}

}  // namespace openable::testing
