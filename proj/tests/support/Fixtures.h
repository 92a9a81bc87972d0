// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "openable/Parts.h"

namespace openable::testing {

/// Object coordinates: x right, y front, z up (the object frame below).
Frame fixture_frame();

struct Fixture {
    std::string name;
    TriMesh mesh;
    Frame frame;
    PartSegmentation gt;  // every part carries its true motion
};

/// Assembles meshes into one object while recording triangle ownership.
class FixtureBuilder {
public:
    void add_base(const TriMesh& piece);
    /// Adds a piece to part `id`, creating the part on first use.
    void add_part(const std::string& id, PartLabel label, const TriMesh& piece);
    void set_motion(const std::string& id, const MotionSpec& motion);
    Fixture build(std::string name, const Frame& frame = fixture_frame()) const;
    const TriMesh& mesh() const { return mesh_; }

private:
    TriMesh mesh_;
    std::vector<std::int32_t> owner_;
    std::vector<PartInstance> parts_;
};

/// Axis-aligned box between two corners.
TriMesh box(const Vec3& lo, const Vec3& hi);
/// Axis-aligned box whose faces are split into an nx x ny x nz lattice.
TriMesh grid_box(const Vec3& lo, const Vec3& hi, int nx, int ny, int nz);
/// Closed cylinder from `base` along `axis` (unit) with `rings` vertex rings.
TriMesh cylinder(const Vec3& base, const Vec3& axis, double radius, double length, int segments, int rings);

struct CarcassSpec {
    double width = 0.8;
    double depth = 0.5;
    double height = 1.0;
    double thickness = 0.02;
    bool top = true;
    bool back = true;
    std::vector<double> dividers;  // heights of horizontal shelves (bottom face)
};

/// Open-front case: two sides, bottom, optional top and back, shelves.
TriMesh carcass(const CarcassSpec& spec);

enum class HandleSide { Left, Right, Top, None };

/// Dresser with `drawers` inset drawer fronts stacked in equal cells.
Fixture dresser(int drawers, double width = 0.8, double depth = 0.5, double height = 1.0);
/// Cabinet with one overlay door and a knob (None: no knob).
Fixture overlay_door_cabinet(HandleSide handle, double width = 0.5, double height = 0.8);
/// Cabinet with one inset door carrying a recessed grip (None: no grip).
Fixture inset_door_cabinet(HandleSide handle, double width = 0.5, double height = 0.8);
/// Two overlay doors without handles.
Fixture double_door_cabinet(double width = 0.9, double height = 0.9);
/// Two inset doors with recessed grips next to the meeting edges.
Fixture double_inset_cabinet(double width = 0.9, double height = 0.9);
/// Chest with a lid on top, optionally with a knob near the front.
Fixture chest(bool knob, double width = 0.9, double depth = 0.5, double height = 0.5);
/// Drawer over an overlay door.
Fixture drawer_over_door(HandleSide door_handle);
/// One drawer whose case narrows into a V behind it (corner unit).
Fixture corner_cabinet(double width = 1.0);

/// Motion fixtures: at least 30 objects of the kinds above.
std::vector<Fixture> motion_fixtures();
/// Fixtures with prismatic drawers for interior completion.
std::vector<Fixture> drawer_fixtures();

/// Applies x -> s R x + t to the mesh, frame and GT motions.
Fixture transformed(const Fixture& f, const Eigen::Matrix3d& rotation, const Vec3& translation, double scale);

}  // namespace openable::testing
