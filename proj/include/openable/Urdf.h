// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "openable/Parts.h"

namespace openable {

struct UrdfManifest {
    std::filesystem::path urdf;
    std::vector<std::filesystem::path> meshes;  // base first, then parts
};

/// Limits used when a MotionSpec carries no range: prismatic [0, 0.9 x the
/// part extent along the axis], revolute [0, pi/2].
MotionRange default_motion_range(const ArticulatedPart& part);

/// Writes `<out_dir>/<name>.urdf` with a fixed base link and one child link
/// per part, plus one OBJ per link under `<out_dir>/meshes`. Joint origins sit
/// on the motion origin (revolute) or at the base origin (prismatic); each
/// child visual is offset so the mesh stays in object coordinates.
/// Throws IoError when the directory cannot be written.
UrdfManifest export_urdf(const ArticulatedObject& obj, const std::filesystem::path& out_dir);

struct UrdfLink {
    std::string name;
    std::string mesh;
    Vec3 visual_xyz = Vec3::Zero();
};

struct UrdfJoint {
    std::string name;
    std::string type;
    std::string parent;
    std::string child;
    Vec3 origin_xyz = Vec3::Zero();
    Vec3 origin_rpy = Vec3::Zero();
    Vec3 axis = Vec3::UnitX();
    double lower = 0.0;
    double upper = 0.0;
};

struct UrdfModel {
    std::string name;
    std::vector<UrdfLink> links;
    std::vector<UrdfJoint> joints;
};

/// Reads the subset of URDF produced by export_urdf. Throws ParseError.
UrdfModel parse_urdf(const std::filesystem::path& path);

}  // namespace openable
