// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openable/Mesh.h"

namespace openable {

enum class PartLabel { Drawer, Door, Lid, Base };
enum class MotionType { Prismatic, Revolute };

inline bool is_openable(PartLabel label) { return label != PartLabel::Base; }
std::string_view to_string(PartLabel label);
std::string_view to_string(MotionType type);
/// Throws SchemaError for unknown names.
PartLabel parse_part_label(std::string_view name);
MotionType parse_motion_type(std::string_view name);

struct MotionRange {
    double lower = 0.0;
    double upper = 0.0;
};

/// Joint parameters: type, unit axis, and (revolute only) a point on the
/// axis line. Range is in meters for prismatic and radians for revolute.
struct MotionSpec {
    MotionType type = MotionType::Prismatic;
    Vec3 axis = Vec3::UnitX();
    std::optional<Vec3> origin;
    std::optional<MotionRange> range;

    /// Throws InvalidMotion if the axis is not unit or the origin presence
    /// does not match the type.
    void validate() const;
};

struct PartInstance {
    std::string id;
    PartLabel label = PartLabel::Drawer;
    std::vector<std::int32_t> triangle_ids;  // sorted, unique
    double confidence = 1.0;
    std::optional<MotionSpec> motion;
};

/// Per-triangle partition of a mesh into openable parts and the base.
struct PartSegmentation {
    std::vector<PartInstance> parts;
    std::vector<std::int32_t> base_triangles;  // sorted, unique

    /// Owner index per triangle: part index, or -1 for base.
    std::vector<std::int32_t> owners(std::size_t num_triangles) const;
    /// Semantic label per triangle.
    std::vector<PartLabel> triangle_labels(std::size_t num_triangles) const;

    /// Rebuilds from an owner vector; parts whose triangle set comes out
    /// empty are dropped and base_triangles is recomputed.
    static PartSegmentation from_owners(std::span<const std::int32_t> owners,
                                        std::vector<PartInstance> parts);

    /// Checks the partition invariant for a mesh with `num_triangles`.
    /// Throws IndexOutOfRange, OverlapError or SchemaError.
    void validate(std::size_t num_triangles) const;
};

/// Everything unclaimed by parts becomes base.
PartSegmentation all_base(std::size_t num_triangles);

struct ArticulatedPart {
    std::string id;
    TriMesh mesh;
    PartLabel label = PartLabel::Drawer;
    MotionSpec motion;
};

struct ArticulatedObject {
    std::string name = "object";
    TriMesh base;
    std::vector<ArticulatedPart> parts;
    Frame frame;

    void validate() const;
};

/// Splits `mesh` by `seg`. Openable parts without a motion stay in the base.
ArticulatedObject build_articulated(const TriMesh& mesh, const PartSegmentation& seg,
                                    const Frame& frame, std::string name = "object");

}  // namespace openable
