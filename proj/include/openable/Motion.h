// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "openable/OrientedBox.h"
#include "openable/Parts.h"

namespace openable {

/// Motion-type counts per part label, gathered from a training set.
struct MotionTypeStats {
    std::map<PartLabel, std::array<std::int64_t, 2>> counts;  // [prismatic, revolute]

    /// drawer -> prismatic, door -> revolute, lid -> revolute.
    static MotionTypeStats defaults();
    static MotionTypeStats from_segmentations(const std::vector<PartSegmentation>& segs);
    static MotionTypeStats from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

/// Most frequent type for the label. Equal counts, or a label missing from
/// the stats, fall back to the default mapping. Throws NotOpenable for base.
MotionType predict_motion_type(PartLabel label, const MotionTypeStats& stats);

/// The box front axis, negated when `object_centroid` lies in front of the
/// box center so that the axis points away from the object.
Vec3 predict_prismatic_axis(const OrientedBox& part_box, const Vec3& object_centroid);

enum class FaceSide { Front, Back };
enum class HandleRegion { None, Raised, Concave };

/// Picks the part face (positive or negative side along `facing`) whose four
/// edges have the smallest summed distance to the nearest edges of
/// `base_box`. Ties (within 1e-9 of the part diagonal) go to the front.
FaceSide select_face(const OrientedBox& part_box, const OrientedBox& base_box,
                     BoxAxis facing = BoxAxis::Front);

struct HandleEstimate {
    HandleRegion region = HandleRegion::None;
    Vec3 centroid = Vec3::Zero();
    std::vector<std::int64_t> depth_profile;  // vertex counts, front-most slab first
};

struct HandleOptions {
    int bins = 32;
    double min_fraction = 0.02;       // share of vertices forming a handle
    double max_area_fraction = 0.25;  // handle footprint relative to the face
};

/// Bins part vertices along the facing axis. The dominant slab (most
/// vertices, front-most on ties) is the face plane. Vertices in front of it
/// form a raised handle; failing that, vertices recessed between the
/// back-most occupied slab and the dominant slab form a concave one. Either
/// needs at least `min_fraction` of the vertices and a lateral footprint
/// below `max_area_fraction` of the face. Throws EmptyInput.
HandleEstimate detect_handle(const TriMesh& part_mesh, const OrientedBox& part_box,
                             const HandleOptions& options = {}, BoxAxis facing = BoxAxis::Front);

struct RevoluteAxis {
    Vec3 axis = Vec3::UnitZ();
    Vec3 origin = Vec3::Zero();
    int edge = 0;
};

/// Chooses the hinge among the four edges of the selected face. Door edges
/// are ordered left, right (vertical), bottom, top; lid edges back, front,
/// left, right. With a handle the edge farthest from it wins (distance
/// normalized by the face size across the edge; ties keep the lower index).
/// Without one, doors use the vertical edge farther from the object's
/// lateral center and lids the back edge. The origin is the edge midpoint
/// and the axis sign makes a positive rotation swing the part outward.
/// Throws DegenerateBox for a zero-extent face.
RevoluteAxis predict_revolute_axis(const OrientedBox& part_box, FaceSide face,
                                   const HandleEstimate& handle, PartLabel label,
                                   const Vec3& object_centroid);

struct MotionOptions {
    HandleOptions handle;
};

/// Fills a MotionSpec for every openable part. A part whose prediction fails
/// is logged, reported through `diagnostics` and left without motion.
PartSegmentation predict_motion(const PartSegmentation& seg, const TriMesh& mesh, const Frame& frame,
                                const MotionTypeStats& stats = MotionTypeStats::defaults(),
                                const MotionOptions& options = {},
                                std::vector<std::string>* diagnostics = nullptr);

/// Minimum distance between segments [p0, p1] and [q0, q1].
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

/// The 12 edges of a box as endpoint pairs.
std::array<std::pair<Vec3, Vec3>, 12> box_edges(const OrientedBox& box);

}  // namespace openable
