// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "openable/AnnotationIO.h"
#include "openable/Camera.h"
#include "openable/Parts.h"
#include "openable/Sampling.h"

namespace openable {

struct CoveredTriangle {
    std::int32_t triangle_id = -1;
    std::int64_t pixels = 0;          // mask pixels showing the triangle
    std::int64_t visible_pixels = 0;  // all pixels showing it in this view

    /// At least half of the triangle's visible pixels fall inside the mask.
    bool covered() const { return 2 * pixels >= visible_pixels; }
};

struct ViewMask {
    std::string view_id;
    std::string mask_id;  // "<view_id>#<index in file>"
    PartLabel label = PartLabel::Drawer;
    double confidence = 0.0;
    std::vector<CoveredTriangle> covered_triangles;  // sorted by triangle id

    std::vector<std::int32_t> triangles() const;
};

/// Drops masks below `threshold` (kept when confidence >= threshold) and
/// counts each surviving mask's pixels per triangle id, ignoring background.
/// Throws ShapeMismatch if a mask size differs from the index map.
std::vector<ViewMask> lift_view_masks(const IndexMap& index_map, const ViewPrediction& prediction,
                                      double threshold = 0.9);

/// Greedy reconciliation in order of (confidence desc, mask id asc). A mask
/// whose area-weighted IoU with an accepted part exceeds `merge_iou` merges
/// into the best such part; otherwise it becomes a new part. Triangles
/// already owned stay with their (earlier, higher-confidence) owner.
PartSegmentation reconcile_view_masks(std::vector<ViewMask> masks, const TriMesh& mesh,
                                      double merge_iou = 0.8);

/// Point-cloud instance reconciliation: an instance whose point IoU with a
/// kept, higher-confidence instance exceeds `merge_iou` is dropped; shared
/// points go to the higher-confidence instance. Labels are then propagated
/// to `full_cloud` by kNN (when given) and voted per triangle.
PartSegmentation reconcile_pc_masks(const PointCloudPrediction& prediction,
                                    const SampledPointCloud& cloud, const TriMesh& mesh,
                                    const SampledPointCloud* full_cloud = nullptr,
                                    std::size_t knn_k = 3, double merge_iou = 0.8);

/// Motion-only instance used for label inference.
struct MotionInstance {
    std::optional<MotionType> type;
    std::optional<Vec3> axis;
    Vec3 mean_normal = Vec3::Zero();
};

/// Prismatic -> drawer. Revolute with the axis within 45 degrees of up ->
/// door; otherwise door when the mean normal is more than 45 degrees from
/// vertical, lid when it is within 45 degrees. Throws InvalidMotion when type
/// or axis is missing or the axis is zero.
std::vector<PartLabel> infer_labels_from_motion(const std::vector<MotionInstance>& instances,
                                                const Frame& frame);

/// Area-weighted mean of the face normals of the listed triangles.
Vec3 mean_normal(const TriMesh& mesh, std::span<const std::int32_t> triangles);

}  // namespace openable
