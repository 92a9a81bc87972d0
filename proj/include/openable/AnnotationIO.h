// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "openable/Camera.h"
#include "openable/Parts.h"

namespace openable {

/// Part segmentation plus the canonical frame it was annotated in.
struct Annotation {
    PartSegmentation segmentation;
    Frame frame;
};

/// {"up": [x,y,z], "front": [x,y,z]}; missing keys keep the defaults
/// (z up, x front). Throws SchemaError.
Frame frame_from_json(const nlohmann::json& doc);

/// Parses the annotation / part-prediction document:
///   { "frame": {"up": [x,y,z], "front": [x,y,z]},
///     "parts": [ {"id", "label", "triangles": [...], "confidence"?,
///                 "motion"?: {"type", "axis", "origin"?, "range"?}} ] }
/// Triangles not listed by any part become base. Throws IndexOutOfRange,
/// OverlapError or SchemaError.
Annotation parse_annotation(const nlohmann::json& doc, std::size_t num_triangles);
Annotation load_annotation(const std::filesystem::path& path, const TriMesh& mesh);

nlohmann::json annotation_to_json(const PartSegmentation& seg, const Frame& frame);
void save_annotation(const std::filesystem::path& path, const PartSegmentation& seg,
                     const Frame& frame);

nlohmann::json motion_to_json(const MotionSpec& motion);
MotionSpec motion_from_json(const nlohmann::json& doc);
Vec3 vec3_from_json(const nlohmann::json& doc, const char* what);

/// Instance prediction over a point cloud (indices into that cloud).
struct PointCloudInstance {
    PartLabel label = PartLabel::Drawer;
    double confidence = 0.0;
    std::vector<std::int32_t> point_ids;
};

struct PointCloudPrediction {
    std::size_t num_points = 0;
    std::vector<PointCloudInstance> instances;
};

/// Throws SchemaError on malformed input and IndexOutOfRange for point ids
/// outside [0, points).
PointCloudPrediction parse_pc_prediction(const nlohmann::json& doc);
PointCloudPrediction load_pc_prediction(const std::filesystem::path& path);
nlohmann::json pc_prediction_to_json(const PointCloudPrediction& prediction);

/// Binary mask as run lengths over row-major pixels, starting with a
/// (possibly empty) background run and alternating thereafter.
std::vector<std::int64_t> rle_encode(const std::vector<std::uint8_t>& bitmap);
/// Throws SchemaError if the runs do not sum to width * height.
std::vector<std::uint8_t> rle_decode(const std::vector<std::int64_t>& runs, int width,
                                     int height);

struct MaskPrediction {
    PartLabel label = PartLabel::Drawer;
    double confidence = 0.0;
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> pixels;  // run-length encoded
};

struct ViewPrediction {
    std::string view_id;
    std::vector<MaskPrediction> masks;
    /// Optional camera stored alongside the masks: [fx, fy, cx, cy],
    /// row-major world-to-camera rotation and camera position.
    std::optional<nlohmann::json> camera;
};

ViewPrediction parse_view_prediction(const nlohmann::json& doc);
ViewPrediction load_view_prediction(const std::filesystem::path& path);
nlohmann::json view_prediction_to_json(const ViewPrediction& prediction);

/// Camera document: {"intrinsics": [fx, fy, cx, cy], "width", "height",
/// "rotation": 9 row-major values (world to camera), "position": [x, y, z]}.
/// Throws SchemaError on malformed input and InvalidCamera on bad values.
PinholeCamera camera_from_json(const nlohmann::json& doc);
nlohmann::json camera_to_json(const PinholeCamera& camera);

nlohmann::json read_json(const std::filesystem::path& path);
/// Writes with 2-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace openable
