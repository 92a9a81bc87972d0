// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace openable {

enum class SegmentationSource { GroundTruth, PointCloud, Views };

std::string_view to_string(SegmentationSource source);
/// Accepts "gt", "pc-pred" and "view-pred"; throws ConfigError otherwise.
SegmentationSource parse_segmentation_source(std::string_view name);

/// Every tunable of the batch pipeline.
struct PipelineConfig {
    SegmentationSource source = SegmentationSource::GroundTruth;

    double confidence_threshold = 0.9;
    double merge_iou = 0.8;
    std::size_t sample_points = 1'000'000;
    std::size_t fps_points = 20'000;
    int knn_k = 3;
    int fusion_views = 3;
    int view_width = 512;
    int view_height = 512;

    int handle_bins = 32;
    double handle_min_fraction = 0.02;
    double handle_max_area_fraction = 0.25;

    double corner_margin = 1.25;
    double wall_thickness = 0.0;  // 0 selects the default
    bool complete_interior = true;
    int strip_views = 64;
    int strip_resolution = 512;

    double iou_threshold = 0.5;
    double axis_tol_deg = 5.0;
    double origin_tol_frac = 0.1;
    double oc_lambda = 0.5;
    double oc_beta = 0.6;

    std::uint64_t seed = 0;
    int workers = 1;

    /// Throws ConfigError on out-of-range values.
    void validate() const;

    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys raise ConfigError.
    static PipelineConfig from_json(const nlohmann::json& doc);
    static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace openable
