// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "openable/Parts.h"

namespace openable {

struct MatchPair {
    std::int32_t pred = -1;
    std::int32_t gt = -1;
    double iou = 0.0;
};

struct Matching {
    std::vector<MatchPair> pairs;
    std::vector<std::int32_t> unmatched_preds;
    std::vector<std::int32_t> unmatched_gts;
    std::vector<PartLabel> pred_labels;
    std::vector<PartLabel> gt_labels;

    std::size_t num_preds() const { return pred_labels.size(); }
    std::size_t num_gts() const { return gt_labels.size(); }
    std::size_t matched() const { return pairs.size(); }
};

/// Area-weighted IoU of two sorted triangle sets.
double area_iou(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                std::span<const double> areas);

/// Predictions in order of (confidence desc, index asc) each take the
/// unmatched same-label GT part with the highest area-weighted IoU, if that
/// IoU reaches `iou_threshold`. Throws ShapeMismatch when either
/// segmentation does not cover exactly areas.size() triangles.
Matching match_parts(const PartSegmentation& preds, const PartSegmentation& gts,
                     std::span<const double> areas, double iou_threshold = 0.5);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ObjectCounts {
    std::size_t preds = 0;
    std::size_t gts = 0;
    std::size_t matched = 0;
};

struct SegReport {
    Prf micro;
    Prf macro;
    std::map<PartLabel, Prf> per_label;  // micro within each label
    std::vector<ObjectCounts> per_object;
};

/// F1 = 2PR/(P+R), or 0 when P+R = 0.
double f1_score(double precision, double recall);

/// Micro: ratios of summed counts. Macro: mean over objects of per-object
/// P (objects without predictions excluded), R (objects without GT parts
/// excluded) and F1 = 2*matched/(preds+gts) (objects with neither
/// excluded). Throws EmptyInput for zero objects.
SegReport seg_prf(std::span<const Matching> matchings);

/// Counts behind the +M / +MA / +MAO criteria and the mean errors.
struct MotionScores {
    std::size_t preds = 0;
    std::size_t gts = 0;
    std::size_t matched = 0;
    std::size_t m = 0;
    std::size_t ma = 0;
    std::size_t mao = 0;
    double axis_error_sum = 0.0;  // degrees
    std::size_t axis_error_count = 0;
    double origin_error_sum = 0.0;  // meters
    double origin_error_frac_sum = 0.0;  // fraction of GT part diagonal
    std::size_t origin_error_count = 0;

    double precision(std::size_t count) const { return preds ? static_cast<double>(count) / preds : 0.0; }
    double recall(std::size_t count) const { return gts ? static_cast<double>(count) / gts : 0.0; }
    double mean_axis_error() const { return axis_error_count ? axis_error_sum / axis_error_count : 0.0; }
    double mean_origin_error() const { return origin_error_count ? origin_error_sum / origin_error_count : 0.0; }
    double mean_origin_error_frac() const {
        return origin_error_count ? origin_error_frac_sum / origin_error_count : 0.0;
    }
};

struct MotionReport {
    MotionScores overall;
    std::map<PartLabel, MotionScores> per_label;  // keyed by GT label for matches/recall, pred label for precision
};

struct MotionTolerances {
    double axis_deg = 5.0;      // pass when angle <= axis_deg
    double origin_frac = 0.1;   // pass when distance <= origin_frac * GT diagonal
};

/// Angle between two axis lines in degrees, ignoring orientation.
double axis_angle_deg(const Vec3& a, const Vec3& b);
/// Distance from `point` to the line through `origin` along `axis`.
double point_line_distance(const Vec3& point, const Vec3& origin, const Vec3& axis);

struct MotionObject {
    Matching matching;
    PartSegmentation preds;
    PartSegmentation gts;
    std::vector<double> gt_diagonals;  // per GT part
};

/// Checks one matched pair; returns (+M, +MA, +MAO).
std::array<bool, 3> motion_criteria(const std::optional<MotionSpec>& pred, const std::optional<MotionSpec>& gt,
                                    double gt_diagonal, const MotionTolerances& tol);

MotionReport motion_metrics(std::span<const MotionObject> objects, const MotionTolerances& tol = {});

struct SemanticAccuracy {
    double ca = 0.0;
    double nca = 0.0;
    double ca_nb = 0.0;
};

/// Area-weighted semantic accuracy over all triangles (CA), mean of
/// per-GT-label accuracies over labels present (NCA), and accuracy over
/// triangles openable in GT or prediction (CA_nb, 1 when that set is empty).
SemanticAccuracy ca_nca(const PartSegmentation& pred, const PartSegmentation& gt, std::span<const double> areas);

/// Adjusted Rand index of two triangle partitions with area weights
/// rescaled to mean 1. Returns 1 when the index is undefined.
double ari(const PartSegmentation& pred, const PartSegmentation& gt, std::span<const double> areas);
/// ARI with explicit cluster ids and weights (unit weights give the
/// textbook formula).
double weighted_ari(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                    std::span<const double> weights);

struct DetectionBox {
    PartLabel label = PartLabel::Drawer;
    double confidence = 1.0;
    Aabb box;
};

/// Pairwise correction cost lambda*(1-GIoU)/2 + (1-lambda)*c_cls with
/// c_cls = (1-conf)/2 for equal labels and (1+conf)/2 otherwise.
double oc_pair_cost(const DetectionBox& pred, const DetectionBox& gt, double lambda);

/// Optimal-transport correction cost with a dummy prediction and a dummy GT
/// of unit cost beta and uniform masses over each augmented set. Exact.
double oc_cost(const std::vector<DetectionBox>& preds, const std::vector<DetectionBox>& gts,
               double lambda = 0.5, double beta = 0.6);

/// Axis-aligned boxes of parts in the frame's (right, front, up) coordinates.
std::vector<Aabb> part_boxes(const PartSegmentation& seg, const TriMesh& mesh, const Frame& frame);

struct EvalOptions {
    double iou_threshold = 0.5;
    MotionTolerances tolerances;
    double oc_lambda = 0.5;
    double oc_beta = 0.6;
};

struct EvalObject {
    std::string name;
    TriMesh mesh;
    Frame frame;
    PartSegmentation gt;
    PartSegmentation pred;
};

struct EvalInput {
    std::string name;
    std::filesystem::path mesh;
    std::filesystem::path gt;
    std::filesystem::path pred;
};

struct ObjectResult {
    std::string name;
    bool skipped = false;
    std::string error;
    ObjectCounts counts;
    SemanticAccuracy accuracy;
    double ari = 0.0;
    double oc_cost = 0.0;
};

struct EvalReport {
    SegReport segmentation;
    MotionReport motion;
    SemanticAccuracy mean_accuracy;
    double mean_ari = 0.0;
    double mean_oc_cost = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::vector<ObjectResult> objects;  // sorted by name
    EvalOptions options;

    nlohmann::json to_json() const;
    std::string to_markdown() const;
};

/// Evaluates in-memory objects (sorted by name first, so the report does
/// not depend on input order). Objects that fail are flagged and skipped.
EvalReport evaluate(std::vector<EvalObject> objects, const EvalOptions& options = {});

/// Loads each triple, flagging objects whose files fail to load.
EvalReport evaluate(const std::vector<EvalInput>& inputs, const EvalOptions& options = {});

/// Pairs <id>.json files in gt_dir with pred_dir/<id>.json and a mesh
/// <id>.{obj,ply,glb,gltf} from mesh_dir.
std::vector<EvalInput> discover_eval_inputs(const std::filesystem::path& gt_dir,
                                            const std::filesystem::path& pred_dir,
                                            const std::filesystem::path& mesh_dir);

}  // namespace openable
