// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "openable/Config.h"
#include "openable/Error.h"
#include "openable/Motion.h"

namespace openable {

/// Directory layout of a batch run. Objects are the meshes in mesh_dir
/// (.obj, .ply, .glb, .gltf), identified by file stem. Segmentation inputs
/// live in seg_dir:
///   gt        <id>.json (annotation with frame)
///   pc-pred   <id>.pc.json (instances) and <id>.pc.ply (the labeled cloud)
///   view-pred <id>/view_*.json (masks, optional camera and frame)
struct PipelineInputs {
    std::filesystem::path mesh_dir;
    std::filesystem::path seg_dir;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> stats;  // motion-type statistics JSON
};

struct ObjectOutcome {
    std::string id;
    bool ok = false;
    std::string error;
    std::optional<ErrorKind> error_kind;
    std::size_t parts = 0;
    std::size_t parts_with_motion = 0;
    std::vector<std::string> diagnostics;
    std::filesystem::path urdf;  // relative to out_dir
};

struct PipelineManifest {
    std::vector<ObjectOutcome> objects;  // sorted by id
    PipelineConfig config;

    std::size_t succeeded() const;
    std::size_t failed() const;
    /// 0 when every object succeeded, 2 otherwise.
    int exit_code() const;
    nlohmann::json to_json() const;
};

/// Mesh files of a directory sorted by stem. Throws IoError.
std::vector<std::filesystem::path> list_meshes(const std::filesystem::path& dir);

/// Runs one object through segmentation, motion, interior completion and
/// export into `<out_dir>/<id>/`. Never throws; failures are reported in the
/// outcome.
ObjectOutcome process_object(const std::filesystem::path& mesh_path, const PipelineInputs& inputs,
                             const PipelineConfig& config, const MotionTypeStats& stats);

/// Processes every object on `config.workers` threads and writes
/// `<out_dir>/manifest.json`. Throws ConfigError or IoError for problems
/// that affect the whole run.
PipelineManifest run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config);

/// Worker count from OPENABLE_WORKERS, or `fallback` when unset. Throws
/// ConfigError for a value that is not a positive integer.
int workers_from_env(int fallback = 1);

}  // namespace openable
