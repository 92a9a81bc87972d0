// SPDX-License-Identifier: MIT
#include "openable/AnnotationIO.h"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "openable/Error.h"

namespace openable {

using json = nlohmann::json;
namespace fs = std::filesystem;

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
}

void write_json(const fs::path& path, const json& doc) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

Vec3 vec3_from_json(const json& doc, const char* what) {
    if (!doc.is_array() || doc.size() != 3) {
        throw Error(ErrorKind::SchemaError, std::string(what) + " must be an array of 3 numbers");
    }
    Vec3 v;
    for (int k = 0; k < 3; ++k) {
        if (!doc[k].is_number()) {
            throw Error(ErrorKind::SchemaError, std::string(what) + " must be numeric");
        }
        v[k] = doc[k].get<double>();
    }
    return v;
}

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

double confidence_from_json(const json& doc, double fallback) {
    if (!doc.contains("confidence")) return fallback;
    if (!doc["confidence"].is_number()) throw Error(ErrorKind::SchemaError, "confidence must be numeric");
    const double c = doc["confidence"].get<double>();
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorKind::SchemaError, "confidence must lie in [0, 1]");
    return c;
}

PartLabel openable_label(const json& doc) {
    if (!doc.contains("label") || !doc["label"].is_string()) {
        throw Error(ErrorKind::SchemaError, "missing string field 'label'");
    }
    const PartLabel label = parse_part_label(doc["label"].get<std::string>());
    if (!is_openable(label)) throw Error(ErrorKind::SchemaError, "label 'base' is not an openable part");
    return label;
}

std::vector<std::int32_t> index_list(const json& doc, const char* key, std::size_t limit) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw Error(ErrorKind::SchemaError, std::string("missing array field '") + key + "'");
    }
    std::vector<std::int32_t> out;
    out.reserve(doc[key].size());
    for (const auto& v : doc[key]) {
        if (!v.is_number_integer()) throw Error(ErrorKind::SchemaError, std::string(key) + " must hold integers");
        const auto idx = v.get<std::int64_t>();
        if (idx < 0 || static_cast<std::uint64_t>(idx) >= limit) {
            throw Error(ErrorKind::IndexOutOfRange,
                        std::string(key) + " entry " + std::to_string(idx) + " outside [0, " +
                                std::to_string(limit) + ")");
        }
        out.push_back(static_cast<std::int32_t>(idx));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

json motion_to_json(const MotionSpec& motion) {
    json doc{{"type", std::string(to_string(motion.type))}, {"axis", vec3_to_json(motion.axis)}};
    if (motion.origin) doc["origin"] = vec3_to_json(*motion.origin);
    if (motion.range) doc["range"] = json::array({motion.range->lower, motion.range->upper});
    return doc;
}

MotionSpec motion_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "motion must be an object");
    if (!doc.contains("type") || !doc["type"].is_string()) {
        throw Error(ErrorKind::SchemaError, "motion requires a string 'type'");
    }
    if (!doc.contains("axis")) throw Error(ErrorKind::InvalidMotion, "motion requires an 'axis'");
    MotionSpec motion;
    motion.type = parse_motion_type(doc["type"].get<std::string>());
    motion.axis = vec3_from_json(doc["axis"], "motion axis");
    if (doc.contains("origin") && !doc["origin"].is_null()) {
        motion.origin = vec3_from_json(doc["origin"], "motion origin");
    }
    if (doc.contains("range") && !doc["range"].is_null()) {
        const auto& r = doc["range"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
            throw Error(ErrorKind::SchemaError, "motion range must be [lower, upper]");
        }
        motion.range = MotionRange{r[0].get<double>(), r[1].get<double>()};
    }
    motion.validate();
    return motion;
}

Frame frame_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "frame must be an object");
    Frame frame;
    if (doc.contains("up")) frame.up = vec3_from_json(doc["up"], "frame.up");
    if (doc.contains("front")) frame.front = vec3_from_json(doc["front"], "frame.front");
    try {
        frame.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::SchemaError, e.what());
    }
    return frame;
}

Annotation parse_annotation(const json& doc, std::size_t num_triangles) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "annotation must be a JSON object");
    Annotation out;
    if (doc.contains("frame")) out.frame = frame_from_json(doc["frame"]);
    std::vector<std::int32_t> owner(num_triangles, -1);
    if (doc.contains("parts")) {
        if (!doc["parts"].is_array()) throw Error(ErrorKind::SchemaError, "'parts' must be an array");
        for (const auto& p : doc["parts"]) {
            PartInstance part;
            if (!p.contains("id") || !p["id"].is_string()) {
                throw Error(ErrorKind::SchemaError, "every part needs a string 'id'");
            }
            part.id = p["id"].get<std::string>();
            part.label = openable_label(p);
            part.triangle_ids = index_list(p, "triangles", num_triangles);
            if (part.triangle_ids.empty()) {
                throw Error(ErrorKind::SchemaError, "part '" + part.id + "' lists no triangles");
            }
            part.confidence = confidence_from_json(p, 1.0);
            if (p.contains("motion") && !p["motion"].is_null()) part.motion = motion_from_json(p["motion"]);
            const auto index = static_cast<std::int32_t>(out.segmentation.parts.size());
            for (std::int32_t t : part.triangle_ids) {
                if (owner[t] >= 0) {
                    throw Error(ErrorKind::OverlapError,
                                "triangle " + std::to_string(t) + " claimed by '" +
                                        out.segmentation.parts[owner[t]].id + "' and '" + part.id + "'");
                }
                owner[t] = index;
            }
            out.segmentation.parts.push_back(std::move(part));
        }
    }
    for (std::size_t t = 0; t < num_triangles; ++t) {
        if (owner[t] < 0) out.segmentation.base_triangles.push_back(static_cast<std::int32_t>(t));
    }
    return out;
}

Annotation load_annotation(const fs::path& path, const TriMesh& mesh) {
    const json doc = read_json(path);
    try {
        return parse_annotation(doc, mesh.num_triangles());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
    }
}

json annotation_to_json(const PartSegmentation& seg, const Frame& frame) {
    json parts = json::array();
    for (const auto& part : seg.parts) {
        json p{{"id", part.id},
               {"label", std::string(to_string(part.label))},
               {"triangles", part.triangle_ids},
               {"confidence", part.confidence}};
        if (part.motion) p["motion"] = motion_to_json(*part.motion);
        parts.push_back(std::move(p));
    }
    return json{{"frame", {{"up", vec3_to_json(frame.up)}, {"front", vec3_to_json(frame.front)}}},
                {"parts", std::move(parts)}};
}

void save_annotation(const fs::path& path, const PartSegmentation& seg, const Frame& frame) {
    write_json(path, annotation_to_json(seg, frame));
}

PointCloudPrediction parse_pc_prediction(const json& doc) {
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_number_integer()) {
        throw Error(ErrorKind::SchemaError, "point-cloud prediction needs an integer 'points'");
    }
    const auto points = doc["points"].get<std::int64_t>();
    if (points < 0) throw Error(ErrorKind::SchemaError, "'points' must be nonnegative");
    PointCloudPrediction out;
    out.num_points = static_cast<std::size_t>(points);
    if (doc.contains("instances")) {
        for (const auto& inst : doc["instances"]) {
            PointCloudInstance pi;
            pi.label = openable_label(inst);
            pi.confidence = confidence_from_json(inst, 1.0);
            pi.point_ids = index_list(inst, "point_ids", out.num_points);
            out.instances.push_back(std::move(pi));
        }
    }
    return out;
}

PointCloudPrediction load_pc_prediction(const fs::path& path) {
    try {
        return parse_pc_prediction(read_json(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
    }
}

json pc_prediction_to_json(const PointCloudPrediction& prediction) {
    json instances = json::array();
    for (const auto& inst : prediction.instances) {
        instances.push_back({{"label", std::string(to_string(inst.label))},
                             {"confidence", inst.confidence},
                             {"point_ids", inst.point_ids}});
    }
    return json{{"points", prediction.num_points}, {"instances", std::move(instances)}};
}

std::vector<std::int64_t> rle_encode(const std::vector<std::uint8_t>& bitmap) {
    std::vector<std::int64_t> runs;
    std::uint8_t current = 0;
    std::int64_t length = 0;
    for (std::uint8_t px : bitmap) {
        const std::uint8_t bit = px ? 1 : 0;
        if (bit != current) {
            runs.push_back(length);
            current = bit;
            length = 0;
        }
        ++length;
    }
    runs.push_back(length);
    return runs;
}

std::vector<std::uint8_t> rle_decode(const std::vector<std::int64_t>& runs, int width, int height) {
    if (width <= 0 || height <= 0) throw Error(ErrorKind::SchemaError, "mask dimensions must be positive");
    const auto total = static_cast<std::int64_t>(width) * height;
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(total));
    std::uint8_t value = 0;
    for (std::int64_t run : runs) {
        if (run < 0 || static_cast<std::int64_t>(out.size()) + run > total) {
            throw Error(ErrorKind::SchemaError, "mask runs exceed width * height");
        }
        out.insert(out.end(), static_cast<std::size_t>(run), value);
        value ^= 1;
    }
    if (static_cast<std::int64_t>(out.size()) != total) {
        throw Error(ErrorKind::SchemaError, "mask runs do not cover width * height");
    }
    return out;
}

ViewPrediction parse_view_prediction(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "view prediction must be an object");
    ViewPrediction out;
    if (!doc.contains("view_id")) throw Error(ErrorKind::SchemaError, "view prediction needs 'view_id'");
    out.view_id = doc["view_id"].is_string() ? doc["view_id"].get<std::string>() : doc["view_id"].dump();
    if (doc.contains("camera")) out.camera = doc["camera"];
    if (doc.contains("masks")) {
        for (const auto& m : doc["masks"]) {
            MaskPrediction mask;
            mask.label = openable_label(m);
            mask.confidence = confidence_from_json(m, 1.0);
            if (!m.contains("width") || !m.contains("height") || !m.contains("pixels")) {
                throw Error(ErrorKind::SchemaError, "mask needs width, height and pixels");
            }
            mask.width = m["width"].get<int>();
            mask.height = m["height"].get<int>();
            mask.pixels = m["pixels"].get<std::vector<std::int64_t>>();
            rle_decode(mask.pixels, mask.width, mask.height);
            out.masks.push_back(std::move(mask));
        }
    }
    return out;
}

ViewPrediction load_view_prediction(const fs::path& path) {
    try {
        return parse_view_prediction(read_json(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
    }
}

json view_prediction_to_json(const ViewPrediction& prediction) {
    json masks = json::array();
    for (const auto& m : prediction.masks) {
        masks.push_back({{"label", std::string(to_string(m.label))},
                         {"confidence", m.confidence},
                         {"width", m.width},
                         {"height", m.height},
                         {"pixels", m.pixels}});
    }
    json doc{{"view_id", prediction.view_id}, {"masks", std::move(masks)}};
    if (prediction.camera) doc["camera"] = *prediction.camera;
    return doc;
}

PinholeCamera camera_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "camera must be an object");
    auto numbers = [&](const char* key, std::size_t n) {
        if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != n) {
            throw Error(ErrorKind::SchemaError, fmt::format("camera '{}' must hold {} numbers", key, n));
        }
        std::vector<double> v;
        for (const auto& x : doc[key]) {
            if (!x.is_number()) throw Error(ErrorKind::SchemaError, fmt::format("camera '{}' must be numeric", key));
            v.push_back(x.get<double>());
        }
        return v;
    };
    auto integer = [&](const char* key) {
        if (!doc.contains(key) || !doc[key].is_number_integer()) {
            throw Error(ErrorKind::SchemaError, fmt::format("camera '{}' must be an integer", key));
        }
        return doc[key].get<int>();
    };
    PinholeCamera cam;
    auto k = numbers("intrinsics", 4);
    cam.fx = k[0];
    cam.fy = k[1];
    cam.cx = k[2];
    cam.cy = k[3];
    cam.width = integer("width");
    cam.height = integer("height");
    auto r = numbers("rotation", 9);
    for (int i = 0; i < 9; ++i) cam.rotation(i / 3, i % 3) = r[i];
    cam.position = vec3_from_json(doc.contains("position") ? doc["position"] : json(), "camera position");
    cam.validate();
    return cam;
}

json camera_to_json(const PinholeCamera& camera) {
    json rot = json::array();
    for (int i = 0; i < 9; ++i) rot.push_back(camera.rotation(i / 3, i % 3));
    return {{"intrinsics", {camera.fx, camera.fy, camera.cx, camera.cy}},
            {"width", camera.width},
            {"height", camera.height},
            {"rotation", rot},
            {"position", vec3_to_json(camera.position)}};
}

}  // namespace openable
