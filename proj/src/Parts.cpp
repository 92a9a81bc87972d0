// SPDX-License-Identifier: MIT
#include "openable/Parts.h"

#include <algorithm>
#include <cmath>

#include "openable/Error.h"

namespace openable {

std::string_view to_string(PartLabel label) {
    switch (label) {
        case PartLabel::Drawer: return "drawer";
        case PartLabel::Door: return "door";
        case PartLabel::Lid: return "lid";
        case PartLabel::Base: return "base";
    }
    return "base";
}

std::string_view to_string(MotionType type) {
    return type == MotionType::Prismatic ? "prismatic" : "revolute";
}

PartLabel parse_part_label(std::string_view name) {
    if (name == "drawer") return PartLabel::Drawer;
    if (name == "door") return PartLabel::Door;
    if (name == "lid") return PartLabel::Lid;
    if (name == "base") return PartLabel::Base;
    throw Error(ErrorKind::SchemaError, "unknown part label '" + std::string(name) + "'");
}

MotionType parse_motion_type(std::string_view name) {
    if (name == "prismatic") return MotionType::Prismatic;
    if (name == "revolute") return MotionType::Revolute;
    throw Error(ErrorKind::SchemaError, "unknown motion type '" + std::string(name) + "'");
}

void MotionSpec::validate() const {
    if (!std::isfinite(axis.squaredNorm()) || std::abs(axis.norm() - 1.0) > 1e-6) {
        throw Error(ErrorKind::InvalidMotion, "motion axis must be unit length");
    }
    if (type == MotionType::Revolute && !origin) {
        throw Error(ErrorKind::InvalidMotion, "revolute motion requires an origin");
    }
    if (type == MotionType::Prismatic && origin) {
        throw Error(ErrorKind::InvalidMotion, "prismatic motion must not carry an origin");
    }
    if (range && !(range->lower <= range->upper)) {
        throw Error(ErrorKind::InvalidMotion, "motion range must satisfy lower <= upper");
    }
}

std::vector<std::int32_t> PartSegmentation::owners(std::size_t num_triangles) const {
    std::vector<std::int32_t> out(num_triangles, -1);
    for (std::size_t p = 0; p < parts.size(); ++p) {
        for (std::int32_t t : parts[p].triangle_ids) {
            if (t >= 0 && static_cast<std::size_t>(t) < num_triangles) {
                out[t] = static_cast<std::int32_t>(p);
            }
        }
    }
    return out;
}

std::vector<PartLabel> PartSegmentation::triangle_labels(std::size_t num_triangles) const {
    std::vector<PartLabel> out(num_triangles, PartLabel::Base);
    for (const auto& part : parts) {
        for (std::int32_t t : part.triangle_ids) {
            if (t >= 0 && static_cast<std::size_t>(t) < num_triangles) out[t] = part.label;
        }
    }
    return out;
}

PartSegmentation PartSegmentation::from_owners(std::span<const std::int32_t> owners,
                                               std::vector<PartInstance> parts) {
    for (auto& part : parts) part.triangle_ids.clear();
    PartSegmentation seg;
    for (std::size_t t = 0; t < owners.size(); ++t) {
        const std::int32_t o = owners[t];
        if (o < 0) {
            seg.base_triangles.push_back(static_cast<std::int32_t>(t));
        } else {
            parts.at(static_cast<std::size_t>(o)).triangle_ids.push_back(static_cast<std::int32_t>(t));
        }
    }
    for (auto& part : parts) {
        if (!part.triangle_ids.empty()) seg.parts.push_back(std::move(part));
    }
    return seg;
}

void PartSegmentation::validate(std::size_t num_triangles) const {
    std::vector<char> seen(num_triangles, 0);
    auto claim = [&](std::int32_t t, const std::string& who) {
        if (t < 0 || static_cast<std::size_t>(t) >= num_triangles) {
            throw Error(ErrorKind::IndexOutOfRange,
                        who + " references triangle " + std::to_string(t) + " of " +
                                std::to_string(num_triangles));
        }
        if (seen[t]) {
            throw Error(ErrorKind::OverlapError,
                        "triangle " + std::to_string(t) + " claimed twice (" + who + ")");
        }
        seen[t] = 1;
    };
    for (const auto& part : parts) {
        if (!is_openable(part.label)) {
            throw Error(ErrorKind::SchemaError, "part '" + part.id + "' is not openable");
        }
        if (part.triangle_ids.empty()) {
            throw Error(ErrorKind::SchemaError, "part '" + part.id + "' has no triangles");
        }
        for (std::int32_t t : part.triangle_ids) claim(t, "part '" + part.id + "'");
        if (part.motion) part.motion->validate();
    }
    for (std::int32_t t : base_triangles) claim(t, "base");
    for (std::size_t t = 0; t < num_triangles; ++t) {
        if (!seen[t]) {
            throw Error(ErrorKind::SchemaError, "triangle " + std::to_string(t) + " is unassigned");
        }
    }
}

PartSegmentation all_base(std::size_t num_triangles) {
    PartSegmentation seg;
    seg.base_triangles.resize(num_triangles);
    for (std::size_t t = 0; t < num_triangles; ++t) seg.base_triangles[t] = static_cast<std::int32_t>(t);
    return seg;
}

void ArticulatedObject::validate() const {
    frame.validate();
    for (const auto& part : parts) {
        if (part.mesh.empty()) {
            throw Error(ErrorKind::EmptyMesh, "part '" + part.id + "' has no geometry");
        }
        part.motion.validate();
    }
}

ArticulatedObject build_articulated(const TriMesh& mesh, const PartSegmentation& seg,
                                    const Frame& frame, std::string name) {
    ArticulatedObject obj;
    obj.name = std::move(name);
    obj.frame = frame;
    std::vector<std::int32_t> base = seg.base_triangles;
    for (const auto& part : seg.parts) {
        if (!part.motion) {
            base.insert(base.end(), part.triangle_ids.begin(), part.triangle_ids.end());
            continue;
        }
        obj.parts.push_back({part.id, submesh(mesh, part.triangle_ids), part.label, *part.motion});
    }
    std::sort(base.begin(), base.end());
    obj.base = submesh(mesh, base);
    return obj;
}

}  // namespace openable
