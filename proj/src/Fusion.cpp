// SPDX-License-Identifier: MIT
#include "openable/Fusion.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "openable/Error.h"

namespace openable {

std::vector<std::int32_t> ViewMask::triangles() const {
    std::vector<std::int32_t> out;
    for (const auto& c : covered_triangles) {
        if (c.covered()) out.push_back(c.triangle_id);
    }
    return out;
}

std::vector<ViewMask> lift_view_masks(const IndexMap& index_map, const ViewPrediction& prediction,
                                      double threshold) {
    std::map<std::int32_t, std::int64_t> visible;
    for (std::int32_t id : index_map.ids) {
        if (id != kBackground) ++visible[id];
    }
    std::vector<ViewMask> out;
    for (std::size_t m = 0; m < prediction.masks.size(); ++m) {
        const auto& mask = prediction.masks[m];
        if (mask.width != index_map.width || mask.height != index_map.height) {
            throw Error(ErrorKind::ShapeMismatch,
                        "mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                                " but the index map is " + std::to_string(index_map.width) + "x" +
                                std::to_string(index_map.height));
        }
        if (mask.confidence < threshold) continue;
        const auto bits = rle_decode(mask.pixels, mask.width, mask.height);
        std::map<std::int32_t, std::int64_t> counts;
        for (std::size_t p = 0; p < bits.size(); ++p) {
            if (bits[p] && index_map.ids[p] != kBackground) ++counts[index_map.ids[p]];
        }
        ViewMask vm;
        vm.view_id = prediction.view_id;
        vm.mask_id = prediction.view_id + "#" + std::to_string(m);
        vm.label = mask.label;
        vm.confidence = mask.confidence;
        for (const auto& [tri, n] : counts) vm.covered_triangles.push_back({tri, n, visible[tri]});
        out.push_back(std::move(vm));
    }
    return out;
}

PartSegmentation reconcile_view_masks(std::vector<ViewMask> masks, const TriMesh& mesh,
                                      double merge_iou) {
    const std::size_t nt = mesh.num_triangles();
    const auto areas = triangle_areas(mesh);
    std::stable_sort(masks.begin(), masks.end(), [](const ViewMask& a, const ViewMask& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.mask_id < b.mask_id;
    });

    std::vector<std::int32_t> owner(nt, -1);
    std::vector<PartInstance> parts;
    std::vector<double> part_area;
    for (const auto& mask : masks) {
        std::vector<std::int32_t> tris = mask.triangles();
        for (std::int32_t t : tris) {
            if (t < 0 || static_cast<std::size_t>(t) >= nt) {
                throw Error(ErrorKind::IndexOutOfRange, "mask " + mask.mask_id + " references triangle " +
                                                                std::to_string(t));
            }
        }
        if (tris.empty()) continue;
        double mask_area = 0.0;
        std::map<std::int32_t, double> shared;
        for (std::int32_t t : tris) {
            mask_area += areas[t];
            if (owner[t] >= 0) shared[owner[t]] += areas[t];
        }
        std::int32_t best = -1;
        double best_iou = -1.0;
        for (const auto& [p, inter] : shared) {
            const double uni = mask_area + part_area[p] - inter;
            const double iou = uni > 0.0 ? inter / uni : 0.0;
            if (iou > best_iou) {
                best_iou = iou;
                best = p;
            }
        }
        std::int32_t target;
        if (best >= 0 && best_iou > merge_iou) {
            target = best;
        } else {
            target = static_cast<std::int32_t>(parts.size());
            PartInstance part;
            part.id = "part_" + std::to_string(parts.size());
            part.label = mask.label;
            part.confidence = mask.confidence;
            parts.push_back(std::move(part));
            part_area.push_back(0.0);
        }
        for (std::int32_t t : tris) {
            if (owner[t] < 0) {
                owner[t] = target;
                part_area[target] += areas[t];
            }
        }
    }
    auto seg = PartSegmentation::from_owners(owner, std::move(parts));
    for (std::size_t p = 0; p < seg.parts.size(); ++p) seg.parts[p].id = "part_" + std::to_string(p);
    return seg;
}

PartSegmentation reconcile_pc_masks(const PointCloudPrediction& prediction,
                                    const SampledPointCloud& cloud, const TriMesh& mesh,
                                    const SampledPointCloud* full_cloud, std::size_t knn_k,
                                    double merge_iou) {
    if (prediction.num_points != cloud.size()) {
        throw Error(ErrorKind::ShapeMismatch, "prediction indexes " + std::to_string(prediction.num_points) +
                                                      " points but the cloud has " + std::to_string(cloud.size()));
    }
    std::vector<std::size_t> order(prediction.instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return prediction.instances[a].confidence > prediction.instances[b].confidence;
    });

    std::vector<const PointCloudInstance*> kept;
    for (std::size_t i : order) {
        const auto& inst = prediction.instances[i];
        for (std::int32_t p : inst.point_ids) {
            if (p < 0 || static_cast<std::size_t>(p) >= cloud.size()) {
                throw Error(ErrorKind::IndexOutOfRange, "point id " + std::to_string(p));
            }
        }
        if (inst.point_ids.empty()) continue;
        bool duplicate = false;
        for (const auto* other : kept) {
            std::vector<std::int32_t> inter;
            std::set_intersection(inst.point_ids.begin(), inst.point_ids.end(), other->point_ids.begin(),
                                  other->point_ids.end(), std::back_inserter(inter));
            const double uni = static_cast<double>(inst.point_ids.size() + other->point_ids.size() - inter.size());
            if (static_cast<double>(inter.size()) / uni > merge_iou) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(&inst);
    }

    SampledPointCloud labeled = cloud;
    auto& labels = labeled.labels.emplace(cloud.size(), PointLabel{});
    std::vector<PartInstance> parts;
    for (std::size_t k = kept.size(); k-- > 0;) {
        // Lower-confidence instances write first so higher ones overwrite.
        for (std::int32_t p : kept[k]->point_ids) {
            labels[p] = {static_cast<std::int32_t>(k), kept[k]->label, kept[k]->confidence};
        }
    }
    for (std::size_t k = 0; k < kept.size(); ++k) {
        PartInstance part;
        part.id = "part_" + std::to_string(k);
        part.label = kept[k]->label;
        part.confidence = kept[k]->confidence;
        parts.push_back(std::move(part));
    }

    std::vector<PointLabel> tri_labels;
    if (full_cloud) {
        SampledPointCloud propagated = *full_cloud;
        propagated.labels = knn_propagate(labeled, *full_cloud, knn_k);
        tri_labels = triangle_vote(mesh, propagated);
    } else {
        tri_labels = triangle_vote(mesh, labeled);
    }
    auto seg = segmentation_from_labels(tri_labels, std::move(parts));
    for (std::size_t p = 0; p < seg.parts.size(); ++p) seg.parts[p].id = "part_" + std::to_string(p);
    return seg;
}

std::vector<PartLabel> infer_labels_from_motion(const std::vector<MotionInstance>& instances,
                                                const Frame& frame) {
    frame.validate();
    const double cos45 = std::cos(std::numbers::pi / 4.0);
    std::vector<PartLabel> out;
    out.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        if (!inst.type || !inst.axis || !(inst.axis->norm() > 0.0)) {
            throw Error(ErrorKind::InvalidMotion, "instance " + std::to_string(i) + " lacks a motion type or axis");
        }
        if (*inst.type == MotionType::Prismatic) {
            out.push_back(PartLabel::Drawer);
            continue;
        }
        const double axis_up = std::abs(inst.axis->normalized().dot(frame.up));
        if (axis_up >= cos45) {
            out.push_back(PartLabel::Door);
            continue;
        }
        const double n = inst.mean_normal.norm();
        const bool vertical_normal = n > 0.0 && std::abs(inst.mean_normal.dot(frame.up)) / n >= cos45;
        out.push_back(vertical_normal ? PartLabel::Lid : PartLabel::Door);
    }
    return out;
}

Vec3 mean_normal(const TriMesh& mesh, std::span<const std::int32_t> triangles) {
    Vec3 sum = Vec3::Zero();
    for (std::int32_t t : triangles) {
        const Tri& tri = mesh.triangles.at(static_cast<std::size_t>(t));
        sum += 0.5 * (mesh.vertices[tri[1]] - mesh.vertices[tri[0]]).cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
    }
    const double n = sum.norm();
    return n > 0.0 ? Vec3(sum / n) : Vec3::Zero();
}

}  // namespace openable
