// SPDX-License-Identifier: MIT
#include "openable/Sampling.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <random>

#include "openable/Error.h"
#include "openable/KdTree.h"
#include "openable/MeshIO.h"

namespace openable {

void SampledPointCloud::validate(std::size_t num_triangles) const {
    const std::size_t n = positions.size();
    if (normals.size() != n || source_triangle.size() != n || vertex_id.size() != n ||
        (labels && labels->size() != n)) {
        throw Error(ErrorKind::SchemaError, "point cloud attribute lengths differ");
    }
    for (std::int32_t t : source_triangle) {
        if (t < 0 || static_cast<std::size_t>(t) >= num_triangles) {
            throw Error(ErrorKind::IndexOutOfRange, "point source triangle " + std::to_string(t));
        }
    }
}

namespace {

void push_point(SampledPointCloud& cloud, const Vec3& p, const Vec3& n, std::int32_t tri,
                std::int32_t vertex) {
    cloud.positions.push_back(p);
    cloud.normals.push_back(n);
    cloud.source_triangle.push_back(tri);
    cloud.vertex_id.push_back(vertex);
}

// Samples n points over the listed triangles, area-proportionally.
void sample_triangles(const TriMesh& mesh, std::span<const std::int32_t> tris, std::size_t n,
                      std::mt19937_64& rng, SampledPointCloud& out) {
    std::vector<double> cdf(tris.size());
    double total = 0.0;
    for (std::size_t i = 0; i < tris.size(); ++i) {
        total += triangle_area(mesh, static_cast<std::size_t>(tris[i]));
        cdf[i] = total;
    }
    if (n == 0) return;
    if (!(total > 0.0)) throw Error(ErrorKind::DegenerateMesh, "cannot sample a zero-area surface");
    std::uniform_real_distribution<double> pick(0.0, total);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t s = 0; s < n; ++s) {
        const double r = pick(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        if (it == cdf.end()) --it;
        const std::int32_t t = tris[static_cast<std::size_t>(it - cdf.begin())];
        double u = unit(rng);
        double v = unit(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const Tri& tri = mesh.triangles[t];
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        push_point(out, a + u * (b - a) + v * (c - a), triangle_normal(mesh, t), t, -1);
    }
}

}  // namespace

SampledPointCloud sample_surface(const TriMesh& mesh, std::size_t n, bool include_vertices,
                                 std::uint64_t seed) {
    SampledPointCloud cloud;
    const std::size_t reserve = n + (include_vertices ? mesh.num_vertices() : 0);
    cloud.positions.reserve(reserve);
    cloud.normals.reserve(reserve);
    cloud.source_triangle.reserve(reserve);
    cloud.vertex_id.reserve(reserve);

    std::vector<std::int32_t> all(mesh.num_triangles());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = static_cast<std::int32_t>(t);
    std::mt19937_64 rng(seed);
    sample_triangles(mesh, all, n, rng, cloud);

    if (include_vertices) {
        std::vector<std::int32_t> first(mesh.num_vertices(), -1);
        for (std::size_t t = mesh.num_triangles(); t-- > 0;) {
            for (int k = 0; k < 3; ++k) first[mesh.triangles[t][k]] = static_cast<std::int32_t>(t);
        }
        for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
            if (first[v] < 0) continue;
            push_point(cloud, mesh.vertices[v], triangle_normal(mesh, first[v]), first[v],
                       static_cast<std::int32_t>(v));
        }
    }
    return cloud;
}

SampledPointCloud sample_per_part(const TriMesh& mesh, const PartSegmentation& seg,
                                  std::size_t per_part, std::size_t total, std::uint64_t seed) {
    SampledPointCloud cloud;
    cloud.labels.emplace();
    std::mt19937_64 rng(seed);
    auto add_group = [&](std::span<const std::int32_t> tris, const PointLabel& label,
                         const std::string& name) {
        double area = 0.0;
        for (std::int32_t t : tris) area += triangle_area(mesh, static_cast<std::size_t>(t));
        if (!(area > 0.0)) {
            spdlog::warn("skipping zero-area part '{}'", name);
            return;
        }
        const std::size_t before = cloud.size();
        sample_triangles(mesh, tris, per_part, rng, cloud);
        cloud.labels->insert(cloud.labels->end(), cloud.size() - before, label);
    };
    for (std::size_t p = 0; p < seg.parts.size(); ++p) {
        const auto& part = seg.parts[p];
        add_group(part.triangle_ids, {static_cast<std::int32_t>(p), part.label, part.confidence}, part.id);
    }
    add_group(seg.base_triangles, PointLabel{}, "base");
    if (cloud.size() <= total) return cloud;
    const auto keep = farthest_point_sample(cloud.positions, total);
    return subset(cloud, keep);
}

std::vector<std::int32_t> farthest_point_sample(std::span<const Vec3> points, std::size_t m) {
    const std::size_t n = points.size();
    if (m < 1 || m > n) {
        throw Error(ErrorKind::InvalidCount,
                    "farthest point sampling needs 1 <= m <= " + std::to_string(n) + ", got " +
                            std::to_string(m));
    }
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : points) centroid += p;
    centroid /= static_cast<double>(n);
    std::int32_t start = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = squared_distance(points[i], centroid);
        if (d > best) {
            best = d;
            start = static_cast<std::int32_t>(i);
        }
    }

    const KdTree tree(points, 32);
    const auto& nodes = tree.nodes();
    const auto& order = tree.order();
    std::vector<std::int32_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order[i]] = static_cast<std::int32_t>(i);

    // Current min squared distance to the selection; -1 marks selected points.
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    // Per node: largest mind in the subtree and its lowest index.
    std::vector<double> node_max(nodes.size(), std::numeric_limits<double>::infinity());
    std::vector<std::int32_t> node_arg(nodes.size(), -1);

    auto better = [](double va, std::int32_t ia, double vb, std::int32_t ib) {
        return va > vb || (va == vb && ia < ib);
    };

    std::vector<std::int32_t> selected;
    selected.reserve(m);
    std::int32_t s = start;
    // Post-order update, recursion replaced by an explicit stack of
    // (node, children_done) entries.
    std::vector<std::pair<std::int32_t, bool>> stack;
    stack.reserve(256);
    while (true) {
        selected.push_back(s);
        mind[s] = -1.0;
        if (selected.size() == m) break;
        const Vec3 sp = points[s];
        const std::int32_t spos = position[s];
        stack.clear();
        stack.emplace_back(0, false);
        while (!stack.empty()) {
            auto [id, done] = stack.back();
            stack.pop_back();
            const auto& node = nodes[id];
            if (!done) {
                const bool holds_s = spos >= node.first && spos < node.first + node.count;
                if (!holds_s && box_distance2(sp, node.lo, node.hi) >= node_max[id]) continue;
                if (node.left >= 0) {
                    stack.emplace_back(id, true);
                    stack.emplace_back(node.right, false);
                    stack.emplace_back(node.left, false);
                    continue;
                }
                double vmax = -std::numeric_limits<double>::infinity();
                std::int32_t arg = -1;
                for (std::int32_t i = node.first; i < node.first + node.count; ++i) {
                    const std::int32_t idx = order[i];
                    double& md = mind[idx];
                    if (md >= 0.0) {
                        const double d = squared_distance(points[idx], sp);
                        if (d < md) md = d;
                    }
                    if (better(md, idx, vmax, arg)) {
                        vmax = md;
                        arg = idx;
                    }
                }
                node_max[id] = vmax;
                node_arg[id] = arg;
            } else {
                const std::int32_t l = node.left;
                const std::int32_t r = node.right;
                if (better(node_max[l], node_arg[l], node_max[r], node_arg[r])) {
                    node_max[id] = node_max[l];
                    node_arg[id] = node_arg[l];
                } else {
                    node_max[id] = node_max[r];
                    node_arg[id] = node_arg[r];
                }
            }
        }
        s = node_arg[0];
    }
    return selected;
}

SampledPointCloud subset(const SampledPointCloud& cloud, std::span<const std::int32_t> indices) {
    SampledPointCloud out;
    out.positions.reserve(indices.size());
    out.normals.reserve(indices.size());
    out.source_triangle.reserve(indices.size());
    out.vertex_id.reserve(indices.size());
    if (cloud.labels) out.labels.emplace().reserve(indices.size());
    for (std::int32_t i : indices) {
        const auto idx = static_cast<std::size_t>(i);
        push_point(out, cloud.positions.at(idx), cloud.normals[idx], cloud.source_triangle[idx],
                   cloud.vertex_id[idx]);
        if (cloud.labels) out.labels->push_back((*cloud.labels)[idx]);
    }
    return out;
}

std::vector<PointLabel> knn_propagate(const SampledPointCloud& labeled,
                                      const SampledPointCloud& query, std::size_t k) {
    if (labeled.size() == 0) throw Error(ErrorKind::EmptyInput, "labeled cloud is empty");
    if (!labeled.labels || labeled.labels->size() != labeled.size()) {
        throw Error(ErrorKind::SchemaError, "labeled cloud carries no labels");
    }
    if (k < 1) throw Error(ErrorKind::InvalidCount, "k must be at least 1");
    const auto& labels = *labeled.labels;
    const KdTree tree(labeled.positions);
    std::vector<PointLabel> out(query.size());

    struct Tally {
        std::int32_t instance;
        int count;
        double distance_sum;
        std::size_t first;  // neighbor that introduced the instance
    };
    std::vector<Tally> tally;
    for (std::size_t q = 0; q < query.size(); ++q) {
        const auto nbrs = tree.knn(query.positions[q], k);
        if (nbrs.front().distance2 == 0.0) {
            out[q] = labels[nbrs.front().index];
            continue;
        }
        tally.clear();
        for (std::size_t j = 0; j < nbrs.size(); ++j) {
            const std::int32_t inst = labels[nbrs[j].index].instance;
            const double d = std::sqrt(nbrs[j].distance2);
            auto it = std::find_if(tally.begin(), tally.end(),
                                   [&](const Tally& t) { return t.instance == inst; });
            if (it == tally.end()) {
                tally.push_back({inst, 1, d, j});
            } else {
                ++it->count;
                it->distance_sum += d;
            }
        }
        const Tally* winner = &tally.front();
        for (const auto& t : tally) {
            if (t.count != winner->count) {
                if (t.count > winner->count) winner = &t;
                continue;
            }
            const double mt = t.distance_sum / t.count;
            const double mw = winner->distance_sum / winner->count;
            if (mt < mw || (mt == mw && t.instance < winner->instance)) winner = &t;
        }
        out[q] = labels[nbrs[winner->first].index];
    }
    return out;
}

std::vector<PointLabel> triangle_vote(const TriMesh& mesh, const SampledPointCloud& labeled) {
    if (!labeled.labels || labeled.labels->size() != labeled.size()) {
        throw Error(ErrorKind::SchemaError, "triangle vote needs a labeled cloud");
    }
    const std::size_t nt = mesh.num_triangles();
    // Vertex -> incident triangles (CSR).
    std::vector<std::int32_t> offsets(mesh.num_vertices() + 1, 0);
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) ++offsets[tri[k] + 1];
    }
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) offsets[v + 1] += offsets[v];
    std::vector<std::int32_t> incident(offsets.back());
    {
        std::vector<std::int32_t> fill(offsets.begin(), offsets.end() - 1);
        for (std::size_t t = 0; t < nt; ++t) {
            for (int k = 0; k < 3; ++k) incident[fill[mesh.triangles[t][k]]++] = static_cast<std::int32_t>(t);
        }
    }

    struct Vote {
        std::int32_t triangle;
        std::int32_t instance;
        std::int32_t point;
    };
    std::vector<Vote> votes;
    votes.reserve(labeled.size() + 3 * mesh.num_vertices());
    const auto& labels = *labeled.labels;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        const auto p = static_cast<std::int32_t>(i);
        const std::int32_t v = labeled.vertex_id[i];
        if (v >= 0 && static_cast<std::size_t>(v) < mesh.num_vertices()) {
            for (std::int32_t j = offsets[v]; j < offsets[v + 1]; ++j) {
                votes.push_back({incident[j], labels[i].instance, p});
            }
        } else {
            const std::int32_t t = labeled.source_triangle[i];
            if (t < 0 || static_cast<std::size_t>(t) >= nt) {
                throw Error(ErrorKind::IndexOutOfRange, "point source triangle " + std::to_string(t));
            }
            votes.push_back({t, labels[i].instance, p});
        }
    }
    std::sort(votes.begin(), votes.end(), [](const Vote& a, const Vote& b) {
        if (a.triangle != b.triangle) return a.triangle < b.triangle;
        if (a.instance != b.instance) return a.instance < b.instance;
        return a.point < b.point;
    });

    std::vector<PointLabel> out(nt);
    std::vector<char> covered(nt, 0);
    std::size_t i = 0;
    while (i < votes.size()) {
        const std::int32_t t = votes[i].triangle;
        std::int64_t best_count = -1;
        double best_conf = 0.0;
        PointLabel best;
        while (i < votes.size() && votes[i].triangle == t) {
            const std::int32_t inst = votes[i].instance;
            std::int64_t count = 0;
            double conf = 0.0;
            const PointLabel& rep = labels[votes[i].point];
            while (i < votes.size() && votes[i].triangle == t && votes[i].instance == inst) {
                ++count;
                const PointLabel& l = labels[votes[i].point];
                conf += l.is_base() ? kBaseConfidence : l.confidence;
                ++i;
            }
            // Instances arrive in increasing id order with the base (-1)
            // first, so equal (count, confidence) keeps the earlier one.
            if (count > best_count || (count == best_count && conf > best_conf)) {
                best_count = count;
                best_conf = conf;
                best = rep;
            }
        }
        out[t] = best;
        covered[t] = 1;
    }
    for (std::size_t t = 0; t < nt; ++t) {
        if (!covered[t]) {
            throw Error(ErrorKind::UncoveredTriangle, "triangle " + std::to_string(t) + " received no votes");
        }
    }
    return out;
}

PartSegmentation segmentation_from_labels(std::span<const PointLabel> triangle_labels,
                                          std::vector<PartInstance> instances) {
    std::vector<std::int32_t> owners(triangle_labels.size(), -1);
    for (std::size_t t = 0; t < triangle_labels.size(); ++t) {
        const std::int32_t inst = triangle_labels[t].instance;
        if (inst >= 0) {
            if (static_cast<std::size_t>(inst) >= instances.size()) {
                throw Error(ErrorKind::IndexOutOfRange, "unknown instance " + std::to_string(inst));
            }
            owners[t] = inst;
        }
    }
    return PartSegmentation::from_owners(owners, std::move(instances));
}

void save_point_cloud(const SampledPointCloud& cloud, const std::filesystem::path& path) {
    std::vector<PlyColumn> columns;
    const char* pos_names[3] = {"x", "y", "z"};
    const char* nrm_names[3] = {"nx", "ny", "nz"};
    for (int k = 0; k < 3; ++k) {
        PlyColumn c{pos_names[k], "double", {}};
        for (const auto& p : cloud.positions) c.values.push_back(p[k]);
        columns.push_back(std::move(c));
    }
    for (int k = 0; k < 3; ++k) {
        PlyColumn c{nrm_names[k], "double", {}};
        for (const auto& n : cloud.normals) c.values.push_back(n[k]);
        columns.push_back(std::move(c));
    }
    PlyColumn src{"source_triangle", "int", {cloud.source_triangle.begin(), cloud.source_triangle.end()}};
    PlyColumn vid{"vertex_id", "int", {cloud.vertex_id.begin(), cloud.vertex_id.end()}};
    columns.push_back(std::move(src));
    columns.push_back(std::move(vid));
    if (cloud.labels) {
        PlyColumn inst{"instance", "int", {}};
        PlyColumn label{"label", "uchar", {}};
        PlyColumn conf{"confidence", "double", {}};
        for (const auto& l : *cloud.labels) {
            inst.values.push_back(l.instance);
            label.values.push_back(static_cast<double>(static_cast<int>(l.label)));
            conf.values.push_back(l.confidence);
        }
        columns.push_back(std::move(inst));
        columns.push_back(std::move(label));
        columns.push_back(std::move(conf));
    }
    write_ply(path, "vertex", columns);
}

SampledPointCloud load_point_cloud(const std::filesystem::path& path) {
    const PlyData ply = read_ply(path);
    const PlyElement* v = ply.find("vertex");
    if (!v) throw Error(ErrorKind::ParseError, path.string() + ": no vertex element");
    for (const char* name : {"x", "y", "z"}) {
        if (!v->has(name)) throw Error(ErrorKind::ParseError, path.string() + ": missing property " + name);
    }
    SampledPointCloud cloud;
    const std::size_t n = v->count;
    auto column = [&](const char* name) -> const std::vector<double>* {
        auto it = v->scalars.find(name);
        return it == v->scalars.end() ? nullptr : &it->second;
    };
    const auto *x = column("x"), *y = column("y"), *z = column("z");
    const auto *nx = column("nx"), *ny = column("ny"), *nz = column("nz");
    const auto* src = column("source_triangle");
    const auto* vid = column("vertex_id");
    for (std::size_t i = 0; i < n; ++i) {
        cloud.positions.emplace_back((*x)[i], (*y)[i], (*z)[i]);
        cloud.normals.push_back(nx && ny && nz ? Vec3((*nx)[i], (*ny)[i], (*nz)[i]) : Vec3::Zero());
        cloud.source_triangle.push_back(src ? static_cast<std::int32_t>((*src)[i]) : -1);
        cloud.vertex_id.push_back(vid ? static_cast<std::int32_t>((*vid)[i]) : -1);
    }
    const auto* inst = column("instance");
    const auto* label = column("label");
    const auto* conf = column("confidence");
    if (inst && label && conf) {
        auto& labels = cloud.labels.emplace();
        for (std::size_t i = 0; i < n; ++i) {
            const int l = static_cast<int>((*label)[i]);
            if (l < 0 || l > static_cast<int>(PartLabel::Base)) {
                throw Error(ErrorKind::ParseError, path.string() + ": bad label value");
            }
            labels.push_back({static_cast<std::int32_t>((*inst)[i]), static_cast<PartLabel>(l), (*conf)[i]});
        }
    }
    return cloud;
}

}  // namespace openable
