// SPDX-License-Identifier: MIT
#include "Oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace openable::testing {

std::vector<std::int32_t> fps_reference(std::span<const Vec3> points, std::size_t m) {
    const std::size_t n = points.size();
    auto d2 = [](const Vec3& a, const Vec3& b) {
        const double dx = a.x() - b.x(), dy = a.y() - b.y(), dz = a.z() - b.z();
        return (dx * dx + dy * dy) + dz * dz;
    };
    Vec3 c = Vec3::Zero();
    for (const auto& p : points) c += p;
    c /= static_cast<double>(n);
    std::size_t first = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (d2(points[i], c) > d2(points[first], c)) first = i;
    }
    std::vector<std::int32_t> out{static_cast<std::int32_t>(first)};
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<bool> taken(n, false);
    taken[first] = true;
    while (out.size() < m) {
        const Vec3& last = points[out.back()];
        std::size_t arg = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            best[i] = std::min(best[i], d2(points[i], last));
            if (arg == n || best[i] > best[arg]) arg = i;
        }
        taken[arg] = true;
        out.push_back(static_cast<std::int32_t>(arg));
    }
    return out;
}

std::size_t exhaustive_match_count(const PartSegmentation& preds, const PartSegmentation& gts,
                                   std::span<const double> areas, double threshold) {
    const std::size_t np = preds.parts.size(), ng = gts.parts.size();
    std::vector<std::vector<bool>> ok(np, std::vector<bool>(ng, false));
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < ng; ++j) {
            if (preds.parts[i].label != gts.parts[j].label) continue;
            std::vector<std::int32_t> inter, uni;
            const auto& a = preds.parts[i].triangle_ids;
            const auto& b = gts.parts[j].triangle_ids;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
            double ai = 0.0, au = 0.0;
            for (auto t : inter) ai += areas[t];
            for (auto t : uni) au += areas[t];
            ok[i][j] = au > 0.0 && ai / au >= threshold;
        }
    }
    std::vector<bool> used(ng, false);
    std::function<std::size_t(std::size_t)> best = [&](std::size_t i) -> std::size_t {
        if (i == np) return 0;
        std::size_t r = best(i + 1);  // leave prediction i unmatched
        for (std::size_t j = 0; j < ng; ++j) {
            if (!ok[i][j] || used[j]) continue;
            used[j] = true;
            r = std::max(r, 1 + best(i + 1));
            used[j] = false;
        }
        return r;
    };
    return best(0);
}

double oc_cost_reference(const std::vector<DetectionBox>& preds, const std::vector<DetectionBox>& gts,
                         double lambda, double beta) {
    const std::size_t n = preds.size(), m = gts.size();
    if (n == 0 && m == 0) return 0.0;
    // Row atom r belongs to prediction r / (m+1) (n = dummy); column atom c
    // to GT c / (n+1) (m = dummy).
    const std::size_t units = (n + 1) * (m + 1);
    std::vector<double> cost((n + 1) * (m + 1), beta);
    cost.back() = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) cost[i * (m + 1) + j] = oc_pair_cost(preds[i], gts[j], lambda);
    }
    std::vector<std::size_t> perm(units);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t r = 0; r < units; ++r) total += cost[(r / (m + 1)) * (m + 1) + perm[r] / (n + 1)];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(units);
}

bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 d = q - p;
    const Vec3 e1 = b - a, e2 = c - a;
    const Vec3 h = d.cross(e2);
    const double det = e1.dot(h);
    const double scale = e1.norm() * e2.norm() * d.norm();
    if (std::abs(det) <= 1e-12 * scale) return false;  // parallel: treated as no crossing
    const double inv = 1.0 / det;
    const Vec3 s = p - a;
    const double u = inv * s.dot(h);
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 k = s.cross(e1);
    const double v = inv * d.dot(k);
    if (v < 0.0 || u + v > 1.0) return false;
    const double t = inv * e2.dot(k);
    return t >= 0.0 && t <= 1.0;
}

namespace {

bool edges_cross(const TriMesh& a, const TriMesh& b) {
    for (const auto& ta : a.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Vec3& p = a.vertices[ta[k]];
            const Vec3& q = a.vertices[ta[(k + 1) % 3]];
            const Aabb seg = Aabb::from_min_max(p.cwiseMin(q), p.cwiseMax(q));
            for (const auto& tb : b.triangles) {
                const Vec3& x = b.vertices[tb[0]];
                const Vec3& y = b.vertices[tb[1]];
                const Vec3& z = b.vertices[tb[2]];
                const Vec3 lo = x.cwiseMin(y).cwiseMin(z), hi = x.cwiseMax(y).cwiseMax(z);
                if ((hi.array() < seg.min.array()).any() || (lo.array() > seg.max.array()).any()) continue;
                if (segment_hits_triangle(p, q, x, y, z)) return true;
            }
        }
    }
    return false;
}

}  // namespace

bool meshes_collide(const TriMesh& a, const TriMesh& b) { return edges_cross(a, b) || edges_cross(b, a); }

bool is_closed_manifold(const TriMesh& mesh) {
    std::map<std::pair<std::int32_t, std::int32_t>, int> count;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            auto a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++count[{a, b}];
        }
    }
    return !count.empty() &&
           std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 2; });
}

bool same_geometry(const TriMesh& a, const TriMesh& b, double tol) {
    auto key = [tol](const TriMesh& m) {
        std::vector<std::array<double, 9>> out;
        for (const auto& t : m.triangles) {
            std::array<double, 9> k{};
            for (int c = 0; c < 3; ++c) {
                for (int d = 0; d < 3; ++d) {
                    const double x = m.vertices[t[c]][d];
                    k[3 * c + d] = tol > 0.0 ? std::round(x / tol) : x;
                }
            }
            out.push_back(k);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    return key(a) == key(b);
}

}  // namespace openable::testing
