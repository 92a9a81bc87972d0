// SPDX-License-Identifier: MIT
#include "openable/Metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "openable/AnnotationIO.h"
#include "openable/Assignment.h"
#include "openable/Error.h"
#include "openable/Giou.h"
#include "openable/MeshIO.h"

namespace openable {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_cover(const PartSegmentation& seg, std::size_t n, const char* what) {
    std::size_t total = seg.base_triangles.size();
    for (const auto& p : seg.parts) total += p.triangle_ids.size();
    if (total != n) {
        throw Error(ErrorKind::ShapeMismatch,
                    fmt::format("{} segmentation covers {} triangles, mesh has {}", what, total, n));
    }
    try {
        seg.validate(n);
    } catch (const Error& e) {
        throw Error(ErrorKind::ShapeMismatch, fmt::format("{} segmentation: {}", what, e.what()));
    }
}

double mean_or(double sum, std::size_t count, double fallback) {
    return count ? sum / static_cast<double>(count) : fallback;
}

void add_scores(MotionScores& into, const MotionScores& s) {
    into.preds += s.preds;
    into.gts += s.gts;
    into.matched += s.matched;
    into.m += s.m;
    into.ma += s.ma;
    into.mao += s.mao;
    into.axis_error_sum += s.axis_error_sum;
    into.axis_error_count += s.axis_error_count;
    into.origin_error_sum += s.origin_error_sum;
    into.origin_error_frac_sum += s.origin_error_frac_sum;
    into.origin_error_count += s.origin_error_count;
}

}  // namespace

double area_iou(std::span<const std::int32_t> a, std::span<const std::int32_t> b, std::span<const double> areas) {
    double inter = 0.0, uni = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            uni += areas[a[i++]];
        } else if (i == a.size() || b[j] < a[i]) {
            uni += areas[b[j++]];
        } else {
            inter += areas[a[i]];
            uni += areas[a[i]];
            ++i;
            ++j;
        }
    }
    return uni > 0.0 ? inter / uni : 0.0;
}

Matching match_parts(const PartSegmentation& preds, const PartSegmentation& gts, std::span<const double> areas,
                     double iou_threshold) {
    check_cover(preds, areas.size(), "predicted");
    check_cover(gts, areas.size(), "ground-truth");

    Matching out;
    for (const auto& p : preds.parts) out.pred_labels.push_back(p.label);
    for (const auto& g : gts.parts) out.gt_labels.push_back(g.label);

    std::vector<std::int32_t> order(preds.parts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return preds.parts[a].confidence > preds.parts[b].confidence;
    });

    std::vector<bool> taken(gts.parts.size(), false);
    for (std::int32_t pi : order) {
        const auto& p = preds.parts[pi];
        std::int32_t best = -1;
        double best_iou = -1.0;
        for (std::size_t gi = 0; gi < gts.parts.size(); ++gi) {
            if (taken[gi] || gts.parts[gi].label != p.label) continue;
            double v = area_iou(p.triangle_ids, gts.parts[gi].triangle_ids, areas);
            if (v > best_iou) {
                best_iou = v;
                best = static_cast<std::int32_t>(gi);
            }
        }
        if (best >= 0 && best_iou >= iou_threshold) {
            taken[best] = true;
            out.pairs.push_back({pi, best, best_iou});
        } else {
            out.unmatched_preds.push_back(pi);
        }
    }
    std::sort(out.unmatched_preds.begin(), out.unmatched_preds.end());
    for (std::size_t gi = 0; gi < taken.size(); ++gi) {
        if (!taken[gi]) out.unmatched_gts.push_back(static_cast<std::int32_t>(gi));
    }
    return out;
}

double f1_score(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

SegReport seg_prf(std::span<const Matching> matchings) {
    if (matchings.empty()) throw Error(ErrorKind::EmptyInput, "no objects to score");
    SegReport r;
    std::size_t tp = 0, np = 0, ng = 0;
    double sp = 0.0, sr = 0.0, sf = 0.0;
    std::size_t cp = 0, cr = 0, cf = 0;
    std::map<PartLabel, std::array<std::size_t, 3>> per;  // matched, preds, gts

    for (const auto& m : matchings) {
        ObjectCounts c{m.num_preds(), m.num_gts(), m.matched()};
        r.per_object.push_back(c);
        tp += c.matched;
        np += c.preds;
        ng += c.gts;
        if (c.preds) {
            sp += static_cast<double>(c.matched) / c.preds;
            ++cp;
        }
        if (c.gts) {
            sr += static_cast<double>(c.matched) / c.gts;
            ++cr;
        }
        if (c.preds + c.gts) {
            sf += 2.0 * c.matched / static_cast<double>(c.preds + c.gts);
            ++cf;
        }
        for (auto l : m.pred_labels) per[l][1]++;
        for (auto l : m.gt_labels) per[l][2]++;
        for (const auto& pr : m.pairs) per[m.gt_labels[pr.gt]][0]++;
    }

    r.micro.precision = np ? static_cast<double>(tp) / np : 0.0;
    r.micro.recall = ng ? static_cast<double>(tp) / ng : 0.0;
    r.micro.f1 = f1_score(r.micro.precision, r.micro.recall);
    r.macro.precision = mean_or(sp, cp, 0.0);
    r.macro.recall = mean_or(sr, cr, 0.0);
    r.macro.f1 = mean_or(sf, cf, 0.0);
    for (const auto& [label, c] : per) {
        Prf p;
        p.precision = c[1] ? static_cast<double>(c[0]) / c[1] : 0.0;
        p.recall = c[2] ? static_cast<double>(c[0]) / c[2] : 0.0;
        p.f1 = f1_score(p.precision, p.recall);
        r.per_label[label] = p;
    }
    return r;
}

double axis_angle_deg(const Vec3& a, const Vec3& b) {
    double na = a.norm(), nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) return 90.0;
    double s = a.cross(b).norm();
    double c = std::abs(a.dot(b));
    return std::atan2(s, c) * 180.0 / kPi;
}

double point_line_distance(const Vec3& point, const Vec3& origin, const Vec3& axis) {
    Vec3 d = point - origin;
    double n = axis.norm();
    if (!(n > 0.0)) return d.norm();
    Vec3 u = axis / n;
    return (d - d.dot(u) * u).norm();
}

std::array<bool, 3> motion_criteria(const std::optional<MotionSpec>& pred, const std::optional<MotionSpec>& gt,
                                    double gt_diagonal, const MotionTolerances& tol) {
    if (!pred || !gt || pred->type != gt->type) return {false, false, false};
    bool axis_ok = axis_angle_deg(pred->axis, gt->axis) <= tol.axis_deg;
    bool origin_ok = true;
    if (gt->type == MotionType::Revolute) {
        origin_ok = pred->origin && gt->origin &&
                    point_line_distance(*pred->origin, *gt->origin, gt->axis) <= tol.origin_frac * gt_diagonal;
    }
    return {true, axis_ok, axis_ok && origin_ok};
}

MotionReport motion_metrics(std::span<const MotionObject> objects, const MotionTolerances& tol) {
    MotionReport report;
    for (const auto& obj : objects) {
        const auto& m = obj.matching;
        for (auto l : m.pred_labels) {
            report.overall.preds++;
            report.per_label[l].preds++;
        }
        for (auto l : m.gt_labels) {
            report.overall.gts++;
            report.per_label[l].gts++;
        }
        for (const auto& pair : m.pairs) {
            const auto& p = obj.preds.parts.at(pair.pred);
            const auto& g = obj.gts.parts.at(pair.gt);
            double diag = obj.gt_diagonals.at(pair.gt);
            MotionScores s;
            s.matched = 1;
            auto crit = motion_criteria(p.motion, g.motion, diag, tol);
            s.m = crit[0];
            s.ma = crit[1];
            s.mao = crit[2];
            if (p.motion && g.motion) {
                s.axis_error_sum = axis_angle_deg(p.motion->axis, g.motion->axis);
                s.axis_error_count = 1;
                if (p.motion->origin && g.motion->origin) {
                    double d = point_line_distance(*p.motion->origin, *g.motion->origin, g.motion->axis);
                    s.origin_error_sum = d;
                    s.origin_error_frac_sum = diag > 0.0 ? d / diag : 0.0;
                    s.origin_error_count = 1;
                }
            }
            add_scores(report.overall, s);
            add_scores(report.per_label[g.label], s);
        }
    }
    return report;
}

SemanticAccuracy ca_nca(const PartSegmentation& pred, const PartSegmentation& gt, std::span<const double> areas) {
    check_cover(pred, areas.size(), "predicted");
    check_cover(gt, areas.size(), "ground-truth");
    auto lp = pred.triangle_labels(areas.size());
    auto lg = gt.triangle_labels(areas.size());

    double total = 0.0, correct = 0.0, nb_total = 0.0, nb_correct = 0.0;
    std::map<PartLabel, std::array<double, 2>> per;  // correct, total
    for (std::size_t t = 0; t < areas.size(); ++t) {
        double a = areas[t];
        bool ok = lp[t] == lg[t];
        total += a;
        if (ok) correct += a;
        per[lg[t]][1] += a;
        if (ok) per[lg[t]][0] += a;
        if (is_openable(lp[t]) || is_openable(lg[t])) {
            nb_total += a;
            if (ok) nb_correct += a;
        }
    }
    if (!(total > 0.0)) throw Error(ErrorKind::DegenerateMesh, "mesh has zero surface area");

    SemanticAccuracy r;
    r.ca = correct / total;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [label, v] : per) {
        if (v[1] > 0.0) {
            sum += v[0] / v[1];
            ++count;
        }
    }
    r.nca = mean_or(sum, count, 1.0);
    r.ca_nb = nb_total > 0.0 ? nb_correct / nb_total : 1.0;
    return r;
}

double weighted_ari(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                    std::span<const double> weights) {
    if (a.size() != b.size() || a.size() != weights.size()) {
        throw Error(ErrorKind::ShapeMismatch, "ARI inputs differ in length");
    }
    auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
    std::map<std::pair<std::int32_t, std::int32_t>, double> joint;
    std::map<std::int32_t, double> ra, rb;
    double n = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += weights[i];
        ra[a[i]] += weights[i];
        rb[b[i]] += weights[i];
        n += weights[i];
    }
    double index = 0.0, sa = 0.0, sb = 0.0;
    for (const auto& [k, v] : joint) index += c2(v);
    for (const auto& [k, v] : ra) sa += c2(v);
    for (const auto& [k, v] : rb) sb += c2(v);
    double total = c2(n);
    if (!(std::abs(total) > 0.0)) return 1.0;
    double expected = sa * sb / total;
    double denom = 0.5 * (sa + sb) - expected;
    if (std::abs(denom) <= 1e-12 * std::max(1.0, std::abs(total))) return 1.0;
    return (index - expected) / denom;
}

double ari(const PartSegmentation& pred, const PartSegmentation& gt, std::span<const double> areas) {
    check_cover(pred, areas.size(), "predicted");
    check_cover(gt, areas.size(), "ground-truth");
    double sum = std::accumulate(areas.begin(), areas.end(), 0.0);
    if (!(sum > 0.0)) throw Error(ErrorKind::DegenerateMesh, "mesh has zero surface area");
    std::vector<double> w(areas.size());
    double scale = static_cast<double>(areas.size()) / sum;
    for (std::size_t t = 0; t < areas.size(); ++t) w[t] = areas[t] * scale;
    auto oa = pred.owners(areas.size());
    auto ob = gt.owners(areas.size());
    return weighted_ari(oa, ob, w);
}

double oc_pair_cost(const DetectionBox& pred, const DetectionBox& gt, double lambda) {
    double g;
    Vec3 ep = (pred.box.max - pred.box.min).cwiseMax(0.0);
    Vec3 eg = (gt.box.max - gt.box.min).cwiseMax(0.0);
    if (ep.prod() <= 0.0 && eg.prod() <= 0.0) {
        g = (pred.box.min == gt.box.min && pred.box.max == gt.box.max) ? 1.0 : -1.0;
    } else {
        g = giou3d(pred.box, gt.box);
    }
    double conf = std::clamp(pred.confidence, 0.0, 1.0);
    double cls = pred.label == gt.label ? (1.0 - conf) / 2.0 : (1.0 + conf) / 2.0;
    return lambda * (1.0 - g) / 2.0 + (1.0 - lambda) * cls;
}

double oc_cost(const std::vector<DetectionBox>& preds, const std::vector<DetectionBox>& gts, double lambda,
               double beta) {
    const std::size_t n = preds.size(), m = gts.size();
    if (n == 0 && m == 0) return 0.0;
    // Each side gets uniform mass over n+1 (resp. m+1) atoms, scaled to
    // integers by the common denominator (n+1)(m+1).
    std::vector<long> supply(n + 1, static_cast<long>(m + 1));
    std::vector<long> demand(m + 1, static_cast<long>(n + 1));
    Eigen::MatrixXd cost(n + 1, m + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) cost(i, j) = oc_pair_cost(preds[i], gts[j], lambda);
        cost(i, m) = beta;
    }
    for (std::size_t j = 0; j < m; ++j) cost(n, j) = beta;
    cost(n, m) = 0.0;
    double total = 0.0;
    solve_transport(supply, demand, cost, &total);
    return total / static_cast<double>((n + 1) * (m + 1));
}

std::vector<Aabb> part_boxes(const PartSegmentation& seg, const TriMesh& mesh, const Frame& frame) {
    Eigen::Matrix3d basis;
    basis.col(0) = frame.right().normalized();
    basis.col(1) = frame.front.normalized();
    basis.col(2) = frame.up.normalized();
    std::vector<Aabb> boxes;
    boxes.reserve(seg.parts.size());
    for (const auto& p : seg.parts) {
        Aabb box;
        for (auto t : p.triangle_ids) {
            for (int k = 0; k < 3; ++k) box.extend(Vec3(basis.transpose() * mesh.vertices[mesh.triangles[t][k]]));
        }
        boxes.push_back(box);
    }
    return boxes;
}

EvalReport evaluate(std::vector<EvalObject> objects, const EvalOptions& options) {
    std::sort(objects.begin(), objects.end(),
              [](const EvalObject& a, const EvalObject& b) { return a.name < b.name; });
    EvalReport report;
    report.options = options;
    std::vector<Matching> matchings;
    std::vector<MotionObject> motions;
    double sum_ca = 0.0, sum_nca = 0.0, sum_nb = 0.0, sum_ari = 0.0, sum_oc = 0.0;

    for (auto& obj : objects) {
        ObjectResult res;
        res.name = obj.name;
        try {
            auto areas = triangle_areas(obj.mesh);
            Matching m = match_parts(obj.pred, obj.gt, areas, options.iou_threshold);
            SemanticAccuracy acc = ca_nca(obj.pred, obj.gt, areas);
            double a = ari(obj.pred, obj.gt, areas);

            auto pb = part_boxes(obj.pred, obj.mesh, obj.frame);
            auto gb = part_boxes(obj.gt, obj.mesh, obj.frame);
            std::vector<DetectionBox> pd, gd;
            for (std::size_t i = 0; i < pb.size(); ++i) {
                pd.push_back({obj.pred.parts[i].label, obj.pred.parts[i].confidence, pb[i]});
            }
            for (std::size_t i = 0; i < gb.size(); ++i) gd.push_back({obj.gt.parts[i].label, 1.0, gb[i]});
            double oc = oc_cost(pd, gd, options.oc_lambda, options.oc_beta);

            std::vector<double> diagonals;
            for (const auto& b : gb) diagonals.push_back((b.max - b.min).norm());

            res.counts = {m.num_preds(), m.num_gts(), m.matched()};
            res.accuracy = acc;
            res.ari = a;
            res.oc_cost = oc;
            sum_ca += acc.ca;
            sum_nca += acc.nca;
            sum_nb += acc.ca_nb;
            sum_ari += a;
            sum_oc += oc;
            motions.push_back({m, std::move(obj.pred), std::move(obj.gt), std::move(diagonals)});
            matchings.push_back(std::move(m));
        } catch (const std::exception& e) {
            spdlog::warn("skipping '{}': {}", obj.name, e.what());
            res.skipped = true;
            res.error = e.what();
        }
        report.objects.push_back(std::move(res));
    }

    report.evaluated = matchings.size();
    report.skipped = report.objects.size() - report.evaluated;
    if (matchings.empty()) throw Error(ErrorKind::EmptyInput, "no objects could be evaluated");
    report.segmentation = seg_prf(matchings);
    report.motion = motion_metrics(motions, options.tolerances);
    double k = static_cast<double>(report.evaluated);
    report.mean_accuracy = {sum_ca / k, sum_nca / k, sum_nb / k};
    report.mean_ari = sum_ari / k;
    report.mean_oc_cost = sum_oc / k;
    return report;
}

EvalReport evaluate(const std::vector<EvalInput>& inputs, const EvalOptions& options) {
    std::vector<EvalObject> objects;
    std::vector<ObjectResult> failed;
    for (const auto& in : inputs) {
        try {
            EvalObject obj;
            obj.name = in.name;
            obj.mesh = load_mesh(in.mesh);
            Annotation gt = load_annotation(in.gt, obj.mesh);
            Annotation pred = load_annotation(in.pred, obj.mesh);
            obj.frame = gt.frame;
            obj.gt = std::move(gt.segmentation);
            obj.pred = std::move(pred.segmentation);
            objects.push_back(std::move(obj));
        } catch (const std::exception& e) {
            spdlog::warn("skipping '{}': {}", in.name, e.what());
            ObjectResult r;
            r.name = in.name;
            r.skipped = true;
            r.error = e.what();
            failed.push_back(std::move(r));
        }
    }
    EvalReport report;
    if (objects.empty()) throw Error(ErrorKind::EmptyInput, "no objects could be loaded");
    report = evaluate(std::move(objects), options);
    for (auto& r : failed) report.objects.push_back(std::move(r));
    std::sort(report.objects.begin(), report.objects.end(),
              [](const ObjectResult& a, const ObjectResult& b) { return a.name < b.name; });
    report.skipped += failed.size();
    return report;
}

std::vector<EvalInput> discover_eval_inputs(const std::filesystem::path& gt_dir,
                                            const std::filesystem::path& pred_dir,
                                            const std::filesystem::path& mesh_dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(gt_dir)) throw Error(ErrorKind::IoError, "not a directory: " + gt_dir.string());
    std::vector<EvalInput> out;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        EvalInput in;
        in.name = entry.path().stem().string();
        in.gt = entry.path();
        in.pred = pred_dir / (in.name + ".json");
        for (const char* ext : {".obj", ".ply", ".glb", ".gltf"}) {
            fs::path candidate = mesh_dir / (in.name + ext);
            if (fs::exists(candidate)) {
                in.mesh = candidate;
                break;
            }
        }
        if (in.mesh.empty()) in.mesh = mesh_dir / (in.name + ".obj");
        out.push_back(std::move(in));
    }
    std::sort(out.begin(), out.end(), [](const EvalInput& a, const EvalInput& b) { return a.name < b.name; });
    return out;
}

namespace {

nlohmann::json prf_json(const Prf& p) {
    return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

nlohmann::json scores_json(const MotionScores& s) {
    return {
        {"preds", s.preds},
        {"gts", s.gts},
        {"matched", s.matched},
        {"precision", {{"M", s.precision(s.m)}, {"MA", s.precision(s.ma)}, {"MAO", s.precision(s.mao)}}},
        {"recall", {{"M", s.recall(s.m)}, {"MA", s.recall(s.ma)}, {"MAO", s.recall(s.mao)}}},
        {"axis_error_deg", s.mean_axis_error()},
        {"origin_error", s.mean_origin_error()},
        {"origin_error_frac", s.mean_origin_error_frac()},
    };
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["options"] = {{"iou_threshold", options.iou_threshold},
                      {"axis_tol_deg", options.tolerances.axis_deg},
                      {"origin_tol_frac", options.tolerances.origin_frac},
                      {"oc_lambda", options.oc_lambda},
                      {"oc_beta", options.oc_beta}};
    doc["evaluated"] = evaluated;
    doc["skipped"] = skipped;
    nlohmann::json seg = {{"micro", prf_json(segmentation.micro)}, {"macro", prf_json(segmentation.macro)}};
    for (const auto& [label, p] : segmentation.per_label) seg["per_label"][std::string(to_string(label))] = prf_json(p);
    doc["segmentation"] = seg;
    nlohmann::json mot = scores_json(motion.overall);
    for (const auto& [label, s] : motion.per_label) mot["per_label"][std::string(to_string(label))] = scores_json(s);
    doc["motion"] = mot;
    doc["accuracy"] = {{"ca", mean_accuracy.ca}, {"nca", mean_accuracy.nca}, {"ca_nb", mean_accuracy.ca_nb}};
    doc["ari"] = mean_ari;
    doc["oc_cost"] = mean_oc_cost;
    doc["objects"] = nlohmann::json::array();
    for (const auto& o : objects) {
        nlohmann::json j = {{"name", o.name}, {"skipped", o.skipped}};
        if (o.skipped) {
            j["error"] = o.error;
        } else {
            j["preds"] = o.counts.preds;
            j["gts"] = o.counts.gts;
            j["matched"] = o.counts.matched;
            j["ca"] = o.accuracy.ca;
            j["nca"] = o.accuracy.nca;
            j["ca_nb"] = o.accuracy.ca_nb;
            j["ari"] = o.ari;
            j["oc_cost"] = o.oc_cost;
        }
        doc["objects"].push_back(std::move(j));
    }
    return doc;
}

std::string EvalReport::to_markdown() const {
    auto pct = [](double v) { return fmt::format("{:.1f}", 100.0 * v); };
    std::string out;
    out += fmt::format("Evaluated {} objects ({} skipped).\n\n", evaluated, skipped);
    out += "| | Precision | Recall | F1 |\n|---|---|---|---|\n";
    out += fmt::format("| micro | {} | {} | {} |\n", pct(segmentation.micro.precision),
                       pct(segmentation.micro.recall), pct(segmentation.micro.f1));
    out += fmt::format("| macro | {} | {} | {} |\n", pct(segmentation.macro.precision),
                       pct(segmentation.macro.recall), pct(segmentation.macro.f1));
    for (const auto& [label, p] : segmentation.per_label) {
        out += fmt::format("| {} | {} | {} | {} |\n", to_string(label), pct(p.precision), pct(p.recall), pct(p.f1));
    }
    out += "\n| | P+M | P+MA | P+MAO | R+M | R+MA | R+MAO | AE (deg) | OE | OE (frac) |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|\n";
    auto row = [&](std::string_view name, const MotionScores& s) {
        return fmt::format("| {} | {} | {} | {} | {} | {} | {} | {:.2f} | {:.4f} | {:.3f} |\n", name,
                           pct(s.precision(s.m)), pct(s.precision(s.ma)), pct(s.precision(s.mao)),
                           pct(s.recall(s.m)), pct(s.recall(s.ma)), pct(s.recall(s.mao)), s.mean_axis_error(),
                           s.mean_origin_error(), s.mean_origin_error_frac());
    };
    out += row("all", motion.overall);
    for (const auto& [label, s] : motion.per_label) out += row(to_string(label), s);
    out += "\n| CA | NCA | CA (no base) | ARI | OC-cost |\n|---|---|---|---|---|\n";
    out += fmt::format("| {} | {} | {} | {:.3f} | {:.3f} |\n", pct(mean_accuracy.ca), pct(mean_accuracy.nca),
                       pct(mean_accuracy.ca_nb), mean_ari, mean_oc_cost);
    return out;
}

}  // namespace openable
