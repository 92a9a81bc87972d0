// SPDX-License-Identifier: MIT
#include "openable/Urdf.h"

#include <fmt/format.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "openable/Error.h"
#include "openable/MeshIO.h"

namespace openable {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? std::string("part") : out;
}

std::string triple(const Vec3& v) { return fmt::format("{} {} {}", v.x(), v.y(), v.z()); }

Vec3 parse_triple(const std::string& text, const std::string& what) {
    std::istringstream in(text);
    Vec3 v;
    if (!(in >> v.x() >> v.y() >> v.z())) {
        throw Error(ErrorKind::ParseError, "bad " + what + " '" + text + "'");
    }
    return v;
}

}  // namespace

MotionRange default_motion_range(const ArticulatedPart& part) {
    if (part.motion.type == MotionType::Revolute) return {0.0, std::numbers::pi / 2.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : part.mesh.vertices) {
        const double s = v.dot(part.motion.axis);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {0.0, part.mesh.vertices.empty() ? 0.0 : 0.9 * (hi - lo)};
}

UrdfManifest export_urdf(const ArticulatedObject& obj, const fs::path& out_dir) {
    obj.validate();
    std::error_code ec;
    fs::create_directories(out_dir / "meshes", ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + (out_dir / "meshes").string() + ": " + ec.message());

    UrdfManifest manifest;
    const std::string robot = sanitize(obj.name);
    manifest.urdf = out_dir / (robot + ".urdf");

    std::set<std::string> used{"base"};
    std::string xml = fmt::format("<?xml version=\"1.0\"?>\n<robot name=\"{}\">\n", robot);
    auto link_xml = [&](const std::string& link, const std::string& mesh, const Vec3& offset) {
        const std::string geometry = fmt::format(
                "      <origin xyz=\"{}\" rpy=\"0 0 0\"/>\n      <geometry>\n"
                "        <mesh filename=\"meshes/{}\"/>\n      </geometry>\n",
                triple(offset), mesh);
        return fmt::format("  <link name=\"{}\">\n    <visual>\n{}    </visual>\n"
                           "    <collision>\n{}    </collision>\n  </link>\n",
                           link, geometry, geometry);
    };

    save_obj(obj.base, out_dir / "meshes" / "base.obj");
    manifest.meshes.push_back(out_dir / "meshes" / "base.obj");
    xml += link_xml("base", "base.obj", Vec3::Zero());

    for (const auto& part : obj.parts) {
        std::string link = sanitize(part.id);
        for (int k = 1; used.count(link); ++k) link = sanitize(part.id) + "_" + std::to_string(k);
        used.insert(link);
        const std::string mesh = link + ".obj";
        save_obj(part.mesh, out_dir / "meshes" / mesh);
        manifest.meshes.push_back(out_dir / "meshes" / mesh);

        const MotionSpec& m = part.motion;
        const Vec3 origin = m.type == MotionType::Revolute ? *m.origin : Vec3::Zero();
        const MotionRange range = m.range ? *m.range : default_motion_range(part);
        xml += link_xml(link, mesh, -origin);
        xml += fmt::format(
                "  <joint name=\"{}_joint\" type=\"{}\">\n"
                "    <parent link=\"base\"/>\n    <child link=\"{}\"/>\n"
                "    <origin xyz=\"{}\" rpy=\"0 0 0\"/>\n    <axis xyz=\"{}\"/>\n"
                "    <limit lower=\"{}\" upper=\"{}\" effort=\"100\" velocity=\"1\"/>\n"
                "  </joint>\n",
                link, to_string(m.type), link, triple(origin), triple(m.axis), range.lower, range.upper);
    }
    xml += "</robot>\n";

    std::ofstream out(manifest.urdf);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + manifest.urdf.string());
    out << xml;
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + manifest.urdf.string());
    return manifest;
}

UrdfModel parse_urdf(const fs::path& path) {
    pt::ptree tree;
    try {
        pt::read_xml(path.string(), tree);
    } catch (const pt::ptree_error& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    UrdfModel model;
    try {
        const auto& robot = tree.get_child("robot");
        model.name = robot.get<std::string>("<xmlattr>.name", "");
        for (const auto& [tag, node] : robot) {
            if (tag == "link") {
                UrdfLink link;
                link.name = node.get<std::string>("<xmlattr>.name");
                if (auto visual = node.get_child_optional("visual")) {
                    link.mesh = visual->get<std::string>("geometry.mesh.<xmlattr>.filename", "");
                    link.visual_xyz = parse_triple(visual->get<std::string>("origin.<xmlattr>.xyz", "0 0 0"), "xyz");
                }
                model.links.push_back(std::move(link));
            } else if (tag == "joint") {
                UrdfJoint joint;
                joint.name = node.get<std::string>("<xmlattr>.name");
                joint.type = node.get<std::string>("<xmlattr>.type");
                joint.parent = node.get<std::string>("parent.<xmlattr>.link");
                joint.child = node.get<std::string>("child.<xmlattr>.link");
                joint.origin_xyz = parse_triple(node.get<std::string>("origin.<xmlattr>.xyz", "0 0 0"), "xyz");
                joint.origin_rpy = parse_triple(node.get<std::string>("origin.<xmlattr>.rpy", "0 0 0"), "rpy");
                joint.axis = parse_triple(node.get<std::string>("axis.<xmlattr>.xyz", "1 0 0"), "axis");
                joint.lower = node.get<double>("limit.<xmlattr>.lower", 0.0);
                joint.upper = node.get<double>("limit.<xmlattr>.upper", 0.0);
                model.joints.push_back(std::move(joint));
            }
        }
    } catch (const pt::ptree_error& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    return model;
}

}  // namespace openable
