// SPDX-License-Identifier: MIT
#include "openable/MeshIO.h"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "openable/Error.h"

namespace openable {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_double(std::string_view token, const fs::path& path, std::size_t line) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::ParseError,
                    fmt::format("{}:{}: bad number '{}'", path.string(), line, token));
    }
    return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

// Appends triangles for a polygon given as mesh-vertex indices. Triangles
// that repeat a vertex are dropped so the mesh invariants hold.
void add_polygon(TriMesh& mesh, const std::vector<std::int32_t>& poly, const fs::path& path,
                 std::size_t line) {
    if (poly.size() < 3) {
        throw Error(ErrorKind::ParseError, fmt::format("{}:{}: face with fewer than 3 vertices",
                                                       path.string(), line));
    }
    if (poly.size() > 4) {
        throw Error(ErrorKind::UnsupportedFace,
                    fmt::format("{}:{}: {}-gon faces are not supported", path.string(), line,
                                poly.size()));
    }
    auto emit = [&](std::int32_t a, std::int32_t b, std::int32_t c) {
        if (a == b || b == c || a == c) {
            spdlog::warn("{}:{}: dropping degenerate triangle", path.string(), line);
            return;
        }
        mesh.triangles.emplace_back(a, b, c);
    };
    emit(poly[0], poly[1], poly[2]);
    if (poly.size() == 4) emit(poly[0], poly[2], poly[3]);
}

std::optional<std::string> texture_from_mtl(const fs::path& mtl) {
    std::ifstream in(mtl);
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        const auto tokens = split_ws(line);
        if (tokens.size() >= 2 && tokens[0] == "map_Kd") {
            return (mtl.parent_path() / std::string(tokens.back())).string();
        }
    }
    return std::nullopt;
}

}  // namespace

TriMesh load_mesh(const fs::path& path) {
    if (!fs::exists(path)) throw Error(ErrorKind::ParseError, "no such file " + path.string());
    const std::string ext = lower_extension(path);
    TriMesh mesh;
    if (ext == ".obj") {
        mesh = load_obj(path);
    } else if (ext == ".ply") {
        mesh = load_ply(path);
    } else if (ext == ".gltf" || ext == ".glb") {
        mesh = load_gltf(path);
    } else {
        throw Error(ErrorKind::ParseError, "unsupported mesh extension '" + ext + "'");
    }
    try {
        mesh.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    return mesh;
}

void save_mesh(const TriMesh& mesh, const fs::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".obj") {
        save_obj(mesh, path);
    } else if (ext == ".ply") {
        save_ply(mesh, path);
    } else {
        throw Error(ErrorKind::IoError, "cannot write mesh format '" + ext + "'");
    }
}

// ---------------------------------------------------------------- OBJ

TriMesh load_obj(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());

    std::vector<Vec3> positions;
    std::vector<Vec3> colors;
    std::vector<Vec2> texcoords;
    std::vector<Vec3> normals;
    struct Corner {
        std::int64_t v, t, n;
    };
    std::vector<std::vector<Corner>> faces;
    std::vector<std::size_t> face_lines;
    std::optional<std::string> texture;
    bool any_color = false;

    auto resolve = [](std::int64_t idx, std::size_t count) -> std::int64_t {
        if (idx > 0) return idx - 1;
        if (idx < 0) return static_cast<std::int64_t>(count) + idx;
        return -1;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const auto tokens = split_ws(std::string_view(line).substr(0, hash));
        if (tokens.empty()) continue;
        const auto& tag = tokens[0];
        if (tag == "v") {
            if (tokens.size() < 4) {
                throw Error(ErrorKind::ParseError,
                            fmt::format("{}:{}: vertex needs 3 coordinates", path.string(), line_no));
            }
            positions.emplace_back(parse_double(tokens[1], path, line_no),
                                   parse_double(tokens[2], path, line_no),
                                   parse_double(tokens[3], path, line_no));
            if (tokens.size() >= 7) {
                colors.emplace_back(parse_double(tokens[4], path, line_no),
                                    parse_double(tokens[5], path, line_no),
                                    parse_double(tokens[6], path, line_no));
                any_color = true;
            } else {
                colors.emplace_back(1.0, 1.0, 1.0);
            }
        } else if (tag == "vt") {
            if (tokens.size() < 3) {
                throw Error(ErrorKind::ParseError,
                            fmt::format("{}:{}: texcoord needs 2 values", path.string(), line_no));
            }
            texcoords.emplace_back(parse_double(tokens[1], path, line_no),
                                   parse_double(tokens[2], path, line_no));
        } else if (tag == "vn") {
            if (tokens.size() < 4) {
                throw Error(ErrorKind::ParseError,
                            fmt::format("{}:{}: normal needs 3 values", path.string(), line_no));
            }
            normals.emplace_back(parse_double(tokens[1], path, line_no),
                                 parse_double(tokens[2], path, line_no),
                                 parse_double(tokens[3], path, line_no));
        } else if (tag == "f") {
            std::vector<Corner> face;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                Corner c{0, 0, 0};
                std::int64_t* slots[3] = {&c.v, &c.t, &c.n};
                std::size_t slot = 0;
                std::string_view tok = tokens[i];
                std::size_t start = 0;
                while (slot < 3) {
                    const std::size_t slash = tok.find('/', start);
                    const std::string_view part =
                            tok.substr(start, slash == std::string_view::npos ? tok.npos : slash - start);
                    if (!part.empty()) {
                        std::int64_t value = 0;
                        const auto [ptr, ec] =
                                std::from_chars(part.data(), part.data() + part.size(), value);
                        if (ec != std::errc() || ptr != part.data() + part.size()) {
                            throw Error(ErrorKind::ParseError,
                                        fmt::format("{}:{}: bad face index '{}'", path.string(),
                                                    line_no, tok));
                        }
                        *slots[slot] = value;
                    }
                    if (slash == std::string_view::npos) break;
                    start = slash + 1;
                    ++slot;
                }
                c.v = resolve(c.v, positions.size());
                c.t = c.t == 0 ? -1 : resolve(c.t, texcoords.size());
                c.n = c.n == 0 ? -1 : resolve(c.n, normals.size());
                if (c.v < 0 || c.v >= static_cast<std::int64_t>(positions.size()) ||
                    c.t >= static_cast<std::int64_t>(texcoords.size()) ||
                    c.n >= static_cast<std::int64_t>(normals.size())) {
                    throw Error(ErrorKind::ParseError,
                                fmt::format("{}:{}: face index out of range", path.string(), line_no));
                }
                face.push_back(c);
            }
            faces.push_back(std::move(face));
            face_lines.push_back(line_no);
        } else if (tag == "mtllib" && tokens.size() >= 2 && !texture) {
            texture = texture_from_mtl(path.parent_path() / std::string(tokens[1]));
        }
    }

    bool uses_attributes = false;
    bool all_t = !faces.empty();
    bool all_n = !faces.empty();
    for (const auto& face : faces) {
        for (const auto& c : face) {
            uses_attributes |= c.t >= 0 || c.n >= 0;
            all_t &= c.t >= 0;
            all_n &= c.n >= 0;
        }
    }

    TriMesh mesh;
    mesh.texture_path = texture;
    if (!uses_attributes) {
        mesh.vertices = positions;
        if (any_color) mesh.colors = colors;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            std::vector<std::int32_t> poly;
            for (const auto& c : faces[f]) poly.push_back(static_cast<std::int32_t>(c.v));
            add_polygon(mesh, poly, path, face_lines[f]);
        }
        return mesh;
    }

    // Corners with distinct (v, vt, vn) tuples become distinct vertices.
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::int32_t> lookup;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        std::vector<std::int32_t> poly;
        for (const auto& c : faces[f]) {
            const auto key = std::make_tuple(c.v, all_t ? c.t : -1, all_n ? c.n : -1);
            auto [it, inserted] = lookup.try_emplace(key, static_cast<std::int32_t>(mesh.vertices.size()));
            if (inserted) {
                mesh.vertices.push_back(positions[c.v]);
                if (any_color) mesh.colors.push_back(colors[c.v]);
                if (all_t) mesh.uvs.push_back(texcoords[c.t]);
                if (all_n) mesh.normals.push_back(normals[c.n].normalized());
            }
            poly.push_back(it->second);
        }
        add_polygon(mesh, poly, path, face_lines[f]);
    }
    return mesh;
}

void save_obj(const TriMesh& mesh, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    fmt::memory_buffer buf;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        if (mesh.has_colors()) {
            const Vec3& c = mesh.colors[i];
            fmt::format_to(std::back_inserter(buf), "v {:.9f} {:.9f} {:.9f} {:.6f} {:.6f} {:.6f}\n",
                           v.x(), v.y(), v.z(), c.x(), c.y(), c.z());
        } else {
            fmt::format_to(std::back_inserter(buf), "v {:.9f} {:.9f} {:.9f}\n", v.x(), v.y(), v.z());
        }
    }
    for (const auto& uv : mesh.uvs) {
        fmt::format_to(std::back_inserter(buf), "vt {:.9f} {:.9f}\n", uv.x(), uv.y());
    }
    for (const auto& n : mesh.normals) {
        fmt::format_to(std::back_inserter(buf), "vn {:.9f} {:.9f} {:.9f}\n", n.x(), n.y(), n.z());
    }
    for (const auto& tri : mesh.triangles) {
        buf.push_back('f');
        for (int k = 0; k < 3; ++k) {
            const auto idx = tri[k] + 1;
            if (mesh.has_uvs() && mesh.has_normals()) {
                fmt::format_to(std::back_inserter(buf), " {}/{}/{}", idx, idx, idx);
            } else if (mesh.has_uvs()) {
                fmt::format_to(std::back_inserter(buf), " {}/{}", idx, idx);
            } else if (mesh.has_normals()) {
                fmt::format_to(std::back_inserter(buf), " {}//{}", idx, idx);
            } else {
                fmt::format_to(std::back_inserter(buf), " {}", idx);
            }
        }
        buf.push_back('\n');
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

// ---------------------------------------------------------------- PLY

const PlyElement* PlyData::find(const std::string& name) const {
    for (const auto& e : elements) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

namespace {

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

PlyType parse_ply_type(const std::string& name, const fs::path& path) {
    if (name == "char" || name == "int8") return PlyType::Int8;
    if (name == "uchar" || name == "uint8") return PlyType::UInt8;
    if (name == "short" || name == "int16") return PlyType::Int16;
    if (name == "ushort" || name == "uint16") return PlyType::UInt16;
    if (name == "int" || name == "int32") return PlyType::Int32;
    if (name == "uint" || name == "uint32") return PlyType::UInt32;
    if (name == "float" || name == "float32") return PlyType::Float32;
    if (name == "double" || name == "float64") return PlyType::Float64;
    throw Error(ErrorKind::ParseError, path.string() + ": unknown PLY type '" + name + "'");
}

std::size_t ply_size(PlyType t) {
    switch (t) {
        case PlyType::Int8:
        case PlyType::UInt8: return 1;
        case PlyType::Int16:
        case PlyType::UInt16: return 2;
        case PlyType::Int32:
        case PlyType::UInt32:
        case PlyType::Float32: return 4;
        case PlyType::Float64: return 8;
    }
    return 0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::Float32;
    bool is_list = false;
    PlyType count_type = PlyType::UInt8;
};

struct PlyHeaderElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

class BinaryCursor {
public:
    BinaryCursor(const std::string& data, std::size_t offset, bool big_endian, const fs::path& path)
        : data_(data), pos_(offset), big_endian_(big_endian), path_(path) {}

    double read(PlyType t) {
        const std::size_t n = ply_size(t);
        if (pos_ + n > data_.size()) {
            throw Error(ErrorKind::ParseError, path_.string() + ": truncated PLY body");
        }
        unsigned char bytes[8];
        std::memcpy(bytes, data_.data() + pos_, n);
        pos_ += n;
        if (big_endian_ != (std::endian::native == std::endian::big)) std::reverse(bytes, bytes + n);
        switch (t) {
            case PlyType::Int8: { std::int8_t v; std::memcpy(&v, bytes, 1); return v; }
            case PlyType::UInt8: { std::uint8_t v; std::memcpy(&v, bytes, 1); return v; }
            case PlyType::Int16: { std::int16_t v; std::memcpy(&v, bytes, 2); return v; }
            case PlyType::UInt16: { std::uint16_t v; std::memcpy(&v, bytes, 2); return v; }
            case PlyType::Int32: { std::int32_t v; std::memcpy(&v, bytes, 4); return v; }
            case PlyType::UInt32: { std::uint32_t v; std::memcpy(&v, bytes, 4); return v; }
            case PlyType::Float32: { float v; std::memcpy(&v, bytes, 4); return v; }
            case PlyType::Float64: { double v; std::memcpy(&v, bytes, 8); return v; }
        }
        return 0.0;
    }

private:
    const std::string& data_;
    std::size_t pos_;
    bool big_endian_;
    const fs::path& path_;
};

class AsciiCursor {
public:
    AsciiCursor(const std::string& data, std::size_t offset, const fs::path& path)
        : data_(data), pos_(offset), path_(path) {}

    double read(PlyType) {
        while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
        if (start == pos_) throw Error(ErrorKind::ParseError, path_.string() + ": truncated PLY body");
        return parse_double(std::string_view(data_).substr(start, pos_ - start), path_, 0);
    }

private:
    const std::string& data_;
    std::size_t pos_;
    const fs::path& path_;
};

template <typename Cursor>
void read_ply_body(Cursor& cursor, const std::vector<PlyHeaderElement>& header, PlyData& data) {
    for (const auto& he : header) {
        PlyElement element;
        element.name = he.name;
        element.count = he.count;
        for (const auto& p : he.properties) {
            if (p.is_list) {
                element.lists[p.name].reserve(he.count);
            } else {
                element.scalar_names.push_back(p.name);
                element.scalars[p.name].reserve(he.count);
            }
        }
        for (std::size_t i = 0; i < he.count; ++i) {
            for (const auto& p : he.properties) {
                if (p.is_list) {
                    const auto n = static_cast<std::size_t>(cursor.read(p.count_type));
                    std::vector<std::int64_t> values(n);
                    for (auto& v : values) v = static_cast<std::int64_t>(cursor.read(p.type));
                    element.lists[p.name].push_back(std::move(values));
                } else {
                    element.scalars[p.name].push_back(cursor.read(p.type));
                }
            }
        }
        data.elements.push_back(std::move(element));
    }
}

}  // namespace

PlyData read_ply(const fs::path& path) {
    const std::string data = read_file(path);
    if (data.rfind("ply", 0) != 0) throw Error(ErrorKind::ParseError, path.string() + ": not a PLY file");
    const std::size_t end_header = data.find("end_header");
    if (end_header == std::string::npos) {
        throw Error(ErrorKind::ParseError, path.string() + ": missing end_header");
    }
    std::size_t body = data.find('\n', end_header);
    if (body == std::string::npos) throw Error(ErrorKind::ParseError, path.string() + ": empty body");
    ++body;

    std::istringstream header(data.substr(0, end_header));
    std::string line;
    std::string format;
    std::vector<PlyHeaderElement> elements;
    while (std::getline(header, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "format") {
            ls >> format;
        } else if (tag == "element") {
            PlyHeaderElement e;
            ls >> e.name >> e.count;
            if (!ls) throw Error(ErrorKind::ParseError, path.string() + ": bad element line");
            elements.push_back(std::move(e));
        } else if (tag == "property") {
            if (elements.empty()) throw Error(ErrorKind::ParseError, path.string() + ": property before element");
            PlyProperty p;
            std::string type;
            ls >> type;
            if (type == "list") {
                std::string count_type, item_type;
                ls >> count_type >> item_type >> p.name;
                p.is_list = true;
                p.count_type = parse_ply_type(count_type, path);
                p.type = parse_ply_type(item_type, path);
            } else {
                p.type = parse_ply_type(type, path);
                ls >> p.name;
            }
            if (p.name.empty()) throw Error(ErrorKind::ParseError, path.string() + ": unnamed property");
            elements.back().properties.push_back(std::move(p));
        }
    }

    PlyData out;
    if (format == "ascii") {
        AsciiCursor cursor(data, body, path);
        read_ply_body(cursor, elements, out);
    } else if (format == "binary_little_endian" || format == "binary_big_endian") {
        BinaryCursor cursor(data, body, format == "binary_big_endian", path);
        read_ply_body(cursor, elements, out);
    } else {
        throw Error(ErrorKind::ParseError, path.string() + ": unknown PLY format '" + format + "'");
    }
    return out;
}

TriMesh load_ply(const fs::path& path) {
    const PlyData ply = read_ply(path);
    const PlyElement* vertex = ply.find("vertex");
    if (!vertex || !vertex->has("x") || !vertex->has("y") || !vertex->has("z")) {
        throw Error(ErrorKind::ParseError, path.string() + ": PLY without vertex positions");
    }
    TriMesh mesh;
    const auto& xs = vertex->scalars.at("x");
    const auto& ys = vertex->scalars.at("y");
    const auto& zs = vertex->scalars.at("z");
    mesh.vertices.resize(vertex->count);
    for (std::size_t i = 0; i < vertex->count; ++i) mesh.vertices[i] = Vec3(xs[i], ys[i], zs[i]);

    if (vertex->has("nx") && vertex->has("ny") && vertex->has("nz")) {
        const auto& a = vertex->scalars.at("nx");
        const auto& b = vertex->scalars.at("ny");
        const auto& c = vertex->scalars.at("nz");
        mesh.normals.resize(vertex->count);
        for (std::size_t i = 0; i < vertex->count; ++i) mesh.normals[i] = Vec3(a[i], b[i], c[i]);
    }
    auto load_colors = [&](const char* r, const char* g, const char* b) {
        if (!vertex->has(r) || !vertex->has(g) || !vertex->has(b)) return false;
        const auto& rs = vertex->scalars.at(r);
        const auto& gs = vertex->scalars.at(g);
        const auto& bs = vertex->scalars.at(b);
        // Integer channels are 8-bit; float channels are already in [0,1].
        bool integral = true;
        for (std::size_t i = 0; i < vertex->count && integral; ++i) {
            integral = rs[i] == std::floor(rs[i]) && gs[i] == std::floor(gs[i]) &&
                       bs[i] == std::floor(bs[i]) && std::max({rs[i], gs[i], bs[i]}) > 1.0;
        }
        const double scale = integral ? 1.0 / 255.0 : 1.0;
        mesh.colors.resize(vertex->count);
        for (std::size_t i = 0; i < vertex->count; ++i) {
            mesh.colors[i] = Vec3(rs[i], gs[i], bs[i]) * scale;
        }
        return true;
    };
    if (!load_colors("red", "green", "blue")) load_colors("r", "g", "b");
    for (const auto& [un, vn] : {std::pair{"u", "v"}, std::pair{"s", "t"},
                                 std::pair{"texture_u", "texture_v"}}) {
        if (vertex->has(un) && vertex->has(vn)) {
            const auto& us = vertex->scalars.at(un);
            const auto& vs = vertex->scalars.at(vn);
            mesh.uvs.resize(vertex->count);
            for (std::size_t i = 0; i < vertex->count; ++i) mesh.uvs[i] = Vec2(us[i], vs[i]);
            break;
        }
    }

    if (const PlyElement* face = ply.find("face")) {
        const std::vector<std::vector<std::int64_t>>* lists = nullptr;
        for (const char* name : {"vertex_indices", "vertex_index"}) {
            if (auto it = face->lists.find(name); it != face->lists.end()) lists = &it->second;
        }
        if (!lists) throw Error(ErrorKind::ParseError, path.string() + ": face element without indices");
        for (std::size_t f = 0; f < lists->size(); ++f) {
            std::vector<std::int32_t> poly;
            for (auto idx : (*lists)[f]) {
                if (idx < 0 || idx >= static_cast<std::int64_t>(mesh.vertices.size())) {
                    throw Error(ErrorKind::ParseError, path.string() + ": face index out of range");
                }
                poly.push_back(static_cast<std::int32_t>(idx));
            }
            add_polygon(mesh, poly, path, f);
        }
    }
    return mesh;
}

void write_ply(const fs::path& path, const std::string& element,
               const std::vector<PlyColumn>& columns, const std::vector<Tri>* faces) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    const std::size_t count = columns.empty() ? 0 : columns.front().values.size();
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element " << element << ' ' << count << '\n';
    for (const auto& c : columns) out << "property " << c.type << ' ' << c.name << '\n';
    if (faces) {
        out << "element face " << faces->size() << '\n';
        out << "property list uchar int vertex_indices\n";
    }
    out << "end_header\n";
    auto put = [&](const void* p, std::size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
        } else {
            unsigned char bytes[8];
            std::memcpy(bytes, p, n);
            std::reverse(bytes, bytes + n);
            out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(n));
        }
    };
    for (std::size_t i = 0; i < count; ++i) {
        for (const auto& c : columns) {
            const double v = c.values[i];
            if (c.type == "double") {
                put(&v, 8);
            } else if (c.type == "float") {
                const auto f = static_cast<float>(v);
                put(&f, 4);
            } else if (c.type == "int") {
                const auto n = static_cast<std::int32_t>(v);
                put(&n, 4);
            } else if (c.type == "uchar") {
                const auto b = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
                put(&b, 1);
            } else {
                throw Error(ErrorKind::IoError, "unsupported PLY column type " + c.type);
            }
        }
    }
    if (faces) {
        for (const auto& tri : *faces) {
            const std::uint8_t n = 3;
            put(&n, 1);
            for (int k = 0; k < 3; ++k) {
                const std::int32_t idx = tri[k];
                put(&idx, 4);
            }
        }
    }
    if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

void save_ply(const TriMesh& mesh, const fs::path& path) {
    std::vector<PlyColumn> columns;
    auto add = [&](const std::string& name, const std::string& type, auto getter) {
        PlyColumn c{name, type, {}};
        c.values.reserve(mesh.vertices.size());
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i) c.values.push_back(getter(i));
        columns.push_back(std::move(c));
    };
    for (int k = 0; k < 3; ++k) {
        add(std::string(1, "xyz"[k]), "double", [&](std::size_t i) { return mesh.vertices[i][k]; });
    }
    if (mesh.has_normals()) {
        for (int k = 0; k < 3; ++k) {
            add(std::string("n") + "xyz"[k], "double", [&](std::size_t i) { return mesh.normals[i][k]; });
        }
    }
    if (mesh.has_colors()) {
        const char* names[3] = {"red", "green", "blue"};
        for (int k = 0; k < 3; ++k) {
            add(names[k], "uchar",
                [&](std::size_t i) { return std::round(std::clamp(mesh.colors[i][k], 0.0, 1.0) * 255.0); });
        }
    }
    if (mesh.has_uvs()) {
        add("u", "double", [&](std::size_t i) { return mesh.uvs[i].x(); });
        add("v", "double", [&](std::size_t i) { return mesh.uvs[i].y(); });
    }
    write_ply(path, "vertex", columns, &mesh.triangles);
}

// ---------------------------------------------------------------- glTF

namespace {

std::vector<std::uint8_t> decode_base64(std::string_view text, const fs::path& path) {
    static constexpr std::string_view kAlphabet =
            "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::vector<std::uint8_t> out;
    out.reserve(text.size() * 3 / 4);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char ch : text) {
        if (ch == '=' || std::isspace(static_cast<unsigned char>(ch))) continue;
        const auto pos = kAlphabet.find(ch);
        if (pos == std::string_view::npos) {
            throw Error(ErrorKind::ParseError, path.string() + ": invalid base64 data");
        }
        acc = (acc << 6) | static_cast<std::uint32_t>(pos);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

struct GltfReader {
    json doc;
    std::vector<std::vector<std::uint8_t>> buffers;
    fs::path path;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::ParseError, path.string() + ": " + what);
    }

    // Reads accessor `index` as rows of `width` doubles. Normalized integer
    // components map to [0,1] (unsigned) or [-1,1] (signed).
    std::vector<double> accessor(std::size_t index, int& width) const {
        const auto& acc = doc.at("accessors").at(index);
        if (acc.contains("sparse")) fail("sparse accessors are not supported");
        static const std::map<std::string, int> kWidths{
                {"SCALAR", 1}, {"VEC2", 2}, {"VEC3", 3}, {"VEC4", 4}};
        const auto type = acc.at("type").get<std::string>();
        if (!kWidths.count(type)) fail("unsupported accessor type " + type);
        width = kWidths.at(type);
        const int component = acc.at("componentType").get<int>();
        const auto count = acc.at("count").get<std::size_t>();
        const bool normalized = acc.value("normalized", false);
        std::size_t comp_size = 0;
        switch (component) {
            case 5120:
            case 5121: comp_size = 1; break;
            case 5122:
            case 5123: comp_size = 2; break;
            case 5125:
            case 5126: comp_size = 4; break;
            default: fail("unsupported component type " + std::to_string(component));
        }
        std::vector<double> out(count * width, 0.0);
        if (!acc.contains("bufferView")) return out;
        const auto& view = doc.at("bufferViews").at(acc.at("bufferView").get<std::size_t>());
        const auto& buffer = buffers.at(view.at("buffer").get<std::size_t>());
        const std::size_t offset = view.value("byteOffset", std::size_t{0}) + acc.value("byteOffset", std::size_t{0});
        const std::size_t stride = view.value("byteStride", comp_size * width);
        for (std::size_t i = 0; i < count; ++i) {
            for (int k = 0; k < width; ++k) {
                const std::size_t at = offset + i * stride + k * comp_size;
                if (at + comp_size > buffer.size()) fail("accessor reads past buffer end");
                const std::uint8_t* p = buffer.data() + at;
                double v = 0.0;
                switch (component) {
                    case 5120: { std::int8_t x; std::memcpy(&x, p, 1); v = normalized ? std::max(x / 127.0, -1.0) : x; break; }
                    case 5121: { std::uint8_t x; std::memcpy(&x, p, 1); v = normalized ? x / 255.0 : x; break; }
                    case 5122: { std::int16_t x; std::memcpy(&x, p, 2); v = normalized ? std::max(x / 32767.0, -1.0) : x; break; }
                    case 5123: { std::uint16_t x; std::memcpy(&x, p, 2); v = normalized ? x / 65535.0 : x; break; }
                    case 5125: { std::uint32_t x; std::memcpy(&x, p, 4); v = x; break; }
                    case 5126: { float x; std::memcpy(&x, p, 4); v = x; break; }
                }
                out[i * width + k] = v;
            }
        }
        return out;
    }

    TriMesh primitive(const json& prim) const {
        if (prim.value("mode", 4) != 4) {
            throw Error(ErrorKind::UnsupportedFace, path.string() + ": only triangle primitives are supported");
        }
        const auto& attrs = prim.at("attributes");
        if (!attrs.contains("POSITION")) fail("primitive without POSITION");
        TriMesh mesh;
        int width = 0;
        const auto pos = accessor(attrs.at("POSITION").get<std::size_t>(), width);
        if (width != 3) fail("POSITION must be VEC3");
        const std::size_t n = pos.size() / 3;
        for (std::size_t i = 0; i < n; ++i) mesh.vertices.emplace_back(pos[3 * i], pos[3 * i + 1], pos[3 * i + 2]);
        if (attrs.contains("NORMAL")) {
            const auto v = accessor(attrs.at("NORMAL").get<std::size_t>(), width);
            if (width == 3 && v.size() == 3 * n) {
                for (std::size_t i = 0; i < n; ++i) mesh.normals.emplace_back(v[3 * i], v[3 * i + 1], v[3 * i + 2]);
            }
        }
        if (attrs.contains("COLOR_0")) {
            const auto v = accessor(attrs.at("COLOR_0").get<std::size_t>(), width);
            if ((width == 3 || width == 4) && v.size() == width * n) {
                for (std::size_t i = 0; i < n; ++i) {
                    mesh.colors.emplace_back(v[width * i], v[width * i + 1], v[width * i + 2]);
                }
            }
        }
        if (attrs.contains("TEXCOORD_0")) {
            const auto v = accessor(attrs.at("TEXCOORD_0").get<std::size_t>(), width);
            if (width == 2 && v.size() == 2 * n) {
                for (std::size_t i = 0; i < n; ++i) mesh.uvs.emplace_back(v[2 * i], v[2 * i + 1]);
            }
        }
        std::vector<std::int64_t> indices;
        if (prim.contains("indices")) {
            const auto v = accessor(prim.at("indices").get<std::size_t>(), width);
            for (double x : v) indices.push_back(static_cast<std::int64_t>(x));
        } else {
            for (std::size_t i = 0; i < n; ++i) indices.push_back(static_cast<std::int64_t>(i));
        }
        if (indices.size() % 3 != 0) fail("triangle index count not a multiple of 3");
        for (std::size_t i = 0; i < indices.size(); i += 3) {
            std::vector<std::int32_t> poly;
            for (int k = 0; k < 3; ++k) {
                if (indices[i + k] < 0 || indices[i + k] >= static_cast<std::int64_t>(n)) {
                    fail("index out of range");
                }
                poly.push_back(static_cast<std::int32_t>(indices[i + k]));
            }
            add_polygon(mesh, poly, path, i / 3);
        }
        if (prim.contains("material") && doc.contains("materials")) {
            const auto& mat = doc["materials"].at(prim["material"].get<std::size_t>());
            if (mat.contains("pbrMetallicRoughness") &&
                mat["pbrMetallicRoughness"].contains("baseColorTexture") && doc.contains("textures")) {
                const auto tex = mat["pbrMetallicRoughness"]["baseColorTexture"].at("index").get<std::size_t>();
                const auto& texture = doc["textures"].at(tex);
                if (texture.contains("source") && doc.contains("images")) {
                    const auto& image = doc["images"].at(texture["source"].get<std::size_t>());
                    if (image.contains("uri")) {
                        mesh.texture_path = (path.parent_path() / image["uri"].get<std::string>()).string();
                    }
                }
            }
        }
        return mesh;
    }

    static Eigen::Matrix4d node_matrix(const json& node) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        if (node.contains("matrix")) {
            const auto v = node["matrix"].get<std::vector<double>>();
            for (int c = 0; c < 4; ++c) {
                for (int r = 0; r < 4; ++r) m(r, c) = v.at(c * 4 + r);
            }
            return m;
        }
        Eigen::Vector3d t = Eigen::Vector3d::Zero();
        Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
        Eigen::Vector3d s = Eigen::Vector3d::Ones();
        if (node.contains("translation")) {
            const auto v = node["translation"].get<std::vector<double>>();
            t = Eigen::Vector3d(v.at(0), v.at(1), v.at(2));
        }
        if (node.contains("rotation")) {
            const auto v = node["rotation"].get<std::vector<double>>();
            q = Eigen::Quaterniond(v.at(3), v.at(0), v.at(1), v.at(2)).normalized();
        }
        if (node.contains("scale")) {
            const auto v = node["scale"].get<std::vector<double>>();
            s = Eigen::Vector3d(v.at(0), v.at(1), v.at(2));
        }
        m.topLeftCorner<3, 3>() = q.toRotationMatrix() * s.asDiagonal();
        m.topRightCorner<3, 1>() = t;
        return m;
    }

    void visit(std::size_t node_index, const Eigen::Matrix4d& parent, TriMesh& out, int depth) const {
        if (depth > 256) fail("node hierarchy too deep");
        const auto& node = doc.at("nodes").at(node_index);
        const Eigen::Matrix4d world = parent * node_matrix(node);
        if (node.contains("mesh")) {
            const auto& mesh = doc.at("meshes").at(node["mesh"].get<std::size_t>());
            for (const auto& prim : mesh.at("primitives")) {
                const TriMesh part = transformed(primitive(prim), world.topLeftCorner<3, 3>(),
                                                 world.topRightCorner<3, 1>());
                append(out, part);
            }
        }
        if (node.contains("children")) {
            for (const auto& child : node["children"]) visit(child.get<std::size_t>(), world, out, depth + 1);
        }
    }
};

}  // namespace

TriMesh load_gltf(const fs::path& path) {
    GltfReader reader;
    reader.path = path;
    const std::string data = read_file(path);
    std::vector<std::uint8_t> glb_bin;
    bool has_glb_bin = false;
    try {
        if (data.size() >= 12 && data.compare(0, 4, "glTF") == 0) {
            auto u32 = [&](std::size_t at) {
                if (at + 4 > data.size()) reader.fail("truncated GLB");
                std::uint32_t v;
                std::memcpy(&v, data.data() + at, 4);
                return v;
            };
            std::size_t at = 12;
            bool have_json = false;
            while (at + 8 <= data.size()) {
                const std::uint32_t length = u32(at);
                const std::uint32_t type = u32(at + 4);
                if (at + 8 + length > data.size()) reader.fail("truncated GLB chunk");
                if (type == 0x4E4F534A) {
                    reader.doc = json::parse(data.begin() + static_cast<std::ptrdiff_t>(at + 8),
                                             data.begin() + static_cast<std::ptrdiff_t>(at + 8 + length));
                    have_json = true;
                } else if (type == 0x004E4942) {
                    glb_bin.assign(data.begin() + static_cast<std::ptrdiff_t>(at + 8),
                                   data.begin() + static_cast<std::ptrdiff_t>(at + 8 + length));
                    has_glb_bin = true;
                }
                at += 8 + length;
            }
            if (!have_json) reader.fail("GLB without JSON chunk");
        } else {
            reader.doc = json::parse(data);
        }

        if (reader.doc.contains("buffers")) {
            for (const auto& buffer : reader.doc["buffers"]) {
                if (!buffer.contains("uri")) {
                    if (!has_glb_bin) reader.fail("buffer without uri outside GLB");
                    reader.buffers.push_back(glb_bin);
                    continue;
                }
                const auto uri = buffer["uri"].get<std::string>();
                if (uri.rfind("data:", 0) == 0) {
                    const auto comma = uri.find(',');
                    if (comma == std::string::npos) reader.fail("malformed data uri");
                    reader.buffers.push_back(decode_base64(std::string_view(uri).substr(comma + 1), path));
                } else {
                    const std::string bytes = read_file(path.parent_path() / uri);
                    reader.buffers.emplace_back(bytes.begin(), bytes.end());
                }
            }
        }

        TriMesh mesh;
        const auto& doc = reader.doc;
        if (doc.contains("nodes") && (doc.contains("scenes") || doc.contains("scene"))) {
            const std::size_t scene = doc.value("scene", std::size_t{0});
            const auto& roots = doc.at("scenes").at(scene).at("nodes");
            for (const auto& root : roots) {
                reader.visit(root.get<std::size_t>(), Eigen::Matrix4d::Identity(), mesh, 0);
            }
        } else if (doc.contains("meshes")) {
            for (const auto& m : doc["meshes"]) {
                for (const auto& prim : m.at("primitives")) append(mesh, reader.primitive(prim));
            }
        }
        return mesh;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
}

}  // namespace openable
