// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "openable/Mesh.h"

namespace openable {

/// Loads .obj, .ply, .gltf or .glb into a single indexed mesh. Multi-part
/// files are flattened in file order. Quads are fan-triangulated as
/// (v0,v1,v2)+(v0,v2,v3); larger polygons raise UnsupportedFace.
/// Malformed input raises ParseError.
TriMesh load_mesh(const std::filesystem::path& path);

/// Writes .obj (ASCII, fixed precision) or .ply (binary little endian).
/// Throws IoError when the file cannot be written.
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path);

TriMesh load_obj(const std::filesystem::path& path);
TriMesh load_ply(const std::filesystem::path& path);
TriMesh load_gltf(const std::filesystem::path& path);
void save_obj(const TriMesh& mesh, const std::filesystem::path& path);
void save_ply(const TriMesh& mesh, const std::filesystem::path& path);

/// Generic PLY contents: scalar properties per element as doubles (exact for
/// every PLY scalar type) and list properties as nested index vectors.
struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> scalar_names;
    std::map<std::string, std::vector<double>> scalars;
    std::map<std::string, std::vector<std::vector<std::int64_t>>> lists;

    bool has(const std::string& property) const { return scalars.count(property) > 0; }
};

struct PlyData {
    std::vector<PlyElement> elements;
    const PlyElement* find(const std::string& name) const;
};

PlyData read_ply(const std::filesystem::path& path);

/// Column of a PLY property to write: name, type ("double", "float",
/// "int", "uchar") and values.
struct PlyColumn {
    std::string name;
    std::string type;
    std::vector<double> values;
};

/// Writes one scalar element plus an optional face list element in binary
/// little endian.
void write_ply(const std::filesystem::path& path, const std::string& element,
               const std::vector<PlyColumn>& columns,
               const std::vector<Tri>* faces = nullptr);

}  // namespace openable
